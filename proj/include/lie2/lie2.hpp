#pragma once
// umbrella header

#include "lie2/algebra.hpp"
#include "lie2/bialgebra.hpp"
#include "lie2/poisson.hpp"
#include "lie2/lax.hpp"
#include "lie2/representations.hpp"
#include "lie2/lattice.hpp"
