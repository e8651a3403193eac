#include "lie2/bialgebra.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lie2;

namespace {
Tensor3 eps() {
    Tensor3 e(3, 3, 3);
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        e(k, i, j) = 1;
        e(k, j, i) = -1;
    }
    return e;
}
double diff(const Tensor3& a, const Tensor3& b) {
    double r = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) r = std::max(r, std::abs(a.v[i] - b.v[i]));
    return r;
}
}  // namespace

TEST(Decompose, UnhalvedPartsSumToTwiceR) {
    std::mt19937_64 g(3);
    std::normal_distribution<double> d;
    TwoRMatrix R(MatrixXd::NullaryExpr(2, 3, [&] { return d(g); }), MatrixXd::NullaryExpr(3, 2, [&] { return d(g); }));
    Split s = decompose(R);
    EXPECT_LT((s.skew.R1 + s.sym.R1 - 2 * R.R1).norm(), 1e-14);
    EXPECT_LT((s.skew.R2 + s.sym.R2 - 2 * R.R2).norm(), 1e-14);
    Split h = halves(R);
    EXPECT_LT((h.skew.R1 + h.sym.R1 - R.R1).norm(), 1e-14);
    // graded transpose flips the skew part and fixes the symmetric part
    Split t = decompose(graded_transpose(R));
    EXPECT_LT((t.skew.R1 + s.skew.R1).norm(), 1e-14);
    EXPECT_LT((t.sym.R2 - s.sym.R2).norm(), 1e-14);
}

TEST(Decompose, CanonicalSu2) {
    Split s = decompose(canonical_rmatrix(id_su2()));
    EXPECT_EQ(s.sym.R2, MatrixXd::Identity(3, 3));
    EXPECT_EQ(s.sym.R1, MatrixXd::Identity(3, 3));
    EXPECT_EQ(s.skew.R2, MatrixXd::Identity(3, 3));
    EXPECT_EQ(s.skew.R1, MatrixXd(-MatrixXd::Identity(3, 3)));
}

TEST(Pairing, CanonicalSu2IsIdentityAndInvariant) {
    auto cm = id_su2();
    PairingForm P = pairing_from_sym(cm, decompose(canonical_rmatrix(cm)).sym);
    EXPECT_EQ(P.B, MatrixXd::Identity(3, 3));
    EXPECT_LT(P.invariance, 1e-12);
}

TEST(Pairing, DegenerateThrows) {
    auto cm = skeletal_u1();
    EXPECT_THROW(pairing_from_sym(cm, decompose(TwoRMatrix::zero(1, 1)).sym), degeneracy_error);
}

TEST(Pairing, NonInvariantThrowsStructural) {
    auto cm = id_su2();
    TwoRMatrix R = canonical_rmatrix(cm);
    R.R2(0, 0) = 2;
    EXPECT_THROW(pairing_from_sym(cm, decompose(R).sym), structural_error);
}

TEST(DtMinus, DjLiftVanishesCanonicalDoesNot) {
    EXPECT_EQ(check_Dt_minus(id_sl2(), decompose(dj_lift()).skew), 0.0);
    EXPECT_DOUBLE_EQ(check_Dt_minus(id_su2(), decompose(canonical_rmatrix(id_su2())).skew), 2.0);
}

TEST(DtMinus, PhiRefusesNonZeroDt) {
    auto cm = id_su2();
    Split s = decompose(canonical_rmatrix(cm));
    PairingForm P = pairing_from_sym(cm, s.sym);
    EXPECT_THROW(phi_map(cm, s.skew, P), structural_error);
    PhiMap f = phi_map(cm, s.skew, P, 1e-9, false);
    EXPECT_EQ(f.p0, MatrixXd(-MatrixXd::Identity(3, 3)));
    EXPECT_EQ(f.pm1, MatrixXd::Identity(3, 3));
}

TEST(Phi, DjIsTEquivariantAndRBracketIsCrossedModule) {
    auto cm = id_sl2();
    Split s = decompose(dj_lift());
    PairingForm P = pairing_from_sym(cm, s.sym);
    PhiMap f = phi_map(cm, s.skew, P);
    EXPECT_LT(f.hom_residual, 1e-14);
    auto r = r_crossed_module(cm, f);
    auto rep = validate_crossed_module(r, 1e-12);
    EXPECT_TRUE(rep.ok()) << rep.to_json().dump();
}

TEST(Cocycle, DjCoboundaryPassesBoth) {
    auto cm = id_sl2();
    Cobracket dl = coboundary_delta(cm, decompose(dj_lift()).skew);
    EXPECT_TRUE(validate_cocycle(cm, dl, 1e-12).ok()) << validate_cocycle(cm, dl).to_json().dump();
    EXPECT_TRUE(validate_cobracket(cm, dl, 1e-12).ok()) << validate_cobracket(cm, dl).to_json().dump();
}

TEST(Cocycle, ZeroSkewIsTrivial) {
    auto cm = id_su2();
    Cobracket dl = coboundary_delta(cm, TwoRMatrix::zero(3, 3));
    EXPECT_EQ(dl.d.max_abs(), 0.0);
    EXPECT_TRUE(validate_cocycle(cm, dl).ok());
    EXPECT_TRUE(validate_cobracket(cm, dl).ok());
}

// canonical su2: delta_0 vanishes, delta_-1 does not; ID1 fails (frozen values)
TEST(Cocycle, CanonicalSu2Values) {
    auto cm = id_su2();
    Cobracket dl = coboundary_delta(cm, decompose(canonical_rmatrix(cm)).skew);
    for (int Z = 0; Z < 3; ++Z) EXPECT_EQ(dl.of(Z).cwiseAbs().maxCoeff(), 0.0);
    auto rep = validate_cocycle(cm, dl);
    EXPECT_FALSE(rep.passed("ID1"));
    EXPECT_DOUBLE_EQ(rep.residual("ID1"), 2.0);
    CrossedModule d = dual_structure_constants(cm, canonical_rmatrix(cm));
    Tensor3 m2 = eps();
    for (double& x : m2.v) x *= -2;
    EXPECT_EQ(diff(d.c0, m2), 0.0);
    EXPECT_EQ(d.act.max_abs(), 0.0);
}

// property: D_t^- preserving perturbations of the DJ lift keep the cocycle conditions
TEST(Property, CocycleUnderAdmissiblePerturbations) {
    auto cm = id_sl2();
    std::mt19937_64 g(5);
    std::normal_distribution<double> d(0, 0.3);
    for (int k = 0; k < 10; ++k) {
        MatrixXd s = MatrixXd::NullaryExpr(3, 3, [&] { return d(g); });
        s = 0.5 * (s - s.transpose());  // skew r^wedge perturbation, lifted as (s, s)
        TwoRMatrix R = dj_lift() + TwoRMatrix(s, s);
        Split p = decompose(R);
        EXPECT_LT(check_Dt_minus(cm, p.skew), 1e-14);
        Cobracket dl = coboundary_delta(cm, p.skew);
        auto rep = validate_cocycle(cm, dl, 1e-10);
        EXPECT_TRUE(rep.ok()) << rep.to_json().dump();
        for (int Z = 0; Z < 6; ++Z) EXPECT_LT((dl.of(Z) + dl.of(Z).transpose()).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(Adjoint, IdentitiesHold) {
    for (auto& nm : builtin_names()) {
        auto cm = builtin(nm);
        EXPECT_LT(two_adjoint(cm).identity_residual(), 1e-14) << nm;
    }
}

TEST(Json, RMatrixFileRoundTrip) {
    auto cm = id_sl2();
    auto R = load_rmatrix(std::string(LIE2_DATA_DIR) + "/sl2_dj_rmatrix.json", cm);
    EXPECT_EQ(R.R1, dj_lift().R1);
    EXPECT_EQ(R.R2, dj_lift().R2);
    EXPECT_THROW(rmatrix_from_json(json::object(), 3, 3), parse_error);
    EXPECT_THROW(load_rmatrix(std::string(LIE2_DATA_DIR) + "/sl2_dj_rmatrix.json", skeletal_u1()), dimension_error);
}
