#pragma once
// 2-Lax pairs on g*[1], the induced 1-Lax pair, the ordinary 1-Lax baseline and its lift to id_g

#include "lie2/poisson.hpp"

#include <optional>
#include <random>

namespace lie2 {

enum class LaxSign { PL, LP };  // Ldot = [P,L] or [L,P]

inline std::string to_string(LaxSign s) { return s == LaxSign::PL ? "Ldot=[P,L]" : "Ldot=[L,P]"; }

inline std::vector<VectorXd> sample_points(int dim, int count, std::uint64_t seed, double lo = -1, double hi = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<VectorXd> pts;
    for (int k = 0; k < count; ++k) {
        VectorXd x(dim);
        for (int A = 0; A < dim; ++A) x[A] = u(rng);
        pts.push_back(x);
    }
    return pts;
}

struct TwoLaxPair {
    CrossedModule cm;
    TwoRMatrix R;
    Split parts;
    MatrixXd L0;   // n x m, f -> g0
    MatrixXd Lm1;  // m x n, g -> g-1
    MatrixXd K;    // h-invariant form identifying g with g*[1]
    PhiMap phi;
    PoissonStructure ps;  // R-bracket structure
    Polynomial H;
    std::vector<Polynomial> dH;
    Mode mode = Mode::rmatrix;
    bool degenerate = false;
    double invariance = 0;  // check_invariance of H at the sampled points
    double dt_minus = 0;

    int n() const { return cm.n; }
    int m() const { return cm.m; }
    int dim() const { return cm.n + cm.m; }

    // stacked coefficient matrix: L(x) = lambda() * x
    MatrixXd lambda() const {
        MatrixXd Lam = MatrixXd::Zero(dim(), dim());
        Lam.topRightCorner(n(), m()) = L0;
        Lam.bottomLeftCorner(m(), n()) = Lm1;
        return Lam;
    }
    GradedElement L(const VectorXd& x) const { return {L0 * x.tail(m()), Lm1 * x.head(n())}; }
    GradedElement P(const VectorXd& x) const { return phi(ps.element(gradient(dH, x))); }
};

// 1/2 K(L,L) as a polynomial in the coordinates
inline Polynomial quadratic_hamiltonian(const TwoLaxPair& pair) {
    MatrixXd M = pair.lambda().transpose() * pair.ps.G.transpose();
    return Polynomial::quadratic(0.5 * (M + M.transpose()));
}

inline MatrixXd invariant_form(const CrossedModule& cm, const PairingForm& P) {
    MatrixXd K = P.stacked();
    K.bottomRightCorner(cm.m, cm.m) = cm.t.transpose() * P.B;
    return K;
}

// no H selects the default quadratic Hamiltonian 1/2 K(L,L)
inline TwoLaxPair build_2lax(const CrossedModule& cm, const TwoRMatrix& R, const std::optional<Polynomial>& H = std::nullopt,
                             double tol = 1e-9, bool allow_degenerate = false, std::uint64_t seed = 7) {
    check_shape(cm, R, "build_2lax");
    TwoLaxPair p;
    p.cm = cm;
    p.R = R;
    p.parts = decompose(R);
    p.dt_minus = check_Dt_minus(cm, p.parts.skew);
    const int n = cm.n, m = cm.m, N = n + m;
    try {
        PairingForm P = pairing_from_sym(cm, p.parts.sym, tol);
        p.L0 = p.parts.sym.R2;
        p.Lm1 = p.parts.sym.R1;
        p.K = invariant_form(cm, P);
        p.phi = phi_map(cm, p.parts.skew, P, tol, false);
    } catch (const degeneracy_error&) {
        if (!allow_degenerate) throw;
        p.degenerate = true;
        p.L0 = MatrixXd::Zero(n, m);
        p.Lm1 = MatrixXd::Zero(m, n);
        p.K = MatrixXd::Zero(N, N);
        p.phi.p0 = MatrixXd::Zero(n, n);
        p.phi.pm1 = MatrixXd::Zero(m, m);
    }
    p.ps = make_structure(cm, Mode::rmatrix, &p.phi);
    p.H = H ? *H : quadratic_hamiltonian(p);
    if (p.H.nvars() != N) throw dimension_error("build_2lax: Hamiltonian has " + std::to_string(p.H.nvars()) + " variables, expected " + std::to_string(N));
    p.dH = derivatives(p.H);
    p.invariance = check_invariance(make_structure(cm, Mode::plain), p.H, sample_points(N, 20, seed));
    return p;
}

// d/dt L along the R-flow of H, i.e. {H, L}_R
inline GradedElement lax_lhs(const TwoLaxPair& pair, const VectorXd& x) {
    return GradedElement::split(pair.lambda() * hamiltonian_rhs(pair.ps, pair.dH, x), pair.n());
}

inline GradedElement lax_rhs(const TwoLaxPair& pair, const VectorXd& x, LaxSign sign = LaxSign::LP) {
    GradedElement L = pair.L(x), P = pair.P(x);
    return sign == LaxSign::PL ? full_bracket(pair.cm, P, L) : full_bracket(pair.cm, L, P);
}

inline double lax_residual(const TwoLaxPair& pair, const VectorXd& x, LaxSign sign = LaxSign::LP) {
    VectorXd d = (lax_lhs(pair, x) - lax_rhs(pair, x, sign)).stacked();
    return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

inline double lax_residual(const TwoLaxPair& pair, const GradedPoint& p, LaxSign sign = LaxSign::LP) {
    return lax_residual(pair, p.stacked(), sign);
}

struct LaxSweep {
    double residual_PL = 0, residual_LP = 0;
    LaxSign selected = LaxSign::PL;
    bool consistent = true;  // same sign wins at every point
    double residual() const { return selected == LaxSign::PL ? residual_PL : residual_LP; }
};

inline LaxSweep lax_sweep(const TwoLaxPair& pair, const std::vector<VectorXd>& points) {
    LaxSweep s;
    int pl = 0, lp = 0;
    for (auto& x : points) {
        double a = lax_residual(pair, x, LaxSign::PL), b = lax_residual(pair, x, LaxSign::LP);
        s.residual_PL = std::max(s.residual_PL, a);
        s.residual_LP = std::max(s.residual_LP, b);
        if (a < b) ++pl;
        else if (b < a) ++lp;
    }
    s.selected = s.residual_PL <= s.residual_LP ? LaxSign::PL : LaxSign::LP;
    s.consistent = pl == 0 || lp == 0;
    return s;
}

struct LConditions {
    double t_compat = 0;      // (a) |t L-1 - L0 t^T|
    double ll_effective = 0;  // (b) |{L,L}_R + [L(x)1 + 1(x)L, r_eff]|
    double ll_literal = 0;    // same with the literal R^wedge, min over sign
    json to_json() const { return {{"t_compat", t_compat}, {"LL_identity", ll_effective}, {"LL_literal_Rwedge", ll_literal}}; }
};

// {L^A, L^B}_R evaluated at x
inline MatrixXd ll_bracket(const TwoLaxPair& pair, const VectorXd& x) {
    MatrixXd Lam = pair.lambda();
    return Lam * pair.ps.at(x) * Lam.transpose();
}

// phi K^{-1}; its mixed blocks are -R^wedge
inline MatrixXd effective_r(const TwoLaxPair& pair) {
    if (pair.degenerate) return MatrixXd::Zero(pair.dim(), pair.dim());
    return pair.phi.stacked() * pair.K.inverse();
}

inline LConditions check_L_conditions(const TwoLaxPair& pair, const std::vector<VectorXd>& points) {
    LConditions c;
    MatrixXd a = pair.cm.t * pair.Lm1 - pair.L0 * pair.cm.t.transpose();
    c.t_compat = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    MatrixXd re = effective_r(pair);
    MatrixXd rw = stacked_tensor(pair.cm, pair.parts.skew);
    double lit_plus = 0, lit_minus = 0;
    for (auto& x : points) {
        MatrixXd LL = ll_bracket(pair, x);
        MatrixXd M = ad_full_stacked(pair.cm, pair.L(x));
        auto mx = [](const MatrixXd& E) { return E.size() ? E.cwiseAbs().maxCoeff() : 0.0; };
        c.ll_effective = std::max(c.ll_effective, mx(LL + M * re + re * M.transpose()));
        lit_minus = std::max(lit_minus, mx(LL + M * rw + rw * M.transpose()));
        lit_plus = std::max(lit_plus, mx(LL - M * rw - rw * M.transpose()));
    }
    c.ll_literal = std::min(lit_plus, lit_minus);
    return c;
}

// ---- ordinary Lax pairs on a Lie algebra

struct OneLaxPair {
    int n = 0;
    Tensor3 c;     // c[k][i][j]
    MatrixXd r;    // n x n
    MatrixXd L;    // g -> g coefficient matrix (r^sym)
    MatrixXd phi;  // (r^wedge)^T B
    MatrixXd B;    // pairing induced by r^sym
    Polynomial H;
    std::vector<Polynomial> dH;

    VectorXd bracket(const VectorXd& x, const VectorXd& y) const {
        VectorXd z = VectorXd::Zero(n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) z[k] += c(k, i, j) * x[i] * y[j];
        return z;
    }
    VectorXd r_bracket(const VectorXd& x, const VectorXd& y) const { return bracket(phi * x, y) + bracket(x, phi * y); }
    VectorXd Lof(const VectorXd& g) const { return L * g; }
    VectorXd P(const VectorXd& g) const { return phi * gradient(dH, g); }
    // gdot_j = {H, b_j}_r = <g, [dH, e_j]_r>
    VectorXd rhs(const VectorXd& g) const {
        VectorXd dh = gradient(dH, g), out(n);
        for (int j = 0; j < n; ++j) out[j] = g.dot(r_bracket(dh, VectorXd::Unit(n, j)));
        return out;
    }
};

inline Polynomial quadratic_hamiltonian(const OneLaxPair& one) { return Polynomial::quadratic(0.5 * (one.L + one.L.transpose())); }

inline OneLaxPair build_1lax(const Tensor3& c, const MatrixXd& r, const std::optional<Polynomial>& H = std::nullopt) {
    OneLaxPair o;
    o.n = c.d0;
    if (r.rows() != o.n || r.cols() != o.n) throw dimension_error("build_1lax: r must be n x n");
    o.c = c;
    o.r = r;
    MatrixXd sym = 0.5 * (r + r.transpose()), skew = 0.5 * (r - r.transpose());
    Eigen::FullPivLU<MatrixXd> lu(sym);
    if (lu.rank() < o.n) throw degeneracy_error("build_1lax: symmetric part of r is singular");
    o.L = sym;
    o.B = lu.inverse();
    o.phi = skew.transpose() * o.B;
    o.H = H ? *H : quadratic_hamiltonian(o);
    if (o.H.nvars() != o.n) throw dimension_error("build_1lax: Hamiltonian variable count");
    o.dH = derivatives(o.H);
    return o;
}

inline double one_lax_residual(const OneLaxPair& o, const VectorXd& g, LaxSign sign = LaxSign::LP) {
    VectorXd lhs = o.L * o.rhs(g);
    VectorXd L = o.Lof(g), P = o.P(g);
    VectorXd rhs = sign == LaxSign::PL ? o.bracket(P, L) : o.bracket(L, P);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// identity crossed module g --id--> g
inline CrossedModule identity_module(const std::string& name, const Tensor3& c) {
    CrossedModule cm(name, c.d0, c.d0);
    cm.c0 = c;
    cm.act = c;
    cm.t = MatrixXd::Identity(c.d0, c.d0);
    cm.refresh();
    return cm;
}

// two copies of the 1-Lax data on id_g
inline TwoLaxPair lift_1lax(const OneLaxPair& one, const std::string& name = "id_lift") {
    return build_2lax(identity_module(name, one.c), lift_rmatrix(one.r));
}

struct InducedLax {
    MatrixXd L;  // t L-1, n x n acting on g
    Polynomial Hm1, H0;
    double L0_tP = 0;       // [L0, t P-1]
    double tH0_bracket = 0; // {t*H0, L-1}_{R,0}
    double residual = 0;    // |d/dt L_ind - [P0, L_ind]|
    json to_json() const { return {{"L0_tPm1", L0_tP}, {"tH0_Lm1", tH0_bracket}, {"residual", residual}}; }
};

inline InducedLax induced_1lax(const TwoLaxPair& pair, const std::vector<VectorXd>& points, LaxSign sign = LaxSign::LP) {
    const int n = pair.n(), m = pair.m(), N = pair.dim();
    InducedLax out;
    out.L = pair.cm.t * pair.Lm1;
    out.Hm1 = pair.H.restricted(0, n);
    out.H0 = pair.H.restricted(n, N);
    auto dHm1 = derivatives(out.Hm1), dH0 = derivatives(out.H0);
    for (auto& x : points) {
        VectorXd g = x.head(n);
        VectorXd xg = VectorXd::Zero(N);
        xg.head(n) = g;
        // g-only flow of H-1 on g0* under the R-bracket
        VectorXd dg = gradient(dHm1, xg).head(n);
        VectorXd gdot(n);
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) s += dg[i] * pair.ps.pi(k, i, j) * g[k];
            gdot[j] = s;
        }
        VectorXd Ld = out.L * gdot, L = out.L * g, P0 = pair.phi.p0 * dg;
        VectorXd rhs = sign == LaxSign::PL ? bracket0(pair.cm, P0, L) : bracket0(pair.cm, L, P0);
        out.residual = std::max(out.residual, (Ld - rhs).cwiseAbs().maxCoeff());

        // degree-split consequences
        VectorXd df = gradient(dH0, x).tail(m);
        VectorXd Pm1 = pair.phi.pm1 * df;
        VectorXd c1 = bracket0(pair.cm, pair.L0 * x.tail(m), pair.cm.t * Pm1);
        out.L0_tP = std::max(out.L0_tP, c1.size() ? c1.cwiseAbs().maxCoeff() : 0.0);
        VectorXd xt = VectorXd::Zero(N);
        xt.tail(m) = pair.cm.t.transpose() * g;
        VectorXd dtH = pair.cm.t * gradient(dH0, xt).tail(m);  // d/dg of H0(t^T g)
        for (int a = 0; a < m; ++a) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) s += dtH[i] * pair.Lm1(a, j) * pair.ps.pi(k, i, j) * g[k];
            out.tH0_bracket = std::max(out.tH0_bracket, std::abs(s));
        }
    }
    return out;
}

}  // namespace lie2
