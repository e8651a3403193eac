#pragma once
// 2-graded r-matrices: skew/sym split, pairing, coboundary cobracket, phi and the R-bracket

#include "lie2/algebra.hpp"

#include <Eigen/LU>

namespace lie2 {

// R1 in g-1 (x) g0 (m x n), R2 in g0 (x) g-1 (n x m)
struct TwoRMatrix {
    MatrixXd R1, R2;
    TwoRMatrix() = default;
    TwoRMatrix(MatrixXd r1, MatrixXd r2) : R1(std::move(r1)), R2(std::move(r2)) {}
    static TwoRMatrix zero(int n, int m) { return {MatrixXd::Zero(m, n), MatrixXd::Zero(n, m)}; }
    TwoRMatrix operator*(double s) const { return {R1 * s, R2 * s}; }
    TwoRMatrix operator+(const TwoRMatrix& o) const { return {R1 + o.R1, R2 + o.R2}; }
};

inline TwoRMatrix graded_transpose(const TwoRMatrix& R) { return {R.R2.transpose(), R.R1.transpose()}; }

struct Split {
    TwoRMatrix skew, sym;
};

// unhalved: skew + sym = 2R
inline Split decompose(const TwoRMatrix& R) {
    return {{R.R1 - R.R2.transpose(), R.R2 - R.R1.transpose()}, {R.R1 + R.R2.transpose(), R.R2 + R.R1.transpose()}};
}

// halved parts, R = skew + sym exactly
inline Split halves(const TwoRMatrix& R) {
    Split s = decompose(R);
    return {s.skew * 0.5, s.sym * 0.5};
}

inline void check_shape(const CrossedModule& cm, const TwoRMatrix& R, const std::string& what) {
    if (R.R1.rows() != cm.m || R.R1.cols() != cm.n || R.R2.rows() != cm.n || R.R2.cols() != cm.m)
        throw dimension_error(what + ": R1 must be m x n and R2 n x m");
}

// (1 (x) t - t (x) 1) R^skew as an n x n array
inline MatrixXd dt_minus_tensor(const CrossedModule& cm, const TwoRMatrix& skew) {
    check_shape(cm, skew, "check_Dt_minus");
    return skew.R2 * cm.t.transpose() - cm.t * skew.R1;
}

inline double check_Dt_minus(const CrossedModule& cm, const TwoRMatrix& skew) {
    MatrixXd D = dt_minus_tensor(cm, skew);
    return D.size() ? D.cwiseAbs().maxCoeff() : 0.0;
}

// stacked (n+m)^2 matrix of a mixed tensor: [T][S] block R2, [S][T] block R1
inline MatrixXd stacked_tensor(const CrossedModule& cm, const TwoRMatrix& R) {
    const int N = cm.n + cm.m;
    MatrixXd W = MatrixXd::Zero(N, N);
    W.topRightCorner(cm.n, cm.m) = R.R2;
    W.bottomLeftCorner(cm.m, cm.n) = R.R1;
    return W;
}

// stacked matrix of mu2(z, .)
inline MatrixXd ad_stacked(const CrossedModule& cm, const GradedElement& z) {
    const int N = cm.n + cm.m;
    MatrixXd A(N, N);
    for (int B = 0; B < N; ++B) A.col(B) = graded_bracket(cm, z, GradedElement::split(VectorXd::Unit(N, B), cm.n)).stacked();
    return A;
}

inline MatrixXd ad_full_stacked(const CrossedModule& cm, const GradedElement& z) {
    const int N = cm.n + cm.m;
    MatrixXd A(N, N);
    for (int B = 0; B < N; ++B) A.col(B) = full_bracket(cm, z, GradedElement::split(VectorXd::Unit(N, B), cm.n)).stacked();
    return A;
}

// <T_i, S_a> = B(i,a); Cas = R2-block of sym, B = Cas^{-T}
struct PairingForm {
    MatrixXd Cas;  // n x m
    MatrixXd B;    // n x m
    double invariance = 0;
    double t_symmetry = 0;

    // stacked symmetric form with the off-diagonal blocks only
    MatrixXd stacked() const {
        const int n = int(B.rows()), m = int(B.cols());
        MatrixXd K = MatrixXd::Zero(n + m, n + m);
        K.topRightCorner(n, m) = B;
        K.bottomLeftCorner(m, n) = B.transpose();
        return K;
    }
};

inline double pairing_invariance(const CrossedModule& cm, const MatrixXd& K,
                                 GradedElement (*br)(const CrossedModule&, const GradedElement&, const GradedElement&)) {
    const int N = cm.n + cm.m;
    double r = 0;
    for (int Z = 0; Z < N; ++Z) {
        MatrixXd A(N, N);
        for (int B = 0; B < N; ++B)
            A.col(B) = br(cm, GradedElement::split(VectorXd::Unit(N, Z), cm.n), GradedElement::split(VectorXd::Unit(N, B), cm.n)).stacked();
        MatrixXd E = A.transpose() * K + K * A;
        if (E.size()) r = std::max(r, E.cwiseAbs().maxCoeff());
    }
    return r;
}

inline PairingForm pairing_from_sym(const CrossedModule& cm, const TwoRMatrix& sym, double tol = 1e-9) {
    check_shape(cm, sym, "pairing_from_sym");
    if (cm.n != cm.m) throw degeneracy_error("pairing_from_sym: off-diagonal pairing needs dim g0 = dim g-1");
    PairingForm P;
    P.Cas = sym.R2;
    Eigen::FullPivLU<MatrixXd> lu(P.Cas);
    if (cm.n == 0 || lu.rank() < cm.n) throw degeneracy_error("pairing_from_sym: symmetric part is singular");
    P.B = lu.inverse().transpose();
    P.invariance = pairing_invariance(cm, P.stacked(), &graded_bracket);
    MatrixXd tb = cm.t.transpose() * P.B;
    P.t_symmetry = (tb - tb.transpose()).cwiseAbs().maxCoeff();
    if (!(P.invariance < tol))
        throw structural_error("pairing_from_sym: invariance residual " + std::to_string(P.invariance));
    return P;
}

// d(Z, A, B): coefficient of e_A (x) e_B in delta(e_Z), stacked basis
struct Cobracket {
    int n = 0, m = 0;
    Tensor3 d;
    MatrixXd of(int Z) const {
        const int N = n + m;
        MatrixXd M(N, N);
        for (int A = 0; A < N; ++A)
            for (int B = 0; B < N; ++B) M(A, B) = d(Z, A, B);
        return M;
    }
    MatrixXd of(const VectorXd& z) const {
        const int N = n + m;
        MatrixXd M = MatrixXd::Zero(N, N);
        for (int Z = 0; Z < N; ++Z)
            if (z[Z] != 0) M += z[Z] * of(Z);
        return M;
    }
    Tensor3 dminus1() const {
        Tensor3 T(m, m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) T(a, b, c) = d(n + a, n + b, n + c);
        return T;
    }
};

inline Cobracket coboundary_delta(const CrossedModule& cm, const TwoRMatrix& skew) {
    check_shape(cm, skew, "coboundary_delta");
    const int N = cm.n + cm.m;
    MatrixXd W = stacked_tensor(cm, skew);
    Cobracket c{cm.n, cm.m, Tensor3(N, N, N)};
    for (int Z = 0; Z < N; ++Z) {
        MatrixXd A = ad_stacked(cm, GradedElement::split(VectorXd::Unit(N, Z), cm.n));
        MatrixXd D = A * W + W * A.transpose();
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) c.d(Z, a, b) = D(a, b);
    }
    return c;
}

inline AxiomReport validate_cocycle(const CrossedModule& cm, const Cobracket& dl, double tol = 1e-9) {
    const int n = cm.n, m = cm.m, N = n + m;
    AxiomReport rep;
    rep.tol = tol;
    MatrixXd Tf = MatrixXd::Zero(N, N);
    Tf.topRightCorner(n, m) = cm.t;
    auto both = [](const MatrixXd& A, const MatrixXd& M) -> MatrixXd { return A * M + M * A.transpose(); };
    auto mx = [](const MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; };
    auto el = [&](int Z) { return GradedElement::split(VectorXd::Unit(N, Z), n); };

    double id1 = 0, id2 = 0, adinv = 0, id3 = 0;
    for (int a = 0; a < m; ++a) {
        VectorXd ty = VectorXd::Zero(N);
        ty.head(n) = cm.t.col(a);
        id1 = std::max(id1, mx(dl.of(ty) - both(Tf, dl.of(n + a))));
    }
    for (int i = 0; i < n; ++i) {
        MatrixXd D = dl.of(i);
        id2 = std::max(id2, mx(Tf * D - D * Tf.transpose()));
        for (int j = 0; j < n; ++j) {
            VectorXd xx = VectorXd::Zero(N);
            xx.head(n) = bracket0(cm, VectorXd::Unit(n, i), VectorXd::Unit(n, j));
            MatrixXd r = dl.of(xx) - both(ad_stacked(cm, el(i)), dl.of(j)) + both(ad_stacked(cm, el(j)), D);
            adinv = std::max(adinv, mx(r));
        }
        for (int a = 0; a < m; ++a) {
            VectorXd xy = VectorXd::Zero(N);
            xy.tail(m) = act(cm, VectorXd::Unit(n, i), VectorXd::Unit(m, a));
            MatrixXd Q = MatrixXd::Zero(N, N);  // T_j -> T_j |> S_a
            Q.bottomLeftCorner(m, n) = act_on_matrix(cm, VectorXd::Unit(m, a));
            MatrixXd r = dl.of(xy) - both(ad_stacked(cm, el(i)), dl.of(n + a)) - both(Q, D);
            id3 = std::max(id3, mx(r));
        }
    }
    rep.add("ID1", id1);
    rep.add("ID2", id2);
    rep.add("ad_invariance", adinv);
    rep.add("ID3", id3);
    return rep;
}

// cyclic sums of (delta (x) 1) delta, split by the degree of the input
inline AxiomReport validate_cobracket(const CrossedModule& cm, const Cobracket& dl, double tol = 1e-9) {
    const int n = cm.n, N = cm.n + cm.m;
    AxiomReport rep;
    rep.tol = tol;
    double r0 = 0, r1 = 0, anti = 0;
    std::vector<MatrixXd> D(N);
    for (int Z = 0; Z < N; ++Z) D[Z] = dl.of(Z);
    for (int Z = 0; Z < N; ++Z) {
        if (N) anti = std::max(anti, (D[Z] + D[Z].transpose()).cwiseAbs().maxCoeff());
        Tensor3 T(N, N, N);
        for (int E = 0; E < N; ++E)
            for (int C = 0; C < N; ++C) {
                double w = D[Z](E, C);
                if (w == 0) continue;
                for (int A = 0; A < N; ++A)
                    for (int B = 0; B < N; ++B) T(A, B, C) += w * D[E](A, B);
            }
        double r = 0;
        for (int A = 0; A < N; ++A)
            for (int B = 0; B < N; ++B)
                for (int C = 0; C < N; ++C) r = std::max(r, std::abs(T(A, B, C) + T(B, C, A) + T(C, A, B)));
        (Z < n ? r0 : r1) = std::max(Z < n ? r0 : r1, r);
    }
    rep.add("antisymmetry", anti);
    rep.add("cojacobi_0", r0);
    rep.add("cojacobi_minus1", r1);
    return rep;
}

// dual 2-algebra: degree 0 is g-1* (dim m), degree -1 is g0* (dim n), t replaced by t^T
inline CrossedModule dual_structure_constants(const CrossedModule& cm, const TwoRMatrix& R) {
    Split s = decompose(R);
    pairing_from_sym(cm, s.sym, 1e300);  // propagates the non-degeneracy error only
    Cobracket dl = coboundary_delta(cm, s.skew);
    const int n = cm.n, m = cm.m;
    CrossedModule d(cm.name + "_dual", m, n);
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) d.c0(c, a, b) = dl.d(n + c, n + a, n + b);
    for (int j = 0; j < n; ++j)
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i) d.act(j, a, i) = dl.d(j, n + a, i);
    d.t = cm.t.transpose();
    d.refresh();
    return d;
}

struct PhiMap {
    MatrixXd p0;   // n x n
    MatrixXd pm1;  // m x m
    double hom_residual = 0;
    GradedElement operator()(const GradedElement& z) const { return {p0 * z.x, pm1 * z.y}; }
    MatrixXd stacked() const {
        const int n = int(p0.rows()), m = int(pm1.rows());
        MatrixXd F = MatrixXd::Zero(n + m, n + m);
        F.topLeftCorner(n, n) = p0;
        F.bottomRightCorner(m, m) = pm1;
        return F;
    }
};

// gated: refuses skew parts with D_t^- != 0 unless gated = false
inline PhiMap phi_map(const CrossedModule& cm, const TwoRMatrix& skew, const PairingForm& P, double tol = 1e-9, bool gated = true) {
    double dt = check_Dt_minus(cm, skew);
    if (gated && !(dt < tol)) throw structural_error("phi_map: D_t^- residual " + std::to_string(dt) + " exceeds tolerance");
    PhiMap f;
    f.pm1 = skew.R2.transpose() * P.B;  // (a,b) = sum_i R2[i][a] B[i][b]
    f.p0 = skew.R1.transpose() * P.B.transpose();  // (i,j) = sum_a R1[a][i] B[j][a]
    MatrixXd h = cm.t * f.pm1 - f.p0 * cm.t;
    f.hom_residual = h.size() ? h.cwiseAbs().maxCoeff() : 0.0;
    return f;
}

// crossed module of the R-bracket: [X,X']_R, X |>_R Y, same t
inline CrossedModule r_crossed_module(const CrossedModule& cm, const PhiMap& f) {
    CrossedModule r(cm.name + "_R", cm.n, cm.m);
    r.t = cm.t;
    for (int i = 0; i < cm.n; ++i) {
        VectorXd ei = VectorXd::Unit(cm.n, i);
        for (int j = 0; j < cm.n; ++j) {
            VectorXd ej = VectorXd::Unit(cm.n, j);
            VectorXd v = bracket0(cm, f.p0 * ei, ej) + bracket0(cm, ei, f.p0 * ej);
            for (int k = 0; k < cm.n; ++k) r.c0(k, i, j) = v[k];
        }
        for (int a = 0; a < cm.m; ++a) {
            VectorXd ea = VectorXd::Unit(cm.m, a);
            VectorXd v = act(cm, f.p0 * ei, ea) + act(cm, ei, f.pm1 * ea);
            for (int b = 0; b < cm.m; ++b) r.act(b, i, a) = v[b];
        }
    }
    r.refresh();
    return r;
}

inline GradedElement r_bracket(const CrossedModule& cm, const PhiMap& f, const GradedElement& z, const GradedElement& w) {
    return graded_bracket(cm, f(z), w) + graded_bracket(cm, z, f(w));
}

struct TwoAdjoint {
    const CrossedModule* cm;
    MatrixXd ad(const VectorXd& x) const { return ad0_matrix(*cm, x); }
    MatrixXd chi(const VectorXd& x) const { return act_matrix(*cm, x); }
    MatrixXd adm1(const VectorXd& y) const { return act_on_matrix(*cm, y); }  // X -> X |> y
    MatrixXd bracket_matrix(const VectorXd& y) const {
        MatrixXd M = MatrixXd::Zero(cm->m, cm->m);
        for (int b = 0; b < cm->m; ++b) M.col(b) = bracket_minus1(*cm, y, VectorXd::Unit(cm->m, b));
        return M;
    }
    // ad_X t = t chi_X, ad_-1(Y) t = -ad_Y, t ad_-1(Y) = -ad_tY on basis elements
    double identity_residual() const {
        double r = 0;
        auto mx = [](const MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; };
        for (int i = 0; i < cm->n; ++i) {
            VectorXd x = VectorXd::Unit(cm->n, i);
            r = std::max(r, mx(ad(x) * cm->t - cm->t * chi(x)));
        }
        for (int a = 0; a < cm->m; ++a) {
            VectorXd y = VectorXd::Unit(cm->m, a);
            r = std::max(r, mx(adm1(y) * cm->t + bracket_matrix(y)));
            r = std::max(r, mx(cm->t * adm1(y) + ad(cm->t * y)));
        }
        return r;
    }
};

inline TwoAdjoint two_adjoint(const CrossedModule& cm) { return {&cm}; }

// ---- built-in r-matrices

// R2 = identity in g0 (x) g-1, R1 = 0
inline TwoRMatrix canonical_rmatrix(const CrossedModule& cm) {
    TwoRMatrix R = TwoRMatrix::zero(cm.n, cm.m);
    R.R2 = MatrixXd::Identity(cm.n, cm.m);
    return R;
}

// r = 1/4 H(x)H + E(x)F on sl2, two copies
inline MatrixXd dj_r() {
    MatrixXd r = MatrixXd::Zero(3, 3);
    r(2, 2) = 0.25;
    r(0, 1) = 1.0;
    return r;
}

inline TwoRMatrix dj_lift() { return {dj_r(), dj_r()}; }

// lift of a 1-algebra r-matrix to id_g; unhalved parts equal the halved parts of r
inline TwoRMatrix lift_rmatrix(const MatrixXd& r) { return {0.5 * r, 0.5 * r}; }

inline TwoRMatrix default_rmatrix(const CrossedModule& cm) {
    if (cm.name == "id_sl2") return dj_lift();
    if (cm.name == "skeletal_u1") return TwoRMatrix::zero(1, 1);
    return canonical_rmatrix(cm);
}

inline TwoRMatrix rmatrix_from_json(const json& j, int n, int m, const std::string& ctx = "rmatrix") {
    if (!j.is_object() || !j.contains("R1") || !j.contains("R2")) throw parse_error(ctx + ": expected fields 'R1' and 'R2'");
    return {detail::read_matrix(j["R1"], m, n, ctx + ".R1"), detail::read_matrix(j["R2"], n, m, ctx + ".R2")};
}

inline TwoRMatrix load_rmatrix(const std::string& path, const CrossedModule& cm) {
    return rmatrix_from_json(detail::read_json_file(path), cm.n, cm.m, path);
}

}  // namespace lie2
