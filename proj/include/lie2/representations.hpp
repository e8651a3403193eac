#pragma once
// 2-representations, the genuine block representation, trace polynomials and drift monitoring

#include "lie2/lax.hpp"

#include <complex>
#include <fstream>
#include <iomanip>

namespace lie2 {

using cvec = std::vector<std::complex<double>>;

// coefficient tensors over the bases: rho00[i], rho01[i] for T_i, rho1[a] for S_a
struct TwoRepresentation {
    int dV0 = 0, dVm1 = 0;
    MatrixXd partial;               // dV0 x dVm1
    std::vector<MatrixXd> rho00;    // dV0 x dV0
    std::vector<MatrixXd> rho01;    // dVm1 x dVm1
    std::vector<MatrixXd> rho1;     // dVm1 x dV0

    static TwoRepresentation zero(const CrossedModule& cm, int d0, int dm1) {
        TwoRepresentation r;
        r.dV0 = d0;
        r.dVm1 = dm1;
        r.partial = MatrixXd::Zero(d0, dm1);
        r.rho00.assign(cm.n, MatrixXd::Zero(d0, d0));
        r.rho01.assign(cm.n, MatrixXd::Zero(dm1, dm1));
        r.rho1.assign(cm.m, MatrixXd::Zero(dm1, d0));
        return r;
    }

    MatrixXd r00(const VectorXd& x) const { return combine(rho00, x, dV0, dV0); }
    MatrixXd r01(const VectorXd& x) const { return combine(rho01, x, dVm1, dVm1); }
    MatrixXd r1(const VectorXd& y) const { return combine(rho1, y, dVm1, dV0); }

private:
    static MatrixXd combine(const std::vector<MatrixXd>& mats, const VectorXd& c, int r, int k) {
        MatrixXd M = MatrixXd::Zero(r, k);
        for (std::size_t i = 0; i < mats.size(); ++i)
            if (c[long(i)] != 0) M += c[long(i)] * mats[i];
        return M;
    }
};

inline void check_rep_shape(const CrossedModule& cm, const TwoRepresentation& rep) {
    bool ok = int(rep.rho00.size()) == cm.n && int(rep.rho01.size()) == cm.n && int(rep.rho1.size()) == cm.m &&
              rep.partial.rows() == rep.dV0 && rep.partial.cols() == rep.dVm1;
    for (auto& M : rep.rho00) ok = ok && M.rows() == rep.dV0 && M.cols() == rep.dV0;
    for (auto& M : rep.rho01) ok = ok && M.rows() == rep.dVm1 && M.cols() == rep.dVm1;
    for (auto& M : rep.rho1) ok = ok && M.rows() == rep.dVm1 && M.cols() == rep.dV0;
    if (!ok) throw dimension_error("2-representation blocks do not match the algebra dimensions");
}

inline AxiomReport validate_2rep(const CrossedModule& cm, const TwoRepresentation& rep, double tol = 1e-9) {
    check_rep_shape(cm, rep);
    AxiomReport r;
    r.tol = tol;
    auto mx = [](const MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; };
    double end0 = 0, t0 = 0, t1 = 0, actn = 0, hom00 = 0, hom01 = 0;
    for (int i = 0; i < cm.n; ++i) {
        VectorXd X = VectorXd::Unit(cm.n, i);
        end0 = std::max(end0, mx(rep.r00(X) * rep.partial - rep.partial * rep.r01(X)));
        for (int j = 0; j < cm.n; ++j) {
            VectorXd Xp = VectorXd::Unit(cm.n, j), c = bracket0(cm, X, Xp);
            MatrixXd A = rep.r00(X), B = rep.r00(Xp), C = rep.r01(X), D = rep.r01(Xp);
            hom00 = std::max(hom00, mx(rep.r00(c) - (A * B - B * A)));
            hom01 = std::max(hom01, mx(rep.r01(c) - (C * D - D * C)));
        }
        for (int a = 0; a < cm.m; ++a) {
            VectorXd Y = VectorXd::Unit(cm.m, a);
            actn = std::max(actn, mx(rep.r1(act(cm, X, Y)) - (rep.r01(X) * rep.r1(Y) - rep.r1(Y) * rep.r00(X))));
        }
    }
    for (int a = 0; a < cm.m; ++a) {
        VectorXd Y = VectorXd::Unit(cm.m, a), tY = tmap_apply(cm, Y);
        t0 = std::max(t0, mx(rep.r00(tY) - rep.partial * rep.r1(Y)));
        t1 = std::max(t1, mx(rep.r01(tY) - rep.r1(Y) * rep.partial));
    }
    r.add("end0", end0);
    r.add("rho00_t", t0);
    r.add("rho01_t", t1);
    r.add("rho1_action", actn);
    r.add("rho00_hom", hom00);
    r.add("rho01_hom", hom01);
    return r;
}

// V0 = g0, V-1 = g-1, rho1(Y)X = -X |> Y, partial = t
inline TwoRepresentation adjoint_2rep(const CrossedModule& cm) {
    TwoRepresentation r = TwoRepresentation::zero(cm, cm.n, cm.m);
    r.partial = cm.t;
    for (int i = 0; i < cm.n; ++i) {
        VectorXd X = VectorXd::Unit(cm.n, i);
        r.rho00[i] = ad0_matrix(cm, X);
        r.rho01[i] = act_matrix(cm, X);
    }
    for (int a = 0; a < cm.m; ++a) r.rho1[a] = -act_on_matrix(cm, VectorXd::Unit(cm.m, a));
    return r;
}

// block upper-triangular matrix on V-1 (+) V0
inline MatrixXd rho_gen(const CrossedModule& cm, const TwoRepresentation& rep, const GradedElement& z) {
    if (z.x.size() != cm.n || z.y.size() != cm.m) throw dimension_error("rho_gen: element does not match the algebra");
    const int a = rep.dVm1, b = rep.dV0;
    MatrixXd M = MatrixXd::Zero(a + b, a + b);
    M.topLeftCorner(a, a) = rep.r01(z.x + cm.t * z.y);
    M.topRightCorner(a, b) = rep.r1(z.y);
    M.bottomRightCorner(b, b) = rep.r00(z.x);
    return M;
}

// max over basis pairs of |rho([z,z']) - [rho z, rho z']|
inline double rho_gen_hom_residual(const CrossedModule& cm, const TwoRepresentation& rep) {
    const int N = cm.n + cm.m;
    double r = 0;
    for (int A = 0; A < N; ++A)
        for (int B = 0; B < N; ++B) {
            auto z = GradedElement::split(VectorXd::Unit(N, A), cm.n), w = GradedElement::split(VectorXd::Unit(N, B), cm.n);
            MatrixXd P = rho_gen(cm, rep, z), Q = rho_gen(cm, rep, w);
            MatrixXd E = rho_gen(cm, rep, full_bracket(cm, z, w)) - (P * Q - Q * P);
            if (E.size()) r = std::max(r, E.cwiseAbs().maxCoeff());
        }
    return r;
}

inline VectorXd trace_polys(const MatrixXd& M, int kmax) {
    if (kmax < 1) throw std::invalid_argument("trace_polys: kmax must be >= 1");
    VectorXd F(kmax);
    MatrixXd P = M;
    for (int k = 0; k < kmax; ++k) {
        F[k] = P.trace();
        if (k + 1 < kmax) P = P * M;
    }
    return F;
}

inline VectorXd trace_polys(const CrossedModule& cm, const TwoRepresentation& rep, const GradedElement& z, int kmax) {
    return trace_polys(rho_gen(cm, rep, z), kmax);
}

inline cvec eigenvalues(const MatrixXd& M) {
    if (M.rows() == 0) return {};
    Eigen::EigenSolver<MatrixXd> es(M, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    cvec v(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());
    std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return v;
}

// greedy nearest matching; max pair distance (dims are tiny)
inline double multiset_distance(const cvec& a, const cvec& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(b.size(), false);
    double worst = 0;
    for (auto& x : a) {
        std::size_t best = 0;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(x - b[j]) < d) {
                d = std::abs(x - b[j]);
                best = j;
            }
        used[best] = true;
        worst = std::max(worst, d);
    }
    return worst;
}

struct EigenUnion {
    cvec full, blocks;   // spectrum of rho_gen, union of the diagonal blocks' spectra
    double residual = 0;
};

inline EigenUnion eigen_union(const CrossedModule& cm, const TwoRepresentation& rep, const GradedElement& z) {
    MatrixXd M = rho_gen(cm, rep, z);
    EigenUnion e;
    e.full = eigenvalues(M);
    auto top = eigenvalues(M.topLeftCorner(rep.dVm1, rep.dVm1));
    auto bot = eigenvalues(M.bottomRightCorner(rep.dV0, rep.dV0));
    e.blocks = top;
    e.blocks.insert(e.blocks.end(), bot.begin(), bot.end());
    std::sort(e.blocks.begin(), e.blocks.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    e.residual = multiset_distance(e.full, e.blocks);
    return e;
}

struct DriftRow {
    double t;
    VectorXd F;
    double eig_drift;
};

struct DriftTable {
    int kmax = 0;
    VectorXd F0;
    std::vector<DriftRow> rows;
    VectorXd max_abs, max_rel;  // per k
    double max_eig = 0;

    json to_json() const {
        json j;
        for (int k = 0; k < kmax; ++k)
            j["F" + std::to_string(k + 1)] = {{"initial", F0[k]}, {"max_abs_drift", max_abs[k]}, {"max_rel_drift", max_rel[k]}};
        j["eig_drift"] = max_eig;
        return j;
    }

    void write_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << std::setprecision(17) << "t";
        for (int k = 1; k <= kmax; ++k) out << ",F_" << k;
        out << ",eig_drift\n";
        for (auto& r : rows) {
            out << r.t;
            for (int k = 0; k < kmax; ++k) out << "," << r.F[k];
            out << "," << r.eig_drift << "\n";
        }
    }
};

// L along a trajectory; relative drift is |dF| / max(1, |F(0)|)
inline DriftTable conservation_monitor(const CrossedModule& cm, const TwoRepresentation& rep, const TwoLaxPair& pair,
                                       const std::vector<GradedPoint>& traj, int kmax, double dt, int stride = 1) {
    DriftTable d;
    d.kmax = kmax;
    d.max_abs = VectorXd::Zero(kmax);
    d.max_rel = VectorXd::Zero(kmax);
    if (traj.empty()) return d;
    cvec e0;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        bool record = s % std::size_t(std::max(1, stride)) == 0 || s + 1 == traj.size();
        MatrixXd M = rho_gen(cm, rep, pair.L(traj[s].stacked()));
        VectorXd F = trace_polys(M, kmax);
        if (s == 0) {
            d.F0 = F;
            e0 = eigenvalues(M);
        }
        for (int k = 0; k < kmax; ++k) {
            double a = std::abs(F[k] - d.F0[k]);
            d.max_abs[k] = std::max(d.max_abs[k], a);
            d.max_rel[k] = std::max(d.max_rel[k], a / std::max(1.0, std::abs(d.F0[k])));
        }
        double ed = multiset_distance(eigenvalues(M), e0);
        d.max_eig = std::max(d.max_eig, ed);
        if (record) d.rows.push_back({double(s) * dt, F, ed});
    }
    return d;
}

}  // namespace lie2
