#pragma once
// linear graded Poisson brackets on g*[1], polynomial observables, RK4 flows
//
// phase-space point (g, f): g pairs with g0, f with g-1, through
//   <g+f, X+Y> = g(X + tY) + f(Y)
// so the coordinate gradient of x_A is G^{-1} e_A with G = [[1, t], [0, 1]].

#include "lie2/bialgebra.hpp"

#include <functional>
#include <map>
#include <numeric>

namespace lie2 {

struct GradedPoint {
    VectorXd g;  // on g0*
    VectorXd f;  // on g-1*
    VectorXd stacked() const {
        VectorXd s(g.size() + f.size());
        s << g, f;
        return s;
    }
    static GradedPoint split(const VectorXd& s, int n) { return {s.head(n), s.tail(s.size() - n)}; }
};

class Polynomial {
public:
    using Mono = std::vector<int>;
    struct GradedLex {
        bool operator()(const Mono& a, const Mono& b) const {
            int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
            if (da != db) return da < db;
            return a < b;
        }
    };

    explicit Polynomial(int nvars = 0) : nv_(nvars) {}
    static Polynomial constant(int nvars, double c) {
        Polynomial p(nvars);
        p.add(Mono(nvars, 0), c);
        return p;
    }
    static Polynomial var(int nvars, int A, double c = 1.0) {
        Polynomial p(nvars);
        Mono e(nvars, 0);
        e[A] = 1;
        p.add(e, c);
        return p;
    }
    // 1/2 x^T Q x
    static Polynomial quadratic(const MatrixXd& Q) {
        const int N = int(Q.rows());
        Polynomial p(N);
        for (int A = 0; A < N; ++A)
            for (int B = 0; B < N; ++B) {
                double c = 0.5 * Q(A, B);
                if (c == 0) continue;
                Mono e(N, 0);
                e[A] += 1;
                e[B] += 1;
                p.add(e, c);
            }
        return p;
    }

    int nvars() const { return nv_; }
    const std::map<Mono, double, GradedLex>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int degree() const {
        int d = 0;
        for (auto& [e, c] : t_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
        return d;
    }

    void add(const Mono& e, double c) {
        if (c == 0) return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
            return;
        }
        it->second += c;
        if (it->second == 0) t_.erase(it);
    }

    Polynomial operator+(const Polynomial& o) const {
        Polynomial r = *this;
        for (auto& [e, c] : o.t_) r.add(e, c);
        return r;
    }
    Polynomial operator-(const Polynomial& o) const { return *this + o * -1.0; }
    Polynomial operator*(double s) const {
        Polynomial r(nv_);
        if (s == 0) return r;
        for (auto& [e, c] : t_) r.add(e, c * s);
        return r;
    }
    Polynomial operator*(const Polynomial& o) const {
        Polynomial r(nv_);
        for (auto& [e1, c1] : t_)
            for (auto& [e2, c2] : o.t_) {
                Mono e(nv_);
                for (int i = 0; i < nv_; ++i) e[i] = e1[i] + e2[i];
                r.add(e, c1 * c2);
            }
        return r;
    }

    Polynomial derivative(int A) const {
        Polynomial r(nv_);
        for (auto& [e, c] : t_) {
            if (e[A] == 0) continue;
            Mono d = e;
            d[A] -= 1;
            r.add(d, c * e[A]);
        }
        return r;
    }

    double operator()(const VectorXd& x) const {
        double s = 0;
        for (auto& [e, c] : t_) {
            double v = c;
            for (int i = 0; i < nv_; ++i)
                for (int k = 0; k < e[i]; ++k) v *= x[i];
            s += v;
        }
        return s;
    }

    // keep only monomials whose support lies in [lo, hi)
    Polynomial restricted(int lo, int hi) const {
        Polynomial r(nv_);
        for (auto& [e, c] : t_) {
            bool in = true;
            for (int i = 0; i < nv_; ++i)
                if (e[i] && (i < lo || i >= hi)) in = false;
            if (in) r.add(e, c);
        }
        return r;
    }

    double max_abs_coeff() const {
        double r = 0;
        for (auto& [e, c] : t_) r = std::max(r, std::abs(c));
        return r;
    }

    json to_json() const {
        json j = json::array();
        for (auto& [e, c] : t_) j.push_back({{"coef", c}, {"exp", e}});
        return j;
    }
    static Polynomial from_json(const json& j, int nvars, const std::string& ctx = "hamiltonian") {
        const json& terms = j.is_object() && j.contains("terms") ? j["terms"] : j;
        if (!terms.is_array()) throw parse_error(ctx + ": expected an array of {coef, exp} terms");
        Polynomial p(nvars);
        for (std::size_t k = 0; k < terms.size(); ++k) {
            auto c = ctx + "[" + std::to_string(k) + "]";
            if (!terms[k].contains("coef") || !terms[k].contains("exp")) throw parse_error(c + ": needs 'coef' and 'exp'");
            Mono e;
            try {
                e = terms[k]["exp"].get<Mono>();
            } catch (const json::exception&) {
                throw parse_error(c + ".exp: expected an integer array");
            }
            if (int(e.size()) != nvars) throw dimension_error(c + ".exp: expected " + std::to_string(nvars) + " exponents");
            for (int x : e)
                if (x < 0) throw parse_error(c + ".exp: negative exponent");
            p.add(e, detail::num(terms[k]["coef"], c + ".coef"));
        }
        return p;
    }

private:
    int nv_;
    std::map<Mono, double, GradedLex> t_;
};

inline std::string coordinate_name(int n, int A) {
    return A < n ? "b" + std::to_string(A + 1) : "a" + std::to_string(A - n + 1);
}

enum class Mode { plain, rmatrix };

inline Mode parse_mode(const std::string& s) {
    if (s == "plain") return Mode::plain;
    if (s == "rmatrix") return Mode::rmatrix;
    throw std::invalid_argument("unknown mode '" + s + "' (expected plain or rmatrix)");
}

inline MatrixXd pairing_matrix(const CrossedModule& cm) {
    MatrixXd G = MatrixXd::Identity(cm.n + cm.m, cm.n + cm.m);
    G.topRightCorner(cm.n, cm.m) = cm.t;
    return G;
}

// {x_A, x_B} = sum_C pi(C, A, B) x_C
struct PoissonStructure {
    int n = 0, m = 0;
    Mode mode = Mode::plain;
    CrossedModule bracket_cm;  // cm itself, or the R-bracket crossed module
    MatrixXd G, Ginv;
    Tensor3 pi;

    int dim() const { return n + m; }

    Polynomial coord_bracket(int A, int B) const {
        Polynomial p(dim());
        for (int C = 0; C < dim(); ++C) p = p + Polynomial::var(dim(), C, pi(C, A, B));
        return p;
    }

    // {x_A, x_B} evaluated at x, as an N x N matrix
    MatrixXd at(const VectorXd& x) const {
        const int N = dim();
        MatrixXd M = MatrixXd::Zero(N, N);
        for (int C = 0; C < N; ++C) {
            if (x[C] == 0) continue;
            for (int A = 0; A < N; ++A)
                for (int B = 0; B < N; ++B) M(A, B) += pi(C, A, B) * x[C];
        }
        return M;
    }

    // gradient of a coordinate covector as an element of g
    GradedElement element(const VectorXd& dx) const { return GradedElement::split(Ginv * dx, n); }
};

inline PoissonStructure make_structure(const CrossedModule& cm, Mode mode, const PhiMap* phi = nullptr) {
    PoissonStructure ps;
    ps.n = cm.n;
    ps.m = cm.m;
    ps.mode = mode;
    if (mode == Mode::rmatrix) {
        if (!phi) throw structural_error("rmatrix mode needs a phi map");
        ps.bracket_cm = r_crossed_module(cm, *phi);
    } else {
        ps.bracket_cm = cm;
    }
    ps.G = pairing_matrix(cm);
    ps.Ginv = ps.G.inverse();
    const int N = ps.dim();
    ps.pi = Tensor3(N, N, N);
    for (int A = 0; A < N; ++A)
        for (int B = 0; B < N; ++B) {
            VectorXd w = full_bracket(ps.bracket_cm, ps.element(VectorXd::Unit(N, A)), ps.element(VectorXd::Unit(N, B))).stacked();
            VectorXd c = ps.G * w;
            for (int C = 0; C < N; ++C) ps.pi(C, A, B) = c[C];
        }
    return ps;
}

// convenience: structure from (cm, R, mode)
inline PoissonStructure make_structure(const CrossedModule& cm, const TwoRMatrix& R, Mode mode, double tol = 1e-9) {
    if (mode == Mode::plain) return make_structure(cm, mode);
    Split s = decompose(R);
    PairingForm P = pairing_from_sym(cm, s.sym, tol);
    PhiMap f = phi_map(cm, s.skew, P, tol);
    return make_structure(cm, mode, &f);
}

inline Polynomial coord_bracket(const PoissonStructure& ps, int A, int B) { return ps.coord_bracket(A, B); }

// Leibniz extension
inline Polynomial poisson_bracket(const PoissonStructure& ps, const Polynomial& F, const Polynomial& G) {
    const int N = ps.dim();
    Polynomial out(N);
    std::vector<Polynomial> dG;
    for (int B = 0; B < N; ++B) dG.push_back(G.derivative(B));
    for (int A = 0; A < N; ++A) {
        Polynomial dFA = F.derivative(A);
        if (dFA.is_zero()) continue;
        for (int B = 0; B < N; ++B) {
            if (dG[B].is_zero()) continue;
            Polynomial xb = ps.coord_bracket(A, B);
            if (xb.is_zero()) continue;
            out = out + dFA * dG[B] * xb;
        }
    }
    return out;
}

inline VectorXd gradient(const std::vector<Polynomial>& dH, const VectorXd& x) {
    VectorXd g(dH.size());
    for (std::size_t A = 0; A < dH.size(); ++A) g[long(A)] = dH[A](x);
    return g;
}

inline std::vector<Polynomial> derivatives(const Polynomial& H) {
    std::vector<Polynomial> d;
    for (int A = 0; A < H.nvars(); ++A) d.push_back(H.derivative(A));
    return d;
}

// max over points and basis Z of |<xi, [Z, grad H]>| with the structure's bracket
inline double check_invariance(const PoissonStructure& ps, const Polynomial& H, const std::vector<VectorXd>& points) {
    auto dH = derivatives(H);
    double r = 0;
    const int N = ps.dim();
    for (auto& x : points) {
        GradedElement h = ps.element(gradient(dH, x));
        for (int Z = 0; Z < N; ++Z) {
            VectorXd w = full_bracket(ps.bracket_cm, GradedElement::split(VectorXd::Unit(N, Z), ps.n), h).stacked();
            r = std::max(r, std::abs(x.dot(ps.G * w)));
        }
    }
    return r;
}

// xdot_A = {H, x_A}
inline VectorXd hamiltonian_rhs(const PoissonStructure& ps, const std::vector<Polynomial>& dH, const VectorXd& x) {
    return -(ps.at(x) * gradient(dH, x));
}

inline VectorXd rk4_step(const std::function<VectorXd(const VectorXd&)>& F, const VectorXd& x, double dt) {
    VectorXd k1 = F(x);
    VectorXd k2 = F(x + 0.5 * dt * k1);
    VectorXd k3 = F(x + 0.5 * dt * k2);
    VectorXd k4 = F(x + dt * k3);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline std::vector<GradedPoint> flow(const PoissonStructure& ps, const Polynomial& H, const GradedPoint& p0, double dt, long steps) {
    if (!(dt > 0)) throw std::invalid_argument("flow: dt must be positive");
    if (steps < 0) throw std::invalid_argument("flow: steps must be non-negative");
    auto dH = derivatives(H);
    auto F = [&](const VectorXd& x) { return hamiltonian_rhs(ps, dH, x); };
    std::vector<GradedPoint> traj;
    traj.reserve(std::size_t(steps) + 1);
    traj.push_back(p0);
    VectorXd x = p0.stacked();
    for (long s = 1; s <= steps; ++s) {
        x = rk4_step(F, x, dt);
        if (!x.allFinite()) throw divergence_error("flow diverged at step " + std::to_string(s), s);
        traj.push_back(GradedPoint::split(x, ps.n));
    }
    return traj;
}

}  // namespace lie2
