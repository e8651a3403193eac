#pragma once
// strict Lie 2-algebras as crossed modules of structure constants

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lie2 {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using json = nlohmann::json;

struct parse_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct dimension_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct structural_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct degeneracy_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct divergence_error : std::runtime_error {
    long step;
    divergence_error(const std::string& what, long s) : std::runtime_error(what), step(s) {}
};

// dense rank-3 array, row-major
struct Tensor3 {
    int d0 = 0, d1 = 0, d2 = 0;
    std::vector<double> v;
    Tensor3() = default;
    Tensor3(int a, int b, int c) : d0(a), d1(b), d2(c), v(std::size_t(a) * b * c, 0.0) {}
    double& operator()(int a, int b, int c) { return v[(std::size_t(a) * d1 + b) * d2 + c]; }
    double operator()(int a, int b, int c) const { return v[(std::size_t(a) * d1 + b) * d2 + c]; }
    bool operator==(const Tensor3&) const = default;
    double max_abs() const {
        double r = 0;
        for (double x : v) r = std::max(r, std::abs(x));
        return r;
    }
};

// c0[k][i][j]: [T_i,T_j] = c0 T_k ; act[b][i][a]: T_i |> S_a = act S_b ; t(i,a): t(S_a) = t T_i
struct CrossedModule {
    std::string name;
    int n = 0, m = 0;
    Tensor3 c0, act;
    MatrixXd t;
    Tensor3 cm1;  // derived, never read from files

    CrossedModule() = default;
    CrossedModule(std::string nm, int n_, int m_)
        : name(std::move(nm)), n(n_), m(m_), c0(n_, n_, n_), act(m_, n_, m_), t(MatrixXd::Zero(n_, m_)) {
        refresh();
    }
    void refresh() {
        cm1 = Tensor3(m, m, m);
        for (int c = 0; c < m; ++c)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    double s = 0;
                    for (int i = 0; i < n; ++i) s += t(i, a) * act(c, i, b);
                    cm1(c, a, b) = s;
                }
    }
};

struct GradedElement {
    VectorXd x;  // g0
    VectorXd y;  // g-1
    GradedElement() = default;
    GradedElement(VectorXd x_, VectorXd y_) : x(std::move(x_)), y(std::move(y_)) {}
    static GradedElement zero(int n, int m) { return {VectorXd::Zero(n), VectorXd::Zero(m)}; }
    VectorXd stacked() const {
        VectorXd s(x.size() + y.size());
        s << x, y;
        return s;
    }
    static GradedElement split(const VectorXd& s, int n) {
        return {s.head(n), s.tail(s.size() - n)};
    }
    GradedElement operator+(const GradedElement& o) const { return {x + o.x, y + o.y}; }
    GradedElement operator-(const GradedElement& o) const { return {x - o.x, y - o.y}; }
    GradedElement operator*(double s) const { return {x * s, y * s}; }
};

struct AxiomReport {
    double tol = 1e-9;
    std::vector<std::pair<std::string, double>> residuals;

    void add(const std::string& k, double r) { residuals.emplace_back(k, r); }
    double residual(const std::string& k) const {
        for (auto& [name, r] : residuals)
            if (name == k) return r;
        throw std::out_of_range("no axiom " + k);
    }
    bool passed(const std::string& k) const { return residual(k) < tol; }
    bool ok() const {
        return std::all_of(residuals.begin(), residuals.end(), [&](auto& p) { return p.second < tol; });
    }
    double worst() const {
        double w = 0;
        for (auto& p : residuals) w = std::max(w, p.second);
        return w;
    }
    std::vector<std::string> failed() const {
        std::vector<std::string> out;
        for (auto& [k, r] : residuals)
            if (!(r < tol)) out.push_back(k);
        return out;
    }
    json to_json() const {
        json j;
        j["tol"] = tol;
        j["pass"] = ok();
        for (auto& [k, r] : residuals) j["residuals"][k] = {{"max", r}, {"pass", r < tol}};
        return j;
    }
};

namespace detail {
inline void need(bool c, const std::string& what) {
    if (!c) throw dimension_error(what);
}
}  // namespace detail

inline VectorXd bracket0(const CrossedModule& cm, const VectorXd& x, const VectorXd& xp) {
    detail::need(x.size() == cm.n && xp.size() == cm.n, "bracket0: expected vectors of size n");
    VectorXd out = VectorXd::Zero(cm.n);
    for (int k = 0; k < cm.n; ++k)
        for (int i = 0; i < cm.n; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < cm.n; ++j) out[k] += cm.c0(k, i, j) * x[i] * xp[j];
        }
    return out;
}

inline VectorXd act(const CrossedModule& cm, const VectorXd& x, const VectorXd& y) {
    detail::need(x.size() == cm.n && y.size() == cm.m, "act: expected (n, m) vectors");
    VectorXd out = VectorXd::Zero(cm.m);
    for (int b = 0; b < cm.m; ++b)
        for (int i = 0; i < cm.n; ++i) {
            if (x[i] == 0) continue;
            for (int a = 0; a < cm.m; ++a) out[b] += cm.act(b, i, a) * x[i] * y[a];
        }
    return out;
}

inline VectorXd tmap_apply(const CrossedModule& cm, const VectorXd& y) {
    detail::need(y.size() == cm.m, "tmap_apply: expected vector of size m");
    return cm.t * y;
}

inline VectorXd bracket_minus1(const CrossedModule& cm, const VectorXd& y, const VectorXd& yp) {
    detail::need(y.size() == cm.m && yp.size() == cm.m, "bracket_minus1: expected vectors of size m");
    VectorXd out = VectorXd::Zero(cm.m);
    for (int c = 0; c < cm.m; ++c)
        for (int a = 0; a < cm.m; ++a)
            for (int b = 0; b < cm.m; ++b) out[c] += cm.cm1(c, a, b) * y[a] * yp[b];
    return out;
}

// mu2: no degree -2 output
inline GradedElement graded_bracket(const CrossedModule& cm, const GradedElement& z, const GradedElement& w) {
    return {bracket0(cm, z.x, w.x), act(cm, z.x, w.y) - act(cm, w.x, z.y)};
}

// semidirect bracket on g0 + g-1 with the Peiffer term on g-1; rho_gen represents this one
inline GradedElement full_bracket(const CrossedModule& cm, const GradedElement& z, const GradedElement& w) {
    GradedElement r = graded_bracket(cm, z, w);
    r.y += bracket_minus1(cm, z.y, w.y);
    return r;
}

// matrices of the basic operators
inline MatrixXd ad0_matrix(const CrossedModule& cm, const VectorXd& x) {
    MatrixXd M = MatrixXd::Zero(cm.n, cm.n);
    for (int k = 0; k < cm.n; ++k)
        for (int j = 0; j < cm.n; ++j)
            for (int i = 0; i < cm.n; ++i) M(k, j) += cm.c0(k, i, j) * x[i];
    return M;
}
inline MatrixXd act_matrix(const CrossedModule& cm, const VectorXd& x) {
    MatrixXd M = MatrixXd::Zero(cm.m, cm.m);
    for (int b = 0; b < cm.m; ++b)
        for (int a = 0; a < cm.m; ++a)
            for (int i = 0; i < cm.n; ++i) M(b, a) += cm.act(b, i, a) * x[i];
    return M;
}
// X -> X |> y as an m x n matrix
inline MatrixXd act_on_matrix(const CrossedModule& cm, const VectorXd& y) {
    MatrixXd M = MatrixXd::Zero(cm.m, cm.n);
    for (int b = 0; b < cm.m; ++b)
        for (int i = 0; i < cm.n; ++i)
            for (int a = 0; a < cm.m; ++a) M(b, i) += cm.act(b, i, a) * y[a];
    return M;
}

// structure constants of a bracket on the stacked basis (T_0..T_n-1, S_0..S_m-1)
template <class Br>
Tensor3 stacked_constants(const CrossedModule& cm, Br&& br) {
    const int N = cm.n + cm.m;
    Tensor3 C(N, N, N);
    for (int A = 0; A < N; ++A)
        for (int B = 0; B < N; ++B) {
            VectorXd ea = VectorXd::Unit(N, A), eb = VectorXd::Unit(N, B);
            VectorXd w = br(GradedElement::split(ea, cm.n), GradedElement::split(eb, cm.n)).stacked();
            for (int C_ = 0; C_ < N; ++C_) C(C_, A, B) = w[C_];
        }
    return C;
}

inline AxiomReport validate_crossed_module(const CrossedModule& cm, double tol = 1e-9) {
    const int n = cm.n, m = cm.m;
    AxiomReport rep;
    rep.tol = tol;
    auto e0 = [&](int i) { return VectorXd::Unit(n, i); };
    auto e1 = [&](int a) { return VectorXd::Unit(m, a); };

    double anti = 0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) anti = std::max(anti, std::abs(cm.c0(k, i, j) + cm.c0(k, j, i)));
    rep.add("antisymmetry", anti);

    double jac = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                VectorXd s = bracket0(cm, e0(i), bracket0(cm, e0(j), e0(k))) +
                             bracket0(cm, e0(j), bracket0(cm, e0(k), e0(i))) +
                             bracket0(cm, e0(k), bracket0(cm, e0(i), e0(j)));
                jac = std::max(jac, s.cwiseAbs().maxCoeff());
            }
    rep.add("jacobi", jac);

    double actrep = 0, equiv = 0;
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < m; ++a) {
            VectorXd d = tmap_apply(cm, act(cm, e0(i), e1(a))) - bracket0(cm, e0(i), tmap_apply(cm, e1(a)));
            if (n) equiv = std::max(equiv, d.cwiseAbs().maxCoeff());
            for (int j = 0; j < n; ++j) {
                VectorXd r = act(cm, e0(i), act(cm, e0(j), e1(a))) - act(cm, e0(j), act(cm, e0(i), e1(a))) -
                             act(cm, bracket0(cm, e0(i), e0(j)), e1(a));
                actrep = std::max(actrep, r.cwiseAbs().maxCoeff());
            }
        }
    rep.add("action", actrep);
    rep.add("equivariance", equiv);

    double peif = 0, thom = 0, deriv = 0, jac1 = 0, kos = 0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            VectorXd yab = bracket_minus1(cm, e1(a), e1(b));
            peif = std::max(peif, (yab + bracket_minus1(cm, e1(b), e1(a))).cwiseAbs().maxCoeff());
            if (n) {
                VectorXd h = tmap_apply(cm, yab) - bracket0(cm, tmap_apply(cm, e1(a)), tmap_apply(cm, e1(b)));
                thom = std::max(thom, h.cwiseAbs().maxCoeff());
            }
            // [mu1 Y, Y'] = [Y, mu1 Y'] through mu2
            GradedElement l = graded_bracket(cm, {tmap_apply(cm, e1(a)), VectorXd::Zero(m)}, {VectorXd::Zero(n), e1(b)});
            GradedElement r = graded_bracket(cm, {VectorXd::Zero(n), e1(a)}, {tmap_apply(cm, e1(b)), VectorXd::Zero(m)});
            kos = std::max(kos, (l.y - r.y).cwiseAbs().maxCoeff());
            for (int i = 0; i < n; ++i) {
                VectorXd d = act(cm, e0(i), yab) - bracket_minus1(cm, act(cm, e0(i), e1(a)), e1(b)) -
                             bracket_minus1(cm, e1(a), act(cm, e0(i), e1(b)));
                deriv = std::max(deriv, d.cwiseAbs().maxCoeff());
            }
            for (int c = 0; c < m; ++c) {
                VectorXd s = bracket_minus1(cm, e1(a), bracket_minus1(cm, e1(b), e1(c))) +
                             bracket_minus1(cm, e1(b), bracket_minus1(cm, e1(c), e1(a))) +
                             bracket_minus1(cm, e1(c), bracket_minus1(cm, e1(a), e1(b)));
                jac1 = std::max(jac1, s.cwiseAbs().maxCoeff());
            }
        }
    rep.add("peiffer", peif);
    rep.add("t_homomorphism", thom);
    rep.add("derivation", deriv);
    rep.add("jacobi_minus1", jac1);
    rep.add("koszul", kos);
    return rep;
}

// ---- built-ins

inline CrossedModule id_su2() {
    CrossedModule cm("id_su2", 3, 3);
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        cm.c0(k, i, j) = 1;
        cm.c0(k, j, i) = -1;
    }
    cm.act = cm.c0;
    cm.t = MatrixXd::Identity(3, 3);
    cm.refresh();
    return cm;
}

// basis (E, F, H); [E,F] = H, [H,E] = 2E, [H,F] = -2F
inline CrossedModule id_sl2() {
    CrossedModule cm("id_sl2", 3, 3);
    auto set = [&](int k, int i, int j, double v) {
        cm.c0(k, i, j) = v;
        cm.c0(k, j, i) = -v;
    };
    set(2, 0, 1, 1);
    set(0, 2, 0, 2);
    set(1, 2, 1, -2);
    cm.act = cm.c0;
    cm.t = MatrixXd::Identity(3, 3);
    cm.refresh();
    return cm;
}

inline CrossedModule skeletal_u1() { return CrossedModule("skeletal_u1", 1, 1); }

inline std::vector<std::string> builtin_names() { return {"id_su2", "id_sl2", "skeletal_u1"}; }

inline bool is_builtin(const std::string& s) {
    auto v = builtin_names();
    return std::find(v.begin(), v.end(), s) != v.end();
}

inline CrossedModule builtin(const std::string& s) {
    if (s == "id_su2") return id_su2();
    if (s == "id_sl2") return id_sl2();
    if (s == "skeletal_u1") return skeletal_u1();
    throw std::invalid_argument("unknown built-in algebra '" + s + "'");
}

// ---- json

namespace detail {
inline double num(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw parse_error(ctx + ": expected a number");
    return j.get<double>();
}
inline const json& arr(const json& j, std::size_t len, const std::string& ctx) {
    if (!j.is_array()) throw parse_error(ctx + ": expected an array");
    if (j.size() != len)
        throw dimension_error(ctx + ": expected length " + std::to_string(len) + ", got " + std::to_string(j.size()));
    return j;
}
inline MatrixXd read_matrix(const json& j, int r, int c, const std::string& ctx) {
    MatrixXd M(r, c);
    arr(j, r, ctx);
    for (int i = 0; i < r; ++i) {
        auto ci = ctx + "[" + std::to_string(i) + "]";
        arr(j[i], c, ci);
        for (int k = 0; k < c; ++k) M(i, k) = num(j[i][k], ci + "[" + std::to_string(k) + "]");
    }
    return M;
}
inline Tensor3 read_tensor(const json& j, int a, int b, int c, const std::string& ctx) {
    Tensor3 T(a, b, c);
    arr(j, a, ctx);
    for (int i = 0; i < a; ++i) {
        MatrixXd M = read_matrix(j[i], b, c, ctx + "[" + std::to_string(i) + "]");
        for (int k = 0; k < b; ++k)
            for (int l = 0; l < c; ++l) T(i, k, l) = M(k, l);
    }
    return T;
}
inline json write_tensor(const Tensor3& T) {
    json j = json::array();
    for (int i = 0; i < T.d0; ++i) {
        json a = json::array();
        for (int k = 0; k < T.d1; ++k) {
            json row = json::array();
            for (int l = 0; l < T.d2; ++l) row.push_back(T(i, k, l));
            a.push_back(row);
        }
        j.push_back(a);
    }
    return j;
}
inline json write_matrix(const MatrixXd& M) {
    json j = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        j.push_back(row);
    }
    return j;
}
inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t off = std::min<std::size_t>(e.byte, text.size());
        long line = 1 + std::count(text.begin(), text.begin() + long(off), '\n');
        throw parse_error(path + ":" + std::to_string(line) + ": " + e.what());
    }
}
}  // namespace detail

inline CrossedModule algebra_from_json(const json& j, const std::string& ctx = "algebra") {
    if (!j.is_object()) throw parse_error(ctx + ": expected an object");
    for (auto k : {"n", "m", "c0", "act", "t"})
        if (!j.contains(k)) throw parse_error(ctx + ": missing field '" + std::string(k) + "'");
    if (!j["n"].is_number_integer() || !j["m"].is_number_integer())
        throw parse_error(ctx + ": 'n' and 'm' must be integers");
    int n = j["n"].get<int>(), m = j["m"].get<int>();
    if (n < 0 || m < 0) throw dimension_error(ctx + ": negative dimension");
    CrossedModule cm(j.value("name", std::string("custom")), n, m);
    cm.c0 = detail::read_tensor(j["c0"], n, n, n, ctx + ".c0");
    cm.act = detail::read_tensor(j["act"], m, n, m, ctx + ".act");
    cm.t = detail::read_matrix(j["t"], n, m, ctx + ".t");
    cm.refresh();
    return cm;
}

inline json algebra_to_json(const CrossedModule& cm) {
    return {{"name", cm.name},
            {"n", cm.n},
            {"m", cm.m},
            {"c0", detail::write_tensor(cm.c0)},
            {"act", detail::write_tensor(cm.act)},
            {"t", detail::write_matrix(cm.t)}};
}

inline CrossedModule load_algebra(const std::string& path) {
    return algebra_from_json(detail::read_json_file(path), path);
}

inline void save_algebra(const CrossedModule& cm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << algebra_to_json(cm).dump(2) << "\n";
}

// builtin name or file path
inline CrossedModule resolve_algebra(const std::string& s) { return is_builtin(s) ? builtin(s) : load_algebra(s); }

}  // namespace lie2
