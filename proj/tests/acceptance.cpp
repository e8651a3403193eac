// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [--expect-fail 2,5]   exit 0 iff the failing set equals the expected set.
#include "lie2/lie2.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace lie2;
namespace fs = std::filesystem;

namespace {

using clk = std::chrono::steady_clock;
double since(clk::time_point t0) { return std::chrono::duration<double>(clk::now() - t0).count(); }
double maxabs(const MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

struct Line {
    std::vector<std::string> notes;
    bool pass = true;
    void check(bool c, const std::string& what) {
        notes.push_back((c ? "ok   " : "FAIL ") + what);
        pass = pass && c;
    }
    void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

VectorXd start_point() {
    VectorXd p(6);
    p << 0.3, -0.2, 0.5, 0.1, 0.4, -0.3;
    return p;
}

// ---- 1
Line axiom_suite() {
    Line L;
    auto t0 = clk::now();
    for (auto& nm : builtin_names()) {
        auto r = validate_crossed_module(builtin(nm), 1e-12);
        L.check(r.ok(), nm + " worst " + fmt(r.worst()));
    }
    enum Slot { C0, ACT, T };
    struct Fixture {
        const char* alg;
        Slot slot;
        int a, b, c;
        const char* axiom;
    };
    const Fixture fx[] = {
        {"id_su2", C0, 2, 0, 1, "antisymmetry"}, {"id_sl2", C0, 2, 0, 1, "jacobi"},       {"id_su2", C0, 0, 1, 2, "action"},
        {"id_su2", ACT, 2, 0, 1, "action"},      {"id_sl2", ACT, 0, 2, 0, "peiffer"},     {"id_su2", ACT, 1, 2, 0, "derivation"},
        {"id_sl2", ACT, 1, 0, 2, "jacobi_minus1"}, {"id_su2", T, 0, 0, 0, "equivariance"}, {"id_sl2", T, 1, 1, 0, "t_homomorphism"},
        {"id_su2", T, 2, 1, 0, "koszul"},
    };
    for (auto& f : fx) {
        auto cm = builtin(f.alg);
        std::string where;
        if (f.slot == C0) cm.c0(f.a, f.b, f.c) += 1e-3, where = "c0";
        if (f.slot == ACT) cm.act(f.a, f.b, f.c) += 1e-3, where = "act";
        if (f.slot == T) cm.t(f.a, f.b) += 1e-3, where = "t";
        cm.refresh();
        auto r = validate_crossed_module(cm, 1e-9);
        L.check(!r.passed(f.axiom), std::string(f.alg) + " " + where + " entry fails " + f.axiom + " (" + fmt(r.residual(f.axiom)) + ")");
    }
    double s = since(t0);
    L.check(s < 1.0, "runtime " + fmt(s) + " s");
    return L;
}

// ---- 2
Line bialgebra_suite() {
    Line L;
    auto t0 = clk::now();
    auto cm = id_su2();
    auto R = canonical_rmatrix(cm);
    Split s = decompose(R);
    double dt = check_Dt_minus(cm, s.skew);
    L.check(dt == 0.0, "D_t- residual " + fmt(dt));
    auto P = pairing_from_sym(cm, s.sym, 1e300);
    L.check(P.invariance < 1e-12, "pairing invariance " + fmt(P.invariance));
    Cobracket dl = coboundary_delta(cm, s.skew);
    auto c1 = validate_cocycle(cm, dl), c2 = validate_cobracket(cm, dl);
    L.check(c1.ok(), "cocycle worst " + fmt(c1.worst()));
    L.check(c2.ok(), "cobracket worst " + fmt(c2.worst()));
    // vector form: {b,b'} = b x b', {b,a'} + {a,b'} = b x a' + a x b', i.e. dual c0 = eps and dual act = eps
    CrossedModule d = dual_structure_constants(cm, R);
    Tensor3 eps(3, 3, 3);
    for (int i = 0; i < 3; ++i) {
        eps(i, (i + 1) % 3, (i + 2) % 3) = 1;
        eps(i, (i + 2) % 3, (i + 1) % 3) = -1;
    }
    auto diff = [](const Tensor3& a, const Tensor3& b) {
        double r = 0;
        for (std::size_t k = 0; k < a.v.size(); ++k) r = std::max(r, std::abs(a.v[k] - b.v[k]));
        return r;
    };
    L.check(diff(d.c0, eps) == 0.0, "dual degree -1 bracket vs cross product, max diff " + fmt(diff(d.c0, eps)));
    L.check(diff(d.act, eps) == 0.0, "dual mixed bracket vs cross product, max diff " + fmt(diff(d.act, eps)));
    double t = since(t0);
    L.check(t < 1.0, "runtime " + fmt(t) + " s");
    return L;
}

// ---- 3
Line lax_suite() {
    Line L;
    auto t0 = clk::now();
    auto pair = build_2lax(id_sl2(), dj_lift());
    auto pts = sample_points(6, 100, 42);
    auto sw = lax_sweep(pair, pts);
    L.check(sw.consistent && sw.selected == LaxSign::LP, "sign " + to_string(sw.selected) + ", other sign residual " + fmt(sw.residual_PL));
    L.check(sw.residual() < 1e-10, "2-Lax residual over 100 points " + fmt(sw.residual()));
    L.check(pair.invariance < 1e-10, "H invariance " + fmt(pair.invariance));
    auto lc = check_L_conditions(pair, pts);
    L.check(lc.t_compat == 0.0, "L condition (a) " + fmt(lc.t_compat));
    L.check(lc.ll_effective < 1e-10, "L condition (b) " + fmt(lc.ll_effective));
    L.info("literal R-wedge {L,L} residual " + fmt(lc.ll_literal));
    auto ind = induced_1lax(pair, pts);
    L.check(ind.residual < 1e-10, "induced 1-Lax residual " + fmt(ind.residual));
    auto one = build_1lax(id_sl2().c0, dj_r());
    auto lifted = lift_1lax(one);
    auto back = induced_1lax(lifted, pts);
    L.check(back.L == one.L, "lift then project returns L");
    double lr = 0;
    for (auto& x : pts) lr = std::max(lr, lax_residual(lifted, x));
    L.check(lr < 1e-10, "lifted 2-Lax residual " + fmt(lr));
    double t = since(t0);
    L.check(t < 5.0, "runtime " + fmt(t) + " s");
    return L;
}

// ---- 4
Line isospectral() {
    Line L;
    auto t0 = clk::now();
    auto cm = id_sl2();
    auto pair = build_2lax(cm, dj_lift());
    auto rep = adjoint_2rep(cm);
    auto p0 = GradedPoint::split(start_point(), 3);
    auto traj = flow(pair.ps, pair.H, p0, 1e-3, 10000);
    auto d = conservation_monitor(cm, rep, pair, traj, 4, 1e-3, 100);
    L.check(d.max_rel.maxCoeff() < 1e-8, "relative F1..F4 drift " + fmt(d.max_rel.maxCoeff()));
    L.check(d.max_eig < 1e-6, "eigenvalue multiset drift " + fmt(d.max_eig));
    auto ctrl = flow(pair.ps, Polynomial::var(6, 0), p0, 1e-3, 10000);
    auto c = conservation_monitor(cm, rep, pair, ctrl, 4, 1e-3, 100);
    L.check(c.max_rel[1] > 1e-3, "control H = b1, F2 drift " + fmt(c.max_rel[1]));
    double t = since(t0);
    L.check(t < 30.0, "runtime " + fmt(t) + " s");
    return L;
}

// ---- 5
Line lattice_conservation() {
    Line L;
    auto t0 = clk::now();
    for (auto mode : {LatticeMode::bulk2d, LatticeMode::latticeH}) {
        SimConfig c;
        c.mode = mode;
        c.steps = 10000;
        c.cadence = 10000;
        auto r = run(c);
        auto& a = r.observables.front();
        auto& b = r.observables.back();
        double e0 = mode == LatticeMode::bulk2d ? a.e.h2d_grad : a.e.H2d_nn;
        double e1 = mode == LatticeMode::bulk2d ? b.e.h2d_grad : b.e.H2d_nn;
        std::string nm = to_string(mode);
        double nd = std::max(std::abs(b.max_norm - 1), std::abs(b.min_norm - 1));
        L.check(nd < 1e-5, nm + " norm drift " + fmt(nd));
        L.check(std::abs(e1 - e0) / std::abs(e0) < 1e-5, nm + " energy drift " + fmt(std::abs(e1 - e0) / std::abs(e0)));
        double md = (b.mag - a.mag).cwiseAbs().maxCoeff();
        if (mode == LatticeMode::bulk2d) L.check(md < 1e-5, nm + " magnetization drift " + fmt(md));
        else L.info(nm + " magnetization drift " + fmt(md));
    }
    double t = since(t0);
    L.check(t < 60.0, "runtime " + fmt(t) + " s");
    return L;
}

// ---- 6
Line bulk_boundary() {
    Line L;
    SimConfig c;
    c.init = InitMode::v_uniform;
    auto s = init_state(c);
    LatticeState2D b(s.Lu, s.Lv);
    for (int p = 0; p < s.Lu; ++p) b.set_kappa(p, s.sigma(p, 0));
    double hid = std::abs(hamiltonians(s).H2d_nn - (s.Lv * hamiltonians(b).H1d_nn + 0.5 * s.Lu * s.Lv));
    L.check(hid < 1e-12, "H2d lift identity " + fmt(hid));
    auto cpl = s;
    integrate(s, LatticeMode::bulk2d, 1e-3, 1000);
    integrate(b, LatticeMode::boundary1d, 1e-3, 1000);
    integrate(cpl, LatticeMode::coupled, 1e-3, 1000);
    double d = 0, dc = 0;
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) {
            d = std::max(d, (s.sigma(n, m) - b.kappa(n)).cwiseAbs().maxCoeff());
            dc = std::max(dc, (cpl.sigma(n, m) - b.kappa(n)).cwiseAbs().maxCoeff());
        }
    L.check(d < 1e-8, "bulk2d columns vs boundary1d over t in [0,1] " + fmt(d));
    L.info("coupled columns vs boundary1d " + fmt(dc));
    return L;
}

// ---- 7
Line convergence() {
    Line L;
    auto pair = build_2lax(id_sl2(), dj_lift());
    auto end = [&](double dt) { return flow(pair.ps, pair.H, GradedPoint::split(start_point(), 3), dt, long(std::lround(2.0 / dt))).back().stacked(); };
    VectorXd a = end(0.04), b = end(0.02), c = end(0.01);
    double ratio = maxabs(a - b) / maxabs(b - c);
    L.check(ratio >= 14 && ratio <= 18, "RK4 error ratio " + fmt(ratio));

    SpinwaveParams w{0.3, 0.2, 1, 1, 1, 0};
    auto err = [&](int n_sites) {
        SimConfig cfg;
        cfg.mode = LatticeMode::latticeH;
        cfg.init = InitMode::spinwave;
        cfg.Lu = cfg.Lv = n_sites;
        cfg.ell = 16.0 / n_sites;
        cfg.wave = w;
        auto s = init_state(cfg);
        VectorXd lat = rhs_latticeH(s) * (-4.0 / (cfg.ell * cfg.ell));
        VectorXd blk = rhs_bulk2d(s);
        double e = 0, same = maxabs(lat - blk);
        for (int n = 0; n < n_sites; ++n)
            for (int m = 0; m < n_sites; ++m)
                e = std::max(e, (Vector3d(lat.segment<3>(s.sidx(n, m))) - spinwave_continuum_rhs(w, n_sites, n_sites, cfg.ell, n, m)).cwiseAbs().maxCoeff());
        return std::pair{e, same};
    };
    auto [e1, s1] = err(16);
    auto [e2, s2] = err(32);
    L.check(e1 / e2 >= 3.5 && e1 / e2 <= 4.5, "spatial ratio " + fmt(e1 / e2));
    L.info("rescaled latticeH vs bulk2d rhs " + fmt(std::max(s1, s2)));
    return L;
}

// ---- 8
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Line determinism() {
    Line L;
    auto base = fs::temp_directory_path() / "lie2_acceptance_det";
    fs::remove_all(base);
    SimConfig c;
    c.mode = LatticeMode::coupled;
    c.steps = 500;
    c.cadence = 50;
    c.seed = 11;
    c.output = (base / "a").string();
    run(c);
    c.output = (base / "b").string();
    run(c);
    for (auto f : {"observables.csv", "tbar.csv", "state_final.csv"}) {
        auto x = slurp(base / "a" / f), y = slurp(base / "b" / f);
        L.check(!x.empty() && x == y, std::string(f) + " bit-identical");
    }
    fs::remove_all(base);
    return L;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expected;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--expect-fail" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string tok; std::getline(ss, tok, ',');) expected.insert(std::stoi(tok));
        } else {
            std::cerr << "usage: acceptance [--expect-fail N[,M...]]\n";
            return 2;
        }
    }
    using Fn = Line (*)();
    const std::pair<const char*, Fn> criteria[] = {
        {"crossed-module axiom suite", axiom_suite},  {"2-bialgebra suite on id_su2", bialgebra_suite},
        {"2-Lax suite on id_sl2", lax_suite},          {"isospectral flow", isospectral},
        {"lattice conservation", lattice_conservation}, {"bulk-boundary reduction", bulk_boundary},
        {"convergence orders", convergence},            {"determinism", determinism},
    };
    std::set<int> failed;
    int k = 0;
    for (auto& [name, fn] : criteria) {
        ++k;
        Line L;
        try {
            L = fn();
        } catch (const std::exception& e) {
            L.check(false, std::string("exception: ") + e.what());
        }
        std::cout << (L.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << name << "\n";
        for (auto& n : L.notes) std::cout << "    " << n << "\n";
        if (!L.pass) failed.insert(k);
    }
    std::cout << "failing:";
    for (int f : failed) std::cout << " " << f;
    std::cout << "  expected:";
    for (int f : expected) std::cout << " " << f;
    std::cout << "\n";
    return failed == expected ? 0 : 1;
}
