// lie2: validators, Lax checks, flows and the spin-rectangle simulator from the command line
#include "lie2/lie2.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

using namespace lie2;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, failure = 1, parse_failure = 2, diverged = 3 };

struct Globals {
    double tol = 1e-9;        // validators
    double rtol = 1e-8;       // residuals
    double drift_tol = 1e-5;  // drift acceptances
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = ".";
};

struct Manifest {
    std::string command;
    json config = json::object();
    std::vector<std::string> inputs, outputs;
    int exit_code = 0;
    std::string error;
};

std::string hex_hash(const std::string& s) {
    std::ostringstream o;
    o << std::hex << std::hash<std::string>{}(s);
    return o.str();
}

void write_manifest(const Globals& g, Manifest& m, double wall) {
    json j;
    j["command"] = m.command;
    j["config"] = m.config;
    j["config_hash"] = hex_hash(m.config.dump());
    j["seed"] = g.seed;
    j["threads"] = g.threads;
    j["versions"] = {{"lie2", "1.0.0"},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                           "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["wall_time_s"] = wall;
    j["exit_code"] = m.exit_code;
    if (!m.error.empty()) j["error"] = m.error;
    fs::create_directories(g.out);
    std::ofstream f(fs::path(g.out) / "manifest.json");
    f << j.dump(2) << "\n";
}

std::string write_report(const Globals& g, Manifest& m, const std::string& name, const json& rep) {
    fs::create_directories(g.out);
    auto p = (fs::path(g.out) / name).string();
    std::ofstream f(p);
    f << rep.dump(2) << "\n";
    m.outputs.push_back(p);
    std::cout << rep.dump(2) << "\n";
    return p;
}

TwoRMatrix resolve_rmatrix(const std::string& choice, const CrossedModule& cm, Manifest& m) {
    if (choice.empty() || choice == "default") return default_rmatrix(cm);
    if (choice == "canonical") return canonical_rmatrix(cm);
    if (choice == "dj") {
        if (cm.n != 3 || cm.m != 3) throw dimension_error("dj r-matrix needs n = m = 3");
        return dj_lift();
    }
    if (choice == "zero") return TwoRMatrix::zero(cm.n, cm.m);
    m.inputs.push_back(choice);
    return load_rmatrix(choice, cm);
}

CrossedModule resolve(const std::string& a, Manifest& m) {
    if (!is_builtin(a)) {
        if (!fs::exists(a)) throw parse_error("no built-in or file named '" + a + "' (built-ins: id_su2, id_sl2, skeletal_u1)");
        m.inputs.push_back(a);
    }
    return resolve_algebra(a);
}

// quadratic | b<k> | a<k> | constant | path to a polynomial JSON file
std::optional<Polynomial> resolve_hamiltonian(const std::string& h, int n, int m, Manifest& man) {
    const int N = n + m;
    if (h.empty() || h == "quadratic") return std::nullopt;
    if (h == "constant") return Polynomial::constant(N, 1.0);
    if (h.size() >= 2 && (h[0] == 'b' || h[0] == 'a') && std::all_of(h.begin() + 1, h.end(), ::isdigit)) {
        int k = std::stoi(h.substr(1)) - 1, off = h[0] == 'b' ? 0 : n, lim = h[0] == 'b' ? n : m;
        if (k < 0 || k >= lim) throw std::invalid_argument("coordinate " + h + " out of range");
        return Polynomial::var(N, off + k);
    }
    man.inputs.push_back(h);
    return Polynomial::from_json(detail::read_json_file(h), N, h);
}

std::vector<double> parse_point(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad coordinate '" + tok + "' in --p0");
        }
    }
    return v;
}

// ---- subcommands

int cmd_verify(const Globals& g, Manifest& m, const std::string& alg) {
    CrossedModule cm = resolve(alg, m);
    AxiomReport r = validate_crossed_module(cm, g.tol);
    json rep = {{"algebra", cm.name}, {"n", cm.n}, {"m", cm.m}, {"report", r.to_json()}, {"failed", r.failed()}};
    write_report(g, m, "verify.json", rep);
    return r.ok() ? ok : failure;
}

int cmd_cybe(const Globals& g, Manifest& m, const std::string& alg, const std::string& rspec) {
    CrossedModule cm = resolve(alg, m);
    TwoRMatrix R = resolve_rmatrix(rspec, cm, m);
    check_shape(cm, R, "cybe");
    Split s = decompose(R);
    json rep = {{"algebra", cm.name}};
    bool pass = true;
    double dt = check_Dt_minus(cm, s.skew);
    rep["Dt_minus"] = {{"residual", dt}, {"pass", dt < g.tol}};
    pass = pass && dt < g.tol;
    try {
        PairingForm P = pairing_from_sym(cm, s.sym, 1e300);
        rep["pairing"] = {{"invariance", P.invariance}, {"t_symmetry", P.t_symmetry}, {"pass", P.invariance < g.tol}};
        pass = pass && P.invariance < g.tol;
        PhiMap f = phi_map(cm, s.skew, P, g.tol, false);
        rep["phi"] = {{"t_equivariance", f.hom_residual}};
        CrossedModule d = dual_structure_constants(cm, R);
        rep["dual"] = {{"c0", detail::write_tensor(d.c0)}, {"act", detail::write_tensor(d.act)}, {"axioms", validate_crossed_module(d, g.tol).to_json()}};
    } catch (const degeneracy_error& e) {
        rep["pairing"] = {{"error", e.what()}, {"pass", false}};
        pass = false;
    }
    Cobracket dl = coboundary_delta(cm, s.skew);
    AxiomReport c1 = validate_cocycle(cm, dl, g.tol), c2 = validate_cobracket(cm, dl, g.tol);
    rep["cocycle"] = c1.to_json();
    rep["cobracket"] = c2.to_json();
    pass = pass && c1.ok() && c2.ok();
    rep["pass"] = pass;
    write_report(g, m, "cybe.json", rep);
    return pass ? ok : failure;
}

int cmd_lax(const Globals& g, Manifest& m, const std::string& alg, const std::string& rspec, const std::string& ham, int points, int kmax) {
    if (points < 1) throw std::invalid_argument("--points must be >= 1");
    if (kmax < 1) throw std::invalid_argument("--kmax must be >= 1");
    CrossedModule cm = resolve(alg, m);
    TwoRMatrix R = resolve_rmatrix(rspec, cm, m);
    auto H = resolve_hamiltonian(ham, cm.n, cm.m, m);
    json rep = {{"algebra", cm.name}, {"hamiltonian", ham.empty() ? "quadratic" : ham}, {"points", points}};
    TwoLaxPair pair;
    try {
        pair = build_2lax(cm, R, H, g.tol, false, g.seed);
    } catch (const std::exception& e) {
        rep["error"] = e.what();
        rep["pass"] = false;
        write_report(g, m, "lax.json", rep);
        return failure;
    }
    auto pts = sample_points(pair.dim(), points, g.seed);
    LaxSweep sw = lax_sweep(pair, pts);
    LConditions lc = check_L_conditions(pair, pts);
    InducedLax ind = induced_1lax(pair, pts, sw.selected);
    rep["invariance"] = pair.invariance;
    rep["Dt_minus"] = pair.dt_minus;
    rep["lax"] = {{"sign", to_string(sw.selected)}, {"sign_consistent", sw.consistent}, {"residual", sw.residual()},
                  {"residual_[P,L]", sw.residual_PL}, {"residual_[L,P]", sw.residual_LP}};
    rep["L_conditions"] = lc.to_json();
    rep["induced_1lax"] = ind.to_json();
    TwoRepresentation ad = adjoint_2rep(cm);
    json tbl = json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(pts.size(), 5); ++k) {
        VectorXd F = trace_polys(cm, ad, pair.L(pts[k]), kmax);
        tbl.push_back({{"point", std::vector<double>(pts[k].data(), pts[k].data() + pts[k].size())},
                       {"F", std::vector<double>(F.data(), F.data() + F.size())}});
    }
    rep["F_table"] = tbl;
    bool pass = pair.invariance < g.rtol && sw.residual() < g.rtol && sw.consistent && lc.t_compat < g.rtol && lc.ll_effective < g.rtol &&
                ind.residual < g.rtol && ind.L0_tP < g.rtol && ind.tH0_bracket < g.rtol;
    rep["pass"] = pass;
    write_report(g, m, "lax.json", rep);
    return pass ? ok : failure;
}

int cmd_flow(const Globals& g, Manifest& m, const std::string& alg, const std::string& rspec, const std::string& mode_s,
             const std::string& ham, const std::string& p0s, double dt, long steps, int kmax, long stride) {
    Mode mode = parse_mode(mode_s);
    if (!(dt > 0)) throw std::invalid_argument("--dt must be positive");
    if (steps < 0) throw std::invalid_argument("--steps must be >= 0");
    CrossedModule cm = resolve(alg, m);
    TwoRMatrix R = resolve_rmatrix(rspec, cm, m);
    auto H = resolve_hamiltonian(ham, cm.n, cm.m, m);
    TwoLaxPair pair = build_2lax(cm, R, H, g.tol, true, g.seed);
    PoissonStructure ps = mode == Mode::rmatrix ? pair.ps : make_structure(cm, Mode::plain);
    std::vector<double> pv = p0s.empty() ? std::vector<double>() : parse_point(p0s);
    VectorXd x0;
    if (pv.empty()) x0 = sample_points(pair.dim(), 1, g.seed)[0] * 0.5;
    else if (int(pv.size()) != pair.dim()) throw dimension_error("--p0 needs " + std::to_string(pair.dim()) + " coordinates");
    else x0 = Eigen::Map<VectorXd>(pv.data(), long(pv.size()));
    json rep = {{"algebra", cm.name}, {"mode", mode_s}, {"dt", dt}, {"steps", steps},
                {"p0", std::vector<double>(x0.data(), x0.data() + x0.size())}};
    auto traj = flow(ps, pair.H, GradedPoint::split(x0, cm.n), dt, steps);
    fs::create_directories(g.out);
    auto tp = (fs::path(g.out) / "trajectory.csv").string();
    {
        std::ofstream f(tp);
        f << std::setprecision(17) << "step,t";
        for (int A = 0; A < pair.dim(); ++A) f << "," << coordinate_name(cm.n, A);
        f << ",H\n";
        for (std::size_t s = 0; s < traj.size(); s += std::size_t(std::max(1L, stride))) {
            VectorXd x = traj[s].stacked();
            f << s << "," << double(s) * dt;
            for (int A = 0; A < x.size(); ++A) f << "," << x[A];
            f << "," << pair.H(x) << "\n";
        }
    }
    m.outputs.push_back(tp);
    double H0 = pair.H(traj.front().stacked()), H1 = pair.H(traj.back().stacked());
    rep["H_rel_drift"] = std::abs(H1 - H0) / std::max(1.0, std::abs(H0));
    if (!pair.degenerate) {
        DriftTable d = conservation_monitor(cm, adjoint_2rep(cm), pair, traj, kmax, dt, int(stride));
        auto dp = (fs::path(g.out) / "drift.csv").string();
        d.write_csv(dp);
        m.outputs.push_back(dp);
        rep["drift"] = d.to_json();
    }
    write_report(g, m, "flow.json", rep);
    return ok;
}

int cmd_simulate(const Globals& g, Manifest& m, const std::string& cfg_path, long steps_override) {
    json j;
    try {
        j = detail::read_json_file(cfg_path);
    } catch (const parse_error& e) {
        throw config_error(e.what());
    }
    m.inputs.push_back(cfg_path);
    SimConfig cfg = SimConfig::from_json(j);
    if (steps_override >= 0) cfg.steps = steps_override;
    if (!j.contains("seed")) cfg.seed = g.seed;
    cfg.output = g.out;
    m.config = cfg.to_json();
    RunResult r = run(cfg);
    for (auto& f : r.files) m.outputs.push_back(f);
    auto& a = r.observables.front();
    auto& b = r.observables.back();
    json rep = {{"mode", to_string(cfg.mode)}, {"steps", cfg.steps}, {"t_final", r.final_state.time},
                {"initial", {{"h2d_grad", a.e.h2d_grad}, {"H2d_nn", a.e.H2d_nn}, {"h1d_grad", a.e.h1d_grad}}},
                {"final", {{"h2d_grad", b.e.h2d_grad}, {"H2d_nn", b.e.H2d_nn}, {"h1d_grad", b.e.h1d_grad}}},
                {"norm_range", {b.min_norm, b.max_norm}}, {"kappa_defect", b.kappa_defect}};
    fs::create_directories(g.out);
    std::ofstream(fs::path(g.out) / "simulate.json") << rep.dump(2) << "\n";
    m.outputs.push_back((fs::path(g.out) / "simulate.json").string());
    std::cout << rep.dump(2) << "\n";
    return ok;
}

// t-bar projection of a snapshot, and boundary monodromies
int cmd_project(const Globals& g, Manifest& m, const std::string& snap) {
    m.inputs.push_back(snap);
    LatticeState2D s = read_snapshot(snap);
    auto kb = tbar_project(s);
    auto pp = (fs::path(g.out) / "projection.csv").string();
    fs::create_directories(g.out);
    {
        std::ofstream f(pp);
        f << std::setprecision(17) << "p,kbar_1,kbar_2,kbar_3,kappa_1,kappa_2,kappa_3\n";
        for (int p = 0; p < s.Lu; ++p) {
            Vector3d k = s.kappa(p);
            f << p << "," << kb[std::size_t(p)][0] << "," << kb[std::size_t(p)][1] << "," << kb[std::size_t(p)][2] << "," << k[0] << ","
              << k[1] << "," << k[2] << "\n";
        }
    }
    m.outputs.push_back(pp);
    std::vector<Vector3d> avg;
    for (auto& v : kb) avg.push_back(v / (s.Lv * s.ell));
    auto cplx = [](std::complex<double> z) { return std::vector<double>{z.real(), z.imag()}; };
    Monodromy mk = monodromy_1d(kappa_field(s), s.ell), mb = monodromy_1d(avg, s.ell);
    json rep = {{"Lu", s.Lu}, {"Lv", s.Lv}, {"ell", s.ell}, {"time", s.time}, {"kappa_defect", kappa_defect(s)},
                {"monodromy_kappa", {{"trace", cplx(mk.trace)}, {"minus_log_trace", cplx(mk.minus_log_trace)}, {"minus_det_log", cplx(mk.minus_det_log)}}},
                {"monodromy_tbar", {{"trace", cplx(mb.trace)}, {"minus_log_trace", cplx(mb.minus_log_trace)}, {"minus_det_log", cplx(mb.minus_det_log)}}},
                {"first_order_cells", true}};
    write_report(g, m, "project.json", rep);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strict Lie 2-algebras, 2-Lax pairs and the XXX spin rectangle"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--tol", g.tol, "validator tolerance")->capture_default_str();
    app.add_option("--residual-tol", g.rtol, "residual tolerance")->capture_default_str();
    app.add_option("--drift-tol", g.drift_tol, "drift tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (computation is single-threaded)")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--output-dir", g.out, "directory for reports and manifest")->capture_default_str();

    std::string alg, rspec, ham, mode = "rmatrix", p0, cfg, snap;
    int points = 100, kmax = 4;
    double dt = 1e-3;
    long steps = 1000, stride = 1, steps_override = -1;

    auto* verify = app.add_subcommand("verify", "check crossed-module axioms");
    verify->add_option("algebra", alg, "built-in name or JSON file")->required();

    auto* cybe = app.add_subcommand("cybe", "2-bialgebra checks for an r-matrix");
    cybe->add_option("algebra", alg)->required();
    cybe->add_option("--rmatrix", rspec, "default | canonical | dj | zero | JSON file");

    auto* lax = app.add_subcommand("lax", "2-Lax residuals, L-conditions, induced 1-Lax, trace table");
    lax->add_option("algebra", alg)->required();
    lax->add_option("--rmatrix", rspec);
    lax->add_option("--hamiltonian", ham, "quadratic | b<k> | a<k> | constant | JSON file");
    lax->add_option("--points", points)->capture_default_str();
    lax->add_option("--kmax", kmax)->capture_default_str();

    auto* flw = app.add_subcommand("flow", "RK4 Hamiltonian flow on g*[1] with drift monitoring");
    flw->add_option("algebra", alg)->required();
    flw->add_option("--rmatrix", rspec);
    flw->add_option("--mode", mode, "plain | rmatrix")->capture_default_str();
    flw->add_option("--hamiltonian", ham);
    flw->add_option("--p0", p0, "comma separated g then f coordinates");
    flw->add_option("--dt", dt)->capture_default_str();
    flw->add_option("--steps", steps)->capture_default_str();
    flw->add_option("--kmax", kmax)->capture_default_str();
    flw->add_option("--stride", stride, "write every stride-th step")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "spin-rectangle lattice run from a JSON config");
    sim->add_option("config", cfg)->required();
    sim->add_option("--steps", steps_override, "override the config's step count");

    auto* proj = app.add_subcommand("project", "t-bar projection and monodromy of a snapshot");
    proj->add_option("snapshot", snap)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parse_failure;
    }

    Manifest man;
    man.command = app.get_subcommands().front()->get_name();
    for (int i = 1; i < argc; ++i) man.config["argv"].push_back(argv[i]);
    auto t0 = std::chrono::steady_clock::now();
    int code = ok;
    try {
        if (*verify) code = cmd_verify(g, man, alg);
        else if (*cybe) code = cmd_cybe(g, man, alg, rspec);
        else if (*lax) code = cmd_lax(g, man, alg, rspec, ham, points, kmax);
        else if (*flw) code = cmd_flow(g, man, alg, rspec, mode, ham, p0, dt, steps, kmax, stride);
        else if (*sim) code = cmd_simulate(g, man, cfg, steps_override);
        else if (*proj) code = cmd_project(g, man, snap);
    } catch (const divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        man.error = e.what();
        man.config["divergence_step"] = e.step;
        code = diverged;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        man.error = e.what();
        code = parse_failure;
    } catch (const dimension_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        man.error = e.what();
        code = parse_failure;
    } catch (const std::invalid_argument& e) {  // config_error included
        std::cerr << "error: " << e.what() << "\n";
        man.error = e.what();
        code = parse_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        man.error = e.what();
        code = failure;
    }
    man.exit_code = code;
    try {
        write_manifest(g, man, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    } catch (const std::exception& e) {
        std::cerr << "error: cannot write manifest: " << e.what() << "\n";
    }
    return code;
}
