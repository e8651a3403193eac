#pragma once
// spin rectangle: sigma on an Lu x Lv periodic lattice, kappa on the Lu boundary chain

#include "lie2/algebra.hpp"

#include <Eigen/Dense>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace lie2 {

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using Eigen::Vector3d;

enum class LatticeMode { coupled, bulk2d, boundary1d, latticeH };
enum class InitMode { random_unit, spinwave, v_uniform, file };
enum class KappaInit { tbar, random_unit, zero };

inline const std::vector<std::string>& lattice_mode_names() {
    static const std::vector<std::string> v{"coupled", "bulk2d", "boundary1d", "latticeH"};
    return v;
}
inline const std::vector<std::string>& init_mode_names() {
    static const std::vector<std::string> v{"random-unit", "spinwave", "v-uniform", "file"};
    return v;
}

namespace detail {
inline std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}
}  // namespace detail

inline LatticeMode parse_lattice_mode(const std::string& s) {
    auto& v = lattice_mode_names();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] == s) return LatticeMode(i);
    throw config_error("unknown mode '" + s + "'; valid modes: " + detail::joined(v));
}
inline InitMode parse_init_mode(const std::string& s) {
    auto& v = init_mode_names();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] == s) return InitMode(i);
    throw config_error("unknown init '" + s + "'; valid inits: " + detail::joined(v));
}
inline KappaInit parse_kappa_init(const std::string& s) {
    if (s == "tbar") return KappaInit::tbar;
    if (s == "random-unit") return KappaInit::random_unit;
    if (s == "zero") return KappaInit::zero;
    throw config_error("unknown kappa_init '" + s + "'; valid: tbar, random-unit, zero");
}
inline std::string to_string(LatticeMode m) { return lattice_mode_names()[std::size_t(m)]; }
inline std::string to_string(InitMode m) { return init_mode_names()[std::size_t(m)]; }

struct LatticeState2D {
    int Lu = 0, Lv = 0;
    double ell = 1.0;
    double time = 0.0;
    VectorXd y;  // sigma (n,m,a) row-major, then kappa (p,a)

    LatticeState2D() = default;
    LatticeState2D(int lu, int lv, double l = 1.0) : Lu(lu), Lv(lv), ell(l), y(VectorXd::Zero(3 * lu * lv + 3 * lu)) {}

    int sites() const { return Lu * Lv; }
    int kappa_offset() const { return 3 * Lu * Lv; }
    long sidx(int n, int m) const { return 3L * ((long(n % Lu + Lu) % Lu) * Lv + (m % Lv + Lv) % Lv); }
    long kidx(int p) const { return kappa_offset() + 3L * ((p % Lu + Lu) % Lu); }

    Vector3d sigma(int n, int m) const { return y.segment<3>(sidx(n, m)); }
    Vector3d kappa(int p) const { return y.segment<3>(kidx(p)); }
    void set_sigma(int n, int m, const Vector3d& s) { y.segment<3>(sidx(n, m)) = s; }
    void set_kappa(int p, const Vector3d& k) { y.segment<3>(kidx(p)) = k; }
};

struct SpinwaveParams {
    double theta0 = std::numbers::pi / 4, phi0 = 0;
    int ku_theta = 1, kv_theta = 0, ku_phi = 0, kv_phi = 1;
};

struct SimConfig {
    int Lu = 16, Lv = 16;
    double ell = 1.0;
    double dt = 1e-3;
    long steps = 1000;
    LatticeMode mode = LatticeMode::bulk2d;
    InitMode init = InitMode::random_unit;
    KappaInit kappa_init = KappaInit::tbar;
    std::uint64_t seed = 1;
    bool renormalize = false;
    double prefactor = 2.0;  // the LLE coefficient; 1 after the rescaling 2 sigma -> sigma
    SpinwaveParams wave;
    std::string init_file;
    std::string output;  // directory; empty means no files
    long cadence = 100;

    void validate() const {
        if (Lu < 2 || Lv < 2) throw config_error("Lu and Lv must be >= 2");
        if (!(dt > 0)) throw config_error("dt must be positive");
        if (steps < 0) throw config_error("steps must be >= 0");
        if (!(ell > 0)) throw config_error("ell must be positive");
        if (cadence < 1) throw config_error("cadence must be >= 1");
        if (init == InitMode::file && init_file.empty()) throw config_error("init 'file' needs init_file");
    }

    static SimConfig from_json(const json& j) {
        SimConfig c;
        if (!j.is_object()) throw config_error("simulation config must be a JSON object");
        static const std::vector<std::string> known{"Lu", "Lv", "ell", "dt", "steps", "mode", "init", "kappa_init", "seed",
                                                    "renormalize", "prefactor", "wave", "init_file", "output", "cadence"};
        for (auto& [k, v] : j.items())
            if (std::find(known.begin(), known.end(), k) == known.end()) throw config_error("unknown config field '" + k + "'");
        auto integer = [&](const json& v, const std::string& k) -> long {
            if (!v.is_number_integer()) throw config_error("'" + k + "' must be an integer");
            return v.get<long>();
        };
        auto real = [&](const json& v, const std::string& k) -> double {
            if (!v.is_number()) throw config_error("'" + k + "' must be a number");
            return v.get<double>();
        };
        auto str = [&](const json& v, const std::string& k) -> std::string {
            if (!v.is_string()) throw config_error("'" + k + "' must be a string");
            return v.get<std::string>();
        };
        if (j.contains("Lu")) c.Lu = int(integer(j["Lu"], "Lu"));
        if (j.contains("Lv")) c.Lv = int(integer(j["Lv"], "Lv"));
        if (j.contains("ell")) c.ell = real(j["ell"], "ell");
        if (j.contains("dt")) c.dt = real(j["dt"], "dt");
        if (j.contains("steps")) c.steps = integer(j["steps"], "steps");
        if (j.contains("mode")) c.mode = parse_lattice_mode(str(j["mode"], "mode"));
        if (j.contains("init")) c.init = parse_init_mode(str(j["init"], "init"));
        if (j.contains("kappa_init")) c.kappa_init = parse_kappa_init(str(j["kappa_init"], "kappa_init"));
        if (j.contains("seed")) c.seed = std::uint64_t(integer(j["seed"], "seed"));
        if (j.contains("renormalize")) {
            if (!j["renormalize"].is_boolean()) throw config_error("'renormalize' must be a boolean");
            c.renormalize = j["renormalize"].get<bool>();
        }
        if (j.contains("prefactor")) c.prefactor = real(j["prefactor"], "prefactor");
        if (j.contains("init_file")) c.init_file = str(j["init_file"], "init_file");
        if (j.contains("output")) c.output = str(j["output"], "output");
        if (j.contains("cadence")) c.cadence = integer(j["cadence"], "cadence");
        if (j.contains("wave")) {
            const json& w = j["wave"];
            if (!w.is_object()) throw config_error("'wave' must be an object");
            if (w.contains("theta0")) c.wave.theta0 = real(w["theta0"], "wave.theta0");
            if (w.contains("phi0")) c.wave.phi0 = real(w["phi0"], "wave.phi0");
            // integer wave numbers keep the waves periodic
            if (w.contains("ku_theta")) c.wave.ku_theta = int(integer(w["ku_theta"], "wave.ku_theta"));
            if (w.contains("kv_theta")) c.wave.kv_theta = int(integer(w["kv_theta"], "wave.kv_theta"));
            if (w.contains("ku_phi")) c.wave.ku_phi = int(integer(w["ku_phi"], "wave.ku_phi"));
            if (w.contains("kv_phi")) c.wave.kv_phi = int(integer(w["kv_phi"], "wave.kv_phi"));
        }
        c.validate();
        return c;
    }

    json to_json() const {
        return {{"Lu", Lu}, {"Lv", Lv}, {"ell", ell}, {"dt", dt}, {"steps", steps}, {"mode", to_string(mode)},
                {"init", to_string(init)},
                {"kappa_init", kappa_init == KappaInit::tbar ? "tbar" : kappa_init == KappaInit::zero ? "zero" : "random-unit"},
                {"seed", seed}, {"renormalize", renormalize}, {"prefactor", prefactor}, {"init_file", init_file},
                {"output", output}, {"cadence", cadence},
                {"wave", {{"theta0", wave.theta0}, {"phi0", wave.phi0}, {"ku_theta", wave.ku_theta}, {"kv_theta", wave.kv_theta},
                          {"ku_phi", wave.ku_phi}, {"kv_phi", wave.kv_phi}}}};
    }
};

// ---- t-bar and initial data

inline std::vector<Vector3d> tbar_project(const LatticeState2D& s) {
    std::vector<Vector3d> out(std::size_t(s.Lu), Vector3d::Zero());
    for (int n = 0; n < s.Lu; ++n) {
        for (int m = 0; m < s.Lv; ++m) out[std::size_t(n)] += s.sigma(n, m);
        out[std::size_t(n)] *= s.ell;
    }
    return out;
}

inline Vector3d random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector3d v;
    do v = Vector3d(g(rng), g(rng), g(rng));
    while (v.norm() < 1e-12);
    return v.normalized();
}

struct SpinAngles {
    double theta, phi;
};

inline SpinAngles spinwave_angles(const SpinwaveParams& w, int Lu, int Lv, int n, int m) {
    const double tp = 2 * std::numbers::pi;
    return {w.theta0 + tp * (double(w.ku_theta) * n / Lu + double(w.kv_theta) * m / Lv),
            w.phi0 + tp * (double(w.ku_phi) * n / Lu + double(w.kv_phi) * m / Lv)};
}

// sigma3 = cos 2theta, sigma1 = 1/2 sin 2theta cos phi, sigma2 = 1/2 sin 2theta sin phi
inline Vector3d spinor_sigma(double theta, double phi) {
    return {0.5 * std::sin(2 * theta) * std::cos(phi), 0.5 * std::sin(2 * theta) * std::sin(phi), std::cos(2 * theta)};
}

LatticeState2D read_snapshot(const std::string& path);

inline LatticeState2D init_state(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.init == InitMode::file) {
        LatticeState2D s = read_snapshot(cfg.init_file);
        if (s.Lu != cfg.Lu || s.Lv != cfg.Lv) throw config_error("snapshot dimensions do not match Lu, Lv");
        return s;
    }
    LatticeState2D s(cfg.Lu, cfg.Lv, cfg.ell);
    std::mt19937_64 rng(cfg.seed);
    switch (cfg.init) {
        case InitMode::random_unit:
            for (int n = 0; n < s.Lu; ++n)
                for (int m = 0; m < s.Lv; ++m) s.set_sigma(n, m, random_unit(rng));
            break;
        case InitMode::spinwave:
            for (int n = 0; n < s.Lu; ++n)
                for (int m = 0; m < s.Lv; ++m) {
                    auto a = spinwave_angles(cfg.wave, s.Lu, s.Lv, n, m);
                    s.set_sigma(n, m, spinor_sigma(a.theta, a.phi));
                }
            break;
        case InitMode::v_uniform:
            for (int n = 0; n < s.Lu; ++n) {
                Vector3d c = random_unit(rng);
                for (int m = 0; m < s.Lv; ++m) s.set_sigma(n, m, c);
            }
            break;
        case InitMode::file: break;
    }
    switch (cfg.kappa_init) {
        case KappaInit::tbar: {
            auto kb = tbar_project(s);
            for (int p = 0; p < s.Lu; ++p) s.set_kappa(p, kb[std::size_t(p)] / (s.Lv * s.ell));
            break;
        }
        case KappaInit::random_unit:
            for (int p = 0; p < s.Lu; ++p) s.set_kappa(p, random_unit(rng));
            break;
        case KappaInit::zero: break;
    }
    return s;
}

// ---- right-hand sides; each returns the full derivative vector

inline Vector3d laplacian2d(const LatticeState2D& s, int n, int m) {
    return (s.sigma(n + 1, m) + s.sigma(n - 1, m) + s.sigma(n, m + 1) + s.sigma(n, m - 1) - 4.0 * s.sigma(n, m)) / (s.ell * s.ell);
}

inline Vector3d second_diff1d(const LatticeState2D& s, int p) {
    return (s.kappa(p + 1) - 2.0 * s.kappa(p) + s.kappa(p - 1)) / (s.ell * s.ell);
}

// sigma' = -c lap(sigma) x sigma
inline VectorXd rhs_bulk2d(const LatticeState2D& s, double c = 2.0) {
    VectorXd d = VectorXd::Zero(s.y.size());
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) d.segment<3>(s.sidx(n, m)) = -c * laplacian2d(s, n, m).cross(s.sigma(n, m));
    return d;
}

// kappa' = -c kappa'' x kappa
inline VectorXd rhs_boundary1d(const LatticeState2D& s, double c = 2.0) {
    VectorXd d = VectorXd::Zero(s.y.size());
    for (int p = 0; p < s.Lu; ++p) d.segment<3>(s.kidx(p)) = -c * second_diff1d(s, p).cross(s.kappa(p));
    return d;
}

// sigma' = -c kappa''(n) x sigma ; kappa' = -c l sum_m lap(sigma) x sigma - c kappa'' x kappa
inline VectorXd rhs_coupled(const LatticeState2D& s, double c = 2.0) {
    VectorXd d = VectorXd::Zero(s.y.size());
    for (int n = 0; n < s.Lu; ++n) {
        Vector3d k2 = second_diff1d(s, n);
        Vector3d bulk = Vector3d::Zero();
        for (int m = 0; m < s.Lv; ++m) {
            d.segment<3>(s.sidx(n, m)) = -c * k2.cross(s.sigma(n, m));
            bulk += laplacian2d(s, n, m).cross(s.sigma(n, m));
        }
        d.segment<3>(s.kidx(n)) = -c * s.ell * bulk - c * k2.cross(s.kappa(n));
    }
    return d;
}

// Hamiltonian flow of H2d under {s_a, s_b} = eps_abc s_c at each site: sigma' = 1/2 N x sigma.
// Since N x sigma = l^2 lap(sigma) x sigma, rescaling time by -4/l^2 gives the bulk2d right-hand side.
inline VectorXd rhs_latticeH(const LatticeState2D& s) {
    VectorXd d = VectorXd::Zero(s.y.size());
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) {
            Vector3d N = s.sigma(n + 1, m) + s.sigma(n - 1, m) + s.sigma(n, m + 1) + s.sigma(n, m - 1);
            d.segment<3>(s.sidx(n, m)) = 0.5 * N.cross(s.sigma(n, m));
        }
    return d;
}

inline VectorXd lattice_rhs(const LatticeState2D& s, LatticeMode mode, double c = 2.0) {
    switch (mode) {
        case LatticeMode::coupled: return rhs_coupled(s, c);
        case LatticeMode::bulk2d: return rhs_bulk2d(s, c);
        case LatticeMode::boundary1d: return rhs_boundary1d(s, c);
        case LatticeMode::latticeH: return rhs_latticeH(s);
    }
    return {};
}

// ---- energies

struct Energies {
    double h2d_grad = 0, h1d_grad = 0, H2d_nn = 0, H1d_nn = 0;
};

inline Energies hamiltonians(const LatticeState2D& s) {
    Energies e;
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) {
            Vector3d a = s.sigma(n, m), r = s.sigma(n + 1, m), u = s.sigma(n, m + 1);
            e.h2d_grad += (r - a).squaredNorm() + (u - a).squaredNorm();
            e.H2d_nn += 0.5 * (a.dot(r) + a.dot(u));
        }
    for (int p = 0; p < s.Lu; ++p) {
        e.h1d_grad += (s.kappa(p + 1) - s.kappa(p)).squaredNorm() / s.ell;
        e.H1d_nn += 0.5 * s.kappa(p).dot(s.kappa(p + 1));
    }
    return e;
}

inline Vector3d magnetization(const LatticeState2D& s) {
    Vector3d M = Vector3d::Zero();
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) M += s.sigma(n, m);
    return s.ell * s.ell * M;
}

inline std::pair<double, double> norm_range(const LatticeState2D& s) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) {
            double r = s.sigma(n, m).norm();
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    return {lo, hi};
}

// max_p |kappa(p) - tbar(sigma)(p) / (Lv l)|
inline double kappa_defect(const LatticeState2D& s) {
    auto kb = tbar_project(s);
    double d = 0;
    for (int p = 0; p < s.Lu; ++p) d = std::max(d, (s.kappa(p) - kb[std::size_t(p)] / (s.Lv * s.ell)).cwiseAbs().maxCoeff());
    return d;
}

// ---- integration

inline void renormalize_state(LatticeState2D& s, LatticeMode mode) {
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) {
            double r = s.sigma(n, m).norm();
            if (r > 0) s.set_sigma(n, m, s.sigma(n, m) / r);
        }
    if (mode == LatticeMode::boundary1d)
        for (int p = 0; p < s.Lu; ++p) {
            double r = s.kappa(p).norm();
            if (r > 0) s.set_kappa(p, s.kappa(p) / r);
        }
}

inline void rk4_lattice_step(LatticeState2D& s, LatticeMode mode, double dt, double c = 2.0) {
    LatticeState2D w = s;
    auto F = [&](const VectorXd& y) {
        w.y = y;
        return lattice_rhs(w, mode, c);
    };
    VectorXd k1 = F(s.y);
    VectorXd k2 = F(s.y + 0.5 * dt * k1);
    VectorXd k3 = F(s.y + 0.5 * dt * k2);
    VectorXd k4 = F(s.y + dt * k3);
    s.y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s.time += dt;
}

// dt may be negative here (time reversal checks)
inline void integrate(LatticeState2D& s, LatticeMode mode, double dt, long steps, double c = 2.0, bool renorm = false) {
    for (long k = 1; k <= steps; ++k) {
        rk4_lattice_step(s, mode, dt, c);
        if (renorm) renormalize_state(s, mode);
        if (!s.y.allFinite()) throw divergence_error("lattice state diverged at step " + std::to_string(k), k);
    }
}

struct ObservableRow {
    long step;
    double t;
    Energies e;
    Vector3d mag;
    double min_norm, max_norm, kappa_defect;
};

inline ObservableRow observe(const LatticeState2D& s, long step) {
    auto [lo, hi] = norm_range(s);
    return {step, s.time, hamiltonians(s), magnetization(s), lo, hi, kappa_defect(s)};
}

inline std::string observables_header() {
    return "step,t,h2d_grad,H2d_nn,h1d_grad,mag_x,mag_y,mag_z,min_norm,max_norm,kappa_defect";
}

inline void write_row(std::ostream& out, const ObservableRow& r) {
    out << r.step << "," << r.t << "," << r.e.h2d_grad << "," << r.e.H2d_nn << "," << r.e.h1d_grad << "," << r.mag[0] << ","
        << r.mag[1] << "," << r.mag[2] << "," << r.min_norm << "," << r.max_norm << "," << r.kappa_defect << "\n";
}

inline void write_snapshot(const LatticeState2D& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17);
    out << "# Lu=" << s.Lu << " Lv=" << s.Lv << " ell=" << s.ell << " time=" << s.time << "\n";
    out << "kind,i,j,c1,c2,c3\n";
    for (int n = 0; n < s.Lu; ++n)
        for (int m = 0; m < s.Lv; ++m) {
            Vector3d v = s.sigma(n, m);
            out << "sigma," << n << "," << m << "," << v[0] << "," << v[1] << "," << v[2] << "\n";
        }
    for (int p = 0; p < s.Lu; ++p) {
        Vector3d v = s.kappa(p);
        out << "kappa," << p << ",0," << v[0] << "," << v[1] << "," << v[2] << "\n";
    }
}

inline LatticeState2D read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open snapshot " + path);
    std::string line;
    std::getline(in, line);
    int Lu = 0, Lv = 0;
    double ell = 1, time = 0;
    if (std::sscanf(line.c_str(), "# Lu=%d Lv=%d ell=%lf time=%lf", &Lu, &Lv, &ell, &time) != 4 || Lu < 2 || Lv < 2)
        throw config_error(path + ":1: bad snapshot header");
    LatticeState2D s(Lu, Lv, ell);
    s.time = time;
    std::getline(in, line);
    int lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string kind, tok;
        std::vector<double> v;
        std::getline(ss, kind, ',');
        while (std::getline(ss, tok, ',')) {
            try {
                v.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw config_error(path + ":" + std::to_string(lineno) + ": not a number");
            }
        }
        if (v.size() != 5) throw config_error(path + ":" + std::to_string(lineno) + ": expected 6 fields");
        int i = int(v[0]), j = int(v[1]);
        Vector3d c(v[2], v[3], v[4]);
        if (kind == "sigma" && i >= 0 && i < Lu && j >= 0 && j < Lv) s.set_sigma(i, j, c);
        else if (kind == "kappa" && i >= 0 && i < Lu) s.set_kappa(i, c);
        else throw config_error(path + ":" + std::to_string(lineno) + ": bad record");
    }
    return s;
}

struct RunResult {
    LatticeState2D final_state;
    std::vector<ObservableRow> observables;
    std::vector<std::string> files;
};

// RK4 run with observables every cadence steps; files go to cfg.output when set
inline RunResult run(const SimConfig& cfg) {
    cfg.validate();
    RunResult res;
    LatticeState2D s = init_state(cfg);
    std::ofstream obs, tb;
    namespace fs = std::filesystem;
    if (!cfg.output.empty()) {
        fs::create_directories(cfg.output);
        auto op = (fs::path(cfg.output) / "observables.csv").string(), tp = (fs::path(cfg.output) / "tbar.csv").string();
        obs.open(op);
        tb.open(tp);
        if (!obs || !tb) throw std::runtime_error("cannot write into " + cfg.output);
        obs << std::setprecision(17) << observables_header() << "\n";
        tb << std::setprecision(17) << "step,t,p,kbar_1,kbar_2,kbar_3\n";
        res.files = {op, tp};
        write_snapshot(s, (fs::path(cfg.output) / "state_initial.csv").string());
        res.files.push_back((fs::path(cfg.output) / "state_initial.csv").string());
    }
    auto emit = [&](long step) {
        res.observables.push_back(observe(s, step));
        if (obs.is_open()) {
            write_row(obs, res.observables.back());
            auto kb = tbar_project(s);
            for (int p = 0; p < s.Lu; ++p)
                tb << step << "," << s.time << "," << p << "," << kb[std::size_t(p)][0] << "," << kb[std::size_t(p)][1] << ","
                   << kb[std::size_t(p)][2] << "\n";
        }
    };
    emit(0);
    for (long k = 1; k <= cfg.steps; ++k) {
        rk4_lattice_step(s, cfg.mode, cfg.dt, cfg.prefactor);
        if (cfg.renormalize) renormalize_state(s, cfg.mode);
        if (!s.y.allFinite()) throw divergence_error("lattice state diverged at step " + std::to_string(k), k);
        if (k % cfg.cadence == 0 || k == cfg.steps) emit(k);
    }
    if (!cfg.output.empty()) {
        auto fp = (std::filesystem::path(cfg.output) / "state_final.csv").string();
        write_snapshot(s, fp);
        res.files.push_back(fp);
    }
    res.final_state = s;
    return res;
}

// ---- continuum reference for smooth spinwaves: -2 lap(sigma) x sigma, evaluated analytically

inline Vector3d spinwave_continuum_rhs(const SpinwaveParams& w, int Lu, int Lv, double ell, int n, int m) {
    const double tp = 2 * std::numbers::pi;
    Eigen::Vector2d a(tp * w.ku_theta / (Lu * ell), tp * w.kv_theta / (Lv * ell));
    Eigen::Vector2d b(tp * w.ku_phi / (Lu * ell), tp * w.kv_phi / (Lv * ell));
    auto ang = spinwave_angles(w, Lu, Lv, n, m);
    double th = ang.theta, ph = ang.phi;
    double kp = (2 * a + b).squaredNorm(), km = (2 * a - b).squaredNorm();
    // sin2t cos p = 1/2[sin(2t+p) + sin(2t-p)], sin2t sin p = 1/2[cos(2t-p) - cos(2t+p)]
    Vector3d lap(-0.25 * (kp * std::sin(2 * th + ph) + km * std::sin(2 * th - ph)),
                 -0.25 * (km * std::cos(2 * th - ph) - kp * std::cos(2 * th + ph)),
                 -4.0 * a.squaredNorm() * std::cos(2 * th));
    return -2.0 * lap.cross(spinor_sigma(th, ph));
}

// ---- monodromy along the boundary chain

using Matrix2cd = Eigen::Matrix2cd;

// s_a = -(i/2) Pauli_a, so [s_a, s_b] = eps_abc s_c
inline std::array<Matrix2cd, 3> su2_defining_rep() {
    using C = std::complex<double>;
    const C I(0, 1);
    Matrix2cd p1, p2, p3;
    p1 << 0, 1, 1, 0;
    p2 << 0, -I, I, 0;
    p3 << 1, 0, 0, -1;
    return {-0.5 * I * p1, -0.5 * I * p2, -0.5 * I * p3};
}

struct Monodromy {
    Matrix2cd T;
    std::complex<double> trace;
    std::complex<double> minus_log_trace, minus_det_log;  // heuristic free-energy pair, reported only
    bool first_order_cells = true;                        // each cell integral approximated by l * kappa(p)
};

// ordered product exp(-l kappa(0).s) exp(-l kappa(1).s) ...
inline Monodromy monodromy_1d(const std::vector<Vector3d>& kappa, double ell, const std::array<Matrix2cd, 3>& rep = su2_defining_rep()) {
    Monodromy M;
    M.T = Matrix2cd::Identity();
    for (auto& k : kappa) {
        Matrix2cd A = -ell * (k[0] * rep[0] + k[1] * rep[1] + k[2] * rep[2]);
        // traceless: A^2 = -d^2, exp A = cos d + (sin d / d) A
        std::complex<double> d = std::sqrt(-(A * A).trace() / 2.0);
        Matrix2cd E;
        if (std::abs(d) < 1e-300) E = Matrix2cd::Identity() + A;
        else E = std::cos(d) * Matrix2cd::Identity() + (std::sin(d) / d) * A;
        M.T = M.T * E;
    }
    M.trace = M.T.trace();
    M.minus_log_trace = -std::log(M.trace);
    Eigen::ComplexEigenSolver<Matrix2cd> es(M.T);
    Matrix2cd V = es.eigenvectors();
    Eigen::Vector2cd lg(std::log(es.eigenvalues()[0]), std::log(es.eigenvalues()[1]));
    M.minus_det_log = -(V * lg.asDiagonal() * V.inverse()).determinant();
    return M;
}

inline std::vector<Vector3d> kappa_field(const LatticeState2D& s) {
    std::vector<Vector3d> k;
    for (int p = 0; p < s.Lu; ++p) k.push_back(s.kappa(p));
    return k;
}

}  // namespace lie2
