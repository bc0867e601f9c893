#include "cli.hpp"

#include "tchlab/darkstate.hpp"
#include "tchlab/errors.hpp"
#include "tchlab/gate.hpp"
#include "tchlab/walk.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace tch::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: TCHLAB_THREADS or 1

    unsigned resolved_threads() const {
        if (threads > 0) return threads;
        if (const char* env = std::getenv("TCHLAB_THREADS")) {
            try {
                const long v = std::stol(env);
                if (v > 0) return static_cast<unsigned>(v);
            } catch (const std::exception&) {
            }
        }
        return 1;
    }

    fs::path prepare() const {
        fs::path dir(out_dir);
        fs::create_directories(dir);
        return dir;
    }
};

nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}, {"arg", std::arg(z)}}; }

const char* basis_label(std::size_t k) {
    static const char* labels[] = {"00", "01", "10", "11"};
    return labels[k];
}

// ---------------------------------------------------------------- gate

struct GateFlags {
    double g = 1e-3;
    double omega = 1.0;
    double sigma = 0.5;
    std::string sigma_grid;
    std::string alpha_grid = "0:2.5:0.05";
    int n_max = 10;
    std::size_t pairs = 3;
    std::string input = "psi0";
    double dt = 0.0;
    double delta_omega = 1e9;
    double tau1_seconds = 1e-6;
};

int cmd_gate(const GateFlags& f, const Common& common) {
    using namespace tch::gate;
    const TwoQubitState input = TwoQubitState::parse(f.input);
    if (f.pairs < 1) throw std::invalid_argument("--pairs must be >= 1");

    SweepSpec spec;
    spec.input = input;
    spec.alphas = parse_grid(f.alpha_grid);
    spec.sigmas = f.sigma_grid.empty() ? std::vector<double>{f.sigma} : parse_grid(f.sigma_grid);
    spec.pairs = resonance_table(f.n_max, f.pairs);
    spec.base.g = f.g;
    spec.base.omega = f.omega;
    spec.base.sigma = f.sigma;
    if (f.dt > 0.0) spec.base.settings.dt = f.dt;
    spec.threads = common.resolved_threads();
    for (double a : spec.alphas)
        if (!(a >= 0.0)) throw std::invalid_argument("alpha grid values must be non-negative");
    for (double s : spec.sigmas)
        if (!(s > 0.0)) throw std::invalid_argument("sigma grid values must be positive");

    ExperimentReport report = sweep(spec);
    report.parameters = {{"g", f.g},
                         {"omega", f.omega},
                         {"hbar", 1.0},
                         {"sigma", f.sigma},
                         {"alpha_grid", spec.alphas},
                         {"sigma_grid", spec.sigmas},
                         {"n_max", f.n_max},
                         {"pairs", f.pairs},
                         {"input", f.input},
                         {"dt", f.dt > 0.0 ? nlohmann::json(f.dt) : nlohmann::json("auto")},
                         {"delta_omega", f.delta_omega},
                         {"tau1_seconds", f.tau1_seconds},
                         {"threads", spec.threads}};

    const RabiPeriods tau = rabi_periods(f.g);
    report.summary["tau1"] = tau.tau1;
    report.summary["tau2"] = tau.tau2;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : spec.pairs) {
        GateConfig c = spec.base;
        c.n1 = p.n1;
        c.n2 = p.n2;
        const GateScore s = score_gate(input, c);
        nlohmann::json branches = nlohmann::json::object();
        for (std::size_t k = 0; k < 4; ++k) branches[basis_label(k)] = complex_json(s.branch[k]);
        pairs.push_back({{"n1", p.n1},
                         {"n2", p.n2},
                         {"residual", p.residual},
                         {"alpha", c.resolved_alpha()},
                         {"d_tr", s.d_tr},
                         {"d_mod", s.d_mod},
                         {"d_mod_aligned", s.d_mod_aligned},
                         {"norm_squared", s.norm_squared},
                         {"branches", branches}});
    }
    report.summary["area_rule"] = pairs;
    if (f.input != "psi0") report.summary["branch_phase"] = pairs.front()["branches"][f.input];
    const TransferBound tb = transfer_bound(f.delta_omega, f.tau1_seconds);
    report.summary["transfer_bound"] = {{"delta_tau", tb.delta_tau}, {"ratio", tb.ratio}, {"flagged", tb.flagged}};
    const auto warnings = cocsign_schedule(spec.base).warnings;
    report.summary["warnings"] = warnings;

    const fs::path dir = common.prepare();
    write_csv(report.table("gate_sweep"), dir / "gate_sweep.csv");
    write_json(report.to_json(), dir / "gate_summary.json");
    std::cerr << "gate: wrote " << (dir / "gate_sweep.csv").string() << " and gate_summary.json\n";
    return kOk;
}

// ---------------------------------------------------------------- walk

struct WalkFlags {
    std::size_t n = 128;
    double mass = 1.0;
    long q0 = -1;
    double t_max = 0.0;
    std::size_t steps = 100;
    double kernel_a = 1.0;
};

int cmd_walk(const WalkFlags& f, const Common& common) {
    walk::WalkConfig cfg;
    cfg.n = f.n;
    cfg.mass = f.mass;
    if (f.q0 >= 0) cfg.q0 = static_cast<std::size_t>(f.q0);
    if (f.t_max > 0.0) cfg.t_max = f.t_max;
    cfg.steps = f.steps;
    cfg.kernel_a = f.kernel_a;
    ExperimentReport report = walk::simulate_walk(cfg);
    report.parameters["threads"] = common.resolved_threads();

    const fs::path dir = common.prepare();
    write_csv(report.table("walk_amplitude"), dir / "walk_amplitude.csv");
    write_csv(report.table("kernel"), dir / "kernel.csv");
    write_csv(report.table("network"), dir / "network.csv");
    write_csv(report.table("profile"), dir / "network_profile.csv");
    write_json(report.to_json(), dir / "walk_summary.json");
    std::cerr << "walk: wrote walk_amplitude.csv, kernel.csv, network.csv to " << dir.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------- dark

struct DarkFlags {
    std::size_t atoms = 2;
    std::string state = "singlet";
    double g = 1e-3;
    double kappa = 0.0;  // 0: g / 10
    std::size_t trials = 10000;
    double epsilon = 0.03;
    double t_max = 0.0;
    double dt = 0.0;
};

dark::AtomicState dark_hypothesis(std::size_t s) {
    if (s == 0) return dark::AtomicState::ground(0);
    if (s % 2 != 0) throw std::invalid_argument("the dark hypothesis needs an even atom count (singlet product)");
    return dark::singlet_product(dark::adjacent_pairing(s), s);
}

dark::AtomicState input_state(const std::string& name, std::size_t s) {
    if (name == "singlet" || name == "dark") return dark_hypothesis(s);
    if (name == "ground" || name == "light") return dark::AtomicState::ground(s);
    if (name == "triplet") {
        if (s != 2) throw std::invalid_argument("--state triplet needs --atoms 2");
        return dark::triplet_state();
    }
    throw std::invalid_argument("unknown --state '" + name + "' (singlet, dark, ground, light, triplet)");
}

int cmd_dark(const DarkFlags& f, const Common& common) {
    dark::DecayConfig cfg;
    cfg.atoms = f.atoms;
    cfg.g = f.g;
    cfg.kappa = f.kappa > 0.0 ? f.kappa : f.g / 10.0;
    if (f.t_max > 0.0) cfg.t_max = f.t_max;
    if (f.dt > 0.0) cfg.dt = f.dt;
    cfg.n_trials = f.trials;
    cfg.rng_seed = common.seed;
    if (!(f.g >= 0.0)) throw std::invalid_argument("--g must be non-negative");
    if (!(f.epsilon >= 0.0 && f.epsilon <= 1.0)) throw std::invalid_argument("--epsilon must lie in [0, 1]");
    cfg.validate();

    const dark::AtomicState dark_state = dark_hypothesis(f.atoms);
    const dark::AtomicState light_state = dark::AtomicState::ground(f.atoms);
    const dark::AtomicState in_state = input_state(f.state, f.atoms);

    const dark::EmissionReport pd = dark::emission_density(dark_state, cfg);
    const dark::EmissionReport pl = dark::emission_density(light_state, cfg);
    const dark::EmissionReport pi = dark::emission_density(in_state, cfg);

    ExperimentReport report;
    report.experiment = "dark";
    report.seed = common.seed;
    report.parameters = {{"atoms", f.atoms},       {"state", f.state},     {"g", f.g},
                         {"kappa", cfg.kappa},     {"omega", cfg.omega},   {"t_max", cfg.resolved_t_max()},
                         {"dt", pd.time.size() > 1 ? pd.time[1] : 0.0},    {"trials", f.trials},
                         {"epsilon", f.epsilon},   {"threads", common.resolved_threads()}};
    Table& t = report.add_table("emission_density", {"t", "p_dark", "p_light", "p_input"});
    for (std::size_t i = 0; i < pd.time.size(); ++i) t.add_row({pd.time[i], pd.density[i], pl.density[i], pi.density[i]});

    const dark::EmissionSamples samples = dark::sample_emission_times(pi, f.trials, common.seed);
    std::size_t censored = 0;
    for (auto c : samples.censored) censored += c;

    const fs::path dir = common.prepare();
    write_csv(t, dir / "emission_density.csv");

    report.summary = {{"dark_mean", pd.mean_time},
                      {"light_mean", pl.mean_time},
                      {"input_mean", pi.mean_time},
                      {"dark_escape_probability", pd.escape_probability},
                      {"light_escape_probability", pl.escape_probability},
                      {"input_escape_probability", pi.escape_probability},
                      {"n_trials", f.trials},
                      {"censored", censored}};

    int code = kOk;
    const double gap = pl.mean_time - pd.mean_time;
    if (samples.time.empty()) {
        report.summary["decision"] = nullptr;
        report.summary["z_score"] = nullptr;
    } else if (!(gap > 0.0)) {
        report.summary["decision"] = nullptr;
        report.summary["z_score"] = nullptr;
        code = kIndistinguishable;
    } else {
        const dark::Classification c =
            dark::classify_dark(samples.time, pd.mean_time, pl.mean_time, f.epsilon, common.seed + 1);
        report.summary["decision"] = c.decision == dark::Hypothesis::Dark ? "dark" : "light";
        report.summary["z_score"] = c.z_score;
        report.summary["sample_mean"] = c.sample_mean;
        report.summary["standard_error"] = c.standard_error;
        if (gap < 3.0 * c.standard_error) code = kIndistinguishable;
    }
    report.summary["distinguishable"] = code == kOk;
    nlohmann::json j = report.to_json();
    // Flat copies of the headline fields.
    j["decision"] = report.summary["decision"];
    j["z_score"] = report.summary["z_score"];
    j["n_trials"] = f.trials;
    write_json(j, dir / "classify.json");
    if (code == kIndistinguishable) std::cerr << "dark: hypotheses are numerically indistinguishable\n";
    std::cerr << "dark: wrote emission_density.csv and classify.json to " << dir.string() << "\n";
    return code;
}

// ---------------------------------------------------------------- resonance

struct ResonanceFlags {
    int n_max = 10;
    std::size_t top = 1;
    double g = 1e-3;
};

int cmd_resonance(const ResonanceFlags& f, const Common& common) {
    const auto table = f.top == 0 ? std::vector<gate::ResonancePair>{} : gate::resonance_table(f.n_max, f.top);
    if (f.n_max < 1) throw std::invalid_argument("--n-max must be >= 1");
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : table) {
        std::cout << p.n1 << ' ' << p.n2 << ' ' << format_double(p.residual) << '\n';
        rows.push_back({{"n1", p.n1}, {"n2", p.n2}, {"residual", p.residual}});
    }
    ExperimentReport report;
    report.experiment = "resonance";
    report.parameters = {{"n_max", f.n_max}, {"top", f.top}, {"g", f.g}};
    report.summary["pairs"] = rows;
    const RabiPeriods tau = rabi_periods(f.g);
    report.summary["tau1"] = tau.tau1;
    report.summary["tau2"] = tau.tau2;
    write_json(report.to_json(), common.prepare() / "resonance_summary.json");
    return kOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    auto number = [](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number '" + s + "'");
        return v;
    };
    std::vector<double> out;
    try {
        if (spec.find(':') != std::string::npos) {
            std::vector<std::string> parts;
            std::stringstream ss(spec);
            for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
            if (parts.size() != 3) throw std::invalid_argument("range grid must be start:stop:step");
            const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
            if (!(step > 0.0) || b < a) throw std::invalid_argument("range grid needs step > 0 and stop >= start");
            const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
            for (std::size_t k = 0; k <= n; ++k) out.push_back(a + step * double(k));
        } else {
            std::stringstream ss(spec);
            for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
        }
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("grid '" + spec + "': " + e.what());
    }
    if (out.empty()) throw std::invalid_argument("grid '" + spec + "' is empty");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Tavis-Cummings-Hubbard control-quality experiments", "tchlab"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--out-dir", common.out_dir, "Directory for CSV/JSON output")->capture_default_str();
    app.add_option("--seed", common.seed, "RNG seed")->capture_default_str();
    app.add_option("--threads", common.threads, "Worker threads (fallback: TCHLAB_THREADS, else 1)");

    GateFlags gf;
    auto* gate = app.add_subcommand("gate", "coCSign gate sweep over alpha/sigma and resonance pairs");
    gate->add_option("--g", gf.g, "Atom-field coupling")->capture_default_str();
    gate->add_option("--omega", gf.omega, "Photon frequency")->capture_default_str();
    gate->add_option("--sigma", gf.sigma, "Pulse width")->capture_default_str();
    gate->add_option("--sigma-grid", gf.sigma_grid, "Sigma grid (a:b:step or list); default --sigma");
    gate->add_option("--alpha-grid", gf.alpha_grid, "Alpha grid (a:b:step or list)")->capture_default_str();
    gate->add_option("--n-max", gf.n_max, "Resonance search bound")->capture_default_str();
    gate->add_option("--pairs", gf.pairs, "Number of best resonance pairs to sweep")->capture_default_str();
    gate->add_option("--input", gf.input, "00, 01, 10, 11 or psi0")->capture_default_str();
    gate->add_option("--dt", gf.dt, "Pulse integration step (default min(sigma/50, tau1/200))");
    gate->add_option("--delta-omega", gf.delta_omega, "Frequency uncertainty bound [1/s]")->capture_default_str();
    gate->add_option("--tau1-seconds", gf.tau1_seconds, "Physical Rabi period [s]")->capture_default_str();

    WalkFlags wf;
    auto* walk = app.add_subcommand("walk", "Single-photon walk imitating a free massive particle");
    walk->add_option("--n", wf.n, "Number of cavities")->capture_default_str();
    walk->add_option("--mass", wf.mass, "Particle mass")->capture_default_str();
    walk->add_option("--q0", wf.q0, "Initial cavity (default N/2)");
    walk->add_option("--t-max", wf.t_max, "Final time (default 2*mass)");
    walk->add_option("--steps", wf.steps, "Number of time steps")->capture_default_str();
    walk->add_option("--kernel-a", wf.kernel_a, "Kernel normalization constant")->capture_default_str();

    DarkFlags df;
    auto* dark = app.add_subcommand("dark", "Optical selection of dark atomic states");
    dark->add_option("--atoms", df.atoms, "Atoms in the cavity")->capture_default_str();
    dark->add_option("--state", df.state, "singlet|dark|ground|light|triplet")->capture_default_str();
    dark->add_option("--g", df.g, "Atom-field coupling")->capture_default_str();
    dark->add_option("--kappa", df.kappa, "Cavity decay rate (default g/10)");
    dark->add_option("--trials", df.trials, "Number of emission samples")->capture_default_str();
    dark->add_option("--epsilon", df.epsilon, "Detector flip probability")->capture_default_str();
    dark->add_option("--t-max", df.t_max, "Censoring time (default 20/kappa)");
    dark->add_option("--dt", df.dt, "Density grid step");

    ResonanceFlags rf;
    auto* res = app.add_subcommand("resonance", "Best (n1, n2) pairs for 2 n2 tau2 ~ 2 n1 tau1 + tau1/2");
    res->add_option("--n-max", rf.n_max, "Search bound")->capture_default_str();
    res->add_option("--top", rf.top, "Rows to print")->capture_default_str();
    res->add_option("--g", rf.g, "Coupling (sets tau1 in the JSON summary)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gate) return cmd_gate(gf, common);
        if (*walk) return cmd_walk(wf, common);
        if (*dark) return cmd_dark(df, common);
        if (*res) return cmd_resonance(rf, common);
    } catch (const NormDriftError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const GridResolutionError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const OverlapError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("tchlab");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace tch::cli
