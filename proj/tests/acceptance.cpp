// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.
#include "oracles.hpp"
#include "tchlab/darkstate.hpp"
#include "tchlab/errors.hpp"
#include "tchlab/gate.hpp"
#include "tchlab/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace tch;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [violated]");
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Outcome rabi_algebra() {
    constexpr double kTol = 1e-8;
    Outcome o;
    const double g = 1e-3;
    auto space = enumerate_basis(uniform_network(1, 1, g), 1);
    const Propagator u(build_tc(space, 0));
    const auto tau = rabi_periods(g);
    double worst = 0.0;
    for (const auto& b : space->states()) {
        const auto psi = basis_vector(space, b);
        worst = std::max(worst, (u.apply(psi, tau.tau1).amplitudes + psi.amplitudes).norm());
    }
    StateVector mixed{space, Eigen::VectorXcd(2)};
    mixed.amplitudes << cplx(0.6, 0.1), cplx(-0.2, 0.77);
    mixed.amplitudes.normalize();
    worst = std::max(worst, (u.apply(mixed, tau.tau1).amplitudes + mixed.amplitudes).norm());
    o.require(worst < kTol, "||U(tau1) psi + psi|| = " + fmt("%.2e", worst));
    const auto half = u.apply(basis_vector(space, {{1}, {0}}), tau.tau1 / 2);
    const cplx frame = std::exp(cplx(0, 1) * (tau.tau1 / 2));  // removes exp(-i omega t), omega = 1
    Eigen::VectorXcd target = -cplx(0, 1) * basis_vector(space, {{0}, {1}}).amplitudes;
    const double err = (frame * half.amplitudes - target).norm();
    o.require(err < kTol, "U(tau1/2)|1,0> + i|0,1> = " + fmt("%.2e", err));
    return o;
}

Outcome resonance_search() {
    constexpr double kTol = 1e-4;
    Outcome o;
    const auto best = gate::find_resonance(1e-3, 10);
    o.require(best.n1 == 4 && best.n2 == 6, "pair (" + std::to_string(best.n1) + "," + std::to_string(best.n2) + ")");
    o.require(std::abs(best.residual - 0.01472) < kTol, "residual " + fmt("%.6f", best.residual) + " tau1");
    const std::size_t k = 3;
    std::vector<double> prev(k, 1e300);
    bool monotone = true;
    for (int n_max = 10; n_max <= 100; ++n_max) {
        const auto table = gate::resonance_table(n_max, k);
        for (std::size_t i = 0; i < k; ++i) {
            monotone = monotone && table[i].residual <= prev[i];
            prev[i] = table[i].residual;
        }
    }
    o.require(monotone, "top-3 residuals non-increasing for n_max 10..100");
    return o;
}

Outcome gate_accuracy() {
    constexpr double kBound = 0.2;
    Outcome o;
    gate::GateConfig c;  // g = 1e-3, sigma = 0.5, omega = 1, area-rule alpha
    const auto pair = gate::find_resonance(c.g, 100);
    c.n1 = pair.n1;
    c.n2 = pair.n2;
    const auto s = gate::score_gate(gate::TwoQubitState::uniform(), c);
    o.require(s.d_mod <= kBound, "(n1,n2)=(" + std::to_string(c.n1) + "," + std::to_string(c.n2) +
                                     ") raw d_mod = " + fmt("%.4g", s.d_mod) + " (d_tr " + fmt("%.4g", s.d_tr) + ")");
    return o;
}

Outcome distance_metrics() {
    Outcome o;
    auto space = gate::gate_space(1e-3);
    const auto psi = gate::encode(gate::TwoQubitState::uniform(), space);
    StateVector neg{space, -psi.amplitudes};
    const double dtr = gate::trace_distance(psi, neg);
    const double dmod = gate::modular_distance(psi, neg);
    o.require(dtr < 1e-12, "d_tr(psi,-psi) = " + fmt("%.1e", dtr));
    o.require(std::abs(dmod - 4.0) < 1e-12, "d_mod(psi,-psi) = " + fmt("%.15g", dmod));
    const auto a = gate::encode(gate::TwoQubitState::basis(0, 0), space);
    const auto b = gate::encode(gate::TwoQubitState::basis(1, 0), space);
    const double orth = gate::trace_distance(a, b);
    o.require(std::abs(orth - 2.0) < 1e-10, "d_tr(orthogonal) = " + fmt("%.15g", orth));
    return o;
}

Outcome walk_invariants() {
    Outcome o;
    double qft = 0.0, spec = 0.0;
    for (std::size_t n : {2u, 8u, 64u, 128u}) {
        const auto f = walk::qft_matrix(n);
        qft = std::max(qft, max_abs(f.adjoint() * f - Eigen::MatrixXcd::Identity(Eigen::Index(n), Eigen::Index(n))));
    }
    for (std::size_t n : {2u, 8u, 64u}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(walk::momentum_operator(n));
        for (std::size_t a = 0; a < n; ++a) {
            const double expected = std::sqrt(double(n)) * (double(a) / double(n) - 0.5);
            spec = std::max(spec, std::abs(es.eigenvalues()(Eigen::Index(a)) - expected));
        }
    }
    const auto report = walk::simulate_walk(walk::WalkConfig{});
    const double cons = report.summary["momentum_conservation"].get<double>();
    const double expo = report.summary["variance_exponent"].get<double>();
    o.require(qft < 1e-10, "QFT unitarity " + fmt("%.1e", qft));
    o.require(spec < 1e-8, "momentum spectrum " + fmt("%.1e", spec));
    o.require(cons < 1e-10, "momentum populations " + fmt("%.1e", cons));
    o.require(std::abs(expo - 2.0) <= 0.05, "variance exponent " + fmt("%.5f", expo));
    return o;
}

Outcome dark_decoupling() {
    Outcome o;
    dark::DecayConfig c;  // kappa = 1e-4, g = 1e-3 (g = 10 kappa), two atoms
    const auto d = dark::emission_density(dark::singlet_state(), c);
    double sup = 0.0;
    for (std::size_t k = 0; k < d.time.size(); ++k)
        sup = std::max(sup, std::abs(d.density[k] - c.kappa * std::exp(-c.kappa * d.time[k])));
    o.require(sup < 1e-3, "sup |p - kappa e^{-kappa t}| = " + fmt("%.2e", sup));
    bool ordered = true;
    std::string means;
    for (double ratio : {10.0, 30.0, 100.0}) {
        for (std::size_t s : {2u, 4u}) {
            dark::DecayConfig cc;
            cc.kappa = 1e-4;
            cc.g = ratio * cc.kappa;
            cc.atoms = s;
            const auto dk = dark::emission_density(dark::singlet_product(dark::adjacent_pairing(s), s), cc);
            const auto lt = dark::emission_density(dark::AtomicState::ground(s), cc);
            ordered = ordered && dk.mean_time < lt.mean_time;
            if (ratio == 10.0 && s == 2) means = fmt("%.4g", dk.mean_time) + " < " + fmt("%.4g", lt.mean_time);
        }
    }
    o.require(ordered, "mean dark < mean light for g/kappa in {10,30,100}, s in {2,4} (" + means + ")");
    const auto light = dark::emission_density(dark::AtomicState::ground(2), c);
    int correct = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto samples = dark::sample_emission_times(d, 10000, seed);
        correct += dark::classify_dark(samples.time, d.mean_time, light.mean_time, 0.03, seed).decision ==
                   dark::Hypothesis::Dark;
    }
    o.require(correct >= 99, "classifier correct in " + std::to_string(correct) + "/100 seeds");
    return o;
}

Outcome uncertainty_bound() {
    Outcome o;
    const double dt = gate::min_transfer_time(1e9);
    o.require(dt == 1e-9, "min_transfer_time(1e9) = " + fmt("%.17g", dt));
    const auto b = gate::transfer_bound(1e9, 1e-6);
    o.require(b.flagged, "flag at tau1 = 1e-6 s, ratio " + fmt("%.17g", b.ratio));
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::vector<std::pair<NetworkConfig, std::vector<HopSpec>>> cases;
    cases.push_back({uniform_network(1, 1, 0.3), {}});
    cases.push_back({uniform_network(1, 4, 0.2, 2), {}});
    cases.push_back({uniform_network(2, 1, 0.1, 3), {HopSpec{0, 1, 0.4, 0.0}}});
    cases.push_back({uniform_network(3, 1, 1e-3), {HopSpec{2, 0, 0.5, 0.0}, HopSpec{2, 1, 0.25, 0.0}}});
    cases.push_back({uniform_network(4, 0, 0.0, 2), {HopSpec{0, 1, 1.0, 0.3}, HopSpec{1, 2, 0.5, -1.1}, HopSpec{3, 0, 0.2, 2.0}}});
    NetworkConfig mixed = uniform_network(3, 0, 0.0);
    mixed.atoms_per_cavity = {2, 0, 1};
    mixed.couplings = {0.11, 0.23, 0.37};
    mixed.omega = 1.7;
    cases.push_back({mixed, {HopSpec{0, 1, 0.9, 0.4}, HopSpec{2, 1, 0.6, 0.0}}});
    double worst = 0.0;
    std::size_t spaces = 0;
    for (const auto& [cfg, hops] : cases) {
        const auto tch_full = oracle::full_tch(cfg, hops);
        const auto hop_full = oracle::full_tch(cfg, hops, false);
        std::vector<Eigen::MatrixXcd> tc_full;
        for (std::size_t q = 0; q < cfg.n_cavities; ++q) tc_full.push_back(oracle::full_tc(cfg, q));
        std::vector<double> energies;
        for (std::size_t q = 0; q < cfg.n_cavities; ++q) energies.push_back(0.3 * double(q) - 0.1);
        const auto onsite_full = oracle::full_onsite(cfg, energies);
        for (int sector = 0; sector <= 8; ++sector) {
            SpacePtr space;
            try {
                space = enumerate_basis(cfg, sector);
            } catch (const EmptySpaceError&) {
                continue;
            }
            if (space->dim() > 64) continue;
            ++spaces;
            worst = std::max(worst, max_abs(build_tch(space, hops).entries - oracle::restrict(tch_full, *space)));
            worst = std::max(worst, max_abs(build_hopping(space, hops).entries - oracle::restrict(hop_full, *space)));
            for (std::size_t q = 0; q < cfg.n_cavities; ++q)
                worst = std::max(worst, max_abs(build_tc(space, q).entries - oracle::restrict(tc_full[q], *space)));
            for (const auto& hop : hops) {
                HopSpec unit = hop;
                unit.amplitude = 1.0;
                const auto j_full = oracle::full_tch(cfg, {unit}, false);
                worst = std::max(worst, max_abs(jump_operator(space, hop).entries - oracle::restrict(j_full, *space)));
            }
            worst = std::max(worst, max_abs(build_onsite(space, energies).entries - oracle::restrict(onsite_full, *space)));
        }
    }
    o.require(worst < 1e-12, "max entry difference " + fmt("%.1e", worst) + " over " + std::to_string(spaces) + " spaces");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;  // runtime budget; 0 = none
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {"1 rabi-algebra", 1.0, rabi_algebra},
        {"2 resonance-search", 1.0, resonance_search},
        {"3 gate-accuracy", 0.0, gate_accuracy},
        {"4 distance-metrics", 0.0, distance_metrics},
        {"5 walk-invariants", 30.0, walk_invariants},
        {"6 dark-state-decoupling", 120.0, dark_decoupling},
        {"7 uncertainty-bound", 0.0, uncertainty_bound},
        {"8 oracle-equivalence", 0.0, oracle_equivalence},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0) o.require(secs < c.budget_s, "runtime " + fmt("%.2f", secs) + " s < " + fmt("%g", c.budget_s) + " s");
        else o.detail += "; runtime " + fmt("%.2f", secs) + " s";
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
