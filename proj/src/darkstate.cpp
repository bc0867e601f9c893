#include "tchlab/darkstate.hpp"

#include "tchlab/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tch::dark {

namespace {

constexpr cplx kI{0.0, 1.0};

std::size_t bit_of(std::size_t index, std::size_t atom, std::size_t s) { return (index >> (s - 1 - atom)) & 1u; }

AtomicState two_atom(double sign) {
    AtomicState st = AtomicState::ground(2);
    st.amp.setZero();
    st.amp(1) = 1.0 / std::numbers::sqrt2;
    st.amp(2) = sign / std::numbers::sqrt2;
    return st;
}

// Central differences inside, second-order one-sided at the ends.
std::vector<double> negative_derivative(const std::vector<double>& s, double dt) {
    const std::size_t n = s.size();
    std::vector<double> p(n, 0.0);
    if (n < 3) {
        if (n == 2) p[0] = p[1] = -(s[1] - s[0]) / dt;
        return p;
    }
    p[0] = -(-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * dt);
    for (std::size_t k = 1; k + 1 < n; ++k) p[k] = -(s[k + 1] - s[k - 1]) / (2.0 * dt);
    p[n - 1] = -(3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * dt);
    return p;
}

}  // namespace

AtomicState AtomicState::ground(std::size_t s) {
    AtomicState st;
    st.atoms = s;
    st.amp = Eigen::VectorXcd::Zero(Eigen::Index(1) << s);
    st.amp(0) = 1.0;
    return st;
}

AtomicState singlet_state() { return two_atom(-1.0); }
AtomicState triplet_state() { return two_atom(1.0); }

std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairing(std::size_t s) {
    if (s % 2 != 0) throw std::invalid_argument("singlet products need an even number of atoms");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < s; k += 2) out.emplace_back(k, k + 1);
    return out;
}

AtomicState singlet_product(const std::vector<std::pair<std::size_t, std::size_t>>& pairing, std::size_t s) {
    if (s % 2 != 0) throw std::invalid_argument("singlet products need an even number of atoms");
    std::vector<int> used(s, 0);
    for (const auto& [i, j] : pairing) {
        if (i >= s || j >= s || i == j) throw std::invalid_argument("invalid atom pair in singlet pairing");
        ++used[i];
        ++used[j];
    }
    if (pairing.size() * 2 != s || std::any_of(used.begin(), used.end(), [](int u) { return u != 1; }))
        throw std::invalid_argument("pairing is not a perfect matching");

    AtomicState st = AtomicState::ground(s);
    st.amp.setZero();
    const double scale = std::pow(std::numbers::sqrt2, -double(pairing.size()));
    for (std::size_t idx = 0; idx < (std::size_t(1) << s); ++idx) {
        double sign = 1.0;
        bool ok = true;
        for (const auto& [i, j] : pairing) {
            const std::size_t bi = bit_of(idx, i, s), bj = bit_of(idx, j, s);
            if (bi == bj) {
                ok = false;
                break;
            }
            // (|0_i 1_j> - |1_i 0_j>)/sqrt 2
            if (bi == 1) sign = -sign;
        }
        if (ok) st.amp(Eigen::Index(idx)) = sign * scale;
    }
    return st;
}

Eigen::VectorXcd multi_singlet_d3() {
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(27);
    std::array<int, 3> perm{0, 1, 2};
    const double scale = 1.0 / std::sqrt(6.0);
    do {
        int inversions = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) inversions += perm[a] > perm[b];
        d(9 * perm[0] + 3 * perm[1] + perm[2]) = (inversions % 2 ? -scale : scale);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return d;
}

Darkness is_dark(const AtomicState& psi, const std::vector<double>& g, double tol) {
    const std::size_t s = psi.atoms;
    if (g.size() != s || psi.amp.size() != (Eigen::Index(1) << s))
        throw DimensionMismatch("coupling list and atomic state sizes differ");
    Eigen::VectorXcd up = Eigen::VectorXcd::Zero(psi.amp.size());
    Eigen::VectorXcd down = Eigen::VectorXcd::Zero(psi.amp.size());
    for (std::size_t idx = 0; idx < std::size_t(psi.amp.size()); ++idx) {
        const cplx a = psi.amp(Eigen::Index(idx));
        if (a == cplx{}) continue;
        for (std::size_t j = 0; j < s; ++j) {
            const std::size_t mask = std::size_t(1) << (s - 1 - j);
            if (idx & mask) down(Eigen::Index(idx & ~mask)) += g[j] * a;
            else up(Eigen::Index(idx | mask)) += g[j] * a;
        }
    }
    Darkness d;
    d.absorption_residual = up.norm();
    d.emission_residual = down.norm();
    d.dark = d.absorption_residual < tol;
    return d;
}

std::vector<double> DecayConfig::resolved_couplings() const {
    if (!couplings.empty()) return couplings;
    return std::vector<double>(atoms, g);
}

double DecayConfig::resolved_dt() const {
    if (dt) return *dt;
    double step = 0.02 / kappa;
    double g_max = 0.0;
    for (double gj : resolved_couplings()) g_max = std::max(g_max, gj);
    if (g_max > 0.0) {
        // Fastest Rabi angular frequency is below 2 g sqrt(s + 1); 40 points per cycle.
        const double rabi = 2.0 * g_max * std::sqrt(double(atoms) + 1.0);
        step = std::min(step, 2.0 * std::numbers::pi / (40.0 * rabi));
    }
    return step;
}

void DecayConfig::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (atoms > 16) throw std::invalid_argument("at most 16 atoms are supported");
    if (!couplings.empty() && couplings.size() != atoms) throw std::invalid_argument("one coupling per atom required");
    for (double gj : resolved_couplings())
        if (!(gj >= 0.0)) throw std::invalid_argument("couplings must be non-negative");
    if (!(resolved_t_max() > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (!(resolved_dt() > 0.0)) throw std::invalid_argument("dt must be positive");
}

EmissionReport emission_density(const AtomicState& psi_at, const DecayConfig& decay) {
    decay.validate();
    const std::size_t s = decay.atoms;
    if (psi_at.atoms != s || psi_at.amp.size() != (Eigen::Index(1) << s))
        throw DimensionMismatch("atomic state does not match the atom count");
    const double t_max = decay.resolved_t_max();
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / decay.resolved_dt() - 1e-9));
    const double dt = t_max / double(n_steps);

    NetworkConfig cfg;
    cfg.n_cavities = 1;
    cfg.atoms_per_cavity = {static_cast<int>(s)};
    cfg.max_photons_per_cavity = static_cast<int>(s) + 1;
    cfg.couplings = decay.resolved_couplings();
    cfg.omega = decay.omega;

    std::vector<double> survival(n_steps + 1, 0.0);
    for (std::size_t k = 0; k <= s; ++k) {
        // Component with k atomic excitations joins the photon in sector k + 1.
        std::vector<std::pair<BasisState, cplx>> parts;
        for (std::size_t idx = 0; idx < std::size_t(psi_at.amp.size()); ++idx) {
            const cplx a = psi_at.amp(Eigen::Index(idx));
            if (a == cplx{} || std::size_t(std::popcount(idx)) != k) continue;
            BasisState b{{1}, std::vector<std::uint8_t>(s)};
            for (std::size_t j = 0; j < s; ++j) b.atoms[j] = static_cast<std::uint8_t>(bit_of(idx, j, s));
            parts.emplace_back(std::move(b), a);
        }
        if (parts.empty()) continue;
        const SpacePtr space = enumerate_basis(cfg, static_cast<int>(k) + 1);
        StateVector psi{space, Eigen::VectorXcd::Zero(Eigen::Index(space->dim()))};
        for (const auto& [b, a] : parts) psi.amplitudes(Eigen::Index(space->index_of(b))) = a;
        OperatorMatrix h = build_tc(space, 0);
        for (std::size_t m = 0; m < space->dim(); ++m)
            h.entries(Eigen::Index(m), Eigen::Index(m)) -= kI * (0.5 * decay.kappa * space->state(m).photons[0]);
        const std::vector<double> sk = decay_survival_grid(h, psi, dt, n_steps);
        for (std::size_t i = 0; i <= n_steps; ++i) survival[i] += sk[i];
    }

    EmissionReport r;
    r.t_max = t_max;
    r.time.resize(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) r.time[i] = dt * double(i);
    r.survival = std::move(survival);
    r.density = negative_derivative(r.survival, dt);
    for (std::size_t i = 0; i < r.density.size(); ++i)
        if (r.density[i] < -1e-6)
            throw GridResolutionError("emission density negative at t = " + std::to_string(r.time[i]) + "; refine dt");
    r.escape_probability = 1.0 - r.survival.back();
    double mean = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) mean += 0.5 * (r.survival[i] + r.survival[i + 1]) * dt;
    r.mean_time = mean;
    return r;
}

EmissionSamples sample_emission_times(const EmissionReport& report, std::size_t n_trials, std::uint64_t rng_seed) {
    EmissionSamples out;
    out.time.reserve(n_trials);
    out.censored.reserve(n_trials);
    if (n_trials == 0) return out;
    if (report.time.size() < 2) throw std::invalid_argument("emission report has no time grid");
    // Cumulative emission probability, forced monotone against round-off.
    std::vector<double> cdf(report.survival.size());
    double run = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        run = std::max(run, 1.0 - report.survival[i]);
        cdf[i] = run;
    }
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t n = 0; n < n_trials; ++n) {
        const double u = uni(rng);
        if (u >= cdf.back()) {
            out.time.push_back(report.t_max);
            out.censored.push_back(1);
            continue;
        }
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t hi = std::size_t(it - cdf.begin());
        const std::size_t lo = hi - 1;
        const double span = cdf[hi] - cdf[lo];
        const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.0;
        out.time.push_back(report.time[lo] + frac * (report.time[hi] - report.time[lo]));
        out.censored.push_back(0);
    }
    return out;
}

Classification classify_dark(const std::vector<double>& samples, double dark_mean, double light_mean,
                             double flip_probability, std::uint64_t rng_seed) {
    if (samples.empty()) throw EmptySampleError("no emission samples to classify");
    if (!(dark_mean < light_mean)) throw std::invalid_argument("dark mean must be below light mean");
    if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
        throw std::invalid_argument("flip probability must lie in [0, 1]");
    const double threshold = 0.5 * (dark_mean + light_mean);
    // Tagged stream: the sampler seeded with the same value must not drive the flips.
    std::seed_seq seq{std::uint32_t(rng_seed), std::uint32_t(rng_seed >> 32), std::uint32_t(0x666c6970)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    double sum = 0.0, sum_sq = 0.0;
    for (double t : samples) {
        if (flip_probability > 0.0 && uni(rng) < flip_probability) t = 2.0 * threshold - t;
        sum += t;
        sum_sq += t * t;
    }
    Classification c;
    c.n = samples.size();
    const double n = double(c.n);
    c.sample_mean = sum / n;
    const double var = c.n > 1 ? std::max(0.0, (sum_sq - n * c.sample_mean * c.sample_mean) / (n - 1.0)) : 0.0;
    c.standard_error = std::sqrt(var / n);
    const double gap = threshold - c.sample_mean;
    if (c.standard_error > 0.0) c.z_score = gap / c.standard_error;
    else c.z_score = gap == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), gap);
    c.decision = c.sample_mean < threshold ? Hypothesis::Dark : Hypothesis::Light;
    return c;
}

}  // namespace tch::dark
