#pragma once

// Dark (singlet-product) atomic states, photon emission-time statistics from a leaky
// cavity, and dark/light hypothesis testing on sampled escape times.

#include "tchlab/evolution.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace tch::dark {

// Amplitudes over the 2^s atomic basis; atom 0 is the most significant bit, so the
// label |01> (atom 0 ground, atom 1 excited) has index 1.
struct AtomicState {
    std::size_t atoms = 0;
    Eigen::VectorXcd amp;

    static AtomicState ground(std::size_t s);
    double norm_squared() const { return amp.squaredNorm(); }
};

AtomicState singlet_state();   // (|01> - |10>)/sqrt 2
AtomicState triplet_state();   // (|01> + |10>)/sqrt 2
// Tensor product of singlets over the pairs; throws std::invalid_argument for odd s
// or when `pairing` is not a perfect matching of 0..s-1.
AtomicState singlet_product(const std::vector<std::pair<std::size_t, std::size_t>>& pairing, std::size_t s);
// Pairs (0,1), (2,3), ...
std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairing(std::size_t s);

// Fully antisymmetric three-atom, three-level state; index 9 l0 + 3 l1 + l2.
Eigen::VectorXcd multi_singlet_d3();

struct Darkness {
    bool dark = false;
    double absorption_residual = 0.0;  // || sum_j g_j sigma_j^+ psi ||
    double emission_residual = 0.0;    // || sum_j g_j sigma_j psi ||
};

Darkness is_dark(const AtomicState& psi, const std::vector<double>& g, double tol = 1e-12);

struct DecayConfig {
    double kappa = 1e-4;
    double g = 1e-3;
    std::size_t atoms = 2;
    // Per-atom couplings; empty means all equal to g.
    std::vector<double> couplings;
    std::optional<double> t_max;   // default 20 / kappa
    std::optional<double> dt;      // default resolves both 1/kappa and the fastest Rabi cycle
    double omega = 1.0;
    std::size_t n_trials = 10000;
    std::uint64_t rng_seed = 0;

    std::vector<double> resolved_couplings() const;
    double resolved_t_max() const { return t_max ? *t_max : 20.0 / kappa; }
    double resolved_dt() const;
    void validate() const;
};

struct EmissionReport {
    std::vector<double> time;
    std::vector<double> density;   // p(t) = -dS/dt
    std::vector<double> survival;  // S(t)
    double escape_probability = 0.0;  // 1 - S(T_max)
    double mean_time = 0.0;           // censored mean: integral of S over [0, T_max]
    double t_max = 0.0;
};

// One photon launched into the cavity with atoms in psi_at; H_eff = H_TC - i (kappa/2) a^+ a.
// Throws GridResolutionError when p(t) < -1e-6 anywhere.
EmissionReport emission_density(const AtomicState& psi_at, const DecayConfig& decay);

struct EmissionSamples {
    std::vector<double> time;
    std::vector<std::uint8_t> censored;  // 1: no emission by T_max, time set to T_max
};

// Inverse-CDF sampling of the first emission time; deterministic for a given seed.
EmissionSamples sample_emission_times(const EmissionReport& report, std::size_t n_trials, std::uint64_t rng_seed);

enum class Hypothesis { Dark, Light };

struct Classification {
    Hypothesis decision = Hypothesis::Light;
    double z_score = 0.0;  // (threshold - mean) / standard error; positive favours dark
    double sample_mean = 0.0;
    double standard_error = 0.0;
    std::size_t n = 0;
};

// Nearest-mean decision with threshold (dark_mean + light_mean)/2; a mean exactly at the
// threshold is classified Light. Each sample is mirrored about the threshold with
// probability `flip_probability` first (detector error). Throws EmptySampleError.
Classification classify_dark(const std::vector<double>& samples, double dark_mean, double light_mean,
                             double flip_probability = 0.03, std::uint64_t rng_seed = 0);

}  // namespace tch::dark
