#pragma once

// Single-photon continuous-time quantum walk on an atom-free cavity network whose
// hopping matrix is the discretized free-particle Hamiltonian.
//
// Matrices in this header are N x N in the cavity basis |q>, q = 0..N-1, unless stated.

#include "tchlab/evolution.hpp"
#include "tchlab/report.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace tch::walk {

// QFT|c> = N^{-1/2} sum_a exp(-2 pi i a c / N) |a>.
Eigen::MatrixXcd qft_matrix(std::size_t n);
Eigen::MatrixXcd inverse_qft_matrix(std::size_t n);

// p_a = sqrt(N) (a/N - 1/2), a = 0..N-1.
std::vector<double> momentum_values(std::size_t n);
// QFT diag(p_a) QFT^-1.
Eigen::MatrixXcd momentum_operator(std::size_t n);
// QFT diag(p_a^2 / 2m) QFT^-1.
Eigen::MatrixXcd free_hamiltonian(std::size_t n, double mass);

struct Coupling {
    std::size_t q = 0;
    std::size_t p = 0;  // q < p
    double r = 0.0;
    double phi = 0.0;
};

struct CouplingNetwork {
    std::size_t n = 0;
    std::vector<double> diagonal;
    std::vector<Coupling> couplings;

    Eigen::MatrixXcd to_matrix() const;
    std::vector<HopSpec> hops() const;
};

// r = |H_qp|, phi = arg H_qp for q < p; exact zeros are omitted.
CouplingNetwork coupling_network(const Eigen::MatrixXcd& h);

struct DistanceProfile {
    std::vector<std::size_t> distance;
    std::vector<double> mean_r;
    std::vector<double> mean_phi;
};

// Couplings aggregated by |q - p| (for the amplitude/phase versus distance plot).
DistanceProfile distance_profile(const CouplingNetwork& net);

// K = A t^{-1/2} exp(i m x^2 / (hbar t)). Throws DomainError for t <= 0.
cplx feynman_kernel(double x, double t, double mass, double a_const = 1.0, double hbar = 1.0);

// Atom-free N-cavity space holding one photon.
SpacePtr walk_space(std::size_t n);
// The network as a Hamiltonian on walk_space: on-site energies plus hopping terms.
OperatorMatrix network_operator(const SpacePtr& space, const CouplingNetwork& net);
// Amplitude of the photon in each cavity, in cavity order.
Eigen::VectorXcd cavity_amplitudes(const StateVector& psi);

struct WalkConfig {
    std::size_t n = 128;
    double mass = 1.0;
    std::optional<std::size_t> q0;     // default N/2
    std::optional<double> t_max;       // default 2 m (before the packet wraps the ring)
    std::size_t steps = 100;
    double kernel_a = 1.0;

    std::size_t resolved_q0() const { return q0 ? *q0 : n / 2; }
    double resolved_t_max() const { return t_max ? *t_max : 2.0 * mass; }
    void validate() const;
};

double position_variance(const Eigen::VectorXcd& amplitudes, std::size_t q0);
// Least-squares slope of log(var) against log(t) over points with t > 0 and var > 0.
double power_law_exponent(const std::vector<double>& t, const std::vector<double>& var);

// Tables: walk_amplitude (cavity, time, re, im) over t = 0..t_max,
// kernel (x, time, re, im) over t > 0, network (q, p, r, phi), profile (distance, r, phi).
// Summary: momentum_conservation, unitarity_error, variance_exponent, reflection_asymmetry.
ExperimentReport simulate_walk(const WalkConfig& config);

}  // namespace tch::walk
