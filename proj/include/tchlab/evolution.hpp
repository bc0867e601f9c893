#pragma once

// State propagation: exact exponentials for constant Hamiltonians, a fixed-step
// 4th-order Magnus integrator for Gaussian-pulsed hopping, and non-Hermitian decay.

#include "tchlab/hamiltonians.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace tch {

struct StateVector {
    SpacePtr space;
    Eigen::VectorXcd amplitudes;

    double norm_squared() const { return amplitudes.squaredNorm(); }
    cplx amplitude(const BasisState& b) const {
        return amplitudes(static_cast<Eigen::Index>(space->index_of(b)));
    }
};

// Basis vector |b> in `space`.
StateVector basis_vector(const SpacePtr& space, const BasisState& b);

struct EvolutionSettings {
    // Step for pulsed evolution. Unset: the smallest pulse width / 50.
    std::optional<double> dt;
    double norm_tolerance = 1e-8;
    // Only the 4th-order scheme is implemented; kept for report metadata.
    int order = 4;
};

// exp(-i H t) for a fixed Hermitian H, diagonalized once and reusable for any t.
class Propagator {
public:
    explicit Propagator(const OperatorMatrix& h);

    StateVector apply(const StateVector& psi, double t) const;
    Eigen::MatrixXcd matrix(double t) const;
    const Eigen::VectorXd& energies() const { return energies_; }
    const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

private:
    SpacePtr space_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

// Exact exp(-i H t) psi. Throws DimensionMismatch or std::invalid_argument (non-Hermitian H).
StateVector evolve_const(const OperatorMatrix& h, const StateVector& psi, double t);

struct PulsedTerm {
    OperatorMatrix op;     // unit-amplitude exchange operator
    GaussianPulse pulse;   // its time-dependent amplitude
};

// Integrates i d/dt psi = (H0 + sum_k nu_k(t) op_k) psi from t_start to t_end.
// Pulses vanish outside +-6 widths; those stretches use the exact exponential of H0.
// Throws NormDriftError when the norm changes by more than settings.norm_tolerance.
StateVector evolve_pulsed(const OperatorMatrix& h0, const std::vector<PulsedTerm>& terms, const StateVector& psi,
                          double t_start, double t_end, const EvolutionSettings& settings = {});

// exp(-i H_eff t) psi without renormalization; ||psi(t)||^2 is the survival probability.
// H_eff must have a negative semidefinite anti-Hermitian part, otherwise NormDriftError.
StateVector evolve_decay(const OperatorMatrix& h_eff, const StateVector& psi, double t,
                         const EvolutionSettings& settings = {});

// Squared norms ||exp(-i H_eff k dt) psi||^2 for k = 0..n_steps.
std::vector<double> decay_survival_grid(const OperatorMatrix& h_eff, const StateVector& psi, double dt,
                                        std::size_t n_steps, const EvolutionSettings& settings = {});

struct RabiPeriods {
    double tau1;  // one excitation in the cavity
    double tau2;  // two excitations
};

// tau1 = pi hbar / g, tau2 = pi hbar / (g sqrt 2).
RabiPeriods rabi_periods(double g, double hbar = 1.0);

}  // namespace tch
