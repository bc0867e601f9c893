#pragma once

// Tavis-Cummings, Tavis-Cummings-Hubbard and photon-hopping operators over a sector space.
// Units: hbar = 1 unless an explicit hbar argument is taken.

#include "tchlab/hilbert.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace tch {

using cplx = std::complex<double>;

struct OperatorMatrix {
    SpacePtr space;
    Eigen::MatrixXcd entries;

    std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
    // max |H - H^dagger| over all entries.
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }

    OperatorMatrix& operator+=(const OperatorMatrix& other);
};

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator*(double s, OperatorMatrix a);

// Photon hopping nu * e^{i phi} a_i^+ a_j + h.c.
struct HopSpec {
    std::size_t cavity_i = 0;
    std::size_t cavity_j = 1;
    double amplitude = 1.0;
    double phase = 0.0;

    void validate(std::size_t n_cavities) const;
};

// nu(t) = peak * exp(-(t - center)^2 / (2 width^2)) acting on `hop` (hop.amplitude is ignored).
struct GaussianPulse {
    HopSpec hop;
    double center = 0.0;
    double width = 1.0;
    double peak = 0.0;

    void validate() const;
    // Pulses are treated as exactly zero beyond this many widths from the center.
    static constexpr double kTruncation = 6.0;
    double window_begin() const { return center - kTruncation * width; }
    double window_end() const { return center + kTruncation * width; }
};

// Tavis-Cummings term of one cavity: omega (a^+a + sum sigma^+sigma) + sum g_j (a^+ sigma_j + a sigma_j^+).
OperatorMatrix build_tc(const SpacePtr& space, std::size_t cavity);

// Hopping part only: sum over hops of nu e^{i phi} a_i^+ a_j + nu e^{-i phi} a_i a_j^+.
// Throws DuplicateHopError when two hops join the same unordered pair.
OperatorMatrix build_hopping(const SpacePtr& space, const std::vector<HopSpec>& hops);

// Full network Hamiltonian: sum of build_tc over all cavities plus build_hopping.
OperatorMatrix build_tch(const SpacePtr& space, const std::vector<HopSpec>& hops);

// Unit-amplitude exchange term a_i a_j^+ + a_j a_i^+ (with the hop phase when nonzero);
// hop.amplitude is ignored, the time-dependent strength comes from the pulse.
OperatorMatrix jump_operator(const SpacePtr& space, const HopSpec& hop);

// Diagonal sum_q energy_q a_q^+ a_q (atom-free on-site energies).
OperatorMatrix build_onsite(const SpacePtr& space, const std::vector<double>& energies);

double pulse_value(const GaussianPulse& p, double t);
// Same as pulse_value but zero outside the truncation window.
double truncated_pulse_value(const GaussianPulse& p, double t);
// Integral of the untruncated envelope: peak * width * sqrt(2 pi).
double pulse_area(const GaussianPulse& p);

// g = sqrt(hbar omega / V) d sin(pi x / L). Throws DomainError unless 0 <= x <= L and V > 0.
double coupling_strength(double omega, double volume, double dipole, double x, double length, double hbar = 1.0);

}  // namespace tch
