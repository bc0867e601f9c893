#include "tchlab/hamiltonians.hpp"

#include "tchlab/errors.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

namespace tch {

double OperatorMatrix::hermiticity_error() const {
    if (entries.size() == 0) return 0.0;
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
    if (space != other.space && (space->dim() != other.space->dim() || space->sector() != other.space->sector()))
        throw DimensionMismatch("operators live on different spaces");
    entries += other.entries;
    return *this;
}

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) {
    a += b;
    return a;
}

OperatorMatrix operator*(double s, OperatorMatrix a) {
    a.entries *= s;
    return a;
}

void HopSpec::validate(std::size_t n_cavities) const {
    if (cavity_i >= n_cavities || cavity_j >= n_cavities) throw std::invalid_argument("hop cavity index out of range");
    if (cavity_i == cavity_j) throw std::invalid_argument("hop must join two distinct cavities");
    if (!(amplitude >= 0.0)) throw std::invalid_argument("hop amplitude must be non-negative");
}

void GaussianPulse::validate() const {
    if (!(width > 0.0)) throw std::invalid_argument("pulse width must be positive");
    if (!(peak >= 0.0)) throw std::invalid_argument("pulse peak must be non-negative");
}

namespace {

OperatorMatrix zero_operator(const SpacePtr& space) {
    const auto d = static_cast<Eigen::Index>(space->dim());
    return {space, Eigen::MatrixXcd::Zero(d, d)};
}

void add_hops(OperatorMatrix& op, const std::vector<HopSpec>& hops) {
    const HilbertSpace& sp = *op.space;
    const int cap = sp.config().max_photons_per_cavity;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& h : hops) {
        h.validate(sp.config().n_cavities);
        auto key = std::minmax(h.cavity_i, h.cavity_j);
        if (!seen.insert(key).second)
            throw DuplicateHopError("duplicate hop between cavities " + std::to_string(key.first) + " and " +
                                    std::to_string(key.second));
    }
    for (std::size_t k = 0; k < sp.dim(); ++k) {
        const BasisState& b = sp.state(k);
        for (const auto& h : hops) {
            const int ni = b.photons[h.cavity_i];
            const int nj = b.photons[h.cavity_j];
            // a_i^+ a_j ; the h.c. partner is produced when the loop reaches the target state.
            if (nj > 0 && ni < cap) {
                BasisState t = b;
                ++t.photons[h.cavity_i];
                --t.photons[h.cavity_j];
                const std::size_t m = sp.index_of(t);
                const cplx amp = std::polar(h.amplitude, h.phase) * std::sqrt(double(nj) * double(ni + 1));
                op.entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) += amp;
                op.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) += std::conj(amp);
            }
        }
    }
}

}  // namespace

OperatorMatrix build_tc(const SpacePtr& space, std::size_t cavity) {
    const NetworkConfig& cfg = space->config();
    if (cavity >= cfg.n_cavities) throw std::invalid_argument("cavity index out of range");
    OperatorMatrix op = zero_operator(space);
    const std::size_t a0 = cfg.first_atom(cavity);
    const std::size_t a1 = a0 + static_cast<std::size_t>(cfg.atoms_per_cavity[cavity]);
    const int cap = cfg.max_photons_per_cavity;
    for (std::size_t k = 0; k < space->dim(); ++k) {
        const BasisState& b = space->state(k);
        const auto ki = static_cast<Eigen::Index>(k);
        int local = b.photons[cavity];
        for (std::size_t j = a0; j < a1; ++j) local += b.atoms[j];
        op.entries(ki, ki) += cfg.omega * local;
        // a^+ sigma_j: excited atom j gives its quantum to the field.
        for (std::size_t j = a0; j < a1; ++j) {
            const int n = b.photons[cavity];
            if (b.atoms[j] == 1 && n < cap) {
                BasisState t = b;
                t.atoms[j] = 0;
                ++t.photons[cavity];
                const auto mi = static_cast<Eigen::Index>(space->index_of(t));
                const double amp = cfg.couplings[j] * std::sqrt(double(n + 1));
                op.entries(mi, ki) += amp;
                op.entries(ki, mi) += amp;
            }
        }
    }
    return op;
}

OperatorMatrix build_hopping(const SpacePtr& space, const std::vector<HopSpec>& hops) {
    OperatorMatrix op = zero_operator(space);
    add_hops(op, hops);
    return op;
}

OperatorMatrix build_tch(const SpacePtr& space, const std::vector<HopSpec>& hops) {
    OperatorMatrix op = build_hopping(space, hops);
    for (std::size_t c = 0; c < space->config().n_cavities; ++c) op += build_tc(space, c);
    return op;
}

OperatorMatrix jump_operator(const SpacePtr& space, const HopSpec& hop) {
    HopSpec unit = hop;
    unit.amplitude = 1.0;
    return build_hopping(space, {unit});
}

OperatorMatrix build_onsite(const SpacePtr& space, const std::vector<double>& energies) {
    if (energies.size() != space->config().n_cavities)
        throw DimensionMismatch("one on-site energy per cavity required");
    OperatorMatrix op = zero_operator(space);
    for (std::size_t k = 0; k < space->dim(); ++k) {
        double e = 0.0;
        for (std::size_t q = 0; q < energies.size(); ++q) e += energies[q] * space->state(k).photons[q];
        op.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = e;
    }
    return op;
}

double pulse_value(const GaussianPulse& p, double t) {
    const double u = (t - p.center) / p.width;
    return p.peak * std::exp(-0.5 * u * u);
}

double truncated_pulse_value(const GaussianPulse& p, double t) {
    if (t < p.window_begin() || t > p.window_end()) return 0.0;
    return pulse_value(p, t);
}

double pulse_area(const GaussianPulse& p) {
    return p.peak * p.width * std::sqrt(2.0 * std::numbers::pi);
}

double coupling_strength(double omega, double volume, double dipole, double x, double length, double hbar) {
    if (!(volume > 0.0)) throw DomainError("cavity volume must be positive");
    if (!(length > 0.0)) throw DomainError("cavity length must be positive");
    if (x < 0.0 || x > length) throw DomainError("atom position outside the cavity");
    // Field nodes at both mirrors; sin(pi) is not exactly zero in floating point.
    if (x == 0.0 || x == length) return 0.0;
    return std::sqrt(hbar * omega / volume) * dipole * std::sin(std::numbers::pi * x / length);
}

}  // namespace tch
