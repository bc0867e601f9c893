#include "tchlab/evolution.hpp"

#include "tchlab/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace tch {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_same_space(const OperatorMatrix& h, const StateVector& psi) {
    if (h.dim() != static_cast<std::size_t>(psi.amplitudes.size()))
        throw DimensionMismatch("operator and state dimensions differ");
}

Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void check_decay_generator(const OperatorMatrix& h_eff) {
    const Eigen::MatrixXcd anti = (h_eff.entries - h_eff.entries.adjoint()) / (2.0 * kI);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(anti, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().size() > 0 && es.eigenvalues().maxCoeff() > 1e-12)
        throw NormDriftError("effective Hamiltonian has a gain component; norm would increase");
}

}  // namespace

StateVector basis_vector(const SpacePtr& space, const BasisState& b) {
    StateVector psi{space, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dim()))};
    psi.amplitudes(static_cast<Eigen::Index>(space->index_of(b))) = 1.0;
    return psi;
}

Propagator::Propagator(const OperatorMatrix& h) : space_(h.space) {
    if (!h.is_hermitian(1e-10)) throw std::invalid_argument("exact propagation needs a Hermitian operator");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

Eigen::MatrixXcd Propagator::matrix(double t) const {
    const Eigen::VectorXcd phases = (-kI * t * energies_.cast<cplx>()).array().exp();
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

StateVector Propagator::apply(const StateVector& psi, double t) const {
    if (static_cast<Eigen::Index>(psi.amplitudes.size()) != energies_.size())
        throw DimensionMismatch("operator and state dimensions differ");
    if (t == 0.0) return psi;
    const Eigen::VectorXcd phases = (-kI * t * energies_.cast<cplx>()).array().exp();
    Eigen::VectorXcd coeff = vectors_.adjoint() * psi.amplitudes;
    coeff = phases.cwiseProduct(coeff);
    return {psi.space, vectors_ * coeff};
}

StateVector evolve_const(const OperatorMatrix& h, const StateVector& psi, double t) {
    require_same_space(h, psi);
    return Propagator(h).apply(psi, t);
}

StateVector evolve_pulsed(const OperatorMatrix& h0, const std::vector<PulsedTerm>& terms, const StateVector& psi,
                          double t_start, double t_end, const EvolutionSettings& settings) {
    require_same_space(h0, psi);
    if (!(t_end > t_start)) throw std::invalid_argument("evolve_pulsed needs t_end > t_start");
    for (const auto& term : terms) {
        require_same_space(term.op, psi);
        term.pulse.validate();
    }

    double dt = 0.0;
    if (settings.dt) {
        dt = *settings.dt;
    } else {
        dt = t_end - t_start;
        for (const auto& term : terms) dt = std::min(dt, term.pulse.width / 50.0);
    }
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");

    // Union of the active pulse windows clipped to [t_start, t_end].
    std::vector<std::pair<double, double>> active;
    for (const auto& term : terms) {
        if (term.pulse.peak == 0.0) continue;
        const double a = std::max(t_start, term.pulse.window_begin());
        const double b = std::min(t_end, term.pulse.window_end());
        if (b > a) active.emplace_back(a, b);
    }
    std::sort(active.begin(), active.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : active) {
        if (!merged.empty() && iv.first <= merged.back().second) merged.back().second = std::max(merged.back().second, iv.second);
        else merged.push_back(iv);
    }

    const Propagator free_prop(h0);
    const double norm_in = psi.norm_squared();
    Eigen::VectorXcd state = psi.amplitudes;

    // Commutator-free Magnus, two exponentials at the Gauss-Legendre nodes.
    const double s3 = std::sqrt(3.0);
    const double c1 = 0.5 - s3 / 6.0;
    const double c2 = 0.5 + s3 / 6.0;
    const double w1 = (3.0 - 2.0 * s3) / 12.0;
    const double w2 = (3.0 + 2.0 * s3) / 12.0;
    auto h_at = [&](double t) {
        Eigen::MatrixXcd h = h0.entries;
        for (const auto& term : terms) {
            const double v = truncated_pulse_value(term.pulse, t);
            if (v != 0.0) h += v * term.op.entries;
        }
        return h;
    };

    double t = t_start;
    for (const auto& [a, b] : merged) {
        if (a > t) state = free_prop.apply({psi.space, state}, a - t).amplitudes;
        const auto n = static_cast<std::size_t>(std::ceil((b - a) / dt - 1e-9));
        const double h = (b - a) / static_cast<double>(std::max<std::size_t>(n, 1));
        for (std::size_t k = 0; k < std::max<std::size_t>(n, 1); ++k) {
            const double t0 = a + h * static_cast<double>(k);
            const Eigen::MatrixXcd h1 = h_at(t0 + c1 * h);
            const Eigen::MatrixXcd h2 = h_at(t0 + c2 * h);
            state = hermitian_exp(w2 * h1 + w1 * h2, h) * state;
            state = hermitian_exp(w1 * h1 + w2 * h2, h) * state;
        }
        t = b;
    }
    if (t_end > t) state = free_prop.apply({psi.space, state}, t_end - t).amplitudes;

    const double drift = std::abs(state.squaredNorm() - norm_in);
    if (drift > settings.norm_tolerance)
        throw NormDriftError("pulsed evolution changed the norm by " + std::to_string(drift) + "; reduce dt");
    return {psi.space, std::move(state)};
}

StateVector evolve_decay(const OperatorMatrix& h_eff, const StateVector& psi, double t,
                         const EvolutionSettings& settings) {
    require_same_space(h_eff, psi);
    check_decay_generator(h_eff);
    if (t == 0.0) return psi;
    const Eigen::MatrixXcd u = (-kI * t * h_eff.entries).exp();
    StateVector out{psi.space, u * psi.amplitudes};
    if (out.norm_squared() > psi.norm_squared() + settings.norm_tolerance)
        throw NormDriftError("decay evolution increased the norm");
    return out;
}

std::vector<double> decay_survival_grid(const OperatorMatrix& h_eff, const StateVector& psi, double dt,
                                        std::size_t n_steps, const EvolutionSettings& settings) {
    require_same_space(h_eff, psi);
    check_decay_generator(h_eff);
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const Eigen::MatrixXcd step = (-kI * dt * h_eff.entries).exp();
    std::vector<double> s;
    s.reserve(n_steps + 1);
    Eigen::VectorXcd state = psi.amplitudes;
    s.push_back(state.squaredNorm());
    for (std::size_t k = 0; k < n_steps; ++k) {
        state = step * state;
        const double n = state.squaredNorm();
        if (n > s.back() + settings.norm_tolerance) throw NormDriftError("survival probability increased");
        s.push_back(n);
    }
    return s;
}

RabiPeriods rabi_periods(double g, double hbar) {
    if (!(g > 0.0)) throw std::invalid_argument("coupling must be positive");
    const double tau1 = std::numbers::pi * hbar / g;
    return {tau1, tau1 / std::numbers::sqrt2};
}

}  // namespace tch
