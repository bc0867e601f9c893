#include "tchlab/gate.hpp"

#include "tchlab/errors.hpp"
#include "tchlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tch::gate {

namespace {

constexpr cplx kI{0.0, 1.0};

BasisState encoded_basis(int x, int y) {
    return BasisState{{x, y, 0}, {static_cast<std::uint8_t>(1 - x), static_cast<std::uint8_t>(1 - y), 0}};
}

HopSpec exchange_hop(std::size_t cavity) {
    return HopSpec{kCavityAux, cavity, 1.0, 0.0};
}

}  // namespace

TwoQubitState TwoQubitState::basis(int x, int y) {
    if ((x != 0 && x != 1) || (y != 0 && y != 1)) throw std::invalid_argument("qubit values are 0 or 1");
    TwoQubitState q;
    q.amp[static_cast<std::size_t>(2 * x + y)] = 1.0;
    return q;
}

TwoQubitState TwoQubitState::uniform() {
    TwoQubitState q;
    q.amp.fill(0.5);
    return q;
}

TwoQubitState TwoQubitState::parse(const std::string& label) {
    if (label == "psi0") return uniform();
    if (label.size() == 2 && (label[0] == '0' || label[0] == '1') && (label[1] == '0' || label[1] == '1'))
        return basis(label[0] - '0', label[1] - '0');
    throw std::invalid_argument("two-qubit input must be 00, 01, 10, 11 or psi0, got '" + label + "'");
}

double TwoQubitState::norm_squared() const {
    double n = 0.0;
    for (const auto& a : amp) n += std::norm(a);
    return n;
}

double area_rule_alpha(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    return std::numbers::pi / (2.0 * sigma * std::sqrt(2.0 * std::numbers::pi));
}

double GateConfig::resolved_alpha() const { return alpha ? *alpha : area_rule_alpha(sigma); }

double GateConfig::resolved_dt() const {
    if (settings.dt) return *settings.dt;
    return std::min(sigma / 50.0, rabi_periods(g).tau1 / 200.0);
}

void GateConfig::validate() const {
    if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (alpha && !(*alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("n1 and n2 must be positive");
}

SpacePtr gate_space(double g, double omega) {
    return enumerate_basis(uniform_network(3, 1, g, 2, omega), 2);
}

StateVector encode(const TwoQubitState& q, const SpacePtr& space) {
    if (space->config().n_cavities != 3 || space->sector() != 2)
        throw DimensionMismatch("encoding needs the three-cavity, two-excitation space");
    StateVector psi{space, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dim()))};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            psi.amplitudes(static_cast<Eigen::Index>(space->index_of(encoded_basis(x, y)))) +=
                q.amp[static_cast<std::size_t>(2 * x + y)];
    return psi;
}

TwoQubitState decode(const StateVector& psi) {
    TwoQubitState q;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) q.amp[static_cast<std::size_t>(2 * x + y)] = psi.amplitude(encoded_basis(x, y));
    return q;
}

std::vector<ResonancePair> resonance_table(int n_max, std::size_t top) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<ResonancePair> all;
    all.reserve(static_cast<std::size_t>(n_max) * static_cast<std::size_t>(n_max));
    // In units of tau1: 2 n2 tau2 = sqrt(2) n2.
    for (int n1 = 1; n1 <= n_max; ++n1)
        for (int n2 = 1; n2 <= n_max; ++n2)
            all.push_back({n1, n2, std::abs(std::numbers::sqrt2 * n2 - 2.0 * n1 - 0.5)});
    auto less = [](const ResonancePair& a, const ResonancePair& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        if (a.n2 != b.n2) return a.n2 < b.n2;
        return a.n1 < b.n1;
    };
    top = std::min(top, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(top), all.end(), less);
    all.resize(top);
    return all;
}

ResonancePair find_resonance(double g, int n_max) {
    if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
    return resonance_table(n_max, 1).front();
}

double PulseSchedule::total_duration() const {
    double t = 0.0;
    for (const auto& ev : events) std::visit([&](const auto& e) { t = std::max(t, e.start + e.duration); }, ev);
    return t;
}

PulseSchedule cocsign_schedule(const GateConfig& config) {
    config.validate();
    const RabiPeriods tau = rabi_periods(config.g);
    const double window = 2.0 * GaussianPulse::kTruncation * config.sigma;
    if (window >= tau.tau1 / 2.0)
        throw OverlapError("exchange window 12 sigma = " + std::to_string(window) + " does not fit in tau1/2");

    PulseSchedule s;
    if (config.sigma > tau.tau1 / 10.0) s.warnings.push_back("sigma exceeds tau1/10; exchanges are not short");
    const double alpha = config.resolved_alpha();
    double t = 0.0;
    auto exchange = [&](std::size_t cavity) {
        GaussianPulse p{exchange_hop(cavity), t + window / 2.0, config.sigma, alpha};
        s.events.emplace_back(Exchange{t, window, p});
        t += window;
    };
    auto idle = [&](double d) {
        s.events.emplace_back(FreeSegment{t, d});
        t += d;
    };
    exchange(kCavityX);
    idle(tau.tau1 / 2.0);
    exchange(kCavityY);
    idle(2.0 * config.n2 * tau.tau2);
    exchange(kCavityX);
    idle(tau.tau1 / 2.0);
    exchange(kCavityY);
    idle(tau.tau1 / 2.0);
    return s;
}

StateVector run_gate(const TwoQubitState& q_in, const GateConfig& config) {
    const PulseSchedule schedule = cocsign_schedule(config);
    const SpacePtr space = gate_space(config.g, config.omega);
    const OperatorMatrix h0 = build_tch(space, {});
    const Propagator free_prop(h0);
    EvolutionSettings settings = config.settings;
    settings.dt = config.resolved_dt();

    StateVector psi = encode(q_in, space);
    for (const auto& ev : schedule.events) {
        if (const auto* f = std::get_if<FreeSegment>(&ev)) {
            psi = free_prop.apply(psi, f->duration);
        } else {
            const auto& ex = std::get<Exchange>(ev);
            const PulsedTerm term{jump_operator(space, ex.pulse.hop), ex.pulse};
            psi = evolve_pulsed(h0, {term}, psi, ex.start, ex.start + ex.duration, settings);
        }
    }
    return psi;
}

StateVector run_gate_instantaneous(const TwoQubitState& q_in, const GateConfig& config) {
    config.validate();
    const RabiPeriods tau = rabi_periods(config.g);
    const SpacePtr space = gate_space(config.g, config.omega);
    const Propagator free_prop(build_tch(space, {}));
    const Propagator swap_x(jump_operator(space, exchange_hop(kCavityX)));
    const Propagator swap_y(jump_operator(space, exchange_hop(kCavityY)));
    const double quarter = std::numbers::pi / 2.0;

    StateVector psi = encode(q_in, space);
    psi = swap_x.apply(psi, quarter);
    psi = free_prop.apply(psi, tau.tau1 / 2.0);
    psi = swap_y.apply(psi, quarter);
    psi = free_prop.apply(psi, 2.0 * config.n2 * tau.tau2);
    psi = swap_x.apply(psi, quarter);
    psi = free_prop.apply(psi, tau.tau1 / 2.0);
    psi = swap_y.apply(psi, quarter);
    psi = free_prop.apply(psi, tau.tau1 / 2.0);
    return psi;
}

TwoQubitState ideal_cocsign(const TwoQubitState& q, CoCSignConvention conv) {
    TwoQubitState out = q;
    // Index 2x + y: |01> is 1, |10> is 2.
    out.amp[conv == CoCSignConvention::FlipsZeroOne ? 1 : 2] *= -1.0;
    return out;
}

cplx reference_phase(const GateConfig& config, double total_duration) {
    return -std::exp(-kI * (2.0 * config.omega * total_duration));
}

StateVector ideal_gate_state(const TwoQubitState& q, const GateConfig& config, double total_duration) {
    StateVector psi = encode(ideal_cocsign(q), gate_space(config.g, config.omega));
    psi.amplitudes *= reference_phase(config, total_duration);
    return psi;
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& rho_id) {
    if (rho.rows() != rho_id.rows() || rho.cols() != rho_id.cols())
        throw DimensionMismatch("density matrices differ in dimension");
    const Eigen::MatrixXcd delta = rho - rho_id;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(delta);
    return svd.singularValues().sum();
}

double trace_distance(const StateVector& psi, const StateVector& psi_id) {
    if (psi.amplitudes.size() != psi_id.amplitudes.size()) throw DimensionMismatch("state dimensions differ");
    return trace_distance(Eigen::MatrixXcd(psi.amplitudes * psi.amplitudes.adjoint()),
                          Eigen::MatrixXcd(psi_id.amplitudes * psi_id.amplitudes.adjoint()));
}

double modular_distance(const StateVector& psi, const StateVector& psi_id) {
    if (psi.amplitudes.size() != psi_id.amplitudes.size()) throw DimensionMismatch("state dimensions differ");
    return (psi.amplitudes - psi_id.amplitudes).squaredNorm();
}

double aligned_modular_distance(const StateVector& psi, const StateVector& psi_id) {
    if (psi.amplitudes.size() != psi_id.amplitudes.size()) throw DimensionMismatch("state dimensions differ");
    const double overlap = std::abs(psi_id.amplitudes.dot(psi.amplitudes));
    return std::max(0.0, psi.norm_squared() + psi_id.norm_squared() - 2.0 * overlap);
}

GateScore score_gate(const TwoQubitState& q_in, const GateConfig& config) {
    const double total = cocsign_schedule(config).total_duration();
    const StateVector psi = run_gate(q_in, config);
    const StateVector ideal = ideal_gate_state(q_in, config, total);
    GateScore s;
    s.d_tr = trace_distance(psi, ideal);
    s.d_mod = modular_distance(psi, ideal);
    s.d_mod_aligned = aligned_modular_distance(psi, ideal);
    s.norm_squared = psi.norm_squared();
    const TwoQubitState out = decode(psi);
    const cplx ref = reference_phase(config, total);
    for (std::size_t k = 0; k < 4; ++k) s.branch[k] = out.amp[k] / ref;
    return s;
}

ExperimentReport sweep(const SweepSpec& spec) {
    if (spec.alphas.empty() || spec.sigmas.empty() || spec.pairs.empty())
        throw std::invalid_argument("sweep grids must be non-empty");
    const std::size_t na = spec.alphas.size();
    const std::size_t ns = spec.sigmas.size();
    const std::size_t n = spec.pairs.size() * ns * na;
    std::vector<GateScore> scores(n);
    auto config_at = [&](std::size_t i) {
        GateConfig c = spec.base;
        const auto& pair = spec.pairs[i / (ns * na)];
        c.n1 = pair.n1;
        c.n2 = pair.n2;
        c.sigma = spec.sigmas[(i / na) % ns];
        c.alpha = spec.alphas[i % na];
        return c;
    };
    parallel_for(n, spec.threads, [&](std::size_t i) { scores[i] = score_gate(spec.input, config_at(i)); });

    ExperimentReport r;
    r.experiment = "gate";
    Table& t = r.add_table("gate_sweep", {"alpha", "sigma", "n1", "n2", "d_tr", "d_mod"});
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const GateConfig c = config_at(i);
        t.add_row({*c.alpha, c.sigma, double(c.n1), double(c.n2), scores[i].d_tr, scores[i].d_mod});
        if (scores[i].d_mod < scores[best].d_mod) best = i;
    }
    const GateConfig b = config_at(best);
    r.summary["best"] = {{"alpha", *b.alpha},        {"sigma", b.sigma},
                         {"n1", b.n1},               {"n2", b.n2},
                         {"d_tr", scores[best].d_tr}, {"d_mod", scores[best].d_mod},
                         {"d_mod_aligned", scores[best].d_mod_aligned}};
    return r;
}

double min_transfer_time(double delta_omega_max) {
    if (!(delta_omega_max > 0.0)) throw std::invalid_argument("frequency uncertainty must be positive");
    return 1.0 / delta_omega_max;
}

TransferBound transfer_bound(double delta_omega_max, double tau1) {
    if (!(tau1 > 0.0)) throw std::invalid_argument("tau1 must be positive");
    TransferBound b;
    b.delta_tau = min_transfer_time(delta_omega_max);
    b.ratio = b.delta_tau / tau1;
    b.flagged = b.ratio >= 1e-3;
    return b;
}

namespace ops {

Eigen::Matrix4cd csign() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(3, 3) = -1.0;
    return m;
}

Eigen::Matrix4cd cnot() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 1) = 1.0;
    m(2, 3) = m(3, 2) = 1.0;
    return m;
}

Eigen::Matrix4cd cocsign(CoCSignConvention conv) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    const int k = conv == CoCSignConvention::FlipsZeroOne ? 1 : 2;
    m(k, k) = -1.0;
    return m;
}

namespace {
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
}
Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}
}  // namespace

Eigen::Matrix4cd pauli_x_on_x() { return kron(pauli_x(), Eigen::Matrix2cd::Identity()); }
Eigen::Matrix4cd pauli_x_on_y() { return kron(Eigen::Matrix2cd::Identity(), pauli_x()); }

Eigen::Matrix4cd hadamard_on_y() {
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    h /= std::numbers::sqrt2;
    return kron(Eigen::Matrix2cd::Identity(), h);
}

}  // namespace ops

}  // namespace tch::gate
