#include "tchlab/walk.hpp"

#include "tchlab/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace tch::walk {

namespace {
constexpr cplx kI{0.0, 1.0};

Eigen::MatrixXcd diagonal_in_momentum(std::size_t n, const std::vector<double>& values) {
    const Eigen::MatrixXcd f = qft_matrix(n);
    const Eigen::VectorXcd d = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(n)).cast<cplx>();
    return f * d.asDiagonal() * f.adjoint();
}
}  // namespace

Eigen::MatrixXcd qft_matrix(std::size_t n) {
    if (n == 0) throw std::invalid_argument("QFT needs N >= 1");
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd f(N, N);
    const double scale = 1.0 / std::sqrt(double(n));
    for (Eigen::Index a = 0; a < N; ++a)
        for (Eigen::Index c = 0; c < N; ++c) {
            // Reduce a*c mod N first so the phase argument stays small.
            const double k = double((a * c) % N);
            f(a, c) = std::polar(scale, -2.0 * std::numbers::pi * k / double(n));
        }
    return f;
}

Eigen::MatrixXcd inverse_qft_matrix(std::size_t n) { return qft_matrix(n).adjoint(); }

std::vector<double> momentum_values(std::size_t n) {
    if (n < 2) throw std::invalid_argument("momentum grid needs N >= 2");
    std::vector<double> p(n);
    const double root = std::sqrt(double(n));
    for (std::size_t a = 0; a < n; ++a) p[a] = root * (double(a) / double(n) - 0.5);
    return p;
}

Eigen::MatrixXcd momentum_operator(std::size_t n) { return diagonal_in_momentum(n, momentum_values(n)); }

Eigen::MatrixXcd free_hamiltonian(std::size_t n, double mass) {
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    std::vector<double> e = momentum_values(n);
    for (double& v : e) v = v * v / (2.0 * mass);
    return diagonal_in_momentum(n, e);
}

Eigen::MatrixXcd CouplingNetwork::to_matrix() const {
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t q = 0; q < n; ++q) h(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)) = diagonal[q];
    for (const auto& c : couplings) {
        const cplx v = std::polar(c.r, c.phi);
        h(static_cast<Eigen::Index>(c.q), static_cast<Eigen::Index>(c.p)) = v;
        h(static_cast<Eigen::Index>(c.p), static_cast<Eigen::Index>(c.q)) = std::conj(v);
    }
    return h;
}

std::vector<HopSpec> CouplingNetwork::hops() const {
    std::vector<HopSpec> out;
    out.reserve(couplings.size());
    for (const auto& c : couplings) out.push_back({c.q, c.p, c.r, c.phi});
    return out;
}

CouplingNetwork coupling_network(const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) throw DimensionMismatch("coupling network needs a square matrix");
    if (h.size() > 0 && (h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("coupling network needs a Hermitian matrix");
    CouplingNetwork net;
    net.n = static_cast<std::size_t>(h.rows());
    net.diagonal.resize(net.n);
    for (std::size_t q = 0; q < net.n; ++q) {
        const auto qi = static_cast<Eigen::Index>(q);
        net.diagonal[q] = h(qi, qi).real();
        for (std::size_t p = q + 1; p < net.n; ++p) {
            const cplx v = h(qi, static_cast<Eigen::Index>(p));
            if (v == cplx{}) continue;
            net.couplings.push_back({q, p, std::abs(v), std::arg(v)});
        }
    }
    return net;
}

DistanceProfile distance_profile(const CouplingNetwork& net) {
    std::map<std::size_t, std::tuple<double, double, std::size_t>> acc;
    for (const auto& c : net.couplings) {
        auto& [r, phi, count] = acc[c.p - c.q];
        r += c.r;
        phi += c.phi;
        ++count;
    }
    DistanceProfile out;
    for (const auto& [d, v] : acc) {
        const auto& [r, phi, count] = v;
        out.distance.push_back(d);
        out.mean_r.push_back(r / double(count));
        out.mean_phi.push_back(phi / double(count));
    }
    return out;
}

cplx feynman_kernel(double x, double t, double mass, double a_const, double hbar) {
    if (!(t > 0.0)) throw DomainError("Feynman kernel is defined for t > 0");
    return a_const / std::sqrt(t) * std::exp(kI * (mass * x * x / (hbar * t)));
}

SpacePtr walk_space(std::size_t n) {
    NetworkConfig cfg;
    cfg.n_cavities = n;
    cfg.atoms_per_cavity.assign(n, 0);
    cfg.max_photons_per_cavity = 1;
    cfg.omega = 1.0;
    return enumerate_basis(cfg, 1);
}

OperatorMatrix network_operator(const SpacePtr& space, const CouplingNetwork& net) {
    if (space->config().n_cavities != net.n) throw DimensionMismatch("network and space sizes differ");
    return build_onsite(space, net.diagonal) + build_hopping(space, net.hops());
}

Eigen::VectorXcd cavity_amplitudes(const StateVector& psi) {
    const std::size_t n = psi.space->config().n_cavities;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < psi.space->dim(); ++k) {
        const BasisState& b = psi.space->state(k);
        for (std::size_t q = 0; q < n; ++q)
            if (b.photons[q] == 1) out(static_cast<Eigen::Index>(q)) = psi.amplitudes(static_cast<Eigen::Index>(k));
    }
    return out;
}

void WalkConfig::validate() const {
    if (n < 2) throw std::invalid_argument("walk needs N >= 2");
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    if (resolved_q0() >= n) throw std::invalid_argument("initial cavity out of range");
    if (!(resolved_t_max() > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (steps < 1) throw std::invalid_argument("need at least one time step");
}

double position_variance(const Eigen::VectorXcd& amplitudes, std::size_t q0) {
    double mean = 0.0, second = 0.0, total = 0.0;
    for (Eigen::Index q = 0; q < amplitudes.size(); ++q) {
        const double w = std::norm(amplitudes(q));
        const double x = double(q) - double(q0);
        total += w;
        mean += w * x;
        second += w * x * x;
    }
    mean /= total;
    return second / total - mean * mean;
}

double power_law_exponent(const std::vector<double>& t, const std::vector<double>& var) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(var[i] > 0.0)) continue;
        const double x = std::log(t[i]), y = std::log(var[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 2) throw std::invalid_argument("power-law fit needs two positive points");
    const double kk = double(k);
    return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

ExperimentReport simulate_walk(const WalkConfig& config) {
    config.validate();
    const std::size_t n = config.n;
    const std::size_t q0 = config.resolved_q0();
    const double t_max = config.resolved_t_max();

    const Eigen::MatrixXcd h = free_hamiltonian(n, config.mass);
    const CouplingNetwork net = coupling_network(h);
    const SpacePtr space = walk_space(n);
    const Propagator prop(network_operator(space, net));
    BasisState start{std::vector<int>(n, 0), {}};
    start.photons[q0] = 1;
    const StateVector psi0 = basis_vector(space, start);
    const Eigen::MatrixXcd f = qft_matrix(n);
    const Eigen::VectorXd pop0 = (f.adjoint() * cavity_amplitudes(psi0)).cwiseAbs();

    ExperimentReport r;
    r.experiment = "walk";
    r.parameters = {{"n", n}, {"mass", config.mass}, {"q0", q0}, {"t_max", t_max},
                    {"steps", config.steps}, {"kernel_a", config.kernel_a}};
    Table& amp = r.add_table("walk_amplitude", {"cavity", "time", "re", "im"});
    Table& ker = r.add_table("kernel", {"x", "time", "re", "im"});

    double momentum_drift = 0.0, unitarity = 0.0, asymmetry = 0.0;
    std::vector<double> times, variances;
    const double root = std::sqrt(double(n));
    for (std::size_t k = 0; k <= config.steps; ++k) {
        const double t = t_max * double(k) / double(config.steps);
        const Eigen::VectorXcd a = cavity_amplitudes(prop.apply(psi0, t));
        unitarity = std::max(unitarity, std::abs(a.squaredNorm() - 1.0));
        momentum_drift = std::max(momentum_drift, ((f.adjoint() * a).cwiseAbs() - pop0).cwiseAbs().maxCoeff());
        if (2 * q0 == n)
            for (std::size_t q = 1; q < n; ++q)
                asymmetry = std::max(asymmetry, std::abs(std::abs(a(Eigen::Index(q))) - std::abs(a(Eigen::Index(n - q)))));
        for (std::size_t q = 0; q < n; ++q) amp.add_row({double(q), t, a(Eigen::Index(q)).real(), a(Eigen::Index(q)).imag()});
        times.push_back(t);
        variances.push_back(position_variance(a, q0));
        if (t > 0.0) {
            for (std::size_t q = 0; q < n; ++q) {
                const double x = (double(q) - double(q0)) / root;
                const cplx kv = feynman_kernel(x, t, config.mass, config.kernel_a);
                ker.add_row({x, t, kv.real(), kv.imag()});
            }
        }
    }

    Table& netw = r.add_table("network", {"q", "p", "r", "phi"});
    for (const auto& c : net.couplings) netw.add_row({double(c.q), double(c.p), c.r, c.phi});
    Table& prof = r.add_table("profile", {"distance", "r", "phi"});
    const DistanceProfile dp = distance_profile(net);
    for (std::size_t i = 0; i < dp.distance.size(); ++i) prof.add_row({double(dp.distance[i]), dp.mean_r[i], dp.mean_phi[i]});

    r.summary["momentum_conservation"] = momentum_drift;
    r.summary["unitarity_error"] = unitarity;
    r.summary["variance_exponent"] = power_law_exponent(times, variances);
    r.summary["reflection_asymmetry"] = 2 * q0 == n ? nlohmann::json(asymmetry) : nlohmann::json(nullptr);
    r.summary["onsite_energy"] = net.diagonal.empty() ? 0.0 : net.diagonal.front();
    return r;
}

}  // namespace tch::walk
