#pragma once

// coCSign gate on asynchronous atomic excitations in three coupled cavities
// (register cavities x and y, one auxiliary cavity), each holding one atom.
//
// Qubit encoding per register cavity: |0> = no photon, atom excited; |1> = one photon, atom ground.
// The auxiliary cavity starts empty with its atom in the ground state.

#include "tchlab/evolution.hpp"
#include "tchlab/report.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tch::gate {

inline constexpr std::size_t kCavityX = 0;
inline constexpr std::size_t kCavityY = 1;
inline constexpr std::size_t kCavityAux = 2;

enum class CoCSignConvention {
    FlipsZeroOne,  // (-1)^{(x xor 1) y}: flips |01>
    FlipsOneZero,  // (-1)^{x (y xor 1)}: flips |10>
};

// Amplitudes over |00>, |01>, |10>, |11> (index 2x + y).
struct TwoQubitState {
    std::array<cplx, 4> amp{};

    static TwoQubitState basis(int x, int y);
    static TwoQubitState uniform();  // (|00>+|01>+|10>+|11>)/2
    // "00", "01", "10", "11" or "psi0".
    static TwoQubitState parse(const std::string& label);
    double norm_squared() const;
};

struct GateConfig {
    double g = 1e-3;
    double omega = 1.0;
    double sigma = 0.5;
    // Pulse peak; unset means the full-swap area rule.
    std::optional<double> alpha;
    int n1 = 4;
    int n2 = 6;
    EvolutionSettings settings;

    double resolved_alpha() const;
    // min(sigma/50, tau1/200) unless settings.dt is set.
    double resolved_dt() const;
    void validate() const;
};

// Peak giving an exchange pulse of area pi/2 (hbar = 1): pi / (2 sigma sqrt(2 pi)).
double area_rule_alpha(double sigma);

SpacePtr gate_space(double g, double omega = 1.0);

StateVector encode(const TwoQubitState& q, const SpacePtr& space);
// Projection onto the four encoded basis states (no renormalization).
TwoQubitState decode(const StateVector& psi);

struct ResonancePair {
    int n1 = 0;
    int n2 = 0;
    double residual = 0.0;  // |2 n2 tau2 - 2 n1 tau1 - tau1/2| / tau1
};

// Pair minimizing the residual over 1 <= n1, n2 <= n_max; ties go to smaller n2, then n1.
// The residual is a pure number, so `g` only fixes the time unit and does not affect the result.
ResonancePair find_resonance(double g, int n_max);
// Best `top` pairs in ascending residual (same tie rule).
std::vector<ResonancePair> resonance_table(int n_max, std::size_t top);

struct FreeSegment {
    double start = 0.0;
    double duration = 0.0;
};

struct Exchange {
    double start = 0.0;
    double duration = 0.0;  // 12 sigma window, pulse centred inside it
    GaussianPulse pulse;
};

using ScheduleEvent = std::variant<FreeSegment, Exchange>;

struct PulseSchedule {
    std::vector<ScheduleEvent> events;
    std::vector<std::string> warnings;

    double total_duration() const;
};

// Exchange(aux,x); free tau1/2; exchange(aux,y); free 2 n2 tau2; exchange(aux,x); free tau1/2;
// exchange(aux,y); free tau1/2. Throws OverlapError when a 12 sigma window does not fit in tau1/2.
PulseSchedule cocsign_schedule(const GateConfig& config);

// Simulates the schedule on encode(q_in). Residual auxiliary amplitude is kept.
StateVector run_gate(const TwoQubitState& q_in, const GateConfig& config);
// Same schedule with each exchange replaced by the exact swap exp(-i pi/2 J) and zero-length windows.
StateVector run_gate_instantaneous(const TwoQubitState& q_in, const GateConfig& config);

TwoQubitState ideal_cocsign(const TwoQubitState& q, CoCSignConvention conv = CoCSignConvention::FlipsZeroOne);

// Global phase picked up by an ideal run of the schedule: -exp(-2 i omega T).
cplx reference_phase(const GateConfig& config, double total_duration);
// reference_phase * encode(ideal_cocsign(q)).
StateVector ideal_gate_state(const TwoQubitState& q, const GateConfig& config, double total_duration);

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& rho_id);
double trace_distance(const StateVector& psi, const StateVector& psi_id);
double modular_distance(const StateVector& psi, const StateVector& psi_id);
// min over theta of modular_distance(e^{i theta} psi, psi_id).
double aligned_modular_distance(const StateVector& psi, const StateVector& psi_id);

struct GateScore {
    double d_tr = 0.0;
    double d_mod = 0.0;
    double d_mod_aligned = 0.0;
    double norm_squared = 0.0;
    // <enc(b)|psi_out> / reference_phase for each two-qubit basis state b.
    std::array<cplx, 4> branch{};
};

GateScore score_gate(const TwoQubitState& q_in, const GateConfig& config);

struct SweepSpec {
    std::vector<double> alphas;
    std::vector<double> sigmas;
    std::vector<ResonancePair> pairs;
    TwoQubitState input = TwoQubitState::uniform();
    GateConfig base;
    unsigned threads = 1;
};

// Table "gate_sweep" with columns alpha, sigma, n1, n2, d_tr, d_mod, rows ordered pair, sigma, alpha.
ExperimentReport sweep(const SweepSpec& spec);

// Lower bound on the exchange window from delta_omega * delta_t ~ 1.
double min_transfer_time(double delta_omega_max);

struct TransferBound {
    double delta_tau = 0.0;
    double ratio = 0.0;  // delta_tau / tau1
    bool flagged = false;  // ratio >= 1e-3
};

TransferBound transfer_bound(double delta_omega_max, double tau1);

// 4x4 reference gates in the |xy> basis (index 2x + y).
namespace ops {
Eigen::Matrix4cd csign();
Eigen::Matrix4cd cnot();  // control x, target y
Eigen::Matrix4cd cocsign(CoCSignConvention conv);
Eigen::Matrix4cd pauli_x_on_x();
Eigen::Matrix4cd pauli_x_on_y();
Eigen::Matrix4cd hadamard_on_y();
}  // namespace ops

}  // namespace tch::gate
