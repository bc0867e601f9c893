#include "tchlab/hilbert.hpp"

#include "tchlab/errors.hpp"

#include <numeric>
#include <stdexcept>

namespace tch {

std::size_t NetworkConfig::total_atoms() const {
    return static_cast<std::size_t>(std::accumulate(atoms_per_cavity.begin(), atoms_per_cavity.end(), 0));
}

std::size_t NetworkConfig::first_atom(std::size_t cavity) const {
    std::size_t k = 0;
    for (std::size_t c = 0; c < cavity; ++c) k += static_cast<std::size_t>(atoms_per_cavity.at(c));
    return k;
}

void NetworkConfig::validate() const {
    if (n_cavities == 0) throw std::invalid_argument("network needs at least one cavity");
    if (atoms_per_cavity.size() != n_cavities)
        throw std::invalid_argument("atoms_per_cavity must list one count per cavity");
    for (int a : atoms_per_cavity)
        if (a < 0) throw std::invalid_argument("negative atom count");
    if (max_photons_per_cavity < 1) throw std::invalid_argument("max_photons_per_cavity must be >= 1");
    if (couplings.size() != total_atoms())
        throw std::invalid_argument("couplings must list one value per atom");
    // g = 0 is accepted so that atom-free limits can be expressed on the same space.
    for (double g : couplings)
        if (!(g >= 0.0)) throw std::invalid_argument("couplings must be non-negative");
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
}

NetworkConfig uniform_network(std::size_t n_cavities, int atoms_each, double g, int max_photons, double omega) {
    NetworkConfig cfg;
    cfg.n_cavities = n_cavities;
    cfg.atoms_per_cavity.assign(n_cavities, atoms_each);
    cfg.max_photons_per_cavity = max_photons;
    cfg.couplings.assign(n_cavities * static_cast<std::size_t>(atoms_each), g);
    cfg.omega = omega;
    return cfg;
}

int BasisState::total_excitations() const {
    int n = std::accumulate(photons.begin(), photons.end(), 0);
    for (auto b : atoms) n += b;
    return n;
}

std::string BasisState::label() const {
    std::string s = "|";
    for (int n : photons) s += std::to_string(n);
    s += ">ph|";
    for (auto b : atoms) s += static_cast<char>('0' + b);
    s += ">at";
    return s;
}

HilbertSpace::HilbertSpace(NetworkConfig config, int sector, std::vector<BasisState> states)
    : config_(std::move(config)), sector_(sector), states_(std::move(states)) {
    for (std::size_t k = 0; k < states_.size(); ++k) index_.emplace(states_[k], k);
}

std::size_t HilbertSpace::index_of(const BasisState& b) const {
    auto it = index_.find(b);
    if (it == index_.end()) throw NotInSectorError("state " + b.label() + " is not in sector " + std::to_string(sector_));
    return it->second;
}

namespace {

struct Enumerator {
    const NetworkConfig& cfg;
    std::size_t n_atoms;
    std::vector<BasisState>& out;
    BasisState cur;

    // Capacity of the slots from position `pos` onward (photon slots first, then atom slots).
    int capacity_from(std::size_t pos) const {
        const std::size_t nc = cfg.n_cavities;
        int cap = 0;
        if (pos < nc) cap += static_cast<int>(nc - pos) * cfg.max_photons_per_cavity;
        cap += static_cast<int>(n_atoms - (pos > nc ? pos - nc : 0));
        return cap;
    }

    void run(std::size_t pos, int remaining) {
        const std::size_t nc = cfg.n_cavities;
        if (pos == nc + n_atoms) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        const int hi = pos < nc ? cfg.max_photons_per_cavity : 1;
        for (int v = 0; v <= std::min(hi, remaining); ++v) {
            if (remaining - v > capacity_from(pos + 1)) continue;
            if (pos < nc) cur.photons[pos] = v;
            else cur.atoms[pos - nc] = static_cast<std::uint8_t>(v);
            run(pos + 1, remaining - v);
        }
        if (pos < nc) cur.photons[pos] = 0;
        else cur.atoms[pos - nc] = 0;
    }
};

}  // namespace

SpacePtr enumerate_basis(const NetworkConfig& config, int sector) {
    config.validate();
    if (sector < 0) throw EmptySpaceError("negative excitation sector");
    std::vector<BasisState> states;
    Enumerator e{config, config.total_atoms(), states, {}};
    e.cur.photons.assign(config.n_cavities, 0);
    e.cur.atoms.assign(e.n_atoms, 0);
    if (sector <= e.capacity_from(0)) e.run(0, sector);
    if (states.empty())
        throw EmptySpaceError("no basis state carries " + std::to_string(sector) + " excitations");
    return SpacePtr(new HilbertSpace(config, sector, std::move(states)));
}

}  // namespace tch
