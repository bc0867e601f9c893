#pragma once

// Finite Fock (x) two-level-atom spaces of a cavity network, one excitation sector at a time.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tch {

struct NetworkConfig {
    std::size_t n_cavities = 1;
    std::vector<int> atoms_per_cavity{0};
    int max_photons_per_cavity = 2;
    // One coupling per atom, atoms numbered cavity by cavity.
    std::vector<double> couplings;
    double omega = 1.0;

    std::size_t total_atoms() const;
    // Global index of the first atom hosted by `cavity`.
    std::size_t first_atom(std::size_t cavity) const;
    // Throws std::invalid_argument when the invariants do not hold.
    void validate() const;
};

// Convenience: `n_cavities` cavities with `atoms_each` atoms per cavity, all coupled with `g`.
NetworkConfig uniform_network(std::size_t n_cavities, int atoms_each, double g,
                              int max_photons = 2, double omega = 1.0);

struct BasisState {
    std::vector<int> photons;
    std::vector<std::uint8_t> atoms;

    int total_excitations() const;
    std::string label() const;

    friend auto operator<=>(const BasisState&, const BasisState&) = default;
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

class HilbertSpace;
using SpacePtr = std::shared_ptr<const HilbertSpace>;

// Immutable after construction; share freely across threads.
class HilbertSpace {
public:
    const NetworkConfig& config() const { return config_; }
    int sector() const { return sector_; }
    std::size_t dim() const { return states_.size(); }
    const std::vector<BasisState>& states() const { return states_; }
    const BasisState& state(std::size_t k) const { return states_.at(k); }

    // Position of `b` in the enumeration; throws NotInSectorError.
    std::size_t index_of(const BasisState& b) const;
    bool contains(const BasisState& b) const { return index_.count(b) != 0; }

private:
    friend SpacePtr enumerate_basis(const NetworkConfig& config, int sector);
    HilbertSpace(NetworkConfig config, int sector, std::vector<BasisState> states);

    NetworkConfig config_;
    int sector_;
    std::vector<BasisState> states_;
    std::map<BasisState, std::size_t> index_;
};

// All basis states with `sector` total excitations, in ascending lexicographic order
// of (photons..., atom bits...). Throws EmptySpaceError when the sector is empty.
SpacePtr enumerate_basis(const NetworkConfig& config, int sector);

inline std::size_t state_index(const HilbertSpace& space, const BasisState& b) {
    return space.index_of(b);
}

}  // namespace tch
