#ifndef TRICAV_HILBERT_HPP
#define TRICAV_HILBERT_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace tricav {

/// Occupation pattern of the atoms and cavity modes. Qubit entries are 0 or 1.
struct BasisState {
    std::vector<int> qubits;
    std::vector<int> modes;

    int excited_qubits() const;
    int photons() const;

    friend bool operator==(const BasisState&, const BasisState&) = default;
    friend auto operator<=>(const BasisState&, const BasisState&) = default;
};

struct SectorDimensions {
    int atoms = 3;
    int excitations = 3;
    int modes = 1;
    std::size_t dimension = 0;
};

/// Number of occupation patterns with exactly `excitations` quanta shared by
/// `atoms` two-level systems and `modes` bosonic modes:
///   sum_i C(atoms, i) * C(excitations - i + modes - 1, modes - 1).
/// Throws std::overflow_error rather than wrapping.
std::uint64_t count_amplitudes(int atoms, int excitations, int modes);

SectorDimensions sector_dimensions(int atoms, int excitations, int modes);

/// Canonical ordering: excited-qubit count descending, then qubit pattern
/// lexicographically descending, then mode occupations lexicographically
/// descending. The first state is therefore all-excited with zero photons.
std::vector<BasisState> enumerate_basis(int atoms, int excitations, int modes);

/// Position of a 3-qubit pattern in the register ordering
/// ggg, gge, geg, egg, gee, ege, eeg, eee (qubit A written first).
int qubit_register_index(int qa, int qb, int qc);

/// Enumerated sector with an ordinal lookup and the qubit/field split used
/// for partial traces.
class Basis {
public:
    Basis(int atoms, int excitations, int modes);

    const SectorDimensions& dimensions() const { return dims_; }
    std::size_t size() const { return states_.size(); }
    const BasisState& operator[](std::size_t k) const { return states_[k]; }
    const std::vector<BasisState>& states() const { return states_; }

    /// Throws SectorError if `state` is not a member of this sector.
    std::size_t index_of(const BasisState& state) const;

    /// Register index (0..7) of the qubit part of basis state k. 3 atoms only.
    int qubit_label(std::size_t k) const { return qubit_label_[k]; }
    /// Dense id of the photon configuration of basis state k.
    std::size_t field_label(std::size_t k) const { return field_label_[k]; }
    std::size_t field_configurations() const { return n_fields_; }

private:
    SectorDimensions dims_;
    std::vector<BasisState> states_;
    std::map<BasisState, std::size_t> lookup_;
    std::vector<int> qubit_label_;
    std::vector<std::size_t> field_label_;
    std::size_t n_fields_ = 0;
};

}  // namespace tricav

#endif  // TRICAV_HILBERT_HPP
