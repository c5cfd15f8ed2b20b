#include "tricav/hilbert.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tricav/types.hpp"

namespace tricav {

namespace {

using u128 = unsigned __int128;
constexpr u128 kCountMax = std::numeric_limits<std::uint64_t>::max();

// C(n, k) with every partial product checked against the 64-bit range.
std::uint64_t checked_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    u128 result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result = result * static_cast<u128>(n - k + i);
        if (result / static_cast<u128>(i) > kCountMax)
            throw std::overflow_error("count_amplitudes: binomial coefficient exceeds 64 bits");
        result /= static_cast<u128>(i);
    }
    return static_cast<std::uint64_t>(result);
}

void validate_sector(int atoms, int excitations, int modes) {
    if (atoms < 0 || excitations < 0)
        throw std::invalid_argument("atoms and excitations must be non-negative");
    if (modes < 1) throw std::invalid_argument("at least one cavity mode is required");
}

// All ways of writing `total` as an ordered sum of `parts` non-negative
// integers, lexicographically descending.
void compositions(int total, int parts, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = total; first >= 0; --first) {
        prefix.push_back(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

int BasisState::excited_qubits() const { return std::accumulate(qubits.begin(), qubits.end(), 0); }

int BasisState::photons() const { return std::accumulate(modes.begin(), modes.end(), 0); }

std::uint64_t count_amplitudes(int atoms, int excitations, int modes) {
    validate_sector(atoms, excitations, modes);
    u128 total = 0;
    for (int i = 0; i <= excitations; ++i) {
        const u128 term = static_cast<u128>(checked_binomial(atoms, i)) *
                          checked_binomial(excitations - i + modes - 1, modes - 1);
        total += term;
        if (term > kCountMax || total > kCountMax)
            throw std::overflow_error("count_amplitudes: amplitude count exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(total);
}

SectorDimensions sector_dimensions(int atoms, int excitations, int modes) {
    return {atoms, excitations, modes,
            static_cast<std::size_t>(count_amplitudes(atoms, excitations, modes))};
}

std::vector<BasisState> enumerate_basis(int atoms, int excitations, int modes) {
    validate_sector(atoms, excitations, modes);
    std::vector<BasisState> out;
    out.reserve(static_cast<std::size_t>(count_amplitudes(atoms, excitations, modes)));

    std::vector<int> prefix;
    for (int excited = std::min(atoms, excitations); excited >= 0; --excited) {
        std::vector<std::vector<int>> qubit_patterns;
        std::vector<int> pattern(static_cast<std::size_t>(atoms), 0);
        std::fill(pattern.begin(), pattern.begin() + excited, 1);
        // prev_permutation starting from the largest arrangement walks the
        // patterns in descending lexicographic order.
        do {
            qubit_patterns.push_back(pattern);
        } while (std::prev_permutation(pattern.begin(), pattern.end()));

        std::vector<std::vector<int>> fields;
        compositions(excitations - excited, modes, prefix, fields);

        for (const auto& q : qubit_patterns)
            for (const auto& f : fields) out.push_back(BasisState{q, f});
    }
    return out;
}

int qubit_register_index(int qa, int qb, int qc) {
    static constexpr int kByBits[8] = {0, 1, 2, 4, 3, 5, 6, 7};
    return kByBits[4 * qa + 2 * qb + qc];
}

Basis::Basis(int atoms, int excitations, int modes)
    : dims_(sector_dimensions(atoms, excitations, modes)),
      states_(enumerate_basis(atoms, excitations, modes)) {
    std::map<std::vector<int>, std::size_t> fields;
    qubit_label_.reserve(states_.size());
    field_label_.reserve(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k) {
        const auto& s = states_[k];
        lookup_.emplace(s, k);
        qubit_label_.push_back(
            atoms == 3 ? qubit_register_index(s.qubits[0], s.qubits[1], s.qubits[2]) : -1);
        auto [it, inserted] = fields.emplace(s.modes, fields.size());
        field_label_.push_back(it->second);
    }
    n_fields_ = fields.size();
}

std::size_t Basis::index_of(const BasisState& state) const {
    auto it = lookup_.find(state);
    if (it == lookup_.end()) {
        throw SectorError("state is outside the " + std::to_string(dims_.excitations) +
                          "-excitation sector with " + std::to_string(dims_.atoms) +
                          " atoms and " + std::to_string(dims_.modes) + " modes");
    }
    return it->second;
}

}  // namespace tricav
