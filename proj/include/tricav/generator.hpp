#ifndef TRICAV_GENERATOR_HPP
#define TRICAV_GENERATOR_HPP

#include <cmath>
#include <initializer_list>
#include <vector>

#include "tricav/hilbert.hpp"
#include "tricav/model.hpp"
#include "tricav/types.hpp"

// Two independent constructions of the three-excitation generator M with
// dA/dt = M A, in the frame rotating at the qubit transition frequency.
//
//   H = sum_j w~_eg s_j^+ s_j + sum_n w~_n a_n^+ a_n
//       + i sum_{j,n} (G_n(x_j) s_j^+ a_n - h.c.),
//   w~_eg = w_eg - i gamma/2,  w~_n = w_n - i kappa/2.
//
// assemble_generic applies the operators state by state; assemble_by_family
// writes out each amplitude family's equation of motion term by term. They
// must agree entrywise.

namespace tricav {

namespace detail {

template <typename Scalar>
using Triplets = std::vector<Eigen::Triplet<Complex<Scalar>>>;

inline void require_three_excitation_sector(const Basis& basis, const SystemParams& params) {
    const auto& d = basis.dimensions();
    if (d.atoms != 3 || d.excitations != 3 || d.modes != params.n_modes)
        throw SectorError("generator requires the 3-atom, 3-excitation sector with n_modes modes");
}

template <typename Scalar>
SparseGenerator<Scalar> from_triplets(std::size_t dim, const Triplets<Scalar>& triplets) {
    SparseGenerator<Scalar> m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

}  // namespace detail

/// Operator-by-operator assembly. Works for any atom count in the basis.
template <typename Scalar = double>
SparseGenerator<Scalar> assemble_generic(const SystemParams& params, const Basis& basis) {
    using C = Complex<Scalar>;
    if (basis.dimensions().modes != params.n_modes)
        throw SectorError("basis mode count differs from n_modes");
    const std::vector<int> window = mode_window(params);
    const int n_modes = params.n_modes;
    const int n_atoms = basis.dimensions().atoms;

    std::vector<C> loss_detuning(window.size());  // i Delta~_n = i Delta_n + kappa/2
    for (std::size_t a = 0; a < window.size(); ++a)
        loss_detuning[a] = C(static_cast<Scalar>(0.5 * params.kappa),
                             static_cast<Scalar>(mode_detuning(params, window[a])));

    detail::Triplets<Scalar> triplets;
    triplets.reserve(basis.size() * (1 + 2 * static_cast<std::size_t>(n_atoms * n_modes)));

    for (std::size_t col = 0; col < basis.size(); ++col) {
        const BasisState& s = basis[col];
        C diag(static_cast<Scalar>(-0.5 * params.gamma * s.excited_qubits()), 0);
        for (int a = 0; a < n_modes; ++a) diag -= static_cast<Scalar>(s.modes[a]) * loss_detuning[a];
        triplets.emplace_back(col, col, diag);

        // s_j^+ a_n |s>: raises qubit j, removes one photon from mode n, with
        // bosonic factor sqrt(photons). Its adjoint -G* s_j a_n^+ fills the
        // transposed slot.
        for (int j = 0; j < n_atoms; ++j) {
            if (s.qubits[j] != 0) continue;
            for (int a = 0; a < n_modes; ++a) {
                if (s.modes[a] == 0) continue;
                BasisState raised = s;
                raised.qubits[j] = 1;
                raised.modes[a] -= 1;
                const std::size_t row = basis.index_of(raised);
                const C g = coupling<Scalar>(params, window[a], j);
                const Scalar bosonic = std::sqrt(static_cast<Scalar>(s.modes[a]));
                triplets.emplace_back(row, col, bosonic * g);
                triplets.emplace_back(col, row, -bosonic * std::conj(g));
            }
        }
    }
    return detail::from_triplets<Scalar>(basis.size(), triplets);
}

/// Amplitude-family assembly: A_123, A_ij(a), A_i(aa), A_i(ab), A_(aaa),
/// A_(aab), A_(abb), A_(abc), each written with its own damping prefactor,
/// bosonic sqrt(2)/sqrt(3) factors and ordered-index constraints.
template <typename Scalar = double>
SparseGenerator<Scalar> assemble_by_family(const SystemParams& params, const Basis& basis) {
    using C = Complex<Scalar>;
    detail::require_three_excitation_sector(basis, params);
    const std::vector<int> window = mode_window(params);
    const int nm = params.n_modes;
    const Scalar gamma = static_cast<Scalar>(params.gamma);
    const Scalar sqrt2 = std::sqrt(Scalar(2));
    const Scalar sqrt3 = std::sqrt(Scalar(3));
    const C I(0, 1);

    std::vector<C> dt(static_cast<std::size_t>(nm));  // Delta~_a = Delta_a - i kappa/2
    for (int a = 0; a < nm; ++a)
        dt[a] = C(static_cast<Scalar>(mode_detuning(params, window[a])),
                  static_cast<Scalar>(-0.5 * params.kappa));
    auto G = [&](int a, int i) { return coupling<Scalar>(params, window[a], i); };
    auto Gc = [&](int a, int i) { return std::conj(G(a, i)); };

    // Index of the state with the listed qubits excited and one photon per
    // listed mode (repeats allowed).
    auto idx = [&](std::initializer_list<int> excited, std::initializer_list<int> photons) {
        BasisState s{std::vector<int>(3, 0), std::vector<int>(static_cast<std::size_t>(nm), 0)};
        for (int q : excited) s.qubits[q] = 1;
        for (int a : photons) s.modes[a] += 1;
        return basis.index_of(s);
    };

    detail::Triplets<Scalar> t;
    auto add = [&](std::size_t row, std::size_t col, C value) { t.emplace_back(row, col, value); };
    auto third = [](int i, int j) { return 3 - i - j; };

    // A_123
    {
        const std::size_t row = idx({0, 1, 2}, {});
        add(row, row, C(-Scalar(1.5) * gamma, 0));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                for (int a = 0; a < nm; ++a) add(row, idx({i, j}, {a}), G(a, third(i, j)));
    }

    // A_ij(a), i < j excited, one photon in a
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int a = 0; a < nm; ++a) {
                const std::size_t row = idx({i, j}, {a});
                add(row, row, -(I * dt[a] + gamma));
                add(row, idx({j}, {a, a}), sqrt2 * G(a, i));
                add(row, idx({i}, {a, a}), sqrt2 * G(a, j));
                add(row, idx({0, 1, 2}, {}), -Gc(a, third(i, j)));
                for (int b = a + 1; b < nm; ++b) add(row, idx({j}, {a, b}), G(b, i));
                for (int b = 0; b < a; ++b) add(row, idx({j}, {b, a}), G(b, i));
                for (int b = a + 1; b < nm; ++b) add(row, idx({i}, {a, b}), G(b, j));
                for (int b = 0; b < a; ++b) add(row, idx({i}, {b, a}), G(b, j));
            }

    // A_i(aa)
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < nm; ++a) {
            const std::size_t row = idx({i}, {a, a});
            add(row, row, -(Scalar(2) * I * dt[a] + gamma / 2));
            add(row, idx({}, {a, a, a}), sqrt3 * G(a, i));
            for (int b = a + 1; b < nm; ++b) add(row, idx({}, {a, a, b}), G(b, i));
            for (int b = 0; b < a; ++b) add(row, idx({}, {b, a, a}), G(b, i));
            for (int j = i + 1; j < 3; ++j) add(row, idx({i, j}, {a}), -sqrt2 * Gc(a, j));
            for (int j = 0; j < i; ++j) add(row, idx({j, i}, {a}), -sqrt2 * Gc(a, j));
        }

    // A_i(ab), a < b. One qubit is excited, so this family carries gamma/2.
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < nm; ++a)
            for (int b = a + 1; b < nm; ++b) {
                const std::size_t row = idx({i}, {a, b});
                add(row, row, -(I * dt[a] + I * dt[b] + gamma / 2));
                add(row, idx({}, {a, a, b}), sqrt2 * G(a, i));
                add(row, idx({}, {a, b, b}), sqrt2 * G(b, i));
                for (int c = b + 1; c < nm; ++c) add(row, idx({}, {a, b, c}), G(c, i));
                for (int c = a + 1; c < b; ++c) add(row, idx({}, {a, c, b}), G(c, i));
                for (int c = 0; c < a; ++c) add(row, idx({}, {c, a, b}), G(c, i));
                for (int j = i + 1; j < 3; ++j) add(row, idx({i, j}, {a}), -Gc(b, j));
                for (int j = 0; j < i; ++j) add(row, idx({j, i}, {a}), -Gc(b, j));
                for (int j = i + 1; j < 3; ++j) add(row, idx({i, j}, {b}), -Gc(a, j));
                for (int j = 0; j < i; ++j) add(row, idx({j, i}, {b}), -Gc(a, j));
            }

    // A_(aaa)
    for (int a = 0; a < nm; ++a) {
        const std::size_t row = idx({}, {a, a, a});
        add(row, row, -Scalar(3) * I * dt[a]);
        for (int i = 0; i < 3; ++i) add(row, idx({i}, {a, a}), -sqrt3 * Gc(a, i));
    }

    // A_(aab) and A_(abb), a < b
    for (int a = 0; a < nm; ++a)
        for (int b = a + 1; b < nm; ++b) {
            const std::size_t aab = idx({}, {a, a, b});
            add(aab, aab, -(Scalar(2) * I * dt[a] + I * dt[b]));
            for (int i = 0; i < 3; ++i) {
                add(aab, idx({i}, {a, a}), -Gc(b, i));
                add(aab, idx({i}, {a, b}), -sqrt2 * Gc(a, i));
            }
            const std::size_t abb = idx({}, {a, b, b});
            add(abb, abb, -(I * dt[a] + Scalar(2) * I * dt[b]));
            for (int i = 0; i < 3; ++i) {
                add(abb, idx({i}, {b, b}), -Gc(a, i));
                add(abb, idx({i}, {a, b}), -sqrt2 * Gc(b, i));
            }
        }

    // A_(abc), a < b < c
    for (int a = 0; a < nm; ++a)
        for (int b = a + 1; b < nm; ++b)
            for (int c = b + 1; c < nm; ++c) {
                const std::size_t row = idx({}, {a, b, c});
                add(row, row, -(I * dt[a] + I * dt[b] + I * dt[c]));
                for (int i = 0; i < 3; ++i) {
                    add(row, idx({i}, {a, b}), -Gc(c, i));
                    add(row, idx({i}, {a, c}), -Gc(b, i));
                    add(row, idx({i}, {b, c}), -Gc(a, i));
                }
            }

    return detail::from_triplets<Scalar>(basis.size(), t);
}

/// Largest entrywise modulus of a - b.
template <typename Scalar>
Scalar max_entry_difference(const SparseGenerator<Scalar>& a, const SparseGenerator<Scalar>& b) {
    const SparseGenerator<Scalar> diff = a - b;
    Scalar worst = 0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (typename SparseGenerator<Scalar>::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

}  // namespace tricav

#endif  // TRICAV_GENERATOR_HPP
