#ifndef TRICAV_OBSERVABLES_HPP
#define TRICAV_OBSERVABLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "tricav/hilbert.hpp"
#include "tricav/types.hpp"

namespace tricav {

/// Bit pattern (4 qA + 2 qB + qC) of each register index
/// ggg, gge, geg, egg, gee, ege, eeg, eee.
inline constexpr std::array<int, 8> kRegisterBits{0, 1, 2, 4, 3, 5, 6, 7};
inline constexpr int kGGG = 0;
inline constexpr int kEEE = 7;

template <typename Scalar>
struct Populations {
    Scalar p_eee = 0, p_eeg = 0, p_egg = 0, p_ggg = 0;
    Scalar total() const { return p_eee + p_eeg + p_egg + p_ggg; }
};

template <typename Scalar>
struct NegativityResult {
    std::array<Scalar, 3> per_cut{};  ///< A|BC, B|AC, C|AB
    Scalar tripartite = 0;
};

/// Traces the cavity field out of a sector state. The grouping of basis
/// states by photon configuration is computed once per basis.
class QubitReducer {
public:
    explicit QubitReducer(const Basis& basis) : groups_(basis.field_configurations()) {
        if (basis.dimensions().atoms != 3) throw SectorError("qubit reduction needs exactly 3 atoms");
        for (std::size_t k = 0; k < basis.size(); ++k)
            groups_[basis.field_label(k)].emplace_back(basis.qubit_label(k), k);
    }

    /// rho[q, q'] = sum_f A(q, f) conj(A(q', f)).
    template <typename Scalar>
    QubitMatrix<Scalar> operator()(const StateVector<Scalar>& a) const {
        QubitMatrix<Scalar> rho = QubitMatrix<Scalar>::Zero();
        for (const auto& group : groups_)
            for (const auto& [q, k] : group)
                for (const auto& [qp, kp] : group) rho(q, qp) += a(k) * std::conj(a(kp));
        return rho;
    }

private:
    std::vector<std::vector<std::pair<int, std::size_t>>> groups_;
};

template <typename Scalar>
QubitMatrix<Scalar> reduce_qubits(const Basis& basis, const StateVector<Scalar>& a) {
    return QubitReducer(basis)(a);
}

template <typename Scalar>
Populations<Scalar> populations(const QubitMatrix<Scalar>& rho) {
    Populations<Scalar> p;
    p.p_ggg = rho(0, 0).real();
    p.p_egg = rho(1, 1).real() + rho(2, 2).real() + rho(3, 3).real();
    p.p_eeg = rho(4, 4).real() + rho(5, 5).real() + rho(6, 6).real();
    p.p_eee = rho(7, 7).real();
    return p;
}

/// Transposes the indices of one qubit (0 = A, 1 = B, 2 = C):
/// <m_q n_r| rho^T |p_q s_r> = <p_q n_r| rho |m_q s_r>.
template <typename Scalar>
QubitMatrix<Scalar> partial_transpose(const QubitMatrix<Scalar>& rho, int qubit) {
    if (qubit < 0 || qubit > 2) throw std::invalid_argument("partial_transpose: qubit must be 0, 1 or 2");
    static constexpr std::array<int, 8> kIndexOfBits{0, 1, 2, 4, 3, 5, 6, 7};
    const int mask = 4 >> qubit;
    QubitMatrix<Scalar> out;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            const int rb = kRegisterBits[r], cb = kRegisterBits[c];
            const int src_row = (rb & ~mask) | (cb & mask);
            const int src_col = (cb & ~mask) | (rb & mask);
            out(r, c) = rho(kIndexOfBits[src_row], kIndexOfBits[src_col]);
        }
    return out;
}

/// Eigenvalues of a Hermitian 8x8 matrix by cyclic complex Jacobi rotations,
/// iterated until the off-diagonal Frobenius norm drops below `tolerance`.
/// Returned in ascending order.
template <typename Scalar>
QubitSpectrum<Scalar> jacobi_eigenvalues(const QubitMatrix<Scalar>& hermitian,
                                         Scalar tolerance = Scalar(1e-13), int max_sweeps = 64) {
    using C = Complex<Scalar>;
    QubitMatrix<Scalar> a = (hermitian + hermitian.adjoint()) / Scalar(2);
    const Scalar scale = std::max(Scalar(1), a.norm());
    const Scalar tol =
        std::max(tolerance, Scalar(64) * std::numeric_limits<Scalar>::epsilon()) * scale;

    auto off_norm = [&] {
        Scalar s = 0;
        for (int p = 0; p < 8; ++p)
            for (int q = 0; q < 8; ++q)
                if (p != q) s += std::norm(a(p, q));
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < max_sweeps && off_norm() >= tol; ++sweep) {
        for (int p = 0; p < 7; ++p)
            for (int q = p + 1; q < 8; ++q) {
                const Scalar mag = std::abs(a(p, q));
                if (mag == Scalar(0)) continue;
                // Phase-rotate q so the pivot is real, then apply the real
                // symmetric Jacobi rotation. U = diag(1, e^{-i phi}) R.
                const C phase = a(p, q) / mag;
                const Scalar app = a(p, p).real(), aqq = a(q, q).real();
                const Scalar tau = (aqq - app) / (2 * mag);
                const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
                const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
                const Scalar s = t * c;
                const C upp(c, 0), upq(s, 0);
                const C uqp = -s * std::conj(phase), uqq = c * std::conj(phase);
                for (int k = 0; k < 8; ++k) {  // A <- A U
                    const C akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * upp + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                for (int k = 0; k < 8; ++k) {  // A <- U^H A
                    const C apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                a(p, q) = a(q, p) = C(0, 0);
                a(p, p) = C(a(p, p).real(), 0);
                a(q, q) = C(a(q, q).real(), 0);
            }
    }
    if (off_norm() >= tol) {
        std::ostringstream msg;
        msg << "Jacobi eigen-solver did not converge after " << sweep
            << " sweeps: off-diagonal norm " << off_norm() << ", matrix norm " << scale
            << ", tolerance " << tol;
        throw NumericalError(msg.str());
    }
    QubitSpectrum<Scalar> eig;
    for (int k = 0; k < 8; ++k) eig(k) = a(k, k).real();
    std::sort(eig.data(), eig.data() + 8);
    return eig;
}

/// sum_i (|l_i| - l_i) over the spectrum: twice the magnitude of the negative part.
template <typename Scalar>
Scalar cut_negativity(const QubitSpectrum<Scalar>& spectrum) {
    Scalar s = 0;
    for (int k = 0; k < 8; ++k) s += std::abs(spectrum(k)) - spectrum(k);
    return s;
}

/// Per-cut negativities and their geometric mean.
template <typename Scalar>
NegativityResult<Scalar> negativity(const QubitMatrix<Scalar>& rho) {
    NegativityResult<Scalar> r;
    for (int q = 0; q < 3; ++q)
        r.per_cut[q] = cut_negativity(jacobi_eigenvalues(partial_transpose(rho, q)));
    r.tripartite = std::cbrt(r.per_cut[0] * r.per_cut[1] * r.per_cut[2]);
    return r;
}

/// Fidelity with (|ggg> + |eee>)/sqrt(2). For a pure target the Uhlmann
/// fidelity is <GHZ|rho|GHZ>.
template <typename Scalar>
Scalar ghz_fidelity(const QubitMatrix<Scalar>& rho) {
    return (rho(kGGG, kGGG).real() + rho(kEEE, kEEE).real() + 2 * rho(kEEE, kGGG).real()) / 2;
}

}  // namespace tricav

#endif  // TRICAV_OBSERVABLES_HPP
