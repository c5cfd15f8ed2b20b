#ifndef TRICAV_MODEL_HPP
#define TRICAV_MODEL_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "tricav/types.hpp"

// Units throughout: lengths in units of the cavity length L (positions) or of
// the qubit wavelength (cavity length), time in L/c, frequencies and rates in
// c/L.

namespace tricav {

/// Where the qubit transition sits relative to the mode comb.
enum class DetuningReference {
    /// Qubit transition tuned onto the nearest cavity mode n0:
    /// Delta_n = 2 pi (n - n0).
    ResonantMode,
    /// Transition wavelength fixed by cavity_length:
    /// Delta_n = 2 pi (n - L / lambda_eg).
    CavityLength,
};

/// 0.314 * 2 pi in units of c/L.
inline constexpr double kReferenceCoupling = 0.314 * 2.0 * std::numbers::pi;

struct SystemParams {
    int n_modes = 1;
    double cavity_length = 994.28;  ///< L / lambda_eg
    std::array<double, 3> positions{0.0, 0.0, 0.0};  ///< x_j / L, in [0, 1)
    double coupling = kReferenceCoupling;  ///< |G|, c/L
    double gamma = 0.0;  ///< spontaneous emission, c/L
    double kappa = 0.0;  ///< cavity leakage per mode, c/L
    std::optional<int> resonant_mode_override;
    DetuningReference detuning_reference = DetuningReference::ResonantMode;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const SystemParams& params);

/// round(L / lambda_eg) unless overridden.
int resonant_mode(const SystemParams& params);

/// N_m consecutive mode numbers around the resonant mode. Even windows carry
/// the extra mode below resonance.
std::vector<int> mode_window(const SystemParams& params);

/// Real detuning omega_n - omega_eg in c/L. Positive for modes blue of the
/// qubit.
double mode_detuning(const SystemParams& params, int mode_index);

/// Delta_n - i kappa / 2.
inline std::complex<double> complex_detuning(const SystemParams& params, int mode_index) {
    return {mode_detuning(params, mode_index), -0.5 * params.kappa};
}

/// Spacing of consecutive mode detunings, 2 pi in c/L.
inline constexpr double mode_spacing() { return 2.0 * std::numbers::pi; }

/// Travelling-wave coupling |G| exp(i k_n x_j) with k_n x_j = 2 pi n x_j / L.
/// `qubit` is zero based.
template <typename Scalar = double>
Complex<Scalar> coupling(const SystemParams& params, int mode_index, int qubit) {
    // Reduce n * x to [0, 1) before scaling so that n ~ 1e3 keeps full precision.
    const double cycles = static_cast<double>(mode_index) * params.positions.at(qubit);
    const double phase = 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
    return std::polar(static_cast<Scalar>(params.coupling), static_cast<Scalar>(phase));
}

/// g^2 / (kappa gamma). Throws std::domain_error when either rate is zero.
double cooperativity(const SystemParams& params);

/// kappa = gamma = g / sqrt(C): equal loss rates that realise cooperativity C.
double loss_rate_for_cooperativity(double coupling, double cooperativity);

}  // namespace tricav

#endif  // TRICAV_MODEL_HPP
