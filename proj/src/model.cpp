#include "tricav/model.hpp"

#include <stdexcept>
#include <string>

namespace tricav {

void validate(const SystemParams& p) {
    if (p.n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
    if (!(p.cavity_length > 0.0)) throw std::invalid_argument("cavity_length_lambda must be positive");
    for (double x : p.positions)
        if (!(x >= 0.0 && x < 1.0))
            throw std::invalid_argument("positions must lie in [0, 1) as fractions of L");
    if (!(p.coupling > 0.0)) throw std::invalid_argument("coupling_g must be positive");
    if (!(p.gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
    if (!(p.kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
    mode_window(p);
}

int resonant_mode(const SystemParams& p) {
    if (p.resonant_mode_override) return *p.resonant_mode_override;
    return static_cast<int>(std::lround(p.cavity_length));
}

std::vector<int> mode_window(const SystemParams& p) {
    if (p.n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
    const int first = resonant_mode(p) - p.n_modes / 2;
    if (first <= 0) {
        throw std::invalid_argument("mode window reaches mode number " + std::to_string(first) +
                                    "; all modes must have n >= 1");
    }
    std::vector<int> window(static_cast<std::size_t>(p.n_modes));
    for (int k = 0; k < p.n_modes; ++k) window[static_cast<std::size_t>(k)] = first + k;
    return window;
}

double mode_detuning(const SystemParams& p, int mode_index) {
    const double reference = p.detuning_reference == DetuningReference::ResonantMode
                                 ? static_cast<double>(resonant_mode(p))
                                 : p.cavity_length;
    return 2.0 * std::numbers::pi * (static_cast<double>(mode_index) - reference);
}

double cooperativity(const SystemParams& p) {
    if (!(p.kappa > 0.0) || !(p.gamma > 0.0))
        throw std::domain_error("cooperativity is undefined unless kappa and gamma are both positive");
    return p.coupling * p.coupling / (p.kappa * p.gamma);
}

double loss_rate_for_cooperativity(double coupling, double coop) {
    if (!(coop > 0.0)) throw std::domain_error("cooperativity must be positive");
    return coupling / std::sqrt(coop);
}

}  // namespace tricav
