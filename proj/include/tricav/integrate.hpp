#ifndef TRICAV_INTEGRATE_HPP
#define TRICAV_INTEGRATE_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tricav/hilbert.hpp"
#include "tricav/types.hpp"

namespace tricav {

template <typename Scalar>
struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector<Scalar>> states;
};

/// Unit amplitude on the all-excited, zero-photon state (ordinal 0).
template <typename Scalar = double>
StateVector<Scalar> initial_state_all_excited(const SectorDimensions& dims) {
    if (dims.atoms != 3 || dims.excitations != 3)
        throw SectorError("all-excited initial state needs the 3-atom, 3-excitation sector");
    StateVector<Scalar> a = StateVector<Scalar>::Zero(static_cast<Eigen::Index>(dims.dimension));
    a(0) = Complex<Scalar>(1, 0);
    return a;
}

/// Classical fixed-step RK4 for the autonomous system dA/dt = M A.
template <typename Scalar>
class Rk4Stepper {
public:
    explicit Rk4Stepper(const SparseGenerator<Scalar>& generator)
        : m_(generator), k1_(m_.rows()), k2_(m_.rows()), k3_(m_.rows()), k4_(m_.rows()),
          tmp_(m_.rows()) {}

    void step(StateVector<Scalar>& a, Scalar h) {
        k1_.noalias() = m_ * a;
        tmp_ = a + (h / 2) * k1_;
        k2_.noalias() = m_ * tmp_;
        tmp_ = a + (h / 2) * k2_;
        k3_.noalias() = m_ * tmp_;
        tmp_ = a + h * k3_;
        k4_.noalias() = m_ * tmp_;
        a += (h / 6) * (k1_ + 2 * k2_ + 2 * k3_ + k4_);
    }

private:
    const SparseGenerator<Scalar>& m_;
    StateVector<Scalar> k1_, k2_, k3_, k4_, tmp_;
};

namespace detail {

inline long step_count(double t_max, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_max >= dt)) throw std::invalid_argument("t_max must be at least dt");
    return std::lround(t_max / dt);
}

template <typename Scalar>
void check_finite(const StateVector<Scalar>& a, long step, double t) {
    if (!std::isfinite(a.squaredNorm())) {
        std::ostringstream msg;
        msg << "non-finite amplitude after step " << step << " (t = " << t << " L/c)";
        throw NumericalError(msg.str());
    }
}

}  // namespace detail

/// Integrates from t = 0 to round(t_max / dt) * dt. `observe(step, t, state)`
/// sees step 0 and every `stride`-th step; the last step is always observed.
template <typename Scalar, typename Observer>
void propagate(const SparseGenerator<Scalar>& generator, StateVector<Scalar> state, double t_max,
               double dt, long stride, Observer&& observe) {
    if (stride < 1) throw std::invalid_argument("output stride must be at least 1");
    if (state.size() != generator.rows()) throw std::invalid_argument("state/generator size mismatch");
    const long steps = detail::step_count(t_max, dt);
    Rk4Stepper<Scalar> stepper(generator);
    observe(0L, 0.0, static_cast<const StateVector<Scalar>&>(state));
    for (long k = 1; k <= steps; ++k) {
        stepper.step(state, static_cast<Scalar>(dt));
        const double t = static_cast<double>(k) * dt;
        detail::check_finite(state, k, t);
        if (k % stride == 0 || k == steps) observe(k, t, static_cast<const StateVector<Scalar>&>(state));
    }
}

/// Stores every `stride`-th state.
template <typename Scalar>
Trajectory<Scalar> integrate(const SparseGenerator<Scalar>& generator,
                             const StateVector<Scalar>& initial, double t_max, double dt,
                             long stride = 1) {
    Trajectory<Scalar> out;
    propagate(generator, initial, t_max, dt, stride,
              [&](long, double t, const StateVector<Scalar>& a) {
                  out.times.push_back(t);
                  out.states.push_back(a);
              });
    return out;
}

/// Observes the state at arbitrary non-decreasing `times`. Full steps of size
/// dt are taken on the uniform grid; each sample is reached from the last grid
/// point with one shorter RK4 step, so the grid itself is unaffected.
template <typename Scalar, typename Observer>
void sample_at(const SparseGenerator<Scalar>& generator, StateVector<Scalar> state,
               const std::vector<double>& times, double dt, Observer&& observe) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    Rk4Stepper<Scalar> stepper(generator);
    StateVector<Scalar> probe;
    long k = 0;
    double t_grid = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) {
        const double target = times[s];
        if (target < 0.0 || (s > 0 && target < times[s - 1]))
            throw std::invalid_argument("sample times must be non-negative and non-decreasing");
        while (static_cast<double>(k + 1) * dt <= target + 1e-12 * dt) {
            stepper.step(state, static_cast<Scalar>(dt));
            ++k;
            t_grid = static_cast<double>(k) * dt;
            detail::check_finite(state, k, t_grid);
        }
        const double remainder = target - t_grid;
        if (remainder > 1e-12 * dt) {
            probe = state;
            stepper.step(probe, static_cast<Scalar>(remainder));
            detail::check_finite(probe, k, target);
            observe(s, target, static_cast<const StateVector<Scalar>&>(probe));
        } else {
            observe(s, target, static_cast<const StateVector<Scalar>&>(state));
        }
    }
}

}  // namespace tricav

#endif  // TRICAV_INTEGRATE_HPP
