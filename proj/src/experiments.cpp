#include "tricav/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "tricav/generator.hpp"
#include "tricav/hilbert.hpp"
#include "tricav/integrate.hpp"
#include "tricav/observables.hpp"

namespace tricav {

std::vector<TimeSeriesRecord> run_time_series(const SystemParams& params,
                                              const TimeSeriesOptions& options) {
    validate(params);
    const long steps = detail::step_count(options.t_max, options.dt);
    if (options.stride < 1 || steps % options.stride != 0)
        throw std::invalid_argument("t_max / dt must be a whole multiple of the output stride");

    const Basis basis(3, 3, params.n_modes);
    const SparseGenerator<double> generator = assemble_generic<double>(params, basis);
    const QubitReducer reduce(basis);

    std::vector<TimeSeriesRecord> out;
    out.reserve(static_cast<std::size_t>(steps / options.stride + 1));
    propagate(generator, initial_state_all_excited<double>(basis.dimensions()), options.t_max,
              options.dt, options.stride, [&](long, double t, const StateVector<double>& a) {
                  QubitMatrix<double> rho = reduce(a);
                  if (options.renormalize) {
                      const double tr = rho.trace().real();
                      if (tr > 0.0) rho /= tr;
                  }
                  const auto pops = populations(rho);
                  TimeSeriesRecord r;
                  r.t = t;
                  r.p_eee = pops.p_eee;
                  r.p_eeg = pops.p_eeg;
                  r.p_egg = pops.p_egg;
                  r.p_ggg = pops.p_ggg;
                  r.norm = a.norm();
                  r.negativity = negativity(rho).tripartite;
                  r.fidelity = ghz_fidelity(rho);
                  out.push_back(r);
              });
    return out;
}

double max_negativity(const std::vector<TimeSeriesRecord>& series) {
    double best = 0.0;
    for (const auto& r : series) best = std::max(best, r.negativity);
    return best;
}

std::vector<Kink> detect_retardation_kinks(const std::vector<TimeSeriesRecord>& series,
                                           const std::vector<double>& expected_times,
                                           const KinkOptions& options) {
    if (series.size() < 3) throw std::invalid_argument("kink detection needs at least 3 samples");
    const double step = series[1].t - series[0].t;
    if (!(step > 0.0)) throw std::invalid_argument("kink detection needs increasing sample times");
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (std::abs((series[i].t - series[i - 1].t) - step) > 1e-9 * std::max(1.0, step) + 1e-12)
            throw std::invalid_argument("kink detection needs uniformly sampled series");
    }

    auto value = [&](std::size_t i) {
        return options.signal == KinkSignal::GroundPopulation ? series[i].p_ggg
                                                              : series[i].negativity;
    };
    std::vector<double> curvature(series.size(), 0.0);
    for (std::size_t i = 1; i + 1 < series.size(); ++i)
        curvature[i] = std::abs(value(i + 1) - 2.0 * value(i) + value(i - 1));

    std::vector<double> interior(curvature.begin() + 1, curvature.end() - 1);
    auto mid = interior.begin() + static_cast<std::ptrdiff_t>(interior.size() / 2);
    std::nth_element(interior.begin(), mid, interior.end());
    const double median = *mid;

    std::vector<Kink> out;
    out.reserve(expected_times.size());
    for (double expected : expected_times) {
        Kink k;
        k.expected_time = expected;
        double peak = -1.0;
        for (std::size_t i = 1; i + 1 < series.size(); ++i) {
            if (std::abs(series[i].t - expected) > options.window + 1e-9) continue;
            if (curvature[i] > peak) {
                peak = curvature[i];
                k.time = series[i].t;
            }
        }
        if (peak < 0.0) {
            k.time = expected;
            peak = 0.0;
        }
        k.strength = median > 0.0 ? peak / median
                                  : (peak > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        k.detected = k.strength >= options.threshold;
        out.push_back(k);
    }
    return out;
}

std::vector<double> retardation_times(const std::array<double, 3>& positions, double t_max) {
    std::vector<double> offsets{0.0};
    for (int i = 0; i < 3; ++i) {
        offsets.push_back(positions[i]);
        offsets.push_back(-positions[i]);
        for (int j = 0; j < 3; ++j) offsets.push_back(positions[i] - positions[j]);
    }
    std::vector<double> times;
    for (int m = 0; m <= static_cast<int>(std::ceil(t_max)) + 1; ++m)
        for (double off : offsets) {
            const double t = m + off;
            if (t > 1e-9 && t <= t_max + 1e-9) times.push_back(t);
        }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                times.end());
    return times;
}

std::string_view scenario_name(Scenario s) {
    switch (s) {
        case Scenario::NoLossSameLocation: return "no-loss/same-location";
        case Scenario::NoLossSeparated: return "no-loss/separated";
        case Scenario::LossSameLocation: return "loss/same-location";
        case Scenario::LossSeparated: return "loss/separated";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view name) {
    for (Scenario s : kAllScenarios)
        if (scenario_name(s) == name) return s;
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

bool scenario_has_loss(Scenario s) {
    return s == Scenario::LossSameLocation || s == Scenario::LossSeparated;
}

SystemParams scenario_params(const SystemParams& base, Scenario s, int n_modes) {
    SystemParams p = base;
    p.n_modes = n_modes;
    p.positions = (s == Scenario::NoLossSameLocation || s == Scenario::LossSameLocation)
                      ? kSameLocation
                      : kSeparated;
    if (!scenario_has_loss(s)) {
        p.kappa = 0.0;
        p.gamma = 0.0;
    }
    return p;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body,
                  const ProgressFn& progress) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex mutex;
    std::size_t done = 0;

    auto worker = [&] {
        while (!failed) {
            const std::size_t i = next++;
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
            std::lock_guard lock(mutex);
            ++done;
            if (progress) progress(done, count);
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

std::vector<SweepPoint> sweep_max_negativity(const SystemParams& base,
                                             const std::vector<int>& modes_list,
                                             const std::vector<Scenario>& scenarios,
                                             const TimeSeriesOptions& series_options,
                                             const RunnerOptions& runner) {
    if (modes_list.empty()) throw std::invalid_argument("modes list must not be empty");
    if (scenarios.empty()) throw std::invalid_argument("scenario list must not be empty");

    std::vector<SweepPoint> points;
    for (int n : modes_list)
        for (Scenario s : scenarios) points.push_back({n, s, 0.0});
    std::sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
        return a.n_modes != b.n_modes ? a.n_modes < b.n_modes : a.scenario < b.scenario;
    });

    // Largest problems first so the pool drains evenly.
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points[a].n_modes > points[b].n_modes;
    });

    parallel_for(
        points.size(), runner.threads,
        [&](std::size_t k) {
            SweepPoint& pt = points[order[k]];
            const auto series =
                run_time_series(scenario_params(base, pt.scenario, pt.n_modes), series_options);
            pt.max_negativity = max_negativity(series);
        },
        runner.progress);
    return points;
}

std::vector<FidelityMapPoint> fidelity_map(const SystemParams& base,
                                           const std::vector<double>& coop_grid,
                                           const std::vector<double>& t_grid, double dt,
                                           bool renormalize, const RunnerOptions& runner) {
    validate(base);
    if (coop_grid.empty() || t_grid.empty()) throw std::invalid_argument("fidelity map grid is empty");
    for (double c : coop_grid)
        if (!(c > 0.0)) throw std::invalid_argument("cooperativity grid values must be positive");

    const Basis basis(3, 3, base.n_modes);
    const QubitReducer reduce(basis);
    const auto initial = initial_state_all_excited<double>(basis.dimensions());

    std::vector<FidelityMapPoint> out(coop_grid.size() * t_grid.size());
    parallel_for(
        coop_grid.size(), runner.threads,
        [&](std::size_t row) {
            SystemParams p = base;
            p.kappa = p.gamma = loss_rate_for_cooperativity(base.coupling, coop_grid[row]);
            const auto generator = assemble_generic<double>(p, basis);
            sample_at(generator, initial, t_grid, dt,
                      [&](std::size_t s, double t, const StateVector<double>& a) {
                          QubitMatrix<double> rho = reduce(a);
                          if (renormalize) {
                              const double tr = rho.trace().real();
                              if (tr > 0.0) rho /= tr;
                          }
                          out[row * t_grid.size() + s] = {t, coop_grid[row], ghz_fidelity(rho)};
                      });
        },
        runner.progress);
    return out;
}

std::vector<double> linspace(double first, double last, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {first};
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = first + (last - first) * static_cast<double>(i) / static_cast<double>(count - 1);
    v.back() = last;
    return v;
}

std::vector<double> logspace(double first, double last, std::size_t count) {
    if (!(first > 0.0) || !(last > 0.0)) throw std::invalid_argument("logspace bounds must be positive");
    std::vector<double> v = linspace(std::log(first), std::log(last), count);
    for (double& x : v) x = std::exp(x);
    if (!v.empty()) {
        v.front() = first;
        v.back() = last;
    }
    return v;
}

namespace {

template <typename WriteRows>
void write_atomically(const std::filesystem::path& path, WriteRows&& write_rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot open " + tmp.string() + " for writing");
        out.precision(17);
        write_rows(out);
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::ios_base::failure("failed while writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_time_series_csv(const std::filesystem::path& path,
                           const std::vector<TimeSeriesRecord>& records) {
    write_atomically(path, [&](std::ostream& out) {
        out << "t,p_eee,p_eeg,p_egg,p_ggg,norm,negativity,fidelity\n";
        for (const auto& r : records)
            out << r.t << ',' << r.p_eee << ',' << r.p_eeg << ',' << r.p_egg << ',' << r.p_ggg
                << ',' << r.norm << ',' << r.negativity << ',' << r.fidelity << '\n';
    });
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points) {
    write_atomically(path, [&](std::ostream& out) {
        out << "n_modes,scenario,max_negativity\n";
        for (const auto& p : points)
            out << p.n_modes << ',' << scenario_name(p.scenario) << ',' << p.max_negativity << '\n';
    });
}

void write_fidelity_map_csv(const std::filesystem::path& path,
                            const std::vector<FidelityMapPoint>& points) {
    write_atomically(path, [&](std::ostream& out) {
        out << "t,cooperativity,fidelity\n";
        for (const auto& p : points) out << p.t << ',' << p.cooperativity << ',' << p.fidelity << '\n';
    });
}

}  // namespace tricav
