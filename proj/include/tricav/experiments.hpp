#ifndef TRICAV_EXPERIMENTS_HPP
#define TRICAV_EXPERIMENTS_HPP

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tricav/model.hpp"

namespace tricav {

struct TimeSeriesRecord {
    double t = 0;
    double p_eee = 0, p_eeg = 0, p_egg = 0, p_ggg = 0;
    double norm = 0;  ///< ||A(t)||, so the populations sum to norm^2
    double negativity = 0;
    double fidelity = 0;
};

struct TimeSeriesOptions {
    double t_max = 5.0;
    double dt = 1e-4;
    long stride = 100;
    /// Divide the qubit state by its trace before computing observables.
    bool renormalize = false;
};

/// Evolves the all-excited initial state and samples observables every
/// `stride` steps.
std::vector<TimeSeriesRecord> run_time_series(const SystemParams& params,
                                              const TimeSeriesOptions& options = {});

double max_negativity(const std::vector<TimeSeriesRecord>& series);

enum class KinkSignal { GroundPopulation, Negativity };

struct KinkOptions {
    double window = 0.02;    ///< search half-width around each expected time, L/c
    double threshold = 5.0;  ///< strength needed to call a kink
    KinkSignal signal = KinkSignal::GroundPopulation;
};

struct Kink {
    double expected_time = 0;
    double time = 0;      ///< location of the largest |second difference| in the window
    double strength = 0;  ///< that peak over the series' median |second difference|
    bool detected = false;
};

/// Discrete second difference of the chosen signal, peak-searched around each
/// expected time. Throws std::invalid_argument on non-uniform sampling.
std::vector<Kink> detect_retardation_kinks(const std::vector<TimeSeriesRecord>& series,
                                           const std::vector<double>& expected_times,
                                           const KinkOptions& options = {});

/// Photon flight times up to t_max: round trips m, and m +- x_j, m +- (x_i - x_j)
/// for positions given as fractions of L. Sorted, deduplicated.
std::vector<double> retardation_times(const std::array<double, 3>& positions, double t_max);

enum class Scenario { NoLossSameLocation, NoLossSeparated, LossSameLocation, LossSeparated };

inline constexpr std::array<Scenario, 4> kAllScenarios{
    Scenario::NoLossSameLocation, Scenario::NoLossSeparated, Scenario::LossSameLocation,
    Scenario::LossSeparated};

std::string_view scenario_name(Scenario s);
/// Accepts the names produced by scenario_name. Throws std::invalid_argument.
Scenario parse_scenario(std::string_view name);
bool scenario_has_loss(Scenario s);

inline constexpr std::array<double, 3> kSameLocation{0.0, 0.0, 0.0};
inline constexpr std::array<double, 3> kSeparated{0.0, 1.0 / 3.0, 2.0 / 3.0};

/// Base parameters specialised to a scenario: positions are replaced, and
/// the no-loss scenarios zero kappa and gamma.
SystemParams scenario_params(const SystemParams& base, Scenario s, int n_modes);

struct SweepPoint {
    int n_modes = 0;
    Scenario scenario = Scenario::NoLossSameLocation;
    double max_negativity = 0;
};

/// Called after each finished unit of work with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

struct RunnerOptions {
    unsigned threads = 1;
    ProgressFn progress;
};

/// Maximum tripartite negativity over the sampled grid for each
/// (n_modes, scenario). Sorted by n_modes, then scenario order.
std::vector<SweepPoint> sweep_max_negativity(const SystemParams& base,
                                             const std::vector<int>& modes_list,
                                             const std::vector<Scenario>& scenarios,
                                             const TimeSeriesOptions& series_options = {},
                                             const RunnerOptions& runner = {});

struct FidelityMapPoint {
    double t = 0;
    double cooperativity = 0;
    double fidelity = 0;
};

/// GHZ fidelity over a (cooperativity, time) grid with kappa = gamma =
/// |G| / sqrt(C). Rows ordered by cooperativity then time, as given.
std::vector<FidelityMapPoint> fidelity_map(const SystemParams& base,
                                           const std::vector<double>& coop_grid,
                                           const std::vector<double>& t_grid, double dt,
                                           bool renormalize = false, const RunnerOptions& runner = {});

std::vector<double> linspace(double first, double last, std::size_t count);
std::vector<double> logspace(double first, double last, std::size_t count);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body,
                  const ProgressFn& progress = {});

// CSV output. Each writer goes through a temporary file that is renamed into
// place, so a failed run leaves no partial file.
void write_time_series_csv(const std::filesystem::path& path,
                           const std::vector<TimeSeriesRecord>& records);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points);
void write_fidelity_map_csv(const std::filesystem::path& path,
                            const std::vector<FidelityMapPoint>& points);

}  // namespace tricav

#endif  // TRICAV_EXPERIMENTS_HPP
