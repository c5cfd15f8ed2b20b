// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
//   tricav_acceptance            full run (includes the 31-mode sweep)
//   tricav_acceptance --quick    mode sweep limited to 1..9, plateau check skipped

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tricav/experiments.hpp"
#include "tricav/generator.hpp"
#include "tricav/hilbert.hpp"
#include "tricav/integrate.hpp"
#include "tricav/model.hpp"
#include "tricav/observables.hpp"

using namespace tricav;

namespace {

using Rho = QubitMatrix<double>;
using Series = std::vector<TimeSeriesRecord>;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Tally {
    int passed = 0, failed = 0;
};

void criterion(Tally& tally, const std::string& name, const std::function<void(Outcome&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    o.detail.precision(4);
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-34s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
    (o.pass ? tally.passed : tally.failed)++;
}

constexpr double kG = kReferenceCoupling;

SystemParams single_mode(std::array<double, 3> positions = kSameLocation, double loss = 0.0) {
    SystemParams p;
    p.coupling = kG;
    p.positions = positions;
    p.kappa = p.gamma = loss;
    return p;
}


Rho ghz_projector() {
    Rho rho = Rho::Zero();
    rho(kGGG, kGGG) = rho(kEEE, kEEE) = rho(kGGG, kEEE) = rho(kEEE, kGGG) = 0.5;
    return rho;
}

Rho random_density(std::mt19937_64& rng, int rank) {
    std::normal_distribution<double> n;
    Eigen::Matrix<std::complex<double>, 8, Eigen::Dynamic> x(8, rank);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < rank; ++j) x(i, j) = {n(rng), n(rng)};
    Rho rho = x * x.adjoint();
    return rho / rho.trace().real();
}

double uhlmann(const Rho& r, const Rho& s) {
    Eigen::SelfAdjointEigenSolver<Rho> es(s);
    const auto ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Rho sq = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    Rho inner = sq * r * sq;
    inner = (inner + inner.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<Rho> e2(inner);
    const double tr = e2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

double dense_cut_negativity(const Rho& rho, int qubit) {
    Eigen::SelfAdjointEigenSolver<Rho> es(partial_transpose(rho, qubit));
    double s = 0;
    for (int k = 0; k < 8; ++k) s += std::abs(es.eigenvalues()(k)) - es.eigenvalues()(k);
    return s;
}

// Number of grid cells with F >= level, and the latest time at which any
// cooperativity reaches it.
std::pair<std::size_t, double> region(const std::vector<FidelityMapPoint>& map, double level) {
    std::size_t area = 0;
    double reach = 0.0;
    for (const auto& p : map)
        if (p.fidelity >= level) {
            ++area;
            reach = std::max(reach, p.t);
        }
    return {area, reach};
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    Tally tally;
    std::vector<Series> fidelity_witnesses;

    std::printf("tricav acceptance suite (g = %.6f c/L, dt = 1e-4 L/c, stride 100)%s\n", kG,
                quick ? " [quick]" : "");

    criterion(tally, "amplitude counts", [](Outcome& o) {
        const auto c4 = count_amplitudes(2, 2, 1), c38 = count_amplitudes(3, 3, 3), c190 = count_amplitudes(3, 3, 7);
        o.detail << "4/38/190 -> " << c4 << "/" << c38 << "/" << c190;
        o.require(c4 == 4 && c38 == 38 && c190 == 190, "exact counts");
        for (int nm = 1; nm <= 8; ++nm)
            o.require(enumerate_basis(3, 3, nm).size() == count_amplitudes(3, 3, nm),
                      "enumeration length at N_m=" + std::to_string(nm));
    });

    criterion(tally, "assembly equivalence", [](Outcome& o) {
        double worst = 0.0;
        for (int nm : {1, 2, 3, 7})
            for (auto pos : {kSameLocation, kSeparated})
                for (double loss : {0.0, 0.1 * kG}) {
                    auto p = single_mode(pos, loss);
                    p.n_modes = nm;
                    const Basis basis(3, 3, nm);
                    worst = std::max(worst, max_entry_difference(assemble_generic(p, basis), assemble_by_family(p, basis)));
                }
        o.detail << "max |generic - by-family| = " << worst;
        o.require(worst < 1e-12, "< 1e-12");
    });

    criterion(tally, "lossless norm, dt halving", [&](Outcome& o) {
        double norm_dev = 0.0, halving = 0.0;
        for (int nm : {1, 7}) {
            auto p = single_mode();
            p.n_modes = nm;
            TimeSeriesOptions base;
            const Series a = run_time_series(p, base);
            TimeSeriesOptions fine = base;
            fine.dt = base.dt / 2;
            fine.stride = base.stride * 2;
            const Series b = run_time_series(p, fine);
            if (a.size() != b.size()) throw std::runtime_error("grid mismatch");
            for (std::size_t k = 0; k < a.size(); ++k) {
                norm_dev = std::max(norm_dev, std::abs(a[k].norm - 1.0));
                const double d[] = {a[k].p_eee - b[k].p_eee, a[k].p_eeg - b[k].p_eeg, a[k].p_egg - b[k].p_egg,
                                    a[k].p_ggg - b[k].p_ggg, a[k].norm - b[k].norm,
                                    a[k].negativity - b[k].negativity, a[k].fidelity - b[k].fidelity};
                for (double x : d) halving = std::max(halving, std::abs(x));
            }
            fidelity_witnesses.push_back(a);
        }
        o.detail << "max |norm-1| = " << norm_dev << ", max observable change = " << halving;
        o.require(norm_dev <= 1e-9, "norm within 1e-9");
        o.require(halving < 1e-8, "halving dt < 1e-8");
    });

    criterion(tally, "single-mode lossless landmarks", [&](Outcome& o) {
        const Series s = run_time_series(single_mode());
        fidelity_witnesses.push_back(s);
        // P_eee and P_ggg meet near t = 0.875
        std::size_t best = 0;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (std::abs(s[k].t - 0.875) <= 0.05 &&
                std::abs(s[k].p_eee - s[k].p_ggg) < std::abs(s[best].p_eee - s[best].p_ggg))
                best = k;
        const double peak = max_negativity(s);
        o.detail << "P_eee(0)=" << s[0].p_eee << ", crossing t=" << s[best].t << " P_eee=" << s[best].p_eee
                 << " P_ggg=" << s[best].p_ggg << ", max N=" << peak << ", N(0)=" << s[0].negativity;
        o.require(s[0].p_eee == 1.0, "P_eee(0) == 1");
        o.require(std::abs(s[best].p_eee - 0.2) <= 0.05 && std::abs(s[best].p_ggg - 0.2) <= 0.05,
                  "P_eee ~ P_ggg ~ 0.2 near t=0.875");
        o.require(std::abs(peak - 0.68) <= 0.05, "max N = 0.68 +- 0.05");
        o.require(s[0].negativity == 0.0, "N(0) == 0");
    });

    criterion(tally, "single-mode lossy landmarks", [&](Outcome& o) {
        const auto p = single_mode(kSeparated, 0.1 * kG);
        const Series s = run_time_series(p);
        fidelity_witnesses.push_back(s);
        const double peak = max_negativity(s);
        const double last = s.back().negativity;

        const Basis basis(3, 3, 1);
        bool monotone = true;
        double previous = 1.0;
        propagate(assemble_generic(p, basis), initial_state_all_excited(basis.dimensions()), 5.0, 1e-4, 1,
                  [&](long, double, const StateVector<double>& a) {
                      const double n = a.norm();
                      monotone = monotone && n <= previous;
                      previous = n;
                  });
        o.detail << "C=" << cooperativity(p) << ", max N=" << peak << ", N(5)=" << last
                 << ", norm(5)=" << previous;
        o.require(std::abs(peak - 0.20) <= 0.05, "max N = 0.20 +- 0.05");
        o.require(last < 0.02, "N(5) < 0.02");
        o.require(monotone, "norm non-increasing every step");
    });

    criterion(tally, "retardation kinks", [&](Outcome& o) {
        auto p = single_mode();
        p.n_modes = 31;
        const Series same = run_time_series(p);
        p.positions = kSeparated;
        const Series sep = run_time_series(p);
        const Series one = run_time_series(single_mode());
        fidelity_witnesses.push_back(same);
        fidelity_witnesses.push_back(sep);

        const auto k_same = detect_retardation_kinks(same, {1.0, 1.0 / 3});
        const auto k_sep = detect_retardation_kinks(sep, {1.0 / 3, 2.0 / 3});
        const auto k_one = detect_retardation_kinks(one, {1.0});
        auto show = [&](const char* label, const Kink& k) {
            o.detail << label << " " << k.expected_time << "->" << k.time << " x" << k.strength << "; ";
        };
        show("same", k_same[0]);
        show("same", k_same[1]);
        show("sep", k_sep[0]);
        show("sep", k_sep[1]);
        show("N_m=1", k_one[0]);
        o.require(k_same[0].detected && std::abs(k_same[0].time - 1.0) <= 0.02 + 1e-9, "same-location kink at L/c");
        o.require(k_sep[0].detected, "separated kink near L/3");
        o.require(k_sep[1].detected, "separated kink near 2L/3");
        o.require(!k_one[0].detected, "no single-mode kink at L/c");

        // position control of revivals near t = 3 L/c
        double best_window = -1.0;
        for (std::size_t k = 0; k < same.size(); ++k)
            if (same[k].t >= 2.5 && same[k].t <= 3.5 && sep[k].negativity > 0.05 && same[k].negativity < 0.01)
                best_window = same[k].t;
        o.detail << "revival control sample t=" << best_window;
    });

    criterion(tally, quick ? "mode sweep (1..9)" : "mode sweep (1..31)", [&](Outcome& o) {
        SystemParams base = single_mode(kSameLocation, 0.1 * kG);
        std::vector<int> modes;
        for (int n = 1; n <= (quick ? 9 : 31); ++n) modes.push_back(n);
        const std::vector<Scenario> all(kAllScenarios.begin(), kAllScenarios.end());
        const auto points = sweep_max_negativity(base, modes, all);
        std::map<std::pair<Scenario, int>, double> v;
        for (const auto& pt : points) v[{pt.scenario, pt.n_modes}] = pt.max_negativity;

        for (Scenario s : {Scenario::NoLossSameLocation, Scenario::NoLossSeparated}) {
            double rest = 0.0;
            for (int n : modes)
                if (n > 1) rest = std::max(rest, v[{s, n}]);
            o.detail << scenario_name(s) << " N1=" << v[{s, 1}] << " max(N>1)=" << rest << "; ";
            o.require(v[{s, 1}] > rest, std::string(scenario_name(s)) + " single mode highest");
        }
        int violations = 0;
        for (int n : modes) {
            violations += v[{Scenario::LossSameLocation, n}] > v[{Scenario::NoLossSameLocation, n}];
            violations += v[{Scenario::LossSeparated, n}] > v[{Scenario::NoLossSeparated, n}];
        }
        o.detail << "lossy>lossless at " << violations << " points; ";
        o.require(violations == 0, "lossy <= lossless pointwise");
        if (!quick) {
            double worst = 0.0;
            for (Scenario s : all)
                for (int n = 16; n <= 31; ++n) {
                    const double prev = v[{s, n - 1}], cur = v[{s, n}];
                    worst = std::max(worst, std::abs(cur - prev) / prev);
                }
            o.detail << "plateau max successive change (N>=15) = " << 100 * worst << "%";
            o.require(worst < 0.15, "plateau < 15%");
        } else {
            o.detail << "plateau not evaluated in quick mode";
        }
    });

    criterion(tally, "fidelity identities", [&](Outcome& o) {
        double worst_identity = 0.0, worst_start = 0.0, worst_uhlmann = 0.0;
        std::size_t samples = 0;
        for (const auto& s : fidelity_witnesses) {
            worst_start = std::max(worst_start, std::abs(s[0].fidelity - 0.5));
            for (const auto& r : s) {
                worst_identity = std::max(worst_identity, std::abs(r.fidelity - 0.5 * (r.p_eee + r.p_ggg)));
                ++samples;
            }
        }
        std::mt19937_64 rng(20261016);
        const Rho ghz = ghz_projector();
        for (int k = 0; k < 100; ++k) {
            const Rho rho = random_density(rng, 1 + k % 8);
            worst_uhlmann = std::max(worst_uhlmann, std::abs(ghz_fidelity(rho) - uhlmann(rho, ghz)));
        }
        o.detail << samples << " samples: max |F - (P_eee+P_ggg)/2| = " << worst_identity
                 << ", max |F(0)-0.5| = " << worst_start << ", Uhlmann diff = " << worst_uhlmann;
        o.require(samples > 0 && worst_identity <= 1e-10, "block identity");
        o.require(worst_start == 0.0, "F(0) == 0.5 exactly");
        o.require(worst_uhlmann <= 1e-10, "closed form vs Uhlmann");
    });

    criterion(tally, "negativity oracle", [](Outcome& o) {
        const Rho ghz = ghz_projector();
        const auto n = negativity(ghz);
        double worst = 0.0;
        for (int q = 0; q < 3; ++q) {
            const double dense = dense_cut_negativity(ghz, q);
            worst = std::max({worst, std::abs(n.per_cut[q] - 1.0), std::abs(n.per_cut[q] - dense)});
        }
        Rho classical = Rho::Zero();
        classical(kGGG, kGGG) = classical(kEEE, kEEE) = 0.5;
        Rho product = Rho::Zero();
        product(kEEE, kEEE) = 1.0;
        const double ppt = std::max({negativity(classical).tripartite, negativity(product).tripartite,
                                     negativity(Rho(Rho::Identity() / 8.0)).tripartite});
        o.detail << "GHZ per-cut " << n.per_cut[0] << "/" << n.per_cut[1] << "/" << n.per_cut[2]
                 << " (max dev " << worst << "), PPT max " << ppt;
        o.require(worst < 1e-12, "GHZ cuts = 1 and match dense solver");
        o.require(ppt < 1e-14, "PPT states give 0");
    });

    criterion(tally, "fidelity map region (N_m=7)", [](Outcome& o) {
        const auto coops = logspace(0.005, 120.0, 60);
        const auto times = linspace(0.0, 5.0, 400);
        auto base = single_mode();
        base.n_modes = 7;
        const auto same = fidelity_map(base, coops, times, 1e-4);
        base.positions = kSeparated;
        const auto sep = fidelity_map(base, coops, times, 1e-4);
        const auto [a_same, reach_same] = region(same, 0.35);
        const auto [a_sep, reach_sep] = region(sep, 0.35);
        const double ratio = a_sep > 0 ? static_cast<double>(a_same) / a_sep : INFINITY;
        o.detail << "F>=0.35 area same=" << a_same << " (reaches t=" << reach_same << "), separated=" << a_sep
                 << " (reaches t=" << reach_sep << "), ratio=" << ratio;
        o.require(std::abs(reach_same - 1.5) <= 0.5, "same-location region reaches t ~ 1.5");
        o.require(ratio >= 3.0, "area ratio >= 3");
    });

    std::printf("summary: %d passed, %d failed\n", tally.passed, tally.failed);
    return tally.failed == 0 ? 0 : 1;
}
