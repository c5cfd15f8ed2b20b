#include "tricav/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tricav {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

bool known_key(const std::string& key) {
    const auto& keys = config_keys();
    return std::any_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == key; });
}

// Typed readers append to `problems` instead of throwing so that every bad
// key is reported in one pass.
class Reader {
public:
    Reader(const ConfigValues& values, std::vector<std::string>& problems)
        : values_(values), problems_(problems) {}

    std::optional<std::string> raw(const std::string& key) const {
        auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        for (const auto& k : config_keys())
            if (k.name == key && !k.default_value.empty()) return k.default_value;
        return std::nullopt;
    }

    std::optional<std::string> required(const std::string& key) {
        auto v = raw(key);
        if (!v) problems_.push_back("missing required key '" + key + "'");
        return v;
    }

    double real(const std::string& key, double fallback = 0.0) {
        auto v = required(key);
        if (!v) return fallback;
        return to_double(key, *v, fallback);
    }

    long integer(const std::string& key, long fallback = 0) {
        auto v = required(key);
        if (!v) return fallback;
        long out = 0;
        const auto* end = v->data() + v->size();
        auto [ptr, ec] = std::from_chars(v->data(), end, out);
        if (ec != std::errc() || ptr != end) {
            problems_.push_back("key '" + key + "': expected an integer, got '" + *v + "'");
            return fallback;
        }
        return out;
    }

    bool boolean(const std::string& key) {
        auto v = required(key);
        if (!v) return false;
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        problems_.push_back("key '" + key + "': expected true or false, got '" + *v + "'");
        return false;
    }

    double to_double(const std::string& key, const std::string& text, double fallback) {
        try {
            std::size_t used = 0;
            const double x = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return x;
        } catch (const std::exception&) {
            problems_.push_back("key '" + key + "': expected a number, got '" + text + "'");
            return fallback;
        }
    }

    void problem(std::string msg) { problems_.push_back(std::move(msg)); }

private:
    const ConfigValues& values_;
    std::vector<std::string>& problems_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("configuration error: " + join(problems, "; ")),
      problems_(std::move(problems)) {}

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys{
        {"n_modes", "count", "1", "number of cavity modes N_m"},
        {"cavity_length_lambda", "lambda_eg", "994.28", "cavity round-trip length L"},
        {"positions", "fractions of L", "0,0,0", "qubit positions x1,x2,x3 in [0,1)"},
        {"coupling_g", "c/L", "", "coupling magnitude |G| (reference value 1.9729201864543902 = 0.314*2pi)"},
        {"kappa", "c/L", "0", "cavity leakage rate per mode"},
        {"gamma", "c/L", "0", "spontaneous emission rate per qubit"},
        {"t_max", "L/c", "5", "final time"},
        {"dt", "L/c", "1e-4", "RK4 step"},
        {"output_stride", "steps", "100", "RK4 steps between time-series samples"},
        {"output_path", "path", "", "CSV file to write (relative paths honour TRICAV_OUTPUT_DIR)"},
        {"detuning_reference", "-", "resonant-mode",
         "resonant-mode: qubit tuned to the nearest mode; cavity-length: Delta_n = 2pi(n - L/lambda_eg)"},
        {"resonant_mode", "mode number", "auto", "override for the central mode n0 (auto = round(L/lambda_eg))"},
        {"renormalize", "bool", "false", "divide the qubit state by its trace before computing observables"},
        {"sweep_modes", "list of counts", "1-9", "sweep-modes: mode counts, e.g. 1-31 or 1,3,7"},
        {"scenarios", "list", "all",
         "sweep-modes: subset of no-loss/same-location,no-loss/separated,loss/same-location,loss/separated"},
        {"coop_min", "1", "0.005", "fidelity-map: smallest cooperativity"},
        {"coop_max", "1", "120", "fidelity-map: largest cooperativity"},
        {"coop_count", "count", "60", "fidelity-map: log-spaced cooperativity samples"},
        {"time_samples", "count", "400", "fidelity-map: evenly spaced times in [0, t_max]"},
    };
    return keys;
}

ConfigValues parse_config_text(const std::string& text, const std::string& origin) {
    ConfigValues values;
    std::vector<std::string> problems;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            problems.push_back(where + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key)) {
            problems.push_back(where + ": unknown key '" + key + "'");
            continue;
        }
        if (!values.emplace(key, value).second) problems.push_back(where + ": duplicate key '" + key + "'");
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return values;
}

ConfigValues read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) {
        if (item.empty()) continue;
        const auto dash = item.find('-', 1);
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, dash));
                const int hi = std::stoi(item.substr(dash + 1));
                if (hi < lo) throw std::invalid_argument(item);
                for (int k = lo; k <= hi; ++k) out.push_back(k);
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed integer list entry '" + item + "'");
        }
    }
    return out;
}

std::filesystem::path resolve_output_path(const std::filesystem::path& path) {
    const char* dir = std::getenv("TRICAV_OUTPUT_DIR");
    if (dir && *dir && path.is_relative()) return std::filesystem::path(dir) / path;
    return path;
}

RunConfig build_run_config(Subcommand subcommand, const ConfigValues& values) {
    std::vector<std::string> problems;
    for (const auto& [key, value] : values)
        if (!known_key(key)) problems.push_back("unknown key '" + key + "'");
    Reader r(values, problems);

    RunConfig cfg;
    cfg.subcommand = subcommand;
    SystemParams& p = cfg.params;

    p.n_modes = static_cast<int>(r.integer("n_modes", 1));
    p.cavity_length = r.real("cavity_length_lambda", 994.28);
    if (auto pos = r.required("positions")) {
        const auto parts = split(*pos, ',');
        if (parts.size() != 3) {
            r.problem("key 'positions': expected 3 comma-separated fractions of L, got '" + *pos + "'");
        } else {
            for (int j = 0; j < 3; ++j) p.positions[j] = r.to_double("positions", parts[j], 0.0);
        }
    }
    p.coupling = r.real("coupling_g", kReferenceCoupling);
    p.kappa = r.real("kappa");
    p.gamma = r.real("gamma");

    if (auto ref = r.required("detuning_reference")) {
        if (*ref == "resonant-mode") p.detuning_reference = DetuningReference::ResonantMode;
        else if (*ref == "cavity-length") p.detuning_reference = DetuningReference::CavityLength;
        else r.problem("key 'detuning_reference': expected resonant-mode or cavity-length, got '" + *ref + "'");
    }
    if (auto n0 = r.raw("resonant_mode"); n0 && *n0 != "auto") {
        p.resonant_mode_override = static_cast<int>(r.integer("resonant_mode"));
    }

    cfg.series.t_max = r.real("t_max", 5.0);
    cfg.series.dt = r.real("dt", 1e-4);
    cfg.series.stride = r.integer("output_stride", 100);
    cfg.series.renormalize = r.boolean("renormalize");

    if (subcommand != Subcommand::Count) {
        if (auto out = r.required("output_path")) cfg.output_path = resolve_output_path(*out);
    }

    if (subcommand == Subcommand::SweepModes) {
        try {
            cfg.sweep_modes = parse_int_list(*r.raw("sweep_modes"));
            if (cfg.sweep_modes.empty()) r.problem("key 'sweep_modes': no mode counts given");
            for (int n : cfg.sweep_modes)
                if (n < 1) r.problem("key 'sweep_modes': mode counts must be at least 1");
        } catch (const std::invalid_argument& e) {
            r.problem(std::string("key 'sweep_modes': ") + e.what());
        }
        const std::string sc = *r.raw("scenarios");
        if (sc == "all") {
            cfg.scenarios.assign(kAllScenarios.begin(), kAllScenarios.end());
        } else {
            for (const auto& name : split(sc, ',')) {
                try {
                    cfg.scenarios.push_back(parse_scenario(name));
                } catch (const std::invalid_argument& e) {
                    r.problem(std::string("key 'scenarios': ") + e.what());
                }
            }
        }
        const bool any_loss = std::any_of(cfg.scenarios.begin(), cfg.scenarios.end(), scenario_has_loss);
        if (any_loss && p.kappa <= 0.0 && p.gamma <= 0.0)
            r.problem("key 'kappa'/'gamma': loss scenarios need a positive kappa or gamma");
    }

    if (subcommand == Subcommand::FidelityMap) {
        cfg.coop_min = r.real("coop_min", 0.005);
        cfg.coop_max = r.real("coop_max", 120.0);
        const long cc = r.integer("coop_count", 60);
        const long ts = r.integer("time_samples", 400);
        if (!(cfg.coop_min > 0.0)) r.problem("key 'coop_min': cooperativity must be positive (zero loss is not a cooperativity)");
        if (!(cfg.coop_max >= cfg.coop_min)) r.problem("key 'coop_max': must be at least coop_min");
        if (cc < 1) r.problem("key 'coop_count': must be at least 1");
        if (ts < 2) r.problem("key 'time_samples': must be at least 2");
        cfg.coop_count = static_cast<std::size_t>(std::max(cc, 1L));
        cfg.time_samples = static_cast<std::size_t>(std::max(ts, 2L));
        if (values.count("kappa") || values.count("gamma"))
            r.problem("key 'kappa'/'gamma': fidelity-map derives the loss rates from the cooperativity grid; remove them");
    }

    if (problems.empty()) {
        try {
            validate(p);
        } catch (const std::invalid_argument& e) {
            problems.push_back(e.what());
        }
        if (!(cfg.series.dt > 0.0)) problems.push_back("key 'dt': must be positive");
        if (!(cfg.series.t_max >= cfg.series.dt)) problems.push_back("key 't_max': must be at least dt");
        if (cfg.series.stride < 1) problems.push_back("key 'output_stride': must be at least 1");
        if (subcommand == Subcommand::Evolve || subcommand == Subcommand::SweepModes) {
            if (cfg.series.dt > 0.0 && cfg.series.stride >= 1) {
                const long steps = std::lround(cfg.series.t_max / cfg.series.dt);
                if (steps % cfg.series.stride != 0)
                    problems.push_back("key 'output_stride': t_max/dt must be a multiple of it");
            }
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

}  // namespace tricav
