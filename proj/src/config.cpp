#include "wqed/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <climits>
#include <cstdlib>

#include "wqed/csv.hpp"

namespace wqed {

namespace {

constexpr std::array<const char*, 16> kFigureIds = {"1a", "1b", "1c", "2a", "2b", "2c", "2d", "3",
                                                    "4a", "4b", "5a", "5b", "6a", "6b", "7a", "7b"};

constexpr std::array<const char*, 7> kExperiments = {"spectrum", "eigen",    "evolve", "storage",
                                                     "ensemble", "analytic", "figure"};

std::string trim(const std::string& s) {
    std::size_t lo = 0;
    std::size_t hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return s.substr(lo, hi - lo);
}

bool to_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

bool to_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) return false;
    if (v < INT_MIN || v > INT_MAX) return false;
    out = static_cast<int>(v);
    return true;
}

bool to_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty() || s[0] == '-') return false;
    char* end = nullptr;
    out = std::strtoull(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

bool to_bool(const std::string& s, bool& out) {
    std::string v = s;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        out = false;
        return true;
    }
    return false;
}

bool to_double_list(const std::string& s, std::vector<double>& out) {
    out.clear();
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string piece =
            trim(comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start));
        double v = 0.0;
        if (!to_double(piece, v)) return false;
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return !out.empty();
}

struct KeyValue {
    std::string key;
    std::string value;
    int line;
};

std::vector<KeyValue> tokenize(const std::string& text, std::vector<std::string>& errors) {
    std::vector<KeyValue> items;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string line =
            eol == std::string::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        ++line_no;
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t colon = line.find(':');
        if (colon == std::string::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected 'key: value', got '" +
                             line + "'");
            continue;
        }
        KeyValue kv{trim(line.substr(0, colon)), trim(line.substr(colon + 1)), line_no};
        if (kv.key.empty()) {
            errors.push_back("line " + std::to_string(line_no) + ": empty key");
            continue;
        }
        items.push_back(std::move(kv));
    }
    return items;
}

void apply_key(RunConfig& config, const KeyValue& kv, std::vector<std::string>& errors) {
    const auto fail = [&](const char* expected) {
        errors.push_back("line " + std::to_string(kv.line) + ": " + kv.key + ": expected " +
                         expected + ", got '" + kv.value + "'");
    };
    const auto set_double = [&](double& field) {
        if (!to_double(kv.value, field)) fail("a number");
    };
    const auto set_int = [&](int& field) {
        if (!to_int(kv.value, field)) fail("an integer");
    };
    const auto set_bool = [&](bool& field) {
        if (!to_bool(kv.value, field)) fail("a boolean");
    };
    const auto set_list = [&](std::vector<double>& field) {
        if (!to_double_list(kv.value, field)) fail("a comma-separated number list");
    };

    const std::string& k = kv.key;
    if (k == "experiment") {
        config.experiment = kv.value;
    } else if (k == "out") {
        config.out_dir = kv.value;
    } else if (k == "seed") {
        if (!to_u64(kv.value, config.seed)) fail("an unsigned integer");
    } else if (k == "threads") {
        set_int(config.threads);
    } else if (k == "n_atoms") {
        set_int(config.n_atoms);
    } else if (k == "spacing") {
        set_double(config.spacing);
    } else if (k == "positions") {
        set_list(config.positions);
    } else if (k == "gamma_ratio") {
        set_double(config.gamma_ratio);
    } else if (k == "drive_amplitude") {
        double v = 0.0;
        if (to_double(kv.value, v)) {
            config.drive_amplitude = v;
        } else {
            fail("a number");
        }
    } else if (k == "detunings") {
        set_list(config.detunings);
    } else if (k == "grid.min") {
        set_double(config.grid_min);
    } else if (k == "grid.max") {
        set_double(config.grid_max);
    } else if (k == "grid.steps") {
        set_int(config.grid_steps);
    } else if (k == "horizon") {
        set_double(config.horizon);
    } else if (k == "n_samples") {
        set_int(config.n_samples);
    } else if (k == "integrator.rtol") {
        set_double(config.rtol);
    } else if (k == "integrator.atol") {
        set_double(config.atol);
    } else if (k == "storage.switch_time") {
        set_double(config.switch_time);
    } else if (k == "storage.ramp_duration") {
        set_double(config.ramp_duration);
    } else if (k == "storage.first_detuning") {
        set_double(config.first_detuning);
    } else if (k == "storage.rest_detuning") {
        set_double(config.rest_detuning);
    } else if (k == "storage.start_from_steady") {
        set_bool(config.start_from_steady);
    } else if (k == "ensemble.model") {
        config.model = kv.value;
    } else if (k == "ensemble.rms") {
        set_double(config.rms);
    } else if (k == "ensemble.interval") {
        set_double(config.interval);
    } else if (k == "ensemble.depth") {
        set_double(config.depth);
    } else if (k == "ensemble.realizations") {
        set_int(config.realizations);
    } else {
        errors.push_back("line " + std::to_string(kv.line) + ": unknown key '" + k + "'");
    }
}

void validate(const RunConfig& config, std::vector<std::string>& errors) {
    if (std::find_if(kExperiments.begin(), kExperiments.end(), [&](const char* e) {
            return config.experiment == e;
        }) == kExperiments.end()) {
        errors.push_back("experiment: unknown experiment '" + config.experiment + "'");
    }
    if (config.threads < 1) errors.push_back("threads: must be >= 1");
    if (config.n_atoms < 1) errors.push_back("n_atoms: must be >= 1");
    if (!(config.spacing > 0.0)) errors.push_back("spacing: must be > 0");
    if (!(config.gamma_ratio > 0.0)) {
        errors.push_back("gamma_ratio: must be > 0");
    } else if (config.gamma_ratio > 1.0) {
        errors.push_back("gamma_ratio: gamma_w must not exceed gamma_t");
    }
    if (!config.positions.empty() && !config.detunings.empty() &&
        config.positions.size() != config.detunings.size()) {
        errors.push_back("detunings: must match positions in length");
    }
    if (config.positions.empty() && !config.detunings.empty() &&
        static_cast<int>(config.detunings.size()) != config.n_atoms) {
        errors.push_back("detunings: must have one entry per atom");
    }
    if (config.grid_steps < 1) errors.push_back("grid.steps: must be >= 1");
    if (config.grid_steps > 1 && !(config.grid_max > config.grid_min)) {
        errors.push_back("grid.max: must exceed grid.min");
    }
    if (!(config.horizon > 0.0)) errors.push_back("horizon: must be > 0");
    if (config.n_samples < 2) errors.push_back("n_samples: must be >= 2");
    if (!(config.rtol > 0.0)) errors.push_back("integrator.rtol: must be > 0");
    if (!(config.atol > 0.0)) errors.push_back("integrator.atol: must be > 0");

    if (config.experiment == "storage") {
        if (!(config.switch_time > 0.0)) errors.push_back("storage.switch_time: must be > 0");
        if (config.ramp_duration < 0.0) errors.push_back("storage.ramp_duration: must be >= 0");
        if (!(config.horizon > config.switch_time + config.ramp_duration)) {
            errors.push_back("horizon: must exceed storage.switch_time + storage.ramp_duration");
        }
        if (config.first_detuning == 0.0) errors.push_back("storage.first_detuning: must be nonzero");
        if (config.rest_detuning == 0.0) errors.push_back("storage.rest_detuning: must be nonzero");
    }
    if (config.model != "fixed" && config.model != "gauss" && config.model != "uniform") {
        errors.push_back("ensemble.model: must be fixed, gauss, or uniform");
    }
    if (config.rms < 0.0) errors.push_back("ensemble.rms: must be >= 0");
    if (!(config.interval > 0.0)) errors.push_back("ensemble.interval: must be > 0");
    if (config.depth < 0.0) errors.push_back("ensemble.depth: must be >= 0");
    if (config.realizations < 1) errors.push_back("ensemble.realizations: must be >= 1");
    if (config.experiment == "figure") {
        if (config.figure.empty()) {
            errors.push_back("figure: figure runs require a figure id");
        } else if (std::find_if(kFigureIds.begin(), kFigureIds.end(), [&](const char* id) {
                       return config.figure == id;
                   }) == kFigureIds.end()) {
            errors.push_back("figure: unknown figure id '" + config.figure + "'");
        }
    }
}

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration:";
    for (const std::string& e : errors) {
        out += "\n  - " + e;
    }
    return out;
}

}  // namespace

WaveguideParams RunConfig::params() const {
    return WaveguideParams{1.0, 1.0 / gamma_ratio, kTwoPi};
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::vector<std::string> figure_ids() {
    return std::vector<std::string>(kFigureIds.begin(), kFigureIds.end());
}

RunConfig figure_preset(const std::string& id) {
    if (std::find_if(kFigureIds.begin(), kFigureIds.end(),
                     [&](const char* known) { return id == known; }) == kFigureIds.end()) {
        throw ConfigError({"figure: unknown figure id '" + id + "'"});
    }
    RunConfig config;
    config.experiment = "figure";
    config.figure = id;

    if (id == "1a" || id == "1b") {
        config.n_atoms = 2;
    } else if (id == "1c") {
        config.n_atoms = 2;
        config.grid_min = -5.0;
        config.grid_max = 5.0;
        config.grid_steps = 1001;
    } else if (id == "2a" || id == "2b" || id == "2c" || id == "2d") {
        config.n_atoms = 3;
        config.positions = {0.0, 0.4, 0.81};
        if (id == "2d") {
            config.grid_min = -5.0;
            config.grid_max = 5.0;
            config.grid_steps = 1001;
        }
    } else if (id == "3") {
        config.n_atoms = 8;
        config.spacing = 1.0;
        config.grid_min = -12.0;
        config.grid_max = 12.0;
        config.grid_steps = 1001;
    } else if (id == "4a" || id == "4b") {
        config.n_atoms = 8;
        config.spacing = id == "4a" ? 0.25 : 0.4;
        config.grid_min = -5.0;
        config.grid_max = 5.0;
        config.grid_steps = 1001;
    } else if (id == "5a" || id == "5b") {
        config.n_atoms = 4;
        config.spacing = 1.0;
    } else if (id == "6a") {
        config.n_atoms = 8;
        config.spacing = 0.25;
        config.grid_min = -4.0;
        config.grid_max = 4.0;
        config.grid_steps = 160;
        config.realizations = 400;
        config.interval = 2.0;
    } else if (id == "6b") {
        config.n_atoms = 8;
        config.spacing = 0.5;
        config.grid_min = -12.0;
        config.grid_max = 12.0;
        config.grid_steps = 240;
        config.realizations = 400;
        config.interval = 2.0;
    } else if (id == "7a" || id == "7b") {
        config.n_atoms = 8;
        config.spacing = 0.25;
        config.grid_min = -12.0;
        config.grid_max = 12.0;
        config.grid_steps = 240;
        config.realizations = 400;
        config.interval = 2.0;
        if (id == "7b") config.gamma_ratio = 0.5;
    }
    return config;
}

RunConfig parse_config(const std::string& text) {
    std::vector<std::string> errors;
    std::vector<KeyValue> items = tokenize(text, errors);

    RunConfig config;
    for (const KeyValue& kv : items) {
        if (kv.key != "figure") continue;
        try {
            config = figure_preset(kv.value);
        } catch (const ConfigError& e) {
            errors.insert(errors.end(), e.errors().begin(), e.errors().end());
        }
    }
    for (const KeyValue& kv : items) {
        if (kv.key == "figure") continue;
        if (kv.key == "experiment" && !config.figure.empty() && kv.value != "figure") {
            errors.push_back("line " + std::to_string(kv.line) +
                             ": experiment: conflicts with the figure preset");
            continue;
        }
        apply_key(config, kv, errors);
    }
    validate(config, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return config;
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    const auto add = [&out](const std::string& key, const std::string& value) {
        out += key + ": " + value + "\n";
    };
    const auto add_double = [&](const std::string& key, double v) {
        add(key, csv::format_double(v));
    };
    const auto add_list = [&](const std::string& key, const std::vector<double>& vs) {
        std::string joined;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i > 0) joined += ", ";
            joined += csv::format_double(vs[i]);
        }
        add(key, joined);
    };

    add("experiment", config.experiment);
    if (!config.figure.empty()) add("figure", config.figure);
    add("out", config.out_dir);
    add("seed", std::to_string(config.seed));
    add("threads", std::to_string(config.threads));
    add("n_atoms", std::to_string(config.n_atoms));
    add_double("spacing", config.spacing);
    if (!config.positions.empty()) add_list("positions", config.positions);
    add_double("gamma_ratio", config.gamma_ratio);
    add_double("drive_amplitude", config.drive_amplitude.real());
    if (!config.detunings.empty()) add_list("detunings", config.detunings);
    add_double("grid.min", config.grid_min);
    add_double("grid.max", config.grid_max);
    add("grid.steps", std::to_string(config.grid_steps));
    add_double("horizon", config.horizon);
    add("n_samples", std::to_string(config.n_samples));
    add_double("integrator.rtol", config.rtol);
    add_double("integrator.atol", config.atol);
    add_double("storage.switch_time", config.switch_time);
    add_double("storage.ramp_duration", config.ramp_duration);
    add_double("storage.first_detuning", config.first_detuning);
    add_double("storage.rest_detuning", config.rest_detuning);
    add("storage.start_from_steady", config.start_from_steady ? "true" : "false");
    add("ensemble.model", config.model);
    add_double("ensemble.rms", config.rms);
    add_double("ensemble.interval", config.interval);
    add_double("ensemble.depth", config.depth);
    add("ensemble.realizations", std::to_string(config.realizations));
    return out;
}

}  // namespace wqed
