#pragma once

// Run configuration: a flat "key: value" text format with dotted namespaces,
// '#' comments, and strict validation.  Parsing validates everything it can
// and reports the complete list of problems, not just the first one.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wqed/core.hpp"

namespace wqed {

struct RunConfig {
    // spectrum | eigen | evolve | storage | ensemble | analytic | figure
    std::string experiment{"spectrum"};
    std::string out_dir{"."};
    std::uint64_t seed{1};
    int threads{1};

    // Geometry.  When `positions` (wavelength units) is nonempty it overrides
    // the regular lattice described by n_atoms and spacing.
    // The default quarter-wave spacing keeps the lossless steady state
    // regular on every detuning grid; half-wave lattices are singular when a
    // grid lands exactly on resonance.  Four atoms is the smallest array the
    // storage protocol's stock detuning pattern is built for, and serves as
    // the default everywhere for consistency.
    int n_atoms{4};
    double spacing{0.25};  // wavelength units
    std::vector<double> positions;

    // Rates: gamma_w is the unit; gamma_ratio = gamma_w / gamma_t.
    double gamma_ratio{1.0};

    Complex drive_amplitude{1.0};

    // Static per-atom detunings in gamma_w units (empty means all zero).
    std::vector<double> detunings;

    // Detuning grid in gamma_w units.
    double grid_min{-5.0};
    double grid_max{5.0};
    int grid_steps{1001};

    // Time evolution.
    double horizon{16.0};
    int n_samples{801};
    double rtol{1e-10};
    double atol{1e-14};

    // Storage protocol (detunings in gamma_w units).
    double switch_time{6.0};
    double ramp_duration{0.2};
    double first_detuning{2.0 / 3.0};
    double rest_detuning{-2.0};
    bool start_from_steady{false};

    // Ensembles: model is fixed | gauss | uniform; rms and interval are in
    // wavelength units; depth (recoil units) may replace rms for gauss.
    std::string model{"fixed"};
    double rms{0.0};
    double interval{2.0};
    double depth{0.0};  // 0 means "not set"; otherwise overrides rms
    int realizations{100};

    // Figure id for figure runs ("1a" .. "7b").
    std::string figure;

    // Physical parameters implied by the config, in gamma_w = 1 units.
    WaveguideParams params() const;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

// Parses and validates a config document.  A `figure:` key first loads that
// figure's preset, and any other keys are applied on top of it.  Throws
// ConfigError carrying every problem found.
RunConfig parse_config(const std::string& text);

// The RunConfig a given figure id runs with (parameters mirror the built-in
// recipe).  Throws ConfigError for an unknown id.
RunConfig figure_preset(const std::string& id);

// All valid figure ids, in publication order.
std::vector<std::string> figure_ids();

// Canonical "key: value" rendering of a resolved config, suitable for sidecar
// metadata and for reparsing.
std::string serialize_config(const RunConfig& config);

}  // namespace wqed
