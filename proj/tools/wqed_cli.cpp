// Command-line front end.  Every run resolves a RunConfig (config file plus
// flag overrides), computes all artifacts in memory, and only then writes
// them, so a failed run leaves no partial output.  Exit codes: 0 success,
// 2 configuration error, 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "wqed/config.hpp"
#include "wqed/csv.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/eigenmodes.hpp"
#include "wqed/figures.hpp"
#include "wqed/steady_state.hpp"
#include "wqed/stochastic.hpp"
#include "wqed/storage.hpp"
#include "wqed/transfer_matrix.hpp"
#include "wqed/version.hpp"

namespace {

using wqed::RunConfig;

struct Artifact {
    std::string stem;
    std::string csv;
};

wqed::AtomArray atoms_from_config(const RunConfig& config) {
    Eigen::VectorXd positions;
    if (!config.positions.empty()) {
        positions = Eigen::Map<const Eigen::VectorXd>(config.positions.data(),
                                                      static_cast<long>(config.positions.size()));
    } else {
        positions = wqed::LatticeSpec{config.n_atoms, config.spacing, 0.0}.positions();
    }
    if (config.detunings.empty()) return wqed::AtomArray(positions);
    const Eigen::VectorXd detunings = Eigen::Map<const Eigen::VectorXd>(
        config.detunings.data(), static_cast<long>(config.detunings.size()));
    return wqed::AtomArray(positions, detunings);
}

Eigen::VectorXd grid_from_config(const RunConfig& config) {
    return Eigen::VectorXd::LinSpaced(config.grid_steps, config.grid_min, config.grid_max);
}

wqed::PositionModel model_from_config(const RunConfig& config) {
    if (config.model == "fixed") return wqed::FixedPositions{};
    if (config.model == "gauss") {
        double rms = config.rms;
        if (config.depth > 0.0) {
            rms = wqed::rms_from_depth(wqed::LatticeDepthSpec{config.spacing, config.depth});
        }
        return wqed::GaussianSites{rms};
    }
    return wqed::UniformInterval{config.interval};
}

wqed::StorageConfig storage_from_config(const RunConfig& config) {
    wqed::StorageConfig storage;
    storage.n_atoms = config.n_atoms;
    storage.drive_amplitude = config.drive_amplitude;
    storage.first_detuning = config.first_detuning;
    storage.rest_detuning = config.rest_detuning;
    storage.switch_time = config.switch_time;
    storage.ramp_duration = config.ramp_duration;
    storage.horizon = config.horizon;
    storage.n_samples = config.n_samples;
    storage.start_from_steady = config.start_from_steady;
    storage.integrator.rtol = config.rtol;
    storage.integrator.atol = config.atol;
    return storage;
}

std::vector<Artifact> run_spectrum(const RunConfig& config) {
    const wqed::SpectrumTable table =
        wqed::spectrum(atoms_from_config(config), config.params(),
                       wqed::DriveField{config.drive_amplitude}, grid_from_config(config),
                       config.threads);
    return {{"spectrum", wqed::csv::spectrum_csv(table, config.params().gamma_w)}};
}

std::vector<Artifact> run_eigen(const RunConfig& config) {
    const wqed::EigenmodeSet set = wqed::decompose(atoms_from_config(config), config.params());
    return {{"eigen", wqed::csv::eigenmode_csv(set, config.params())}};
}

std::vector<Artifact> run_evolve(const RunConfig& config) {
    const wqed::AtomArray atoms = atoms_from_config(config);
    const wqed::WaveguideParams params = config.params();
    const wqed::EigenmodeSet modes = wqed::decompose(atoms, params);

    wqed::EvolveOptions options;
    options.rtol = config.rtol;
    options.atol = config.atol;

    // Constant coefficients: the configured detunings are held for all t and
    // the drive is switched on at t=0 and held.
    const wqed::DetuningSchedule detunings =
        wqed::DetuningSchedule::constant(atoms.detunings());
    const wqed::DriveSchedule drive = wqed::DriveSchedule::constant(config.drive_amplitude);
    const Eigen::VectorXd samples =
        Eigen::VectorXd::LinSpaced(config.n_samples, 0.0, config.horizon);
    const wqed::PolarizationVector b0 = wqed::PolarizationVector::Zero(atoms.size());

    const wqed::Trajectory traj =
        wqed::evolve(atoms, params, detunings, drive, b0, samples, &modes, options);
    return {{"trajectory", wqed::csv::trajectory_csv(traj, params.gamma_w)}};
}

std::vector<Artifact> run_storage(const RunConfig& config) {
    const wqed::WaveguideParams params = config.params();
    const wqed::StorageConfig storage = storage_from_config(config);
    const wqed::Trajectory protocol = wqed::run_storage_protocol(storage, params);
    const wqed::Trajectory resonant = wqed::run_resonant_comparison(storage, params);

    std::vector<std::string> weight_header = {"t_gw"};
    for (int m = 0; m < protocol.weights.rows(); ++m) {
        weight_header.push_back("L" + std::to_string(m + 1));
    }
    wqed::csv::Table weights(weight_header);
    for (int s = 0; s < protocol.times.size(); ++s) {
        std::vector<double> row = {protocol.times[s] * params.gamma_w};
        for (int m = 0; m < protocol.weights.rows(); ++m) row.push_back(protocol.weights(m, s));
        weights.add_row(row);
    }

    int at_switch = 0;
    for (int s = 0; s < protocol.times.size(); ++s) {
        if (protocol.times[s] <= storage.switch_time) at_switch = s;
    }
    wqed::csv::Table excitation({"t_gw", "protocol", "comparison"});
    for (int s = 0; s < protocol.times.size(); ++s) {
        excitation.add_row({protocol.times[s] * params.gamma_w,
                            protocol.total_excitation[s] / protocol.total_excitation[at_switch],
                            resonant.total_excitation[s] / resonant.total_excitation[at_switch]});
    }
    return {{"storage_weights", weights.text()}, {"storage_excitation", excitation.text()}};
}

std::vector<Artifact> run_ensemble(const RunConfig& config) {
    const wqed::EnsembleResult result = wqed::ensemble_spectrum(
        model_from_config(config), wqed::LatticeSpec{config.n_atoms, config.spacing, 0.0},
        config.params(), wqed::DriveField{config.drive_amplitude}, grid_from_config(config),
        config.realizations, config.seed, config.threads);
    return {{"ensemble", wqed::csv::ensemble_csv(result, config.params().gamma_w)}};
}

std::vector<Artifact> run_analytic(const RunConfig& config) {
    const wqed::WaveguideParams params = config.params();
    const Eigen::VectorXd grid = grid_from_config(config);
    const wqed::AtomArray atoms =
        wqed::AtomArray::lattice(wqed::LatticeSpec{config.n_atoms, config.spacing, 0.0});

    wqed::csv::Table table({"delta_over_gw", "t_re", "t_im", "r_re", "r_im", "T", "R", "T_mft",
                            "D_exact", "D_approx"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < grid.size(); ++i) {
        const double delta = grid[i] * params.gamma_w;
        const auto point =
            wqed::cascade_amplitudes(atoms.with_detuning_offset(delta), params);
        double t_re = 0.0, t_im = 0.0, r_re = nan, r_im = nan, T = 0.0, R = 1.0;
        if (!wqed::is_pole(point)) {
            const wqed::ScatteringCoefficients& c = wqed::value_of(point);
            t_re = c.t.real();
            t_im = c.t.imag();
            r_re = c.r.real();
            r_im = c.r.imag();
            T = c.T;
            R = c.R;
        }
        const double t_mft = std::norm(wqed::mean_field_transmission(config.n_atoms, delta, params));
        const auto approx =
            wqed::optical_thickness_expansion(config.n_atoms, config.spacing, delta, params);
        const double d_approx = std::holds_alternative<double>(approx)
                                    ? std::get<double>(approx)
                                    : nan;
        table.add_row({grid[i], t_re, t_im, r_re, r_im, T, R, t_mft, -std::log(T), d_approx});
    }
    return {{"analytic", table.text()}};
}

std::vector<Artifact> run_figure(const RunConfig& config) {
    const wqed::FigureArtifact artifact =
        wqed::make_figure(config.figure, config.seed, config.threads);
    return {{artifact.stem, artifact.csv}};
}

int write_artifacts(const RunConfig& config, const std::vector<Artifact>& artifacts) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory '%s': %s\n",
                     config.out_dir.c_str(), ec.message().c_str());
        return 1;
    }
    const std::string meta =
        std::string("version: ") + wqed::kVersion + "\n" + wqed::serialize_config(config);
    const auto write_file = [](const std::string& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        out << body;
        if (!out) {
            std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
            return false;
        }
        return true;
    };
    for (const Artifact& artifact : artifacts) {
        const std::string base =
            (std::filesystem::path(config.out_dir) / artifact.stem).string();
        if (!write_file(base + ".csv", artifact.csv)) return 1;
        if (!write_file(base + ".meta", meta)) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optical response of two-level atoms coupled to a 1D waveguide"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string figure_id;

    app.add_option("--config", config_path, "Config file (key: value lines)");
    auto* out_opt = app.add_option("--out", out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", seed, "Master RNG seed");
    auto* threads_opt = app.add_option("--threads", threads, "Worker thread count");

    app.add_subcommand("spectrum", "Steady-state transmission and reflection spectrum")
        ->fallthrough();
    app.add_subcommand("eigen", "Collective eigenmode linewidths and shifts")->fallthrough();
    app.add_subcommand("evolve", "Time evolution under a constant drive")->fallthrough();
    app.add_subcommand("storage", "Subradiant storage protocol")->fallthrough();

    auto* ensemble_cmd = app.add_subcommand("ensemble", "Disorder-averaged spectrum");
    ensemble_cmd->fallthrough();
    std::string model;
    double rms = 0.0, depth = 0.0, interval = 0.0;
    int realizations = 0;
    auto* model_opt = ensemble_cmd->add_option("--model", model, "fixed|gauss|uniform");
    auto* rms_opt = ensemble_cmd->add_option("--rms", rms, "Gaussian rms width (wavelengths)");
    auto* depth_opt = ensemble_cmd->add_option("--depth", depth, "Lattice depth (recoil units)");
    auto* interval_opt =
        ensemble_cmd->add_option("--interval", interval, "Uniform interval length (wavelengths)");
    auto* realizations_opt =
        ensemble_cmd->add_option("--realizations", realizations, "Number of realizations");

    auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form lattice spectra");
    analytic_cmd->fallthrough();
    int n_atoms = 0, delta_steps = 0;
    double spacing = 0.0, delta_min = 0.0, delta_max = 0.0, loss_ratio = 0.0;
    auto* n_opt = analytic_cmd->add_option("--n", n_atoms, "Number of atoms");
    auto* spacing_opt = analytic_cmd->add_option("--spacing", spacing, "Lattice spacing (wavelengths)");
    auto* dmin_opt = analytic_cmd->add_option("--delta-min", delta_min, "Grid start (gamma_w units)");
    auto* dmax_opt = analytic_cmd->add_option("--delta-max", delta_max, "Grid end (gamma_w units)");
    auto* dsteps_opt = analytic_cmd->add_option("--delta-steps", delta_steps, "Grid point count");
    auto* loss_opt =
        analytic_cmd->add_option("--loss-ratio", loss_ratio, "gamma_w / gamma_t in (0, 1]");

    auto* figure_cmd = app.add_subcommand("figure", "Reproduce a named figure panel");
    figure_cmd->fallthrough();
    figure_cmd->add_option("id", figure_id, "Figure id (1a .. 7b)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) {
                std::fprintf(stderr, "error: cannot read config file '%s'\n", config_path.c_str());
                return 2;
            }
            std::ostringstream text;
            text << in.rdbuf();
            config = wqed::parse_config(text.str());
        }

        const std::string experiment = app.get_subcommands().front()->get_name();
        if (experiment == "figure") {
            if (config.figure != figure_id) config = wqed::figure_preset(figure_id);
        } else {
            config.experiment = experiment;
            config.figure.clear();
        }

        if (out_opt->count() > 0) config.out_dir = out_dir;
        if (seed_opt->count() > 0) config.seed = seed;
        if (threads_opt->count() > 0) config.threads = threads;
        if (model_opt->count() > 0) config.model = model;
        if (rms_opt->count() > 0) config.rms = rms;
        if (depth_opt->count() > 0) config.depth = depth;
        if (interval_opt->count() > 0) config.interval = interval;
        if (realizations_opt->count() > 0) config.realizations = realizations;
        if (n_opt->count() > 0) config.n_atoms = n_atoms;
        if (spacing_opt->count() > 0) config.spacing = spacing;
        if (dmin_opt->count() > 0) config.grid_min = delta_min;
        if (dmax_opt->count() > 0) config.grid_max = delta_max;
        if (dsteps_opt->count() > 0) config.grid_steps = delta_steps;
        if (loss_opt->count() > 0) config.gamma_ratio = loss_ratio;

        // Flag overrides can break invariants the file-level parse enforced;
        // round-trip through the validator to catch that.
        config = wqed::parse_config(wqed::serialize_config(config));

        std::vector<Artifact> artifacts;
        if (experiment == "spectrum") {
            artifacts = run_spectrum(config);
        } else if (experiment == "eigen") {
            artifacts = run_eigen(config);
        } else if (experiment == "evolve") {
            artifacts = run_evolve(config);
        } else if (experiment == "storage") {
            artifacts = run_storage(config);
        } else if (experiment == "ensemble") {
            artifacts = run_ensemble(config);
        } else if (experiment == "analytic") {
            artifacts = run_analytic(config);
        } else {
            artifacts = run_figure(config);
        }
        return write_artifacts(config, artifacts);
    } catch (const wqed::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const wqed::SingularSystemError& e) {
        std::fprintf(stderr, "error: steady-state solve: %s\n", e.what());
        return 3;
    } catch (const wqed::IntegrationError& e) {
        std::fprintf(stderr, "error: integrator: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
