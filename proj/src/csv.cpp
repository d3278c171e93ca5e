#include "wqed/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace wqed::csv {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

Table::Table(std::vector<std::string> header) : n_columns_(header.size()) {
    if (header.empty()) throw std::invalid_argument("csv::Table: header must be nonempty");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void Table::add_row(const std::vector<double>& values) {
    if (values.size() != n_columns_) {
        throw std::invalid_argument("csv::Table: row width does not match the header");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) text_ += ',';
        text_ += format_double(values[i]);
    }
    text_ += '\n';
    ++n_rows_;
}

std::string spectrum_csv(const SpectrumTable& table, double gamma_w) {
    Table out({"delta_over_gw", "t_re", "t_im", "r_re", "r_im", "T", "R"});
    for (Eigen::Index i = 0; i < table.detunings.size(); ++i) {
        const ScatteringCoefficients& row = table.rows[static_cast<std::size_t>(i)];
        out.add_row({table.detunings[i] / gamma_w, row.t.real(), row.t.imag(), row.r.real(),
                     row.r.imag(), row.T, row.R});
    }
    return out.text();
}

std::string eigenmode_csv(const EigenmodeSet& set, const WaveguideParams& params) {
    Table out({"mode_index", "delta_over_gw", "upsilon_over_gw", "is_superradiant"});
    const std::vector<ModeCharacter> labels = classify(set, params);
    for (int m = 0; m < set.size(); ++m) {
        const double super = labels[static_cast<std::size_t>(m)] == ModeCharacter::Superradiant
                                 ? 1.0
                                 : 0.0;
        out.add_row({static_cast<double>(m + 1), set.frequency_shifts[m] / params.gamma_w,
                     set.decay_rates[m] / params.gamma_w, super});
    }
    return out.text();
}

std::string trajectory_csv(const Trajectory& trajectory, double gamma_w) {
    std::vector<std::string> header{"t_gw", "total_excitation"};
    const bool with_weights = trajectory.weights.size() > 0;
    if (with_weights) {
        for (Eigen::Index m = 0; m < trajectory.weights.rows(); ++m) {
            header.push_back("L" + std::to_string(m + 1));
        }
    }
    Table out(std::move(header));
    for (Eigen::Index s = 0; s < trajectory.times.size(); ++s) {
        std::vector<double> row{trajectory.times[s] * gamma_w, trajectory.total_excitation[s]};
        if (with_weights) {
            for (Eigen::Index m = 0; m < trajectory.weights.rows(); ++m) {
                row.push_back(trajectory.weights(m, s));
            }
        }
        out.add_row(row);
    }
    return out.text();
}

std::string ensemble_csv(const EnsembleResult& result, double gamma_w) {
    Table out({"delta_over_gw", "mean_T", "stderr_T", "mean_coherent_T"});
    for (Eigen::Index i = 0; i < result.detunings.size(); ++i) {
        out.add_row({result.detunings[i] / gamma_w, result.mean_T[i], result.stderr_T[i],
                     result.mean_coherent_T[i]});
    }
    return out.text();
}

}  // namespace wqed::csv
