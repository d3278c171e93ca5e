#pragma once

// CSV serialization for every artifact the CLI emits.  Comma separators,
// '.' decimal point, mandatory header row, floats at 17 significant digits so
// round-tripping is exact.  Non-finite values print as inf/nan.

#include <string>
#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/eigenmodes.hpp"
#include "wqed/steady_state.hpp"
#include "wqed/stochastic.hpp"

namespace wqed::csv {

// One double formatted with %.17g.
std::string format_double(double value);

// Rectangular numeric table; the building block for every serializer here.
class Table {
public:
    explicit Table(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);

    int n_rows() const { return n_rows_; }
    const std::string& text() const { return text_; }

private:
    std::size_t n_columns_;
    int n_rows_{0};
    std::string text_;
};

// Columns: delta_over_gw,t_re,t_im,r_re,r_im,T,R
std::string spectrum_csv(const SpectrumTable& table, double gamma_w);

// Columns: mode_index,delta_over_gw,upsilon_over_gw,is_superradiant
std::string eigenmode_csv(const EigenmodeSet& set, const WaveguideParams& params);

// Columns: t_gw,total_excitation[,L1..Ln when weights are present]
std::string trajectory_csv(const Trajectory& trajectory, double gamma_w);

// Columns: delta_over_gw,mean_T,stderr_T,mean_coherent_T
std::string ensemble_csv(const EnsembleResult& result, double gamma_w);

}  // namespace wqed::csv
