#pragma once

// Built-in figure recipes.  Each recipe is a pure function of (id, seed): the
// same inputs reproduce the same CSV byte for byte, regardless of the thread
// count used to compute it.

#include <cstdint>
#include <string>

namespace wqed {

struct FigureArtifact {
    std::string stem;  // output basename, e.g. "figure_1a"
    std::string csv;
};

// Computes the named figure's data.  Valid ids are listed by figure_ids();
// unknown ids throw ConfigError.
FigureArtifact make_figure(const std::string& id, std::uint64_t seed, int n_threads = 1);

}  // namespace wqed
