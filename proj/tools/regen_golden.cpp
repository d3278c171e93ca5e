// Regenerates the golden figure CSVs checked by the regression tests.
// Usage: wqed_regen_golden [out_dir] [threads]

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "wqed/config.hpp"
#include "wqed/figures.hpp"

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : ".";
    const int threads = argc > 2 ? std::atoi(argv[2]) : 1;

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create '%s': %s\n", dir.c_str(),
                     ec.message().c_str());
        return 1;
    }

    for (const std::string& id : wqed::figure_ids()) {
        const wqed::FigureArtifact artifact = wqed::make_figure(id, 1, threads);
        const std::string path = dir + "/" + artifact.stem + ".csv";
        std::ofstream out(path, std::ios::binary);
        out << artifact.csv;
        if (!out) {
            std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
            return 1;
        }
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}
