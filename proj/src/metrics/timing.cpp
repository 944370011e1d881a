#include "fuzzpipe/metrics/timing.hpp"

#include <fstream>
#include <stdexcept>

#include "fuzzpipe/core/keyvalue.hpp"

namespace fuzzpipe::metrics {

void TimingReport::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write timing report: " + path);
    out << "stage,seconds,kvox_per_s\n";
    for (const auto& t : stages_) {
        out << t.stage << "," << core::format_real(t.seconds) << ","
            << core::format_real(t.kvoxels_per_second()) << "\n";
    }
}

}  // namespace fuzzpipe::metrics
