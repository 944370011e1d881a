#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

namespace fuzzpipe::metrics {

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
    std::size_t voxels = 0;

    double kvoxels_per_second() const {
        return seconds > 0.0 ? (static_cast<double>(voxels) / 1000.0) / seconds : 0.0;
    }
};

class TimingReport {
public:
    void add(const std::string& stage, double seconds, std::size_t voxels) {
        stages_.push_back({stage, seconds, voxels});
    }
    const std::vector<StageTiming>& stages() const { return stages_; }
    double total_seconds() const {
        double s = 0.0;
        for (const auto& t : stages_) s += t.seconds;
        return s;
    }
    void save_csv(const std::string& path) const;

private:
    std::vector<StageTiming> stages_;
};

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace fuzzpipe::metrics
