#include "fuzzpipe/seg/otsu.hpp"

#include <algorithm>
#include <stdexcept>

namespace fuzzpipe::seg {

int otsu_split_bin(const std::vector<double>& histogram) {
    const int bins = static_cast<int>(histogram.size());
    double total = 0.0, total_mean = 0.0;
    for (int i = 0; i < bins; ++i) {
        total += histogram[i];
        total_mean += histogram[i] * i;
    }
    double w0 = 0.0, sum0 = 0.0;
    double best = -1.0;
    int best_k = 0;
    for (int k = 0; k < bins - 1; ++k) {
        w0 += histogram[k];
        sum0 += histogram[k] * k;
        const double w1 = total - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (total_mean - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_k = k;
        }
    }
    return best_k;
}

double otsu_threshold(const volume::Volume& v, int bins) {
    if (bins < 2) throw std::invalid_argument("otsu needs at least 2 bins");
    float lo = v[0], hi = v[0];
    for (std::size_t i = 0; i < v.size(); ++i) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
    }
    if (lo == hi) return lo;  // degenerate histogram

    std::vector<double> histogram(bins, 0.0);
    const double scale = bins / (static_cast<double>(hi) - lo);
    for (std::size_t i = 0; i < v.size(); ++i) {
        int b = static_cast<int>((v[i] - lo) * scale);
        b = std::clamp(b, 0, bins - 1);
        histogram[b] += 1.0;
    }
    const int k = otsu_split_bin(histogram);
    return lo + (k + 1) / scale;  // upper edge of the chosen bin
}

volume::LabelVolume threshold_mask(const volume::Volume& v, double threshold) {
    volume::LabelVolume mask(v.nx(), v.ny(), v.nz());
    mask.sx = v.sx;
    mask.sy = v.sy;
    mask.sz = v.sz;
    for (std::size_t i = 0; i < v.size(); ++i) mask[i] = v[i] > threshold ? 1 : 0;
    return mask;
}

}  // namespace fuzzpipe::seg
