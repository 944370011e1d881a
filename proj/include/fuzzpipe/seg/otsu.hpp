#pragma once

#include <vector>

#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::seg {

// Histogram-based Otsu threshold over [min, max] of the data. Returns the
// upper edge of the bin maximizing between-class variance; a single-valued
// histogram returns that value. Foreground is v > threshold.
double otsu_threshold(const volume::Volume& v, int bins = 256);

// Otsu bin split of a prepared histogram: index k separating classes
// [0..k] and [k+1..]. Ties resolve to the first maximum.
int otsu_split_bin(const std::vector<double>& histogram);

volume::LabelVolume threshold_mask(const volume::Volume& v, double threshold);

}  // namespace fuzzpipe::seg
