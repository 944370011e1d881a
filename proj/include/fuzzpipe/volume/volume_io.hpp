#pragma once

#include <string>

#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::volume {

// Two-file volume format: a plain-text header (NDims, DimSize,
// ElementSpacing, ElementType, ElementDataFile) following the MetaImage
// key convention, plus a raw little-endian voxel file in x-fastest order.
// ElementType is one of uint8, uint16, float32, uint32. Integer intensities
// rescale to [0, 1] on load; labels always use uint32.

void save_volume(const Volume& v, const std::string& header_path,
                 const std::string& element_type = "float32");
Volume load_volume(const std::string& header_path);

void save_labels(const LabelVolume& v, const std::string& header_path);
LabelVolume load_labels(const std::string& header_path);

}  // namespace fuzzpipe::volume
