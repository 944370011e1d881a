#pragma once

#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::volume {

// Separable Gaussian convolution, kernels truncated at 3 sigma and
// normalized to unit sum, borders clamped to the edge value. sigma of 0 on
// an axis leaves that axis untouched.
Volume gaussian_smooth(const Volume& v, double sigma_x, double sigma_y, double sigma_z,
                       int workers = 0);

inline Volume gaussian_smooth(const Volume& v, double sigma, int workers = 0) {
    return gaussian_smooth(v, sigma, sigma, sigma, workers);
}

// Scale-normalized Laplacian-of-Gaussian response: Gaussian smooth at
// sigma, 6-neighbor discrete Laplacian, multiplied by sigma^2 and
// sign-inverted so bright blobs produce positive maxima.
Volume log_filter(const Volume& v, double sigma, int workers = 0);

}  // namespace fuzzpipe::volume
