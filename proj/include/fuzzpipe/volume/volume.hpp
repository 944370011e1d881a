#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fuzzpipe::volume {

// Dense 3D grid, x-fastest storage order.
template <typename T>
class Grid3 {
public:
    Grid3() = default;
    Grid3(int nx, int ny, int nz, T fill = T{})
        : nx_(nx), ny_(ny), nz_(nz), data_(static_cast<std::size_t>(nx) * ny * nz, fill) {
        if (nx <= 0 || ny <= 0 || nz <= 0) throw std::invalid_argument("non-positive grid dims");
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    std::size_t size() const { return data_.size(); }

    bool inside(int x, int y, int z) const {
        return x >= 0 && x < nx_ && y >= 0 && y < ny_ && z >= 0 && z < nz_;
    }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(z) * ny_ * nx_ + static_cast<std::size_t>(y) * nx_ + x;
    }
    void unindex(std::size_t i, int& x, int& y, int& z) const {
        x = static_cast<int>(i % nx_);
        y = static_cast<int>((i / nx_) % ny_);
        z = static_cast<int>(i / (static_cast<std::size_t>(nx_) * ny_));
    }

    T& at(int x, int y, int z) { return data_[index(x, y, z)]; }
    const T& at(int x, int y, int z) const { return data_[index(x, y, z)]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    // Clamp-to-edge lookup.
    const T& at_clamped(int x, int y, int z) const {
        x = x < 0 ? 0 : (x >= nx_ ? nx_ - 1 : x);
        y = y < 0 ? 0 : (y >= ny_ ? ny_ - 1 : y);
        z = z < 0 ? 0 : (z >= nz_ ? nz_ - 1 : z);
        return at(x, y, z);
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    template <typename U>
    bool same_dims(const Grid3<U>& o) const {
        return nx_ == o.nx() && ny_ == o.ny() && nz_ == o.nz();
    }

    // Physical voxel spacing.
    double sx = 1.0, sy = 1.0, sz = 1.0;

private:
    int nx_ = 0, ny_ = 0, nz_ = 0;
    std::vector<T> data_;
};

// Scalar intensity field, nominally in [0, 1].
using Volume = Grid3<float>;

// Non-negative integer labels, 0 = background. Label ids need not be
// contiguous but are positive for foreground.
using LabelVolume = Grid3<std::uint32_t>;

}  // namespace fuzzpipe::volume
