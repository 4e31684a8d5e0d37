#pragma once

#include <cstdint>
#include <vector>

namespace invasion {

// Square N x N array stored row-major with rows along y: index = j*n + i,
// where i is the x index and j the y index.
template <class T>
struct Grid2 {
    int n = 0;
    std::vector<T> data;

    Grid2() = default;
    explicit Grid2(int n_, T value = T{}) : n(n_), data(static_cast<std::size_t>(n_) * n_, value) {}

    T& operator()(int i, int j) { return data[static_cast<std::size_t>(j) * n + i]; }
    const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(j) * n + i]; }
    T& operator[](std::size_t k) { return data[k]; }
    const T& operator[](std::size_t k) const { return data[k]; }

    bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < n && j < n; }
    std::size_t size() const { return data.size(); }
    int index(int i, int j) const { return j * n + i; }

    bool operator==(const Grid2&) const = default;
};

using Field = Grid2<double>;
using Mask = Grid2<std::uint8_t>;

struct VectorField {
    Field x, y;
    VectorField() = default;
    explicit VectorField(int n) : x(n), y(n) {}
};

}  // namespace invasion
