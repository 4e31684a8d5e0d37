#include "invasion/diffusion.hpp"

namespace invasion {

const DiffusionKernels& diffusion_kernels() {
    static const DiffusionKernels k{};
    return k;
}

namespace {

inline double conv3(const std::array<double, 3>& k, const double* f, std::ptrdiff_t stride) {
    return k[0] * f[stride] + k[1] * f[0] + k[2] * f[-stride];
}

}  // namespace

Field diffusion_interior(const Field& D, const Field& u, const DomainMask& mask, double h) {
    const int n = u.n;
    const auto& K = diffusion_kernels();
    const double inv = 1.0 / (h * h);
    Field out(n);
#pragma omp parallel for schedule(static)
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            if (!mask.interior(i, j)) continue;
            const std::size_t k = static_cast<std::size_t>(j) * n + i;
            const double* d = &D.data[k];
            const double* f = &u.data[k];
            double acc = 0.0;
            for (const std::ptrdiff_t s : {std::ptrdiff_t{1}, std::ptrdiff_t{n}})
                acc += conv3(K.avg_minus, d, s) * conv3(K.diff_minus, f, s) -
                       conv3(K.avg_plus, d, s) * conv3(K.diff_plus, f, s);
            out[k] = acc * inv;
        }
    return out;
}

Field diffusion_boundary(const Field& D, const Field& u, const DomainMask& mask, double h) {
    const int n = u.n;
    const double inv = 1.0 / (h * h);
    Field out(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!mask.boundary(i, j)) continue;
            const double dc = D(i, j), uc = u(i, j);
            double acc = 0.0;
            constexpr int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (auto& o : nb) {
                const int a = i + o[0], b = j + o[1];
                if (!mask.inside.contains(a, b) || !mask.inside(a, b)) continue;
                acc += 0.5 * (D(a, b) + dc) * (u(a, b) - uc);
            }
            out(i, j) = acc * inv;
        }
    return out;
}

Field diffusion(const Field& D, const Field& u, const DomainMask& mask, double h) {
    Field a = diffusion_interior(D, u, mask, h);
    const Field b = diffusion_boundary(D, u, mask, h);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
}

namespace reference {

Field diffusion_interior(const Field& D, const Field& u, const DomainMask& mask, double h) {
    const int n = u.n;
    Field out(n);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            if (!mask.interior(i, j)) continue;
            const double east = 0.5 * (D(i + 1, j) + D(i, j)) * (u(i + 1, j) - u(i, j));
            const double west = 0.5 * (D(i, j) + D(i - 1, j)) * (u(i, j) - u(i - 1, j));
            const double north = 0.5 * (D(i, j + 1) + D(i, j)) * (u(i, j + 1) - u(i, j));
            const double south = 0.5 * (D(i, j) + D(i, j - 1)) * (u(i, j) - u(i, j - 1));
            out(i, j) = (east - west + north - south) / (h * h);
        }
    return out;
}

}  // namespace reference

}  // namespace invasion
