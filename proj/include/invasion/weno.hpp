#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "invasion/field.hpp"
#include "invasion/grid.hpp"

namespace invasion {

struct WenoConfig {
    double p = 2.0;
    double eps = 1e-6;
    // Linear weights of the candidate stencils, ordered as the kernels below.
    std::array<double, 3> linear_weights{0.1, 0.6, 0.3};
    double power_tol = 1e-14;
    int power_max_iters = 200;
    std::uint64_t seed = 1;
};

// Index order: [part][face][k], part 0 = F+, 1 = F-; face 0 = i+1/2, 1 = i-1/2.
// Applied as (K conv f)_i = sum_q K[q] f_{i-(q-3)}.
struct WenoKernels {
    using Vec7 = std::array<double, 7>;
    std::array<std::array<std::array<Vec7, 3>, 2>, 2> eno;
    std::array<std::array<std::array<Vec7, 3>, 2>, 2> smooth;
};

const WenoKernels& weno_kernels();

struct Reconstruction {
    std::array<std::array<std::array<double, 3>, 2>, 2> eno{};  // candidate interface values
    std::array<std::array<std::array<double, 3>, 2>, 2> is{};   // smoothness indicators
};

// Seven samples per part, s[o+3] = value at offset o in [-3, 3].
using Window = std::array<double, 7>;

Reconstruction reconstruct(const Window& fplus, const Window& fminus);

// Nonlinear weights for one part and face; they sum to one.
std::array<double, 3> nonlinear_weights(const std::array<double, 3>& is, const WenoConfig& cfg);

// Fhat_{i+1/2} - Fhat_{i-1/2}.
double flux_difference(const Window& fplus, const Window& fminus, const WenoConfig& cfg);

struct SplitFlux {
    Field plus, minus;
};

// (F + alpha u)/2 and (F - alpha u)/2.
SplitFlux rusanov_split(const Field& flux, const Field& u, double alpha);

// (Fhat_{i+1/2} - Fhat_{i-1/2} + Ghat_{j+1/2} - Ghat_{j-1/2}) / h on the
// nodes whose full 7-point cross lies in the tumour; zero elsewhere.
Field weno_divergence_inside(const Field& Fx, const Field& Fy, const Field& u, double alpha_x, double alpha_y,
                             const DomainMask& mask, double h, const WenoConfig& cfg);

// Same on the layer nodes, with stencil entries outside the tumour replaced by
// their mirror images inside the contiguous run of tumour nodes on that line.
Field weno_divergence_layer(const Field& Fx, const Field& Fy, const Field& u, double alpha_x, double alpha_y,
                            const DomainMask& mask, double h, const WenoConfig& cfg);

// Periodic 1-D divergence, for convergence checks.
std::vector<double> weno_divergence_periodic(const std::vector<double>& flux, const std::vector<double>& u,
                                             double alpha, double h, const WenoConfig& cfg);

using FluxMap = std::function<std::vector<double>(const std::vector<double>&)>;

struct SpectralEstimate {
    double value = 0.0;
    int iterations = 0;
    bool capped = false;        // iteration cap reached before the tolerance
    std::vector<double> vector;  // last iterate, reusable as a warm start
};

// Power iteration on finite-difference Jacobian-vector products.
SpectralEstimate spectral_radius(const FluxMap& flux, const std::vector<double>& u, const WenoConfig& cfg,
                                 const std::vector<double>* start = nullptr);

namespace reference {
// Candidates and indicators written out index by index.
Reconstruction reconstruct(const Window& fplus, const Window& fminus);
double flux_difference(const Window& fplus, const Window& fminus, const WenoConfig& cfg);
}  // namespace reference

}  // namespace invasion
