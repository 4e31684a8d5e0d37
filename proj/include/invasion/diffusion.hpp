#pragma once

#include <array>

#include "invasion/field.hpp"
#include "invasion/grid.hpp"

namespace invasion {

// Three-tap kernels applied as (K conv f)_i = sum_q K[q] f_{i-(q-1)}.
struct DiffusionKernels {
    std::array<double, 3> avg_minus{0.0, 0.5, 0.5};  // D at the face between i-1 and i
    std::array<double, 3> avg_plus{0.5, 0.5, 0.0};   // D at the face between i and i+1
    std::array<double, 3> diff_minus{0.0, -1.0, 1.0};
    std::array<double, 3> diff_plus{-1.0, 1.0, 0.0};
};

const DiffusionKernels& diffusion_kernels();

// div(D grad u) at interior nodes via kernel-pair convolutions; zero elsewhere.
Field diffusion_interior(const Field& D, const Field& u, const DomainMask& mask, double h);

// Direct flux-form stencil at boundary nodes. Faces towards non-tumour
// neighbours carry no flux; zero elsewhere.
Field diffusion_boundary(const Field& D, const Field& u, const DomainMask& mask, double h);

// Interior plus boundary.
Field diffusion(const Field& D, const Field& u, const DomainMask& mask, double h);

namespace reference {
// Serial direct stencil on interior nodes.
Field diffusion_interior(const Field& D, const Field& u, const DomainMask& mask, double h);
}  // namespace reference

}  // namespace invasion
