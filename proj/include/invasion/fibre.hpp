#pragma once

#include <array>
#include <string>
#include <vector>

#include "invasion/field.hpp"
#include "invasion/grid.hpp"
#include "invasion/macro.hpp"

namespace invasion {

// Micro-fibre mass on one global fine grid. Macro node (i, j) owns the block
// of cells [i*cells, (i+1)*cells) x [j*cells, (j+1)*cells), a square of side h
// centred on the node, so the blocks tile the tissue.
struct MicroFibreField {
    int n = 0;      // macro nodes per side
    int cells = 0;  // micro cells per side of one block, odd
    double h = 0.0;
    double f_max = 0.0;
    std::vector<double> f;  // row-major, side() x side()

    MicroFibreField() = default;
    MicroFibreField(int n_, int cells_, double h_, double f_max_);

    int side() const { return n * cells; }
    double dz() const { return h / cells; }
    double& at(int I, int J) { return f[static_cast<std::size_t>(J) * side() + I]; }
    double at(int I, int J) const { return f[static_cast<std::size_t>(J) * side() + I]; }
    double total() const;  // plain sum of all cell values
};

struct FibreOrientation {
    double x = 0.0, y = 0.0;  // theta_f
    double amount = 0.0;      // block mean of f
};

// Block mean times the unit barycentral offset. A zero offset or zero mass
// gives a zero vector; the amount is the block mean either way.
FibreOrientation theta_f_from_micro(const MicroFibreField& micro, int i, int j);

// Writes theta_f and F for every node.
void extract_orientation(const MicroFibreField& micro, TumourState& u);

// Mass-fraction weighted sum of the migration fluxes and theta_f; zero when
// c + M1 + M2 + F vanishes.
std::array<double, 2> rearrangement_vector(double c, double m1, double m2, double F,
                                           const std::array<double, 2>& flux_c, const std::array<double, 2>& flux_m1,
                                           const std::array<double, 2>& flux_m2, const std::array<double, 2>& theta);

struct MigrationFluxes {
    VectorField c, m1, m2;  // D grad u - u A
};

MigrationFluxes migration_fluxes(const TumourState& u, const MacroContext& ctx);

struct RearrangeStats {
    double moved = 0.0;      // mass deposited away from its source cell
    double held_back = 0.0;  // mass that stayed because the target filled up
    long long transfers = 0;
};

// Moves micro-fibres of every block whose node is flagged in `active`, using
// the per-node rearrangement vectors (rx, ry) and block amounts F. Transfers
// are computed in parallel and applied serially in source order. Blocks with
// a zero rearrangement vector are left alone.
RearrangeStats rearrange_micro(MicroFibreField& micro, const Field& rx, const Field& ry, const Field& F,
                               const Mask& active);

// Initial micro pattern in every block, scaled so each block mean equals
// ratio/(1-ratio) * l0 at its node. Patterns: "cross", "offset-cross", "uniform".
MicroFibreField init_micro(const std::string& pattern, double ratio, const Field& l0, const MacroGrid& grid,
                           int cells, double width, double f_max);

// Multiplies each block by F_new/F_old (zero where F_old is zero).
void scale_micro(MicroFibreField& micro, const Field& F_old, const Field& F_new);

}  // namespace invasion
