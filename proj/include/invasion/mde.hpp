#pragma once

#include <vector>

#include "invasion/field.hpp"
#include "invasion/grid.hpp"
#include "invasion/params.hpp"
#include "invasion/state.hpp"

namespace invasion {

// Square patch of side `width` centred on an outer boundary node, split into
// cells x cells cell-centred micro cells.
struct MdePatch {
    int node = -1;
    double cx = 0.0, cy = 0.0;
    double width = 0.0;
    int cells = 16;

    double dy() const { return width / cells; }
    double cell_x(int a) const { return cx + (a + 0.5) * dy() - 0.5 * width; }
    double cell_y(int b) const { return cy + (b + 0.5) * dy() - 0.5 * width; }
};

MdePatch make_patch(int node, const MacroGrid& grid, double width, int cells);

// A point belongs to the tumour when its nearest macro node does.
bool point_inside(const DomainMask& mask, const MacroGrid& grid, double x, double y);

// Distance from a point to the union of the h-squares around tumour nodes.
double distance_to_tumour(const DomainMask& mask, const MacroGrid& grid, double x, double y);

// Trapezoid-weighted mean of alpha_c c + alpha_M1 M1 + alpha_M2 M2 over the
// square of half side gamma_h restricted to the tumour, at every node whose
// square meets the tumour; zero elsewhere.
Field mde_secretion_mean(const TumourState& u, const DomainMask& mask, const MacroGrid& grid, const ModelParams& p);

// Micro source: the mean above interpolated bilinearly, faded linearly to
// zero over `band` outside the tumour.
std::vector<double> mde_source(const MdePatch& patch, const Field& mean, const DomainMask& mask,
                               const MacroGrid& grid, double band);

struct MdeSolution {
    std::vector<double> m;
    long long iterations = 0;
};

// dm/dt = D lap m + source from m = 0 with no flux through the patch edges,
// backward Euler over `duration` in `steps` steps.
MdeSolution solve_mde(const MdePatch& patch, const std::vector<double>& source, double D, double duration,
                      int steps, double omega, double tol);

struct BoundaryMove {
    bool move = false;  // a direction could be formed
    double dx = 0.0, dy = 0.0;
    double xi = 0.0;
    bool q_defined = false;
    double q = 0.0;
};

// Direction and distance from the far, exterior, above-average dyadic cubes;
// q is the exterior share of the enzyme mass.
BoundaryMove boundary_move(const MdePatch& patch, const std::vector<double>& m, const DomainMask& mask,
                           const MacroGrid& grid, int level);

double tissue_threshold_value(double ratio, double beta);

// True when q exceeds the two-branch threshold at v_star / v_sup.
bool tissue_threshold(double q, double v_star, double v_sup, double beta);

struct PatchDecision {
    int node = -1;
    bool move = false;
    double dx = 0.0, dy = 0.0;  // unit direction
    double xi = 0.0;
};

struct MovementResult {
    Mask tumour;
    int added = 0;
    int fallback_contours = 0;  // contours handled by swept capsules
};

// New tumour indicator: old nodes plus nodes enclosed by each displaced
// contour but not by the original one. Self-intersecting contours fall back
// to capsules of radius h/2 around each node's displacement segment.
MovementResult apply_boundary_movement(const DomainMask& mask, const MacroGrid& grid,
                                       const std::vector<PatchDecision>& decisions);

struct BoundaryStage {
    std::vector<PatchDecision> decisions;
    int patches = 0, moving = 0;
    double q_min = 1.0, q_max = 0.0;
    double mean_identity_error = 0.0;  // max |mean(m) - mean(source) * duration|
    long long sor_iterations = 0;
};

// One patch per outer boundary node: source, solve, direction and threshold.
BoundaryStage boundary_stage(const TumourState& u, const DomainMask& mask, const MacroGrid& grid,
                             const ModelParams& p, double duration);

}  // namespace invasion
