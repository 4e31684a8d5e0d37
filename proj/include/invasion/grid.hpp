#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "invasion/field.hpp"

namespace invasion {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MacroGrid {
    double L = 0.0;
    double h = 0.0;
    int n = 0;
    double coord(int i) const { return i * h; }
};

// Throws ConfigError unless L/h is a positive integer.
MacroGrid build_grid(double L, double h);

struct DomainMask {
    Mask inside;       // tumour indicator
    Mask boundary;     // tumour nodes with a non-tumour 8-neighbour (off-grid counts as outside)
    Mask interior;     // inside minus boundary
    Mask weno_inside;  // full 7-point cross in both axes lies in the tumour
    Mask weno_layer;   // inside minus weno_inside
    Mask outer;        // membership flags for outer_boundary

    // Outer boundary nodes, contour-ordered (counter-clockwise) where a
    // contour trace reaches them; any leftovers are appended in index order.
    std::vector<int> outer_boundary;
    // Closed counter-clockwise traces of each 8-connected component's outer
    // contour, as node indices. A node may appear twice on thin necks.
    std::vector<std::vector<int>> contours;

    int n() const { return inside.n; }
    std::size_t count() const;
};

DomainMask compute_masks(const Mask& tumour, const MacroGrid& grid);

// Boundary nodes connected to the edge of Y through non-tumour nodes.
// Returned in index order; compute_masks orders them along the contours.
std::vector<int> outer_boundary(const DomainMask& mask);

// Nodes of the tumour at Euclidean distance >= R_p from every outer boundary node.
Mask repolarisation_mask(const DomainMask& mask, const MacroGrid& grid, double R_p);

// Normalising integral of exp(-1/(1-|z|^2)) over the unit disc.
double mollifier_integral();

// psi(z/range)/range^2, zero for |z| >= range.
double mollifier_value(double zx, double zy, double range);

// Sum over y of chi(y) psi_range(x - y) h^2, with the sampled kernel rescaled
// so that its grid sum times h^2 equals one (a full-plane indicator maps to 1).
Field mollify_indicator(const Mask& chars, const MacroGrid& grid, double range);

// Moore-neighbour trace of the outer contour of the component containing
// `start`, which must be its lowest-then-leftmost node. Counter-clockwise.
std::vector<int> trace_contour(const Mask& tumour, int start);

}  // namespace invasion
