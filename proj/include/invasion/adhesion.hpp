#pragma once

#include <array>
#include <vector>

#include "invasion/field.hpp"
#include "invasion/grid.hpp"

namespace invasion {

struct TumourState;

struct AdhesionStrengths {
    double S_min = 0.01, S_max = 0.5;
    double S_cl = 0.01, S_cF = 0.3, S_cM = 0.125;
    double S_Mc = 0.125, S_Msigma = 0.1, S_M1M = 0.175, S_M2M = 0.05;
};

struct SensingSector {
    double bx = 0.0, by = 0.0;  // area centroid of the annulus sector
    double nx = 0.0, ny = 0.0;  // b/|b|
    double weight = 0.0;        // psi(b/R)
    double area = 0.0;
    std::array<double, 4> beta{};  // bilinear weights of the four surrounding nodes
    // Nonzero entries of the flipped P x P matrix: (K conv g)(i,j) = sum v*g(i-a, j-b).
    std::array<int, 4> tap_a{}, tap_b{};
    std::array<double, 4> tap_v{};
};

struct SensingKernels {
    double R = 0.0, h = 0.0;
    int annuli = 0, exponent = 0;
    int P = 0;  // matrix side, odd
    std::vector<SensingSector> sectors;
    std::vector<std::vector<double>> matrices;  // per sector, P*P, row index = x offset, before flipping
};

// s annuli of equal width, annulus k split into 2^(m+k-1) equal sectors.
SensingKernels build_sensing_kernels(double R, int s, int m, const MacroGrid& grid);

int sector_count(int s, int m);

// Ca-modulated cancer self-adhesion.
double s_cc(double l, const AdhesionStrengths& st);

struct AdhesionOptions {
    bool saturation = true;  // apply [1 - rho]^+ ; disabled only in tests
};

VectorField adhesion_M(const TumourState& u, const SensingKernels& K, double S_MM, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt = {});

VectorField adhesion_c(const TumourState& u, const SensingKernels& K, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt = {});

// Macrophage adhesion for both phenotypes from a single pass.
std::array<VectorField, 2> adhesion_M_pair(const TumourState& u, const SensingKernels& K,
                                           const AdhesionStrengths& st, const DomainMask& mask,
                                           const AdhesionOptions& opt = {});

namespace reference {
// Serial nested loop over nodes and sectors, interpolating at x + b directly.
VectorField adhesion_M(const TumourState& u, const SensingKernels& K, double S_MM, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt = {});
VectorField adhesion_c(const TumourState& u, const SensingKernels& K, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt = {});
}  // namespace reference

}  // namespace invasion
