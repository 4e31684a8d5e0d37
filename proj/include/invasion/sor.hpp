#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace invasion {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sparse 5-point system  diag[p]*x[p] - sum_k w[p][k]*x[nb[p][k]] = rhs[p]
// over a set of unknowns split into two colours. Every neighbour of a node
// has the other colour or is not an unknown (fixed data held in x).
struct SorSystem {
    std::vector<int> red, black;
    std::vector<double> diag, rhs;              // indexed by node
    std::vector<std::array<int, 4>> nb;         // -1 for unused slots
    std::vector<std::array<double, 4>> weight;

    explicit SorSystem(std::size_t nodes = 0)
        : diag(nodes, 0.0), rhs(nodes, 0.0), nb(nodes, {-1, -1, -1, -1}), weight(nodes, {0, 0, 0, 0}) {}
};

struct SorOptions {
    double omega = 1.0;
    double tol = 1e-10;
    int max_iters = 100000;
};

struct SorResult {
    int iterations = 0;
    double residual = 0.0;  // max over unknowns of |rhs + sum w x_nb - diag x|
};

// Red-black SOR, warm-started from x. Throws SolverError on non-convergence.
SorResult sor_solve(const SorSystem& sys, std::vector<double>& x, const SorOptions& opt);

double sor_residual(const SorSystem& sys, const std::vector<double>& x);

}  // namespace invasion
