#pragma once

// Weighted Hölder norms for radial fields on graded grids.
//
// The continuum norm ||f||_{C^{l,alpha}_{delta}} weights the i-th derivative
// by tau(d)^{i - delta}, where tau(d) = clamp(d, eps, 1) interpolates between
// the neck scale and the compact region.  We discretise it as
//
//   max_i  sup_j  tau_j^{i-delta} |f^{(i)}(d_j)|
//   + sup  tau_j^{l+alpha-delta} |f^{(l)}(d_j) - f^{(l)}(d_j')| / |d_j-d_j'|^alpha
//
// where the Hölder sup runs over node pairs at distance <= tau_j/10 that are
// at least two cells apart (so the quotient is not dominated by the stencil
// error of adjacent nodes).
//
// There are two implementations: an OpenMP-parallel kernel used everywhere,
// and a simple serial reference kept for testing and benchmarking.

#include "xkg/stencil.hpp"

#include <optional>
#include <vector>

namespace xkg {

struct NormSpec {
    double delta = -1.9;   // weight exponent
    int l = 4;             // highest derivative order included (0..4)
    double alpha = 0.5;    // Hölder exponent
    double eps = 0.1;      // neck scale entering tau
};

// Weighted norm of the nodal field `values` over nodes where mask[j] != 0.
// `d` holds the node coordinates, `D` the derivative tables on those nodes.
double weighted_norm(const Vec& d, const DerivTable& D, const Vec& values,
                     const NormSpec& spec,
                     const std::vector<char>* mask = nullptr);

// Serial reference implementation (identical result, no threading).
double weighted_norm_serial(const Vec& d, const DerivTable& D, const Vec& values,
                            const NormSpec& spec,
                            const std::vector<char>* mask = nullptr);

// Norm on the finite-dimensional factor hbar = span{1, mu}: just |g0| + |g1|.
double hbar_norm(double g0, double g1);

}  // namespace xkg
