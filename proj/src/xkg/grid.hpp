#pragma once
// Radial grids.
//
// Two families:
//  * LogGrid      — uniform nodes in s = log t, used for Burns-Simanca
//                   profiles and flat-chart fields.
//  * MappedGrid   — cell-centered nodes in x in (0,1) pushed through a
//                   symmetric grading map d(x). The map is odd about x=0 and
//                   satisfies d(1+h) = 2*dmax - d(1-h), so even ghost
//                   reflection about d=0 (exceptional divisor) and d=dmax
//                   (far pole) lands exactly on mirrored nodes.
//
// The grading weight is w(x) = exp(-g*(1+cos(pi x))/2) up to scale: node
// spacing near d=0 is ~ inner_scale * dmax / N while spacing in the bulk
// grows geometrically, which resolves both the epsilon-neck and the outer
// region with uniform-in-x stencils.

#include <vector>
#include "xkg/stencil.hpp"

namespace xkg {

std::vector<double> log_grid(double t_min, double t_max, int n);

struct MappedGrid {
  std::vector<double> d;   // radial nodes, strictly increasing, 0 < d < dmax
  double dmax = 0.0;
  double inner_scale = 0.0;
  // Differentiation in d with even closure at both ends.
  DerivTable deriv_even_even() const;
  // Even closure at d=0, decay clamp (zero ghosts) at d=dmax.
  DerivTable deriv_even_zero() const;
  // One-sided at the inner end, even closure at the pole.
  DerivTable deriv_onesided_even() const;
  // 4th-order integration weights for sum_i w_i f(d_i) ~ int f dd.
  std::vector<double> int_weights() const;
};

// inner_scale ~ the resolved length near d=0 (pass epsilon for glue grids).
MappedGrid mapped_grid(double dmax, double inner_scale, int n);

// Truncate a mapped grid to nodes with d >= d_lo (keeps the pole closure).
MappedGrid truncate_below(const MappedGrid& g, double d_lo);

// Integration weights on arbitrary monotone nodes (composite 4-point rule).
std::vector<double> integration_weights(const std::vector<double>& x);

}  // namespace xkg
