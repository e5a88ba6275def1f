#pragma once
// C^4 cutoffs. gamma(r) = 1 for r <= 1, 0 for r >= 2, monotone in between,
// built from the 9th-degree smoothstep so four derivatives vanish at the
// junctions. All transition profiles used in the gluing are rescalings of
// this one function.

#include <vector>

namespace xkg {

// Smoothstep S4: S4(0)=0, S4(1)=1, S4^(j)(0)=S4^(j)(1)=0 for j=1..4.
double smoothstep4(double x, int order = 0);

// gamma and its derivatives d^order/dr^order, order 0..4.
double cutoff_gamma(double r, int order = 0);

// Cutoff at scale: chi(d) = gamma(d / scale). Derivatives in d.
double cutoff_at_scale(double d, double scale, int order = 0);

// Complement 1 - gamma(r) (rises from 0 to 1 across [1,2]).
double cutoff_rise(double r, int order = 0);

// Node values + derivatives of gamma(d/scale) on a grid, orders 0..4.
struct CutoffData {
  std::vector<double> g[5];
};
CutoffData cutoff_on_grid(const std::vector<double>& d, double scale, bool rise = false);

}  // namespace xkg
