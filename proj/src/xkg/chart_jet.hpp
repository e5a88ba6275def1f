#pragma once
// Curvature calculus for chart potentials F(|Z|^2, |W|^2) depending on two
// radii (doubly radial): the chart-route cross-check of the radial
// reductions, and the F vs F_prod comparisons in the glue annulus.
//
// Coordinates: a = |Z|^2, b = |W|^2 on C^{k1} x C^{k2}, sampled on a tensor
// grid in (s1, s2) = (log a, log b). With subscripts denoting s-derivatives:
//   g has blocks  F_{s1}/a * I_{k1-1},  F_{s2}/b * I_{k2-1},  and a 2x2
//   radial block congruent to  Bs = [[F_{s1s1}, F_{s1s2}], [., F_{s2s2}]];
//   det g = (F_{s1}/a)^{k1-1} (F_{s2}/b)^{k2-1} det(Bs)/(ab)
//   Δh    = (k1-1) h_{s1}/F_{s1} + (k2-1) h_{s2}/F_{s2} + tr(Bs^{-1} Hs)
//   S     = -Δ log det g
// The same curvature convention as the radial modules (S_FS(P^n) = n(n+1)).

#include <functional>

#include "xkg/radial_profile.hpp"

namespace xkg {

using Mat = Eigen::MatrixXd;

struct ChartJet {
  int k1 = 1, k2 = 1;
  std::vector<double> s1, s2;
  Mat P[5][5];  // P[p][q] = d^p/ds1^p d^q/ds2^q F for p+q <= 4
  DerivTable D1, D2;

  int n1() const { return static_cast<int>(s1.size()); }
  int n2() const { return static_cast<int>(s2.size()); }
  void check_positivity() const;
};

ChartJet make_chart_jet(int k1, int k2, const std::vector<double>& s1,
                        const std::vector<double>& s2,
                        const std::function<double(double, double)>& F_of_ab);

// S at all nodes (one-sided stencils degrade accuracy near edges; callers
// should discard a margin of ~4 nodes).
Mat chart_scalar_curvature(const ChartJet& j);

// Δ of a sampled field in the metric of j.
Mat chart_laplacian(const ChartJet& j, const Mat& h);

// Eigen-data of ∂∂̄h in the flat chart frame: the two sphere-block entries
// h_a, h_b and the eigenvalues of the 2x2 radial block; max |.| serves as
// the measured |∇²h| in the comparison fits.
struct HessianSpectrum {
  double sphere1 = 0, sphere2 = 0, rad_min = 0, rad_max = 0;
  double max_abs() const;
};
HessianSpectrum chart_hessian_spectrum(const ChartJet& h, int i, int jn);

}  // namespace xkg
