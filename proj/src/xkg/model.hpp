#pragma once
// The two model spaces (M, omega_M, S):
//   Flat:       C^k x C^{n-k}, S = {z = 0}, omega flat
//   Projective: P^n with Fubini-Study, S a linear P^{n-k}
// plus the tubular-neighborhood distance, normal-form charts, the gluing
// cutoffs gamma_1/gamma_2 at scale r_eps = eps^{2k/(2k+1)}, and the weight
// function tau.
//
// Projective conventions: homogeneous coordinates x_0..x_n, S = {x_0 = ...
// = x_{k-1} = 0}; z = (x_0..x_{k-1}) spans the normal directions. The
// FS-geodesic distance to S is d = arcsin(|z|/|x|), d in [0, pi/2].

#include <complex>
#include <vector>

#include "xkg/radial_profile.hpp"

namespace xkg {

enum class ModelKind { Flat, Projective };

using CVec = Eigen::VectorXcd;

struct ModelSpace {
  ModelKind kind = ModelKind::Projective;
  int n = 4, k = 3;
};

ModelSpace make_model(ModelKind kind, int n, int k);

// d^2 to S. Points are given in the ambient presentation: flat model takes
// (|z|^2, |w|^2) through the homogeneous vector too (z components first).
double distance_sq(const ModelSpace& m, const CVec& x);
double distance_to_S(const ModelSpace& m, const CVec& x);

struct OutsideTubularNeighborhood : std::runtime_error {
  explicit OutsideTubularNeighborhood(const std::string& s) : std::runtime_error(s) {}
};

// Normal-form chart at a center p in S (Lemma-style): coordinates (z, w)
// with d^2 = |z|^2 (1 + rho), omega_M = ddbar(|z|^2 + |w|^2 + phi).
struct ChartSpec {
  ModelSpace space;
  CVec center;                       // unit homogeneous vector in S
  std::vector<CVec> normal_frame;    // k directions
  std::vector<CVec> tangent_frame;   // n-k directions within S
  double radius = 0.5;

  CVec embed(const CVec& z, const CVec& w) const;  // chart point -> ambient
  double rho(const CVec& z, const CVec& w) const;  // d^2/|z|^2 - 1
  double phi(const CVec& z, const CVec& w) const;  // potential remainder
};

struct FitFailed : std::runtime_error {
  explicit FitFailed(const std::string& s) : std::runtime_error(s) {}
};

ChartSpec lemma3_chart(const ModelSpace& m, const CVec& p, double radius);

// Fitted order constants: sup |rho|/(|z|+|w|) and sup |phi|/(|z|+|w|)^3
// over a sample of the chart; FitFailed if the claimed orders are violated.
struct ChartFit {
  double rho_const = 0.0;
  double phi_const = 0.0;
  double phi_third_deriv = 0.0;  // sampled magnitude of third derivatives
};
ChartFit fit_chart_bounds(const ChartSpec& c, int samples, unsigned seed);

// Gluing cutoff data.
struct GlueCutoffs {
  double eps = 0.1;
  double alpha = 0.0;   // 2k/(2k+1)
  double r_eps = 0.0;   // eps^alpha
  double gamma2(double d, int order = 0) const;  // 1 near S, 0 past 2 r_eps
  double gamma1(double d, int order = 0) const;  // complement
};
GlueCutoffs make_cutoffs(double eps, int k);

// tau = 1 for d >= 1, d for eps <= d <= 1, eps for d <= eps.
double weight_tau(double d, double eps);

}  // namespace xkg
