#include "xkg/curvature_radial.hpp"

#include <cmath>

#include "xkg/grid.hpp"

namespace xkg {

namespace {

// log det g jet pieces from the profile jets; returns (Ldet_s, Ldet_ss).
inline void ldet_jet(const RadialProfile& p, int i, double& L1, double& L2) {
  const double u = p.jet[1][i], q = p.jet[2][i];
  const double f3 = p.jet[3][i], f4 = p.jet[4][i];
  L1 = (p.k - 1) * q / u + f3 / q - p.k;
  L2 = (p.k - 1) * (f3 * u - q * q) / (u * u) + (f4 * q - f3 * f3) / (q * q);
}

}  // namespace

Vec radial_scalar_curvature(const RadialProfile& p) {
  p.check_positivity();
  const int n = p.size();
  Vec S(n);
  for (int i = 0; i < n; ++i) {
    const double u = p.jet[1][i], q = p.jet[2][i];
    double L1, L2;
    ldet_jet(p, i, L1, L2);
    S[i] = -(L2 / q + (p.k - 1) * L1 / u);
  }
  return S;
}

Vec radial_laplacian(const RadialProfile& p, const Vec& u) {
  if (u.size() != p.size()) throw GridMismatch("radial_laplacian: field size");
  const Vec u1 = p.D.apply(1, u);
  const Vec u2 = p.D.apply(2, u);
  Vec out(p.size());
  for (int i = 0; i < p.size(); ++i)
    out[i] = u2[i] / p.jet[2][i] + (p.k - 1) * u1[i] / p.jet[1][i];
  return out;
}

SpMat radial_laplacian_matrix(const RadialProfile& p) {
  const int n = p.size();
  Vec c2(n), c1(n);
  for (int i = 0; i < n; ++i) {
    c2[i] = 1.0 / p.jet[2][i];
    c1[i] = (p.k - 1) / p.jet[1][i];
  }
  return c2.asDiagonal() * p.D.d(2) + c1.asDiagonal() * p.D.d(1);
}

namespace {

SpMat ricci_contract_matrix(const RadialProfile& p) {
  const int n = p.size();
  Vec c1(n), c2(n);
  for (int i = 0; i < n; ++i) {
    const double u = p.jet[1][i], q = p.jet[2][i];
    double L1, L2;
    ldet_jet(p, i, L1, L2);
    c1[i] = -(p.k - 1) * L1 / (u * u);
    c2[i] = -L2 / (q * q);
  }
  return c1.asDiagonal() * p.D.d(1) + c2.asDiagonal() * p.D.d(2);
}

SpMat drift_matrix(const RadialProfile& p) {
  // ½ ∇S·∇u = S_s u_s / f_ss, with S_s by finite differences of the exact
  // pointwise S values.
  const Vec S = radial_scalar_curvature(p);
  const Vec S1 = p.D.apply(1, S);
  const int n = p.size();
  Vec c(n);
  for (int i = 0; i < n; ++i) c[i] = S1[i] / p.jet[2][i];
  return c.asDiagonal() * p.D.d(1);
}

}  // namespace

SpMat radial_lichnerowicz_matrix(const RadialProfile& p) {
  const SpMat lap = radial_laplacian_matrix(p);
  SpMat out = SpMat(lap * lap) + ricci_contract_matrix(p) + drift_matrix(p);
  return out;
}

SpMat radial_linearized_matrix(const RadialProfile& p) {
  const SpMat lap = radial_laplacian_matrix(p);
  SpMat out = SpMat(-(lap * lap)) - ricci_contract_matrix(p);
  return out;
}

Vec radial_linearized_scalar_op(const RadialProfile& p, const Vec& u) {
  if (u.size() != p.size()) throw GridMismatch("radial_linearized_scalar_op: field size");
  const Vec lap = radial_laplacian(p, u);
  const Vec lap2 = radial_laplacian(p, lap);
  const Vec ric = ricci_contract_matrix(p) * u;
  return -lap2 - ric;
}

Vec radial_lichnerowicz(const RadialProfile& p, const Vec& u) {
  if (u.size() != p.size()) throw GridMismatch("radial_lichnerowicz: field size");
  const Vec lap = radial_laplacian(p, u);
  const Vec lap2 = radial_laplacian(p, lap);
  const Vec ric = ricci_contract_matrix(p) * u;
  const Vec drift = drift_matrix(p) * u;
  return lap2 + ric + drift;
}

Vec radial_grad_pair(const RadialProfile& p, const Vec& a, const Vec& b) {
  if (a.size() != p.size() || b.size() != p.size())
    throw GridMismatch("radial_grad_pair: field size");
  const Vec a1 = p.D.apply(1, a), b1 = p.D.apply(1, b);
  Vec out(p.size());
  for (int i = 0; i < p.size(); ++i) out[i] = 2.0 * a1[i] * b1[i] / p.jet[2][i];
  return out;
}

Vec radial_l2_weights(const RadialProfile& p) {
  // density u^{k-1} p ds (invariant-sector volume up to the sphere factor)
  const Vec w = [&] {
    std::vector<double> iw = integration_weights(p.s);
    Vec v(p.size());
    for (int i = 0; i < p.size(); ++i) v[i] = iw[i];
    return v;
  }();
  Vec out(p.size());
  for (int i = 0; i < p.size(); ++i)
    out[i] = w[i] * std::pow(p.jet[1][i], p.k - 1) * p.jet[2][i];
  return out;
}

}  // namespace xkg
