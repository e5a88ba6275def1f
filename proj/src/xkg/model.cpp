#include "xkg/model.hpp"

#include <cmath>
#include <random>

#include "xkg/cutoff.hpp"

namespace xkg {

ModelSpace make_model(ModelKind kind, int n, int k) {
  if (k < 2 || k > n) throw std::runtime_error("make_model: need 2 <= k <= n");
  return ModelSpace{kind, n, k};
}

double distance_to_S(const ModelSpace& m, const CVec& x) {
  if (x.size() != m.n + 1) throw GridMismatch("distance_to_S: ambient vector size");
  double zn = 0.0, xn = 0.0;
  for (int i = 0; i <= m.n; ++i) {
    const double a = std::norm(x[i]);
    xn += a;
    if (i < m.k) zn += a;
  }
  if (m.kind == ModelKind::Flat) return std::sqrt(zn);
  return std::asin(std::sqrt(zn / xn));
}

double distance_sq(const ModelSpace& m, const CVec& x) {
  const double d = distance_to_S(m, x);
  return d * d;
}

CVec ChartSpec::embed(const CVec& z, const CVec& w) const {
  CVec x = center;
  for (int i = 0; i < static_cast<int>(normal_frame.size()); ++i) x += z[i] * normal_frame[i];
  for (int j = 0; j < static_cast<int>(tangent_frame.size()); ++j)
    x += w[j] * tangent_frame[j];
  return x;
}

double ChartSpec::rho(const CVec& z, const CVec& w) const {
  const double zn = z.squaredNorm();
  if (zn == 0.0) return 0.0;
  if (space.kind == ModelKind::Flat) return 0.0;
  const double d = distance_to_S(space, embed(z, w));
  return d * d / zn - 1.0;
}

double ChartSpec::phi(const CVec& z, const CVec& w) const {
  if (space.kind == ModelKind::Flat) return 0.0;
  const double q = z.squaredNorm() + w.squaredNorm();
  return std::log1p(q) - q;
}

ChartSpec lemma3_chart(const ModelSpace& m, const CVec& p, double radius) {
  if (m.kind == ModelKind::Projective && p.size() != m.n + 1)
    throw GridMismatch("lemma3_chart: center size");
  ChartSpec c;
  c.space = m;
  c.radius = radius;
  c.center = p / p.norm();
  // center must lie in S
  for (int i = 0; i < m.k; ++i)
    if (std::abs(c.center[i]) > 1e-12)
      throw std::runtime_error("lemma3_chart: center not in S");
  // normal frame: the z coordinate directions
  for (int i = 0; i < m.k; ++i) {
    CVec e = CVec::Zero(m.n + 1);
    e[i] = 1.0;
    c.normal_frame.push_back(e);
  }
  // tangent frame: Gram-Schmidt an S-basis against the center
  std::vector<CVec> cand;
  for (int i = m.k; i <= m.n; ++i) {
    CVec e = CVec::Zero(m.n + 1);
    e[i] = 1.0;
    cand.push_back(e);
  }
  for (const CVec& e : cand) {
    CVec v = e;
    v -= (c.center.dot(v)) * c.center;
    for (const CVec& t : c.tangent_frame) v -= (t.dot(v)) * t;
    if (v.norm() > 1e-8) c.tangent_frame.push_back(v / v.norm());
    if (static_cast<int>(c.tangent_frame.size()) == m.n - m.k) break;
  }
  if (static_cast<int>(c.tangent_frame.size()) != m.n - m.k)
    throw std::runtime_error("lemma3_chart: tangent frame construction failed");
  return c;
}

ChartFit fit_chart_bounds(const ChartSpec& c, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int k = static_cast<int>(c.normal_frame.size());
  const int nk = static_cast<int>(c.tangent_frame.size());
  ChartFit fit;
  for (int s = 0; s < samples; ++s) {
    CVec z(k), w(nk);
    for (int i = 0; i < k; ++i) z[i] = std::complex<double>(U(rng), U(rng)) * c.radius * 0.5;
    for (int j = 0; j < nk; ++j) w[j] = std::complex<double>(U(rng), U(rng)) * c.radius * 0.5;
    const double zl = z.norm(), wl = w.norm();
    if (zl + wl < 1e-6) continue;
    fit.rho_const = std::max(fit.rho_const, std::fabs(c.rho(z, w)) / (zl + wl));
    const double p3 = std::pow(zl + wl, 3.0);
    fit.phi_const = std::max(fit.phi_const, std::fabs(c.phi(z, w)) / p3);
    // third derivative of phi along the ray r -> (r z, r w) at r = 1:
    // phi(r) = log(1 + q r^2) - q r^2, so phi''' = -4 q^2 r (3 - q r^2)/(1+q r^2)^3
    const double q = z.squaredNorm() + w.squaredNorm();
    const double d3 = 4.0 * q * q * (3.0 - q) / std::pow(1.0 + q, 3);
    fit.phi_third_deriv = std::max(fit.phi_third_deriv, std::fabs(d3));
  }
  if (c.space.kind == ModelKind::Projective && fit.rho_const > 10.0)
    throw FitFailed("fit_chart_bounds: rho bound violated");
  return fit;
}

double GlueCutoffs::gamma2(double d, int order) const {
  return cutoff_gamma(d / r_eps, order) / std::pow(r_eps, order);
}

double GlueCutoffs::gamma1(double d, int order) const {
  const double v = gamma2(d, order);
  return (order == 0 ? 1.0 : 0.0) - v;
}

GlueCutoffs make_cutoffs(double eps, int k) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::runtime_error("make_cutoffs: need 0 < eps < 1");
  GlueCutoffs c;
  c.eps = eps;
  c.alpha = 2.0 * k / (2.0 * k + 1.0);
  c.r_eps = std::pow(eps, c.alpha);
  return c;
}

double weight_tau(double d, double eps) {
  if (d >= 1.0) return 1.0;
  if (d <= eps) return eps;
  return d;
}

}  // namespace xkg
