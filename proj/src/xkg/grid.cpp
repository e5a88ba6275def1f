#include "xkg/grid.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace xkg {

std::vector<double> log_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0 && t_max > t_min) || n < 8)
    throw std::runtime_error("log_grid: bad parameters");
  std::vector<double> s(n);
  const double s0 = std::log(t_min), s1 = std::log(t_max);
  for (int i = 0; i < n; ++i) s[i] = s0 + (s1 - s0) * i / (n - 1);
  return s;
}

namespace {

// Grading weight, even about x=0 and x=1.
double grade_w(double x, double g) { return std::exp(-g * (1.0 + std::cos(M_PI * x)) / 2.0); }

// int_0^x w, by fine midpoint accumulation (analytic map, computed once).
double grade_I(double x, double g) {
  const int m = 4000;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double xi = x * (i + 0.5) / m;
    acc += grade_w(xi, g);
  }
  return acc * x / m;
}

}  // namespace

MappedGrid mapped_grid(double dmax, double inner_scale, int n) {
  if (!(dmax > 0.0 && inner_scale > 0.0 && inner_scale < dmax) || n < 16)
    throw std::runtime_error("mapped_grid: bad parameters");
  // w(0)/w(1) = exp(-g); choose so that the first cell is ~ inner_scale/dmax
  // of the average cell.
  const double g = std::log(dmax / inner_scale);
  const double I1 = grade_I(1.0, g);
  MappedGrid out;
  out.dmax = dmax;
  out.inner_scale = inner_scale;
  out.d.resize(n);
  double acc = 0.0;
  double prev = 0.0;
  // March the cumulative integral across cell-centered nodes.
  const int sub = 40;
  for (int i = 0; i < n; ++i) {
    const double xi = (i + 0.5) / n;
    for (int j = 0; j < sub; ++j) {
      const double xq = prev + (xi - prev) * (j + 0.5) / sub;
      acc += grade_w(xq, g) * (xi - prev) / sub;
    }
    prev = xi;
    out.d[i] = dmax * acc / I1;
  }
  return out;
}

MappedGrid truncate_below(const MappedGrid& g, double d_lo) {
  MappedGrid out;
  out.dmax = g.dmax;
  out.inner_scale = d_lo;
  for (double v : g.d)
    if (v >= d_lo) out.d.push_back(v);
  if (out.d.size() < 16) throw std::runtime_error("truncate_below: too few nodes left");
  return out;
}

DerivTable MappedGrid::deriv_even_even() const {
  return DerivTable(d, {EdgeRule::EvenReflect, 0.0}, {EdgeRule::EvenReflect, dmax});
}

DerivTable MappedGrid::deriv_even_zero() const {
  return DerivTable(d, {EdgeRule::EvenReflect, 0.0}, {EdgeRule::ZeroGhost, dmax});
}

DerivTable MappedGrid::deriv_onesided_even() const {
  return DerivTable(d, {EdgeRule::OneSided, 0.0}, {EdgeRule::EvenReflect, dmax});
}

std::vector<double> integration_weights(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> w(n, 0.0);
  if (n < 4) throw std::runtime_error("integration_weights: need >= 4 nodes");
  // Integrate the cubic through 4 neighbouring nodes over each interval.
  for (int i = 0; i + 1 < n; ++i) {
    int lo = i - 1;
    if (lo < 0) lo = 0;
    if (lo + 4 > n) lo = n - 4;
    const double a = x[i], b = x[i + 1];
    // Lagrange basis integrals over [a,b].
    for (int j = 0; j < 4; ++j) {
      // Gauss-Legendre 3-point on [a,b] integrates cubics exactly.
      static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
      static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      double s = 0.0;
      for (int q = 0; q < 3; ++q) {
        const double xq = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
        double L = 1.0;
        for (int m = 0; m < 4; ++m) {
          if (m == j) continue;
          L *= (xq - x[lo + m]) / (x[lo + j] - x[lo + m]);
        }
        s += gw[q] * L;
      }
      w[lo + j] += s * 0.5 * (b - a);
    }
  }
  return w;
}

std::vector<double> MappedGrid::int_weights() const { return integration_weights(d); }

}  // namespace xkg
