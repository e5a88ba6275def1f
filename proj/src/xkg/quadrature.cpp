#include "xkg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace xkg {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::runtime_error("gauss_legendre: n < 1");
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton on Legendre P_n from Chebyshev-like initial guesses.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    r.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * x;
    r.w[i] = (b - a) / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n,
                 int panels) {
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    const QuadRule r = gauss_legendre(n, pa, pb);
    for (int i = 0; i < n; ++i) s += r.w[i] * f(r.x[i]);
  }
  return s;
}

double factorial(int n) {
  double v = 1.0;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

double vol_pn(int m) { return std::pow(M_PI, m) / factorial(m); }

RadialMeasure radial_measure(int n, int k) {
  if (k < 1 || k > n) throw std::runtime_error("radial_measure: need 1 <= k <= n");
  RadialMeasure mu;
  mu.n = n;
  mu.k = k;
  mu.total = vol_pn(n);
  // Beta(k, n-k+1) = (k-1)!(n-k)!/n!
  const double beta = factorial(k - 1) * factorial(n - k) / factorial(n);
  mu.norm = mu.total / beta;
  return mu;
}

double radial_integral(const RadialMeasure& mu, const std::function<double(double)>& f,
                       int n) {
  auto g = [&](double s) {
    return f(s) * std::pow(s, mu.k - 1) * std::pow(1.0 - s, mu.n - mu.k);
  };
  return mu.norm * integrate(g, 0.0, 1.0, n, 8);
}

}  // namespace xkg
