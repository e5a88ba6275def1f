#pragma once
// Gauss-Legendre quadrature and the radial (Beta-density) integrals that
// implement fiberwise integration over P^n in the invariant sector.

#include <cstdint>
#include <functional>
#include <vector>

namespace xkg {

struct QuadRule {
  std::vector<double> x, w;
};

// n-point Gauss-Legendre on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

double integrate(const std::function<double(double)>& f, double a, double b, int n = 64,
                 int panels = 8);

// Radial measure on P^n invariant under the symmetry of a linear P^{k-1}
// around P^{n-k}: density sigma^{k-1} (1-sigma)^{n-k} dsigma on [0,1],
// scaled so the total mass is Vol(P^n) = pi^n / n!.
struct RadialMeasure {
  int n = 0, k = 0;
  double norm = 0.0;  // multiplies the raw Beta integral
  double total = 0.0; // Vol(P^n)
};
RadialMeasure radial_measure(int n, int k);

// ∫ f(sigma) dmu over [0,1] against the radial measure.
double radial_integral(const RadialMeasure& mu, const std::function<double(double)>& f,
                       int n = 96);

double factorial(int n);
double vol_pn(int m);  // pi^m / m!

}  // namespace xkg
