#include "xkg/cutoff.hpp"

#include <cmath>

namespace xkg {

// S4(x) = 70x^9 - 315x^8 + 540x^7 - 420x^6 + 126x^5
double smoothstep4(double x, int order) {
  if (x <= 0.0 || x >= 1.0) {
    if (order == 0) return x >= 1.0 ? 1.0 : 0.0;
    return 0.0;
  }
  static const double c[5] = {70, -315, 540, -420, 126};
  static const int deg[5] = {9, 8, 7, 6, 5};
  double s = 0.0;
  for (int i = 0; i < 5; ++i) {
    double a = c[i];
    int p = deg[i];
    bool dead = false;
    for (int j = 0; j < order; ++j) {
      a *= p;
      --p;
      if (p < 0) { dead = true; break; }
    }
    if (!dead) s += a * std::pow(x, p);
  }
  return s;
}

double cutoff_gamma(double r, int order) {
  if (r <= 1.0) return order == 0 ? 1.0 : 0.0;
  if (r >= 2.0) return 0.0;
  const double v = smoothstep4(r - 1.0, order);
  return order == 0 ? 1.0 - v : -v;
}

double cutoff_at_scale(double d, double scale, int order) {
  return cutoff_gamma(d / scale, order) / std::pow(scale, order);
}

double cutoff_rise(double r, int order) {
  const double v = cutoff_gamma(r, order);
  return order == 0 ? 1.0 - v : -v;
}

CutoffData cutoff_on_grid(const std::vector<double>& d, double scale, bool rise) {
  CutoffData out;
  for (int o = 0; o <= 4; ++o) {
    out.g[o].resize(d.size());
    for (size_t i = 0; i < d.size(); ++i) {
      const double v = cutoff_gamma(d[i] / scale, o) / std::pow(scale, o);
      out.g[o][i] = rise ? ((o == 0 ? 1.0 : 0.0) - v) : v;
    }
  }
  return out;
}

}  // namespace xkg
