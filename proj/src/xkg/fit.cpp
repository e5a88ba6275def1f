#include "xkg/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace xkg {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size()) throw std::runtime_error("fit_line: need >= 2 points");
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n; my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::runtime_error("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
    if (y[i] != 0.0) f.max_rel_residual = std::max(f.max_rel_residual, std::fabs(r / y[i]));
  }
  if (n > 2) f.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
  return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] != 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::fabs(y[i])));
    }
  }
  LineFit f = fit_line(lx, ly);
  // Relative residual of |y| against the power law.
  f.max_rel_residual = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    const double pred = std::exp(f.slope * lx[i] + f.intercept);
    f.max_rel_residual =
        std::max(f.max_rel_residual, std::fabs(pred - std::exp(ly[i])) / std::exp(ly[i]));
  }
  return f;
}

}  // namespace xkg
