#pragma once
// Least-squares line fits, mostly in log-log coordinates: scaling exponents,
// tail decay rates, intercepts of expansion constants.

#include <vector>

namespace xkg {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double max_rel_residual = 0.0;  // max |y_fit - y| / |y| in original coords
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fit log|y| = slope*log x + intercept; skips nonpositive x and zero y.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace xkg
