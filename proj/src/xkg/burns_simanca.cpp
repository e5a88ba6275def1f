#include "xkg/burns_simanca.hpp"

#include <cmath>

#include "xkg/config.hpp"
#include "xkg/curvature_radial.hpp"
#include "xkg/cutoff.hpp"
#include "xkg/fit.hpp"
#include "xkg/grid.hpp"
#include "xkg/quadrature.hpp"

namespace xkg {

namespace {

double Pk(int k, double u) { return std::pow(u, k) - (k - 1) * u + (k - 2); }

double pk(int k, double u) {
  return u - (k - 1) * std::pow(u, 2 - k) + (k - 2) * std::pow(u, 1 - k);
}

double pk1(int k, double u) {
  const double c = double(k - 1) * (k - 2);
  return 1.0 + c * (std::pow(u, 1 - k) - std::pow(u, -k));
}

double pk2(int k, double u) {
  const double c = double(k - 1) * (k - 2);
  return c * (k * std::pow(u, -k - 1) - (k - 1) * std::pow(u, -k));
}

// Q(x) = P(x)/(x-1) = x^{k-1} + ... + x - (k-2)
double Qk(int k, double x) {
  double q = 1.0;
  for (int i = 0; i < k - 2; ++i) q = q * x + 1.0;
  return q * x - (k - 2);
}

// N(x) = sum_{i=0}^{k-3} (k-2-i) x^i; x^{k-1}/P - 1/(x-1) = -N/Q exactly.
double Nk(int k, double x) {
  double v = 0.0;
  for (int i = k - 3; i >= 0; --i) v = v * x + (k - 2 - i);
  return v;
}

// E(u) = ∫_u^∞ N/Q dx, via x = u + z/(1-z).
double Ek(int k, double u) {
  if (k == 2) return 0.0;
  // x = u/y: integrand u/y^2 N(x)/Q(x) is smooth on (0,1] uniformly in u
  // because N/Q ~ x^{-2} at infinity.
  return integrate(
      [&](double y) {
        const double x = u / y;
        return Nk(k, x) / Qk(k, x) * u / (y * y);
      },
      0.0, 1.0, 48, 8);
}

// ∫_u^∞ G dx, G = ((k-1)x - (k-2))/P (k ≥ 3). G has a 1/(x-1) spike at the
// inner end, so split at x = 2 and integrate the spike in y = log(x-1).
double Ftail(int k, double u) {
  const double mid = std::max(u, 2.0);
  double v = integrate(
      [&](double y) {
        const double x = mid / y;
        return ((k - 1) * x - (k - 2)) / Pk(k, x) * mid / (y * y);
      },
      0.0, 1.0, 48, 8);
  if (u < 2.0) {
    // G = R(x)/(x-1), R = ((k-1)x-(k-2))/Q; substitute x = 1 + e^y.
    v += integrate(
        [&](double y) {
          const double x = 1.0 + std::exp(y);
          return ((k - 1) * x - (k - 2)) / Qk(k, x);
        },
        std::log(u - 1.0), 0.0, 48, 8);
  }
  return v;
}

// s(u) = log(u-1) + E(u); invert for u at given s = log t.
double momentum_of_t(int k, double t) {
  if (k == 2) return 1.0 + t;
  const double ls = std::log(t);
  double v = ls - Ek(k, 1.0 + t);  // v = log(u-1)
  for (int it = 0; it < 80; ++it) {
    const double u = 1.0 + std::exp(v);
    const double phi = v + Ek(k, u) - ls;
    const double dphi = 1.0 - Nk(k, u) / Qk(k, u) * std::exp(v);
    const double dv = phi / dphi;
    v -= dv;
    if (std::fabs(dv) < 1e-14) break;
  }
  return 1.0 + std::exp(v);
}

}  // namespace

double bs_leading_coeff_exact(int k) { return k == 2 ? 0.0 : -1.0 / (k - 2); }

double BSMetric::momentum(double t) const { return momentum_of_t(k, t); }

void BSMetric::jets(double t, double out[5]) const {
  const double u = momentum_of_t(k, t);
  const double p = pk(k, u), p1 = pk1(k, u), p2 = pk2(k, u);
  if (k == 2) {
    out[0] = t + std::log(t);
  } else {
    // f = t + (u - t) - Ftail(u), with u - t = 1 - (u-1)(e^E - 1) evaluated
    // without the u ~ t cancellation (t = (u-1) e^E).
    const double delta = 1.0 - (u - 1.0) * std::expm1(Ek(k, u)) - Ftail(k, u);
    out[0] = t + delta;
  }
  out[1] = u;
  out[2] = p;
  out[3] = p1 * p;
  out[4] = p * (p1 * p1 + p * p2);
}

double BSMetric::potential(double t) const {
  double j[5];
  jets(t, j);
  return j[0];
}

double BSMetric::psi(double t) const {
  double j[5];
  psi_jets(t, j);
  return j[0];
}

void BSMetric::psi_jets(double t, double out[5]) const {
  double fj[5];
  jets(t, fj);
  J5 f = {fj[0], fj[1], fj[2], fj[3], fj[4]};
  const J5 tj = {t, t, t, t, t};
  const double s = std::log(t);
  const J5 logt = {s, 1, 0, 0, 0};
  const double r = std::sqrt(t);
  const J5 rj = {r, r / 2, r / 4, r / 8, r / 16};
  J5 gam;
  for (int o = 0; o < 5; ++o) gam[o] = cutoff_gamma(r, o);
  const J5 cut = jcompose(gam, rj);
  J5 res = jsub(jsub(f, tj), jscale(jmul(cut, logt), log_coeff));
  // recompute the value without the f ~ t cancellation
  if (k >= 3) {
    const double u = fj[1];
    const double delta = 1.0 - (u - 1.0) * std::expm1(Ek(k, u)) - Ftail(k, u);
    res[0] = delta - log_coeff * cut[0] * s;
  } else {
    res[0] = (1.0 - cut[0]) * s;
  }
  for (int o = 0; o < 5; ++o) out[o] = res[o];
}

BSMetric solve_burns_simanca(int k, double t_min, double t_max, int n_nodes) {
  if (k < 2) throw std::runtime_error("solve_burns_simanca: need k >= 2");
  BSMetric m;
  m.k = k;
  m.t_min = t_min;
  m.t_max = t_max;
  m.log_coeff = 1.0;
  const std::vector<double> s = log_grid(t_min, t_max, n_nodes);
  m.profile = make_radial_profile(k, s, [&](double sv, int o) {
    double j[5];
    m.jets(std::exp(sv), j);
    return j[o];
  });
  const Vec S = radial_scalar_curvature(m.profile);
  m.tol = S.cwiseAbs().maxCoeff();
  return m;
}

BSExpansion expansion_data(const BSMetric& m) {
  BSExpansion e;
  if (m.k == 2) {
    e.degenerate = true;
    e.leading_coeff = 0.0;
    return e;
  }
  // fit over the last decade of the grid
  std::vector<double> ts, psis, tildes;
  const double t_hi = m.t_max, t_lo = m.t_max / 10.0;
  const double c_exact = bs_leading_coeff_exact(m.k);
  for (int i = 0; i < 33; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, i / 32.0);
    const double ps = m.psi(t);
    ts.push_back(t);
    psis.push_back(ps);
    tildes.push_back(ps - c_exact * std::pow(t, 2 - m.k));
  }
  LineFit lf = fit_loglog(ts, psis);
  e.leading_exponent = lf.slope;
  double csum = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) csum += psis[i] * std::pow(ts[i], m.k - 2);
  e.leading_coeff = csum / ts.size();
  LineFit tf = fit_loglog(ts, tildes);
  e.tilde_exponent = tf.slope;
  return e;
}

double evaluate_bs_potential(const BSMetric& m, double t) {
  if (!(t >= m.t_min && t <= m.t_max))
    throw std::out_of_range("evaluate_bs_potential: t outside [t_min, t_max]");
  return m.potential(t);
}

void write_bs_csv(const BSMetric& m, const BSExpansion& e, const std::string& path) {
  CsvWriter csv(path);
  csv.comment("burns-simanca k=" + std::to_string(m.k) + " t_min=" + format_sci(m.t_min) +
              " t_max=" + format_sci(m.t_max) + " log_coeff=" + format_sci(m.log_coeff) +
              " leading_coeff=" + format_sci(e.leading_coeff) +
              " sup_abs_S=" + format_sci(m.tol));
  csv.header({"s", "f", "f_s", "f_ss", "f_sss", "f_ssss"});
  for (int i = 0; i < m.profile.size(); ++i)
    csv.row({m.profile.s[i], m.profile.jet[0][i], m.profile.jet[1][i], m.profile.jet[2][i],
             m.profile.jet[3][i], m.profile.jet[4][i]});
}

}  // namespace xkg
