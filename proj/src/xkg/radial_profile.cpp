#include "xkg/radial_profile.hpp"

#include <cmath>

namespace xkg {

J5 jconst(double c) { return {c, 0, 0, 0, 0}; }
J5 jvar(double x) { return {x, 1, 0, 0, 0}; }

J5 jadd(const J5& a, const J5& b) {
  J5 r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] + b[i];
  return r;
}

J5 jsub(const J5& a, const J5& b) {
  J5 r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] - b[i];
  return r;
}

J5 jscale(const J5& a, double c) {
  J5 r;
  for (int i = 0; i < 5; ++i) r[i] = c * a[i];
  return r;
}

J5 jmul(const J5& a, const J5& b) {
  static const int binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  J5 r{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) r[i] += binom[i][j] * a[j] * b[i - j];
  return r;
}

J5 jcompose(const J5& o, const J5& in) {
  const double y1 = in[1], y2 = in[2], y3 = in[3], y4 = in[4];
  J5 r;
  r[0] = o[0];
  r[1] = o[1] * y1;
  r[2] = o[2] * y1 * y1 + o[1] * y2;
  r[3] = o[3] * y1 * y1 * y1 + 3.0 * o[2] * y1 * y2 + o[1] * y3;
  r[4] = o[4] * y1 * y1 * y1 * y1 + 6.0 * o[3] * y1 * y1 * y2 +
         o[2] * (3.0 * y2 * y2 + 4.0 * y1 * y3) + o[1] * y4;
  return r;
}

J5 jchain_invert(const J5& h, const J5& y) {
  const double y1 = y[1], y2 = y[2], y3 = y[3], y4 = y[4];
  if (y1 == 0.0) throw std::runtime_error("jchain_invert: singular coordinate change");
  J5 H;
  H[0] = h[0];
  H[1] = h[1] / y1;
  H[2] = (h[2] - H[1] * y2) / (y1 * y1);
  H[3] = (h[3] - 3.0 * H[2] * y1 * y2 - H[1] * y3) / (y1 * y1 * y1);
  H[4] = (h[4] - 6.0 * H[3] * y1 * y1 * y2 - H[2] * (3.0 * y2 * y2 + 4.0 * y1 * y3) -
          H[1] * y4) /
         (y1 * y1 * y1 * y1);
  return H;
}

J5 jdiv(const J5& a, const J5& b) {
  const double v = b[0];
  J5 inv = {1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v),
            24.0 / (v * v * v * v * v)};
  return jmul(a, jcompose(inv, b));
}

J5 jlog(const J5& a) {
  const double v = a[0];
  J5 o = {std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v)};
  return jcompose(o, a);
}

J5 jexp(const J5& a) {
  const double e = std::exp(a[0]);
  J5 o = {e, e, e, e, e};
  return jcompose(o, a);
}

J5 jpow(const J5& a, double p) {
  const double v = a[0];
  J5 o;
  double c = std::pow(v, p);
  o[0] = c;
  double q = p;
  for (int i = 1; i < 5; ++i) {
    c = c / v * q;
    o[i] = c;
    q -= 1.0;
  }
  return jcompose(o, a);
}

void RadialProfile::check_positivity() const {
  for (int i = 0; i < size(); ++i) {
    if (!(jet[1][i] > 0.0) || !(jet[2][i] > 0.0))
      throw PositivityViolation("radial profile: metric positivity fails at s = " +
                                std::to_string(s[i]));
  }
}

RadialProfile make_radial_profile(int k, const std::vector<double>& s,
                                  const std::function<double(double, int)>& fjet,
                                  EdgeClosure left, EdgeClosure right) {
  RadialProfile p;
  p.k = k;
  p.s = s;
  p.D = DerivTable(s, left, right);
  const int n = p.size();
  for (int o = 0; o < 5; ++o) {
    p.jet[o].resize(n);
    for (int i = 0; i < n; ++i) p.jet[o][i] = fjet(s[i], o);
  }
  p.check_positivity();
  return p;
}

RadialProfile make_radial_profile(int k, const std::vector<double>& s, const Vec& f,
                                  EdgeClosure left, EdgeClosure right) {
  if (static_cast<int>(s.size()) != f.size())
    throw GridMismatch("make_radial_profile: grid/value size mismatch");
  RadialProfile p;
  p.k = k;
  p.s = s;
  p.D = DerivTable(s, left, right);
  p.jet[0] = f;
  for (int o = 1; o < 5; ++o) p.jet[o] = p.D.apply(o, f);
  p.check_positivity();
  return p;
}

}  // namespace xkg
