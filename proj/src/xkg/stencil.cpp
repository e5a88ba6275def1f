#include "xkg/stencil.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace xkg {

std::vector<double> fornberg_weights(double x0, const std::vector<double>& x, int m) {
  // B. Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  const int nn = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(nn, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int s = mn; s >= 1; --s)
          c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int s = mn; s >= 1; --s)
        c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nn);
  for (int i = 0; i < nn; ++i) w[i] = c[i][m];
  return w;
}

namespace {

struct GhostRef {
  int src;       // source node index
  double coord;  // ghost coordinate
  double sign;   // +1 even, -1 odd, 0 zero ghost
};

std::vector<GhostRef> make_ghosts(const std::vector<double>& x, EdgeClosure c,
                                  bool left, int count) {
  std::vector<GhostRef> g;
  if (c.rule == EdgeRule::OneSided) return g;
  const int n = static_cast<int>(x.size());
  for (int j = 0; j < count; ++j) {
    const int src = left ? j : n - 1 - j;
    const double coord = 2.0 * c.axis - x[src];
    double sign = 1.0;
    if (c.rule == EdgeRule::OddReflect) sign = -1.0;
    if (c.rule == EdgeRule::ZeroGhost) sign = 0.0;
    g.push_back({src, coord, sign});
  }
  return g;
}

}  // namespace

DerivTable::DerivTable(const std::vector<double>& nodes, EdgeClosure left,
                       EdgeClosure right, int width) {
  n_ = static_cast<int>(nodes.size());
  if (n_ < width) throw std::runtime_error("DerivTable: grid smaller than stencil");
  const int half = width / 2;

  const auto gl = make_ghosts(nodes, left, true, half);
  const auto gr = make_ghosts(nodes, right, false, half);

  // Extended coordinate array: [ghost-left(reversed) | nodes | ghost-right].
  // Ghost j sits at index half-1-j on the left.
  std::vector<double> xs;
  std::vector<int> src;     // node index contributing the value, -1 for zero
  std::vector<double> sgn;  // contribution sign
  for (int j = static_cast<int>(gl.size()) - 1; j >= 0; --j) {
    xs.push_back(gl[j].coord);
    src.push_back(gl[j].sign == 0.0 ? -1 : gl[j].src);
    sgn.push_back(gl[j].sign);
  }
  const int off = static_cast<int>(xs.size());
  for (int i = 0; i < n_; ++i) {
    xs.push_back(nodes[i]);
    src.push_back(i);
    sgn.push_back(1.0);
  }
  for (size_t j = 0; j < gr.size(); ++j) {
    xs.push_back(gr[j].coord);
    src.push_back(gr[j].sign == 0.0 ? -1 : gr[j].src);
    sgn.push_back(gr[j].sign);
  }
  const int ntot = static_cast<int>(xs.size());

  std::vector<Eigen::Triplet<double>> trip[4];
  for (int i = 0; i < n_; ++i) {
    // Center the stencil on node i in the extended array; clamp to range.
    int lo = off + i - half;
    if (lo < 0) lo = 0;
    if (lo + width > ntot) lo = ntot - width;
    std::vector<double> sx(xs.begin() + lo, xs.begin() + lo + width);
    // With even/one-sided closures a constant field must be annihilated
    // exactly; fold the numerical row-sum residue into the center weight so
    // roundoff scales with the field's local variation, not its value.
    bool plain = true;
    for (int j = 0; j < width; ++j)
      if (sgn[lo + j] != 1.0) plain = false;
    for (int m = 1; m <= 4; ++m) {
      auto w = fornberg_weights(nodes[i], sx, m);
      if (plain) {
        double sum = 0.0;
        for (int j = 0; j < width; ++j) sum += w[j];
        w[off + i - lo] -= sum;
      }
      for (int j = 0; j < width; ++j) {
        const int s = src[lo + j];
        if (s < 0) continue;
        const double v = w[j] * sgn[lo + j];
        if (v != 0.0) trip[m - 1].emplace_back(i, s, v);
      }
    }
  }
  for (int m = 0; m < 4; ++m) {
    d_[m].resize(n_, n_);
    d_[m].setFromTriplets(trip[m].begin(), trip[m].end());
  }
}

}  // namespace xkg
