#include "xkg/chart_jet.hpp"

#include <cmath>

namespace xkg {

ChartJet make_chart_jet(int k1, int k2, const std::vector<double>& s1,
                        const std::vector<double>& s2,
                        const std::function<double(double, double)>& F_of_ab) {
  ChartJet j;
  j.k1 = k1;
  j.k2 = k2;
  j.s1 = s1;
  j.s2 = s2;
  j.D1 = DerivTable(s1, {EdgeRule::OneSided, 0.0}, {EdgeRule::OneSided, 0.0});
  j.D2 = DerivTable(s2, {EdgeRule::OneSided, 0.0}, {EdgeRule::OneSided, 0.0});
  const int n1 = j.n1(), n2 = j.n2();
  j.P[0][0].resize(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int l = 0; l < n2; ++l)
      j.P[0][0](i, l) = F_of_ab(std::exp(s1[i]), std::exp(s2[l]));
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q) {
      if (p == 0 && q == 0) continue;
      if (p > 0) {
        Mat src = j.P[p - 1][q].rows() ? j.P[p - 1][q] : Mat();
        if (!src.rows()) continue;
        j.P[p][q] = Mat(n1, n2);
        for (int l = 0; l < n2; ++l) j.P[p][q].col(l) = j.D1.apply(1, src.col(l));
      } else {
        const Mat& src = j.P[0][q - 1];
        j.P[0][q] = Mat(n1, n2);
        for (int i = 0; i < n1; ++i)
          j.P[0][q].row(i) = j.D2.apply(1, src.row(i).transpose()).transpose();
      }
    }
  j.check_positivity();
  return j;
}

void ChartJet::check_positivity() const {
  for (int i = 0; i < n1(); ++i)
    for (int l = 0; l < n2(); ++l) {
      const double f1 = P[1][0](i, l), f2 = P[0][1](i, l);
      const double det2 = P[2][0](i, l) * P[0][2](i, l) - P[1][1](i, l) * P[1][1](i, l);
      if ((k1 > 1 && !(f1 > 0)) || (k2 > 1 && !(f2 > 0)) || !(det2 > 0) ||
          !(P[2][0](i, l) > 0))
        throw PositivityViolation("chart jet: Hermitian form not positive at node (" +
                                  std::to_string(i) + "," + std::to_string(l) + ")");
    }
}

namespace {

// Δ of a field given its s-partials to second order, at node (i,l).
inline double lap_point(const ChartJet& j, double h10, double h01, double h20, double h11,
                        double h02, int i, int l) {
  const double f1 = j.P[1][0](i, l), f2 = j.P[0][1](i, l);
  const double B11 = j.P[2][0](i, l), B12 = j.P[1][1](i, l), B22 = j.P[0][2](i, l);
  const double det = B11 * B22 - B12 * B12;
  // tr(Bs^{-1} Hs)
  const double tr2 = (B22 * h20 - 2.0 * B12 * h11 + B11 * h02) / det;
  return (j.k1 - 1) * h10 / f1 + (j.k2 - 1) * h01 / f2 + tr2;
}

void partials2(const ChartJet& j, const Mat& h, Mat& h10, Mat& h01, Mat& h20, Mat& h11,
               Mat& h02) {
  const int n1 = j.n1(), n2 = j.n2();
  h10.resize(n1, n2);
  h20.resize(n1, n2);
  for (int l = 0; l < n2; ++l) {
    h10.col(l) = j.D1.apply(1, h.col(l));
    h20.col(l) = j.D1.apply(2, h.col(l));
  }
  h01.resize(n1, n2);
  h02.resize(n1, n2);
  h11.resize(n1, n2);
  for (int i = 0; i < n1; ++i) {
    h01.row(i) = j.D2.apply(1, h.row(i).transpose()).transpose();
    h02.row(i) = j.D2.apply(2, h.row(i).transpose()).transpose();
    h11.row(i) = j.D2.apply(1, h10.row(i).transpose()).transpose();
  }
}

}  // namespace

Mat chart_laplacian(const ChartJet& j, const Mat& h) {
  if (h.rows() != j.n1() || h.cols() != j.n2())
    throw GridMismatch("chart_laplacian: field shape");
  Mat h10, h01, h20, h11, h02;
  partials2(j, h, h10, h01, h20, h11, h02);
  Mat out(j.n1(), j.n2());
  for (int i = 0; i < j.n1(); ++i)
    for (int l = 0; l < j.n2(); ++l)
      out(i, l) = lap_point(j, h10(i, l), h01(i, l), h20(i, l), h11(i, l), h02(i, l), i, l);
  return out;
}

Mat chart_scalar_curvature(const ChartJet& j) {
  const int n1 = j.n1(), n2 = j.n2();
  Mat L(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int l = 0; l < n2; ++l) {
      const double det2 = j.P[2][0](i, l) * j.P[0][2](i, l) - j.P[1][1](i, l) * j.P[1][1](i, l);
      L(i, l) = (j.k1 - 1) * std::log(j.P[1][0](i, l)) +
                (j.k2 - 1) * std::log(j.P[0][1](i, l)) + std::log(det2) -
                j.k1 * j.s1[i] - j.k2 * j.s2[l];
    }
  Mat lap = chart_laplacian(j, L);
  return -lap;
}

double HessianSpectrum::max_abs() const {
  return std::max(std::max(std::fabs(sphere1), std::fabs(sphere2)),
                  std::max(std::fabs(rad_min), std::fabs(rad_max)));
}

HessianSpectrum chart_hessian_spectrum(const ChartJet& h, int i, int l) {
  const double a = std::exp(h.s1[i]), b = std::exp(h.s2[l]);
  HessianSpectrum sp;
  sp.sphere1 = h.P[1][0](i, l) / a;
  sp.sphere2 = h.P[0][1](i, l) / b;
  // flat-frame radial block [[h20/a, h11/sqrt(ab)], [., h02/b]]
  const double m11 = h.P[2][0](i, l) / a, m22 = h.P[0][2](i, l) / b;
  const double m12 = h.P[1][1](i, l) / std::sqrt(a * b);
  const double tr = m11 + m22, disc = std::sqrt(std::max(0.0, (m11 - m22) * (m11 - m22) / 4.0 + m12 * m12));
  sp.rad_min = tr / 2.0 - disc;
  sp.rad_max = tr / 2.0 + disc;
  return sp;
}

}  // namespace xkg
