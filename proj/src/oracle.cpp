#include "nkiso/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace nkiso::oracle {

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

template <class F>
auto central(const F& f, const Vec& x, int i, double h) {
  Vec xp = x, xm = x;
  xp(i) += h;
  xm(i) -= h;
  return ((f(xp) - f(xm)) / (2.0 * h)).eval();
}

template <class F>
auto derivative(const F& f, const Vec& x, int i, Step step) {
  auto coarse = central(f, x, i, step.h);
  if (!step.richardson) return coarse;
  auto fine = central(f, x, i, 0.5 * step.h);
  return ((4.0 * fine - coarse) / 3.0).eval();
}

void check_step(Step step) {
  if (!(step.h >= 1e-5 && step.h <= 1e-2)) {
    throw Error(ErrorKind::InvalidArgument, "finite-difference step must lie in [1e-5, 1e-2]");
  }
}

Mat checked_inverse(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lo > 1e-12 * std::max(hi, 1e-300))) {
    throw Error(ErrorKind::SingularMetric, "metric is singular or indefinite at the sample point");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

Vec flatten(const Tensor3& t) {
  return Eigen::Map<const Vec>(t.data().data(), static_cast<Eigen::Index>(t.data().size()));
}

}  // namespace

Mat partial(const MatrixField& f, const Vec& x, int i, Step step) {
  check_step(step);
  return derivative(f, x, i, step);
}

Tensor3 christoffel(const MatrixField& metric, const Vec& x, Step step) {
  check_step(step);
  const int n = static_cast<int>(x.size());
  const Mat ginv = checked_inverse(metric(x));
  std::vector<Mat> dg(n);
  for (int i = 0; i < n; ++i) dg[i] = derivative(metric, x, i, step);

  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma(k, i, j) = gamma(k, j, i) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Tensor4 riemann_numeric(const MatrixField& metric, const Vec& x, Step step) {
  check_step(step);
  const int n = static_cast<int>(x.size());
  const Tensor3 gamma = christoffel(metric, x, step);
  auto flat_gamma = [&](const Vec& y) { return flatten(christoffel(metric, y, step)); };
  // dgamma[m] holds d_m Gamma^l_{jk} at flat index (l*n + j)*n + k.
  std::vector<Vec> dgamma(n);
  for (int m = 0; m < n; ++m) dgamma[m] = derivative(flat_gamma, x, m, step);
  auto dg = [&](int m, int l, int j, int k) { return dgamma[m]((l * n + j) * n + k); };

  Tensor4 r(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = dg(i, l, j, k) - dg(j, l, i, k);
          for (int m = 0; m < n; ++m) s += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
          r(l, i, j, k) = s;
        }
  return r;
}

Tensor4 lower_riemann(const Tensor4& r, const Mat& g) {
  const int n = r.dim();
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += r(m, i, j, k) * g(m, l);
          out(i, j, k, l) = s;
        }
  return out;
}

Tensor3 nabla_endomorphism_numeric(const MatrixField& metric, const MatrixField& endo,
                                   const Vec& x, Step step) {
  check_step(step);
  const int n = static_cast<int>(x.size());
  const Tensor3 gamma = christoffel(metric, x, step);
  const Mat a = endo(x);
  Tensor3 out(n);
  for (int i = 0; i < n; ++i) {
    const Mat da = derivative(endo, x, i, step);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = da(k, j);
        for (int l = 0; l < n; ++l) s += gamma(k, i, l) * a(l, j) - gamma(l, i, j) * a(k, l);
        out(i, j, k) = s;
      }
  }
  return out;
}

Tensor3 nabla_metric_numeric(const MatrixField& metric, const Vec& x, Step step) {
  check_step(step);
  const int n = static_cast<int>(x.size());
  const Tensor3 gamma = christoffel(metric, x, step);
  const Mat g = metric(x);
  Tensor3 out(n);
  for (int i = 0; i < n; ++i) {
    const Mat dg = derivative(metric, x, i, step);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = dg(j, k);
        for (int l = 0; l < n; ++l) s -= gamma(l, i, j) * g(l, k) + gamma(l, i, k) * g(j, l);
        out(i, j, k) = s;
      }
  }
  return out;
}

double symmetrized_defect(const Tensor3& nabla) {
  const int n = nabla.dim();
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(nabla(i, j, k) + nabla(j, i, k)));
  return m;
}

}  // namespace nkiso::oracle
