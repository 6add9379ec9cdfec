#pragma once

// Chart-based finite-difference Riemannian geometry. Everything here works on
// matrix-valued fields over R^n and knows nothing about the closed-form
// structures it is used to validate.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nkiso/error.hpp"

namespace nkiso::oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Symmetric positive definite g_ij(x), or a (1,1)-tensor A^k_j(x) stored as
/// the matrix whose column j holds the components of A(d_j).
using MatrixField = std::function<Mat(const Vec&)>;

struct Step {
  double h = 1e-3;
  /// One Richardson extrapolation step over (h, h/2).
  bool richardson = true;
};

/// Dense rank-3 array, index order as documented by the producer.
class Tensor3 {
 public:
  explicit Tensor3(int n = 0) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int a, int b, int c) { return data_[(a * n_ + b) * n_ + c]; }
  double operator()(int a, int b, int c) const { return data_[(a * n_ + b) * n_ + c]; }
  const std::vector<double>& data() const { return data_; }
  double max_abs() const;

 private:
  int n_;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  explicit Tensor4(int n = 0) : n_(n), data_(static_cast<size_t>(n) * n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  const std::vector<double>& data() const { return data_; }
  double max_abs() const;

 private:
  int n_;
  std::vector<double> data_;
};

/// Central difference of a matrix field along coordinate i.
Mat partial(const MatrixField& f, const Vec& x, int i, Step step);

/// Gamma(k, i, j) = Gamma^k_{ij} = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
Tensor3 christoffel(const MatrixField& metric, const Vec& x, Step step = {});

/// R(l, i, j, k) = R^l_{ijk} with R(d_i, d_j) d_k = R^l_{ijk} d_l and
/// R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
Tensor4 riemann_numeric(const MatrixField& metric, const Vec& x, Step step = {});

/// Lowered tensor R(i, j, k, l) = g(R(d_i, d_j) d_k, d_l).
Tensor4 lower_riemann(const Tensor4& r, const Mat& g);

/// N(i, j, k): components (k) of (nabla_{d_i} A)(d_j).
Tensor3 nabla_endomorphism_numeric(const MatrixField& metric, const MatrixField& endo,
                                   const Vec& x, Step step = {});

/// (nabla_{d_i} g)(d_j, d_k); vanishes for the Levi-Civita connection.
Tensor3 nabla_metric_numeric(const MatrixField& metric, const Vec& x, Step step = {});

/// max_{i,j,k} |N(i,j,k) + N(j,i,k)|: the nearly Kaehler defect of an
/// almost complex structure given its nabla tensor.
double symmetrized_defect(const Tensor3& nabla);

/// A local parametrization with its coordinate frame d_i expressed as
/// tangent vectors of the target space.
template <class Tangent>
struct Chart {
  int dim = 0;
  std::function<std::vector<Tangent>(const Vec&)> frame;
};

/// g_ij(x) = g(d_i, d_j).
template <class Tangent, class Metric>
MatrixField pullback_metric(Chart<Tangent> chart, Metric metric) {
  return [chart = std::move(chart), metric = std::move(metric)](const Vec& x) {
    const std::vector<Tangent> e = chart.frame(x);
    const int n = chart.dim;
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g(i, j) = g(j, i) = metric(e[i], e[j]);
    return g;
  };
}

/// Components of an endomorphism field in the chart frame, solved through the
/// metric: A^k_j = g^{kl} g(d_l, A d_j).
template <class Tangent, class Metric, class Endo>
MatrixField pullback_endomorphism(Chart<Tangent> chart, Metric metric, Endo endo) {
  return [chart = std::move(chart), metric = std::move(metric),
          endo = std::move(endo)](const Vec& x) {
    const std::vector<Tangent> e = chart.frame(x);
    const int n = chart.dim;
    Mat g(n, n), rhs(n, n);
    for (int j = 0; j < n; ++j) {
      const Tangent ae = endo(e[j]);
      for (int l = 0; l < n; ++l) {
        g(l, j) = metric(e[l], e[j]);
        rhs(l, j) = metric(e[l], ae);
      }
    }
    return Mat(g.ldlt().solve(rhs));
  };
}

/// Frame components of a tangent vector v: v^k = g^{kl} g(d_l, v).
template <class Tangent, class Metric>
Vec chart_components(const std::vector<Tangent>& frame, const Metric& metric, const Tangent& v) {
  const int n = static_cast<int>(frame.size());
  Mat g(n, n);
  Vec rhs(n);
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) g(l, j) = metric(frame[l], frame[j]);
    rhs(l) = metric(frame[l], v);
  }
  return g.ldlt().solve(rhs);
}

}  // namespace nkiso::oracle
