#include <cmath>

#include "doctest.h"
#include "nkiso/oracle.hpp"
#include "nkiso/quaternion.hpp"
#include "nkiso/cp3.hpp"
#include "nkiso/flag.hpp"
#include "nkiso/s3s3.hpp"

using namespace nkiso;
using namespace nkiso::oracle;

namespace {

MatrixField constant_metric(const Mat& g) {
  return [g](const Vec&) { return g; };
}

// Round unit S^3 in geodesic normal coordinates x -> exp(x), through the
// left-trivialized frame of the quaternion exponential (block formula).
MatrixField round_s3_normal() {
  return [](const Vec& x) {
    const double t = x.norm();
    Mat g(3, 3);
    // Metric in normal coordinates of the unit sphere:
    // g = P_radial + (sin t / t)^2 (I - P_radial).
    const Eigen::Vector3d u = t > 0 ? Eigen::Vector3d(x / t) : Eigen::Vector3d::Zero();
    const double s = t > 0 ? std::sin(t) / t : 1.0;
    const Eigen::Matrix3d radial = u * u.transpose();
    g = radial + s * s * (Eigen::Matrix3d::Identity() - radial);
    return g;
  };
}

// Round unit S^3 through x -> n(1 + x), g = ((1+r^2) I - x x^T) / (1+r^2)^2.
MatrixField round_s3_gnomonic() {
  return [](const Vec& x) {
    const double r2 = x.squaredNorm();
    Mat g = ((1.0 + r2) * Mat::Identity(3, 3) - x * x.transpose()) / ((1.0 + r2) * (1.0 + r2));
    return g;
  };
}

double sectional(const Tensor4& lowered, const Mat& g, int a, int b) {
  return lowered(a, b, b, a) / (g(a, a) * g(b, b) - g(a, b) * g(a, b));
}

}  // namespace

TEST_CASE("flat metric has vanishing connection and curvature") {
  Mat g = Mat::Identity(6, 6);
  g(0, 1) = g(1, 0) = 0.3;
  const Vec x = Vec::Zero(6);
  CHECK(christoffel(constant_metric(g), x).max_abs() <= 1e-12);
  CHECK(riemann_numeric(constant_metric(g), x).max_abs() <= 1e-10);
  MatrixField j = [](const Vec&) {
    Mat m = Mat::Zero(2, 2);
    m(1, 0) = 1;
    m(0, 1) = -1;
    return m;
  };
  CHECK(nabla_endomorphism_numeric(constant_metric(Mat::Identity(2, 2)), j, Vec::Zero(2)).max_abs() == 0.0);
}

TEST_CASE("round S3 normal chart: Gamma(0) = 0 and unit sectional curvature") {
  const Vec x = Vec::Zero(3);
  CHECK(christoffel(round_s3_normal(), x).max_abs() <= 1e-8);
  const Vec y = (Vec(3) << 0.1, -0.2, 0.15).finished();
  const Tensor4 r = lower_riemann(riemann_numeric(round_s3_gnomonic(), y), round_s3_gnomonic()(y));
  const Mat g = round_s3_gnomonic()(y);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) CHECK(std::abs(sectional(r, g, a, b) - 1.0) <= 1e-4);
}

TEST_CASE("finite differences converge at second order, Richardson at fourth") {
  // Diagonal metric with closed-form Christoffel symbols:
  // g = diag(e^{2 x1}, 1 + x0^2, 1), Gamma^0_{00} = 0, Gamma^0_{01} = 0, ...
  MatrixField metric = [](const Vec& x) {
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = std::exp(2.0 * x(1));
    g(1, 1) = 1.0 + x(0) * x(0);
    g(2, 2) = 1.0;
    return g;
  };
  const Vec x = (Vec(3) << 0.4, 0.3, 0.0).finished();
  Tensor3 exact(3);
  // Gamma^0_{01} = d_1 g_00 / (2 g_00) = 1
  exact(0, 0, 1) = exact(0, 1, 0) = 1.0;
  // Gamma^1_{00} = -d_1 g_00 / (2 g_11)
  exact(1, 0, 0) = -std::exp(2.0 * x(1)) / (1.0 + x(0) * x(0));
  // Gamma^1_{01} = d_0 g_11 / (2 g_11); Gamma^0_{11} = -d_0 g_11 / (2 g_00)
  exact(1, 0, 1) = exact(1, 1, 0) = x(0) / (1.0 + x(0) * x(0));
  exact(0, 1, 1) = -x(0) / std::exp(2.0 * x(1));

  auto error = [&](Step step) {
    const Tensor3 got = christoffel(metric, x, step);
    double e = 0.0;
    for (size_t n = 0; n < got.data().size(); ++n) e = std::max(e, std::abs(got.data()[n] - exact.data()[n]));
    return e;
  };
  const double e1 = error({1e-2, false});
  const double e2 = error({5e-3, false});
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  const double r1 = error({1e-2, true});
  const double r2 = error({5e-3, true});
  CHECK(r1 < e1 * 1e-2);
  CHECK(r1 / r2 > 10.0);
}

TEST_CASE("numeric Riemann tensor symmetries and metric compatibility") {
  CounterRng rng(3);
  const s3s3::Point center = s3s3::random_point(rng);
  const auto chart = s3s3::chart_at(center);
  const MatrixField metric = pullback_metric(chart, s3s3::metric_g);
  const Vec x = Vec::Zero(6);
  const Tensor4 r = lower_riemann(riemann_numeric(metric, x), metric(x));
  double anti1 = 0.0, anti2 = 0.0, bianchi = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) {
          anti1 = std::max(anti1, std::abs(r(i, j, k, l) + r(j, i, k, l)));
          anti2 = std::max(anti2, std::abs(r(i, j, k, l) + r(i, j, l, k)));
          bianchi = std::max(bianchi, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
        }
  CHECK(anti1 <= 1e-5);
  CHECK(anti2 <= 1e-5);
  CHECK(bianchi <= 1e-5);
  CHECK(nabla_metric_numeric(metric, x).max_abs() <= 1e-8);
}

TEST_CASE("S3xS3 closed-form curvature matches the oracle") {
  CounterRng rng(41);
  double worst = 0.0;
  for (int n = 0; n < 5; ++n) {
    const s3s3::Point center = s3s3::random_point(rng);
    const auto chart = s3s3::chart_at(center);
    const MatrixField metric = pullback_metric(chart, s3s3::metric_g);
    const Vec x = Vec::Zero(6);
    const Tensor4 numeric = lower_riemann(riemann_numeric(metric, x), metric(x));
    const auto e = chart.frame(x);
    double dev = 0.0, mag = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
          for (int l = 0; l < 6; ++l) {
            const double closed = s3s3::metric_g(s3s3::curvature_R(e[i], e[j], e[k]), e[l]);
            dev = std::max(dev, std::abs(closed - numeric(i, j, k, l)));
            mag = std::max(mag, std::abs(closed));
          }
    worst = std::max(worst, dev / mag);
  }
  MESSAGE("S3xS3 relative curvature deviation " << worst);
  CHECK(worst <= 1e-4);
}

TEST_CASE("S3xS3 nearly Kaehler defect") {
  CounterRng rng(43);
  const s3s3::Point center = s3s3::random_point(rng);
  const auto chart = s3s3::chart_at(center);
  const MatrixField metric = pullback_metric(chart, s3s3::metric_g);
  const MatrixField j = pullback_endomorphism(chart, s3s3::metric_g, s3s3::acs_J);
  const Tensor3 nj = nabla_endomorphism_numeric(metric, j, Vec::Zero(6));
  MESSAGE("|nabla J| " << nj.max_abs() << " sym defect " << symmetrized_defect(nj));
  CHECK(symmetrized_defect(nj) <= 1e-5);
  CHECK(nj.max_abs() > 0.1);
}

TEST_CASE("CP3 nearly Kaehler and Fubini-Study Kaehler defects") {
  CounterRng rng(47);
  for (int n = 0; n < 2; ++n) {
    const cp3::Point center = cp3::random_point(rng);
    const auto chart = cp3::chart_at(center);
    const Vec x = Vec::Zero(6);

    const MatrixField g_nk = pullback_metric(chart, cp3::metric_g_nk);
    const MatrixField j_nk = pullback_endomorphism(
        chart, cp3::metric_g_nk, [](const cp3::Tangent& t) { return cp3::structures(t, cp3::Structure::Jnk); });
    const Tensor3 nj = nabla_endomorphism_numeric(g_nk, j_nk, x);
    MESSAGE("CP3 |nabla J| " << nj.max_abs() << " sym defect " << symmetrized_defect(nj));
    CHECK(symmetrized_defect(nj) <= 1e-5);
    CHECK(nj.max_abs() > 0.1);

    const MatrixField g_fs = pullback_metric(chart, cp3::metric_fs);
    const MatrixField j_fs = pullback_endomorphism(
        chart, cp3::metric_fs, [](const cp3::Tangent& t) { return cp3::structures(t, cp3::Structure::Jcirc); });
    const Tensor3 nfs = nabla_endomorphism_numeric(g_fs, j_fs, x);
    MESSAGE("CP3 Kaehler |nabla Jcirc| " << nfs.max_abs());
    CHECK(nfs.max_abs() <= 1e-5);
  }
}

TEST_CASE("flag closed-form curvature matches the oracle") {
  CounterRng rng(53);
  double worst = 0.0;
  for (int n = 0; n < 3; ++n) {
    const flag::Point center = flag::random_point(rng);
    const auto chart = flag::chart_at(center);
    const MatrixField metric = pullback_metric(chart, flag::metric_flag);
    const Vec x = Vec::Zero(6);
    const Tensor4 numeric = lower_riemann(riemann_numeric(metric, x), metric(x));
    const auto e = chart.frame(x);
    double dev = 0.0, mag = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
          for (int l = 0; l < 6; ++l) {
            const double closed = flag::metric_flag(flag::curvature_flag(e[i], e[j], e[k]), e[l]);
            dev = std::max(dev, std::abs(closed - numeric(i, j, k, l)));
            mag = std::max(mag, std::abs(closed));
          }
    worst = std::max(worst, dev / mag);
  }
  MESSAGE("flag relative curvature deviation " << worst);
  CHECK(worst <= 1e-4);
}

TEST_CASE("flag nearly Kaehler and Kaehler defects") {
  CounterRng rng(59);
  const flag::Point center = flag::random_point(rng);
  const auto chart = flag::chart_at(center);
  const Vec x = Vec::Zero(6);
  const MatrixField g = pullback_metric(chart, flag::metric_flag);
  const MatrixField j = pullback_endomorphism(
      chart, flag::metric_flag, [](const flag::Tangent& t) { return flag::acs_flag(t, flag::Acs::J); });
  const Tensor3 nj = nabla_endomorphism_numeric(g, j, x);
  MESSAGE("flag |nabla J| " << nj.max_abs() << " sym defect " << symmetrized_defect(nj));
  CHECK(symmetrized_defect(nj) <= 1e-5);
  CHECK(nj.max_abs() > 0.1);

  for (int block = 1; block <= 3; ++block) {
    const auto gi = [block](const flag::Tangent& a, const flag::Tangent& b) {
      return flag::metric_flag_i(a, b, block);
    };
    const flag::Acs which = flag::acs_for_block(block);
    const MatrixField metric_i = pullback_metric(chart, gi);
    const MatrixField j_i = pullback_endomorphism(
        chart, gi, [which](const flag::Tangent& t) { return flag::acs_flag(t, which); });
    const double defect = nabla_endomorphism_numeric(metric_i, j_i, x).max_abs();
    MESSAGE("flag Kaehler defect block " << block << ": " << defect);
    CHECK(defect <= 1e-5);
  }
}

TEST_CASE("flag nabla J is a cross product on the distributions") {
  CounterRng rng(61);
  const flag::Point p = flag::random_point(rng);
  const auto tangent = [&](int i) { return flag::Tangent{p, Vec6::Unit(i)}; };
  CHECK(flag::nablaJ_flag(tangent(0), tangent(0)).coeffs.cwiseAbs().maxCoeff() <= 1e-5);
  CHECK(flag::nablaJ_flag(tangent(0), tangent(1)).coeffs.cwiseAbs().maxCoeff() <= 1e-5);
  const Vec6 n13 = flag::nablaJ_flag(tangent(0), tangent(2)).coeffs;
  CHECK((n13 - flag::block_part(n13, 3)).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK(n13.norm() > 0.1);
  const flag::Tangent x = flag::random_tangent(p, rng);
  CHECK(flag::nablaJ_flag(x, x).coeffs.cwiseAbs().maxCoeff() <= 1e-5);
}
