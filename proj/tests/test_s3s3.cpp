#include <cmath>

#include "doctest.h"
#include "nkiso/error.hpp"
#include "nkiso/s3s3.hpp"

using namespace nkiso;
using namespace nkiso::s3s3;

namespace {

const ImQuaternion kI{1, 0, 0}, kJ{0, 1, 0}, kK{0, 0, 1}, kZero{};
const Point kOrigin{};
const double kSqrt3 = std::sqrt(3.0);

double tangent_diff(const Tangent& a, const Tangent& b) {
  return (coords(a) - coords(b)).cwiseAbs().maxCoeff();
}

const Rotation kRotations[3] = {Rotation::Zero, Rotation::TwoThirds, Rotation::FourThirds};

}  // namespace

TEST_CASE("metric_g examples") {
  const Tangent x{kOrigin, kI, kZero};
  CHECK(metric_g(x, x) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(metric_g(x, {kOrigin, kZero, kI}) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(metric_g(x, {kOrigin, kZero, kJ}) == 0.0);
  const Point other{Quaternion::i(), Quaternion::one()};
  CHECK_THROWS_AS(metric_g(x, {other, kI, kZero}), Error);
}

TEST_CASE("acs_J examples") {
  const Tangent x{kOrigin, kI, kZero};
  const Tangent jx = acs_J(x);
  CHECK(tangent_diff(jx, {kOrigin, (-1.0 / kSqrt3) * kI, (-2.0 / kSqrt3) * kI}) < 1e-15);
  const Tangent y{kOrigin, kJ, kK};
  CHECK(tangent_diff(acs_J(acs_J(y)), {kOrigin, -kJ, -kK}) < 1e-15);
  CHECK(std::abs(metric_g(x, jx)) < 1e-15);
}

TEST_CASE("aps_P examples") {
  const Tangent x{kOrigin, kI, kZero};
  CHECK(tangent_diff(aps_P(x), {kOrigin, kZero, kI}) == 0.0);
  const Tangent y{kOrigin, kJ, 2.0 * kK};
  CHECK(tangent_diff(aps_P(aps_P(y)), y) == 0.0);
  // -1/2 (0, i) + sqrt(3)/2 * J(0, i) = -1/2 (0, i) + 1/2 (2i, i) = (i, 0).
  CHECK(tangent_diff(aps_P(x, Rotation::TwoThirds), x) < 1e-15);
}

TEST_CASE("curvature_R examples") {
  CounterRng rng(3);
  const Tangent u = random_tangent(kOrigin, rng);
  CHECK(coords(curvature_R(u, u, u)).cwiseAbs().maxCoeff() < 1e-15);

  const Tangent ui{kOrigin, kI, kZero}, vj{kOrigin, kJ, kZero};
  const Tangent r = curvature_R(ui, vj, vj);
  CHECK(tangent_diff(r, ui) < 1e-12);
  const double sec = metric_g(r, ui) / (metric_g(ui, ui) * metric_g(vj, vj) - std::pow(metric_g(ui, vj), 2));
  CHECK(sec == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("curvature symmetries on random samples") {
  CounterRng rng(11);
  double anti = 0.0, bianchi = 0.0, pair = 0.0;
  for (int n = 0; n < 200; ++n) {
    const Point b = random_point(rng);
    const Tangent x = random_tangent(b, rng), y = random_tangent(b, rng), z = random_tangent(b, rng),
                  w = random_tangent(b, rng);
    anti = std::max(anti, (coords(curvature_R(x, y, z)) + coords(curvature_R(y, x, z))).cwiseAbs().maxCoeff());
    bianchi = std::max(bianchi, (coords(curvature_R(x, y, z)) + coords(curvature_R(y, z, x)) +
                                 coords(curvature_R(z, x, y))).cwiseAbs().maxCoeff());
    pair = std::max(pair, std::abs(metric_g(curvature_R(x, y, z), w) - metric_g(curvature_R(z, w, x), y)));
  }
  CHECK(anti < 1e-13);
  CHECK(bianchi < 1e-13);
  CHECK(pair < 1e-12);
}

TEST_CASE("iso_apply examples") {
  CounterRng rng(5);
  const Point pt = random_point(rng);
  CHECK(point_distance(iso_apply(Isometry::identity(), pt), pt) == 0.0);

  Isometry f;
  f.a = Quaternion::i();
  f.b = Quaternion::j();
  f.c = Quaternion::k();
  const Point img = iso_apply(f, kOrigin);
  CHECK(point_distance(img, {Quaternion::j(), -Quaternion::i()}) < 1e-15);

  // (p q^-1, q^-1) is the transposition of the last two slots; it reverses J
  // and transports P to the 4pi/3 structure.
  const Point swapped = iso_apply(Isometry::psi(1, Rotation::FourThirds), pt);
  CHECK(point_distance(swapped, {pt.p * conj(pt.q), conj(pt.q)}) < 1e-15);
  const Point cyc = iso_apply(Isometry::psi(0, Rotation::TwoThirds), pt);
  CHECK(point_distance(cyc, {pt.q * conj(pt.p), conj(pt.p)}) < 1e-15);
  CHECK(point_distance(iso_apply(Isometry::psi(1, Rotation::Zero), pt), {pt.q, pt.p}) == 0.0);
}

TEST_CASE("Psi relations hold exactly for all six maps") {
  const Mat6& j = j_matrix();
  const Mat6 p = p_matrix();
  CounterRng rng(17);
  for (int kappa = 0; kappa < 2; ++kappa) {
    for (Rotation tau : kRotations) {
      const Isometry psi = Isometry::psi(kappa, tau);
      for (int n = 0; n < 20; ++n) {
        const Point pt = random_point(rng);
        const Mat6 d = differential_matrix(psi, pt);
        const double sign = kappa == 0 ? 1.0 : -1.0;
        CHECK((j * d - sign * d * j).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((p * d - d * p_matrix(tau)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("iso_differential examples and finite differences") {
  CounterRng rng(23);
  const Tangent x = random_tangent(random_point(rng), rng);
  CHECK(tangent_diff(iso_differential(Isometry::identity(), x), x) < 1e-15);

  const Isometry f = Isometry::translation(Quaternion::one(), Quaternion::one(), Quaternion::k());
  CHECK(tangent_diff(iso_differential(f, {kOrigin, kI, kZero}), {kOrigin, -kI, kZero}) < 1e-15);

  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const Isometry g = random_isometry(rng);
    const Point pt = random_point(rng);
    const Tangent v = random_tangent(pt, rng);
    const double h = 1e-5;
    auto curve = [&](double t) {
      const Quaternion pa = pt.p * normalized(Quaternion{1.0, t * v.alpha.x, t * v.alpha.y, t * v.alpha.z});
      const Quaternion qb = pt.q * normalized(Quaternion{1.0, t * v.beta.x, t * v.beta.y, t * v.beta.z});
      return iso_apply(g, {pa, qb});
    };
    const Point plus = curve(h), minus = curve(-h), mid = iso_apply(g, pt);
    const ImQuaternion a = (conj(mid.p) * ((1.0 / (2 * h)) * (plus.p - minus.p))).imag();
    const ImQuaternion b = (conj(mid.q) * ((1.0 / (2 * h)) * (plus.q - minus.q))).imag();
    worst = std::max(worst, tangent_diff({mid, a, b}, iso_differential(g, v)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("iso_compose examples and action compatibility") {
  CounterRng rng(29);
  const Isometry f = random_isometry(rng);
  CHECK(distance(iso_compose(f, Isometry::identity()), f) < 1e-15);
  CHECK(distance(iso_compose(Isometry::identity(), f), f) < 1e-15);
  CHECK(distance(iso_compose(Isometry::psi(1, Rotation::Zero), Isometry::psi(1, Rotation::Zero)),
                 Isometry::identity()) == 0.0);

  double worst = 0.0, inv = 0.0;
  for (int n = 0; n < 500; ++n) {
    const Isometry f1 = random_isometry(rng), f2 = random_isometry(rng);
    const Point pt = random_point(rng);
    worst = std::max(worst, point_distance(iso_apply(iso_compose(f1, f2), pt),
                                           iso_apply(f1, iso_apply(f2, pt))));
    inv = std::max(inv, distance(iso_compose(f1, iso_inverse(f1)), Isometry::identity()));
    inv = std::max(inv, distance(iso_compose(iso_inverse(f1), f1), Isometry::identity()));
  }
  CHECK(worst < 1e-12);
  CHECK(inv < 1e-12);
}

TEST_CASE("decompose_isometry round trips") {
  CHECK(distance(decompose_isometry(make_oracle(Isometry::identity())), Isometry::identity()) < 1e-12);

  Isometry f = Isometry::translation(Quaternion::i(), Quaternion::j(), Quaternion::k());
  f.kappa = 1;
  f.tau = Rotation::TwoThirds;
  CHECK(distance(decompose_isometry(make_oracle(f)), f) < 1e-12);

  CounterRng rng(31);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const Isometry g = random_isometry(rng);
    const Isometry got = decompose_isometry(make_oracle(g));
    CHECK(got.kappa == g.kappa);
    CHECK(got.tau == g.tau);
    worst = std::max(worst, distance(got, g));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("decompose_isometry rejects non-isometries") {
  IsometryOracle scale{[](const Point& p) { return p; },
                       [](const Tangent& x) { return Tangent{x.base, 2.0 * x.alpha, 2.0 * x.beta}; }};
  try {
    decompose_isometry(scale);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAnIsometry);
  }
  // An isometry of the product metric that is not one of g: rotate only alpha.
  IsometryOracle twist{[](const Point& p) { return p; },
                       [](const Tangent& x) {
                         return Tangent{x.base, rotate(Quaternion::k(), x.alpha), x.beta};
                       }};
  CHECK_THROWS_AS(decompose_isometry(twist), Error);
}
