#include <cmath>

#include "doctest.h"
#include "nkiso/cp3.hpp"
#include "nkiso/error.hpp"

using namespace nkiso;
using namespace nkiso::cp3;

namespace {

const cplx kI(0.0, 1.0);
const Point kE1{Vec4c::Unit(0)};

double vdiff(const Vec4c& a, const Vec4c& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("quaternionic maps") {
  const auto m = quaternionic_maps(kE1);
  CHECK(vdiff(m.ip, kI * Vec4c::Unit(0)) == 0.0);
  CHECK(vdiff(m.jp, -Vec4c::Unit(1)) == 0.0);
  CHECK(vdiff(m.kp, -kI * Vec4c::Unit(1)) == 0.0);

  CounterRng rng(5);
  for (int n = 0; n < 100; ++n) {
    const Point p = random_point(rng);
    CHECK(vdiff(quat_j(quat_j(p.rep)), -p.rep) <= 1e-15);
    CHECK(vdiff(quat_j(kI * p.rep), -kI * quat_j(p.rep)) <= 1e-15);
  }
}

TEST_CASE("tangent splitting") {
  const Tangent vert = split_tangent(kE1, kI * kE1.rep);
  CHECK(vert.horiz.norm() == 0.0);
  const auto m = quaternionic_maps(kE1);
  const Tangent d2 = split_tangent(kE1, m.jp);
  CHECK(vdiff(d2.d2, m.jp) == 0.0);
  CHECK(d2.d4.norm() == 0.0);
  const Tangent d4 = split_tangent(kE1, Vec4c::Unit(2));
  CHECK(d4.d2.norm() == 0.0);
  CHECK(vdiff(d4.d4, Vec4c::Unit(2)) == 0.0);

  CounterRng rng(6);
  for (int n = 0; n < 100; ++n) {
    const Point p = random_point(rng);
    const Tangent t = random_tangent(p, rng);
    CHECK(std::abs(real_inner(t.horiz, p.rep)) <= 1e-12);
    CHECK(std::abs(real_inner(t.horiz, kI * p.rep)) <= 1e-12);
    const auto q = quaternionic_maps(p);
    CHECK(std::abs(real_inner(t.d4, q.jp)) <= 1e-12);
    CHECK(std::abs(real_inner(t.d4, q.kp)) <= 1e-12);
  }
}

TEST_CASE("nearly Kaehler metric") {
  const auto m = quaternionic_maps(kE1);
  const Tangent x = split_tangent(kE1, m.jp);
  const Tangent y = split_tangent(kE1, Vec4c::Unit(2));
  CHECK(metric_g_nk(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(metric_g_nk(y, y) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(metric_g_nk(x, y) == 0.0);
  CHECK(metric_fs(y, y) == doctest::Approx(1.0).epsilon(1e-15));
  const Tangent other = split_tangent(Point{Vec4c::Unit(1)}, Vec4c::Unit(2));
  CHECK_THROWS_AS(metric_g_nk(x, other), Error);
}

TEST_CASE("structures P, Jcirc, Jnk") {
  const auto m = quaternionic_maps(kE1);
  const Tangent jp = split_tangent(kE1, m.jp);
  CHECK(vdiff(structures(jp, Structure::P).horiz, -m.jp) == 0.0);
  const Tangent e3 = split_tangent(kE1, Vec4c::Unit(2));
  CHECK(vdiff(structures(e3, Structure::Jcirc).horiz, kI * Vec4c::Unit(2)) == 0.0);
  CHECK(vdiff(structures(jp, Structure::Jnk).horiz, -m.kp) <= 1e-16);

  CounterRng rng(7);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const Point p = random_point(rng);
    const Tangent x = random_tangent(p, rng);
    const auto apply = [](const Tangent& t, Structure s) { return structures(t, s); };
    const Tangent pp = apply(apply(x, Structure::P), Structure::P);
    const Tangent jj = apply(apply(x, Structure::Jcirc), Structure::Jcirc);
    const Tangent nn = apply(apply(x, Structure::Jnk), Structure::Jnk);
    const Tangent pj = apply(apply(x, Structure::Jcirc), Structure::P);
    const Tangent jpx = apply(apply(x, Structure::P), Structure::Jcirc);
    const Tangent nk = apply(x, Structure::Jnk);
    worst = std::max({worst, vdiff(pp.horiz, x.horiz), vdiff(jj.horiz, -x.horiz),
                      vdiff(nn.horiz, -x.horiz), vdiff(pj.horiz, nk.horiz),
                      vdiff(jpx.horiz, nk.horiz)});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("isometry action") {
  const Point p = make_point(Vec4c(1, 0, kI, 0));
  const Point image = iso_apply_cp3(Isometry::conjugation(), p);
  CHECK(point_distance(image, make_point(Vec4c(1, 0, -kI, 0))) <= 1e-15);
  CHECK(point_distance(iso_apply_cp3(Isometry::identity(), p), p) <= 1e-15);
  Mat4c a = Mat4c::Zero();
  a.diagonal() << kI, -kI, kI, -kI;
  CHECK(group_membership(a, MatrixGroup::SymplecticUnitary));
  CHECK(point_distance(iso_apply_cp3({a, 0}, kE1), kE1) <= 1e-15);
}

TEST_CASE("isometry group law") {
  CounterRng rng(8);
  const Mat4c a = random_sp2(rng), b = random_sp2(rng);
  CHECK(distance(iso_compose_cp3({a, 0}, {b, 0}), Isometry{a * b, 0}) <= 1e-14);
  CHECK(distance(iso_compose_cp3(Isometry::conjugation(), Isometry::conjugation()),
                 Isometry::identity()) == 0.0);
  const Isometry ac = iso_compose_cp3({a, 0}, Isometry::conjugation());
  CHECK(distance(ac, Isometry{a.conjugate(), 1}) <= 1e-15);

  double compat = 0.0, assoc = 0.0, inv = 0.0;
  for (int n = 0; n < 300; ++n) {
    const Isometry f = random_isometry(rng), g = random_isometry(rng), h = random_isometry(rng);
    const Point p = random_point(rng);
    const Point lhs = iso_apply_cp3(iso_compose_cp3(f, g), p);
    const Point rhs = iso_apply_cp3(f, iso_apply_cp3(g, p));
    compat = std::max(compat, point_distance(lhs, rhs));
    assoc = std::max(assoc, distance(iso_compose_cp3(iso_compose_cp3(f, g), h),
                                     iso_compose_cp3(f, iso_compose_cp3(g, h))));
    inv = std::max(inv, distance(iso_compose_cp3(f, iso_inverse_cp3(f)), Isometry::identity()));
    inv = std::max(inv, distance(iso_compose_cp3(iso_inverse_cp3(f), f), Isometry::identity()));
    CHECK(group_membership(f.a, MatrixGroup::SymplecticUnitary, 1e-12));
  }
  CHECK(compat <= 1e-7);
  CHECK(assoc <= 1e-12);
  CHECK(inv <= 1e-12);
}

TEST_CASE("isometries preserve the metric and the splitting") {
  CounterRng rng(9);
  double metric = 0.0, split = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Isometry f = n % 7 == 0 ? Isometry::conjugation() : random_isometry(rng);
    const Point p = random_point(rng);
    const Tangent x = random_tangent(p, rng), y = random_tangent(p, rng);
    const Tangent fx = iso_differential_cp3(f, x), fy = iso_differential_cp3(f, y);
    metric = std::max(metric, std::abs(metric_g_nk(fx, fy) - metric_g_nk(x, y)));
    const Tangent x2 = iso_differential_cp3(f, split_tangent(p, x.d2));
    const Tangent x4 = iso_differential_cp3(f, split_tangent(p, x.d4));
    split = std::max({split, x2.d4.norm(), x4.d2.norm()});
  }
  CHECK(metric <= 1e-9);
  CHECK(split <= 1e-10);
}

TEST_CASE("descending unitary matrices") {
  CounterRng rng(10);
  const Mat4c a = random_sp2(rng);
  const auto same = descends_to_nk_isometry(a);
  REQUIRE(same);
  CHECK(distance(*same, Isometry{a, 0}) <= 1e-12);

  const auto scalar = descends_to_nk_isometry(kI * Mat4c::Identity());
  REQUIRE(scalar);
  CHECK(distance(*scalar, Isometry::identity()) <= 1e-15);

  Mat4c broken = Mat4c::Identity();
  broken(3, 3) = std::polar(1.0, 0.7);
  CHECK_FALSE(descends_to_nk_isometry(broken));

  const Mat4c phased = std::polar(1.0, 1.234) * a;
  const auto recovered = descends_to_nk_isometry(phased);
  REQUIRE(recovered);
  CHECK(distance(*recovered, Isometry{a, 0}) <= 1e-12);

  CHECK_THROWS_AS(descends_to_nk_isometry(2.0 * Mat4c::Identity()), Error);
}

TEST_CASE("horizontal basis") {
  CounterRng rng(11);
  for (int n = 0; n < 20; ++n) {
    const Point p = random_point(rng);
    const auto e = horizontal_basis(p);
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(real_inner(e[i], p.rep)) <= 1e-14);
      CHECK(std::abs(real_inner(e[i], kI * p.rep)) <= 1e-14);
      for (int j = 0; j < 6; ++j)
        CHECK(std::abs(real_inner(e[i], e[j]) - (i == j ? 1.0 : 0.0)) <= 1e-14);
    }
  }
}
