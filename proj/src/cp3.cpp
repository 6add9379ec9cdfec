#include "nkiso/cp3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nkiso/error.hpp"

namespace nkiso::cp3 {

namespace {

const cplx kI(0.0, 1.0);

Vec4c conj_if(const Vec4c& v, int k) { return k ? Vec4c(v.conjugate()) : v; }
Mat4c conj_if(const Mat4c& m, int k) { return k ? Mat4c(m.conjugate()) : m; }

void require_same_base(const Point& a, const Point& b) {
  if ((a.rep - b.rep).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::BaseMismatch, "CP3 tangents are lifted at different representatives");
  }
}

}  // namespace

Point make_point(const Vec4c& v) {
  const double n = v.norm();
  if (n == 0.0) throw Error(ErrorKind::ZeroVector, "CP3 point from the zero vector");
  return {v / n};
}

double point_distance(const Point& a, const Point& b) {
  return (b.rep - a.rep.dot(b.rep) * a.rep).norm();
}

double real_inner(const Vec4c& a, const Vec4c& b) { return a.dot(b).real(); }

Vec4c quat_j(const Vec4c& v) { return symplectic_form() * v.conjugate(); }
Vec4c quat_k(const Vec4c& v) { return kI * quat_j(v); }

QuaternionicMaps quaternionic_maps(const Point& p) {
  return {kI * p.rep, quat_j(p.rep), quat_k(p.rep)};
}

Tangent split_tangent(const Point& p, const Vec4c& v) {
  const auto [ip, jp, kp] = quaternionic_maps(p);
  Tangent t;
  t.base = p;
  t.horiz = v - real_inner(p.rep, v) * p.rep - real_inner(ip, v) * ip;
  t.d2 = real_inner(jp, t.horiz) * jp + real_inner(kp, t.horiz) * kp;
  t.d4 = t.horiz - t.d2;
  return t;
}

double metric_g_nk(const Tangent& x, const Tangent& y) {
  require_same_base(x.base, y.base);
  return real_inner(x.d2, y.d2) + 2.0 * real_inner(x.d4, y.d4);
}

double metric_fs(const Tangent& x, const Tangent& y) {
  require_same_base(x.base, y.base);
  return real_inner(x.horiz, y.horiz);
}

Tangent structures(const Tangent& x, Structure which) {
  switch (which) {
    case Structure::P:
      return split_tangent(x.base, x.d4 - x.d2);
    case Structure::Jcirc:
      return split_tangent(x.base, kI * x.horiz);
    case Structure::Jnk:
      return split_tangent(x.base, kI * (x.d4 - x.d2));
  }
  return x;
}

Isometry Isometry::canonical() const {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (double v : {a(r, c).real(), a(r, c).imag()}) {
        if (std::abs(v) > 1e-12) return v < 0.0 ? Isometry{-a, k} : *this;
      }
  return *this;
}

Point iso_apply_cp3(const Isometry& f, const Point& p) {
  return {conj_if(Vec4c(f.a * p.rep), f.k)};
}

Tangent iso_differential_cp3(const Isometry& f, const Tangent& x) {
  return split_tangent(iso_apply_cp3(f, x.base), conj_if(Vec4c(f.a * x.horiz), f.k));
}

Isometry iso_compose_cp3(const Isometry& f1, const Isometry& f2) {
  return Isometry{conj_if(f1.a, f2.k) * f2.a, (f1.k + f2.k) % 2}.canonical();
}

Isometry iso_inverse_cp3(const Isometry& f) {
  return Isometry{conj_if(Mat4c(f.a.adjoint()), f.k), f.k}.canonical();
}

double distance(const Isometry& f1, const Isometry& f2) {
  if (f1.k != f2.k) return std::numeric_limits<double>::infinity();
  return std::min(max_abs(f1.a - f2.a), max_abs(f1.a + f2.a));
}

std::optional<Isometry> descends_to_nk_isometry(const Mat4c& a, double tol) {
  if (!group_membership(a, MatrixGroup::Unitary, tol)) {
    throw Error(ErrorKind::NotUnitary, "descends_to_nk_isometry: matrix is not unitary");
  }
  const Mat4c& omega = symplectic_form();
  const Mat4c m = a.transpose() * omega * a;
  // Least-squares scalar c with m ~ c Omega; a symplectic multiple needs |c| = 1.
  const cplx c = (m.array() * omega.array()).sum() / 4.0;
  if (std::abs(std::abs(c) - 1.0) > std::sqrt(tol)) return std::nullopt;
  const cplx lambda = 1.0 / std::sqrt(c);
  const Mat4c candidate = lambda * a;
  if (!group_membership(candidate, MatrixGroup::SymplecticUnitary, tol)) return std::nullopt;
  return Isometry{candidate, 0}.canonical();
}

std::array<Vec4c, 6> horizontal_basis(const Point& p) {
  const auto [ip, jp, kp] = quaternionic_maps(p);
  std::array<Vec4c, 6> basis;
  basis[0] = jp;
  basis[1] = kp;
  // Complex Gram-Schmidt of the standard basis against span_C{p, jp}.
  std::vector<Vec4c> complex_basis{p.rep, jp};
  for (int e = 0; e < 4 && complex_basis.size() < 4; ++e) {
    Vec4c v = Vec4c::Unit(e);
    for (const Vec4c& b : complex_basis) v -= b.dot(v) * b;
    if (v.norm() > 0.3) complex_basis.push_back(v.normalized());
  }
  basis[2] = complex_basis[2];
  basis[3] = kI * complex_basis[2];
  basis[4] = complex_basis[3];
  basis[5] = kI * complex_basis[3];
  return basis;
}

oracle::Chart<Tangent> chart_at(const Point& center) {
  oracle::Chart<Tangent> chart;
  chart.dim = 6;
  const std::array<Vec4c, 6> e = horizontal_basis(center);
  chart.frame = [center, e](const oracle::Vec& x) {
    Vec4c u = center.rep;
    for (int i = 0; i < 6; ++i) u += x(i) * e[i];
    const double len = u.norm();
    const Point base{u / len};
    std::vector<Tangent> frame;
    frame.reserve(6);
    for (int i = 0; i < 6; ++i) {
      const Vec4c dn = (e[i] - real_inner(base.rep, e[i]) * base.rep) / len;
      frame.push_back(split_tangent(base, dn));
    }
    return frame;
  };
  return chart;
}

Point random_point(CounterRng& rng) {
  Vec4c v;
  for (int i = 0; i < 4; ++i) v(i) = cplx(rng.normal(), rng.normal());
  return make_point(v);
}

Tangent random_tangent(const Point& base, CounterRng& rng) {
  Vec4c v;
  for (int i = 0; i < 4; ++i) v(i) = cplx(rng.normal(), rng.normal());
  return split_tangent(base, v);
}

Isometry random_isometry(CounterRng& rng) {
  const Mat4c a = random_sp2(rng);
  const int k = static_cast<int>(rng.next_u64() % 2);
  return Isometry{a, k}.canonical();
}

}  // namespace nkiso::cp3
