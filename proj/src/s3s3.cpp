#include "nkiso/s3s3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nkiso/error.hpp"

namespace nkiso::s3s3 {

namespace {

const double kSqrt3 = std::sqrt(3.0);

Mat6 block(double tl, double tr, double bl, double br) {
  Mat6 m = Mat6::Zero();
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  m.block<3, 3>(0, 0) = tl * id;
  m.block<3, 3>(0, 3) = tr * id;
  m.block<3, 3>(3, 0) = bl * id;
  m.block<3, 3>(3, 3) = br * id;
  return m;
}

double g6(const Vec6& x, const Vec6& y) { return x.dot(metric_matrix() * y); }

void require_same_base(const Point& a, const Point& b) {
  if (point_distance(a, b) > 1e-12) {
    throw Error(ErrorKind::BaseMismatch, "tangent vectors live at different base points");
  }
}

std::array<Quaternion, 3> permute(const std::array<Quaternion, 3>& t, const Slots& s) {
  return {t[s[0]], t[s[1]], t[s[2]]};
}

std::array<Quaternion, 3> slots_of(const Isometry& f) { return {f.a, f.b, f.c}; }

Slots inverse_slots(const Slots& s) {
  Slots inv{};
  for (int i = 0; i < 3; ++i) inv[s[i]] = i;
  return inv;
}

}  // namespace

Point make_point(Quaternion p, Quaternion q) {
  if (std::abs(norm(p) - 1.0) > 1e-12 || std::abs(norm(q) - 1.0) > 1e-12) {
    throw Error(ErrorKind::NonUnit, "S3xS3 point components must be unit quaternions");
  }
  return {p, q};
}

double point_distance(const Point& a, const Point& b) {
  return std::max(max_abs_diff(a.p, b.p), max_abs_diff(a.q, b.q));
}

Vec6 coords(const Tangent& v) {
  Vec6 c;
  c << v.alpha.x, v.alpha.y, v.alpha.z, v.beta.x, v.beta.y, v.beta.z;
  return c;
}

Tangent from_coords(const Point& base, const Vec6& c) {
  return {base, {c(0), c(1), c(2)}, {c(3), c(4), c(5)}};
}

double angle(Rotation tau) {
  return 2.0 * std::numbers::pi / 3.0 * static_cast<int>(tau);
}

Rotation rotation_from_tag(int tag) {
  if (tag < 0 || tag > 2) throw Error(ErrorKind::InvalidArgument, "rotation tag must be 0, 1 or 2");
  return static_cast<Rotation>(tag);
}

const Mat6& metric_matrix() {
  static const Mat6 g = block(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0);
  return g;
}

const Mat6& j_matrix() {
  static const Mat6 j = block(-1.0 / kSqrt3, 2.0 / kSqrt3, -2.0 / kSqrt3, 1.0 / kSqrt3);
  return j;
}

Mat6 p_matrix(Rotation tau) {
  const Mat6 p = block(0.0, 1.0, 1.0, 0.0);
  const double t = angle(tau);
  if (tau == Rotation::Zero) return p;
  return std::cos(t) * p + std::sin(t) * j_matrix() * p;
}

double metric_g(const Tangent& x, const Tangent& y) {
  require_same_base(x.base, y.base);
  return 4.0 / 3.0 * (im_inner(x.alpha, y.alpha) + im_inner(x.beta, y.beta)) -
         2.0 / 3.0 * (im_inner(x.beta, y.alpha) + im_inner(x.alpha, y.beta));
}

Tangent acs_J(const Tangent& x) {
  const double s = 1.0 / kSqrt3;
  return {x.base, s * (2.0 * x.beta - x.alpha), s * (x.beta - 2.0 * x.alpha)};
}

Tangent aps_P(const Tangent& x, Rotation tau) {
  const Tangent px{x.base, x.beta, x.alpha};
  if (tau == Rotation::Zero) return px;
  const Tangent jpx = acs_J(px);
  const double c = std::cos(angle(tau)), s = std::sin(angle(tau));
  return {x.base, c * px.alpha + s * jpx.alpha, c * px.beta + s * jpx.beta};
}

Vec6 curvature_with_product(const Vec6& u, const Vec6& v, const Vec6& w, const Mat6& product) {
  const Mat6& j = j_matrix();
  const Mat6 jp = j * product;
  const Vec6 ju = j * u, jv = j * v, jw = j * w;
  const Vec6 pu = product * u, pv = product * v;
  const Vec6 jpu = jp * u, jpv = jp * v;
  return 5.0 / 12.0 * (g6(v, w) * u - g6(u, w) * v) +
         1.0 / 12.0 * (g6(jv, w) * ju - g6(ju, w) * jv - 2.0 * g6(ju, v) * jw) +
         1.0 / 3.0 * (g6(pv, w) * pu - g6(pu, w) * pv + g6(jpv, w) * jpu - g6(jpu, w) * jpv);
}

Tangent curvature_R(const Tangent& u, const Tangent& v, const Tangent& w) {
  require_same_base(u.base, v.base);
  require_same_base(u.base, w.base);
  return from_coords(u.base, curvature_with_product(coords(u), coords(v), coords(w), p_matrix()));
}

Isometry Isometry::translation(Quaternion a, Quaternion b, Quaternion c) {
  Isometry f;
  f.a = normalized(a);
  f.b = normalized(b);
  f.c = normalized(c);
  return f.canonical();
}

Isometry Isometry::psi(int kappa, Rotation tau) {
  if (kappa != 0 && kappa != 1) throw Error(ErrorKind::InvalidArgument, "kappa must be 0 or 1");
  Isometry f;
  f.kappa = kappa;
  f.tau = tau;
  return f;
}

Isometry Isometry::canonical() const {
  Isometry f = *this;
  for (const Quaternion& q : {a, b, c}) {
    for (double v : q.coeffs()) {
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) {
          f.a = -a;
          f.b = -b;
          f.c = -c;
        }
        return f;
      }
    }
  }
  return f;
}

Slots psi_slots(int kappa, Rotation tau) {
  static const Slots table[2][3] = {
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}},
      {{1, 0, 2}, {2, 1, 0}, {0, 2, 1}},
  };
  if (kappa != 0 && kappa != 1) throw Error(ErrorKind::InvalidArgument, "kappa must be 0 or 1");
  return table[kappa][static_cast<int>(tau)];
}

std::pair<int, Rotation> psi_label(const Slots& slots) {
  for (int kappa = 0; kappa < 2; ++kappa)
    for (int t = 0; t < 3; ++t)
      if (psi_slots(kappa, static_cast<Rotation>(t)) == slots) return {kappa, static_cast<Rotation>(t)};
  throw Error(ErrorKind::InvalidArgument, "not a permutation of three slots");
}

Point iso_apply(const Isometry& f, const Point& pt) {
  const auto y = permute({f.a * pt.p, f.b * pt.q, f.c}, psi_slots(f.kappa, f.tau));
  const Quaternion y3inv = conj(y[2]);
  return {y[0] * y3inv, y[1] * y3inv};
}

Tangent iso_differential(const Isometry& f, const Tangent& x) {
  const Slots s = psi_slots(f.kappa, f.tau);
  const auto y = permute({f.a * x.base.p, f.b * x.base.q, f.c}, s);
  const std::array<ImQuaternion, 3> w{x.alpha, x.beta, ImQuaternion{}};
  const ImQuaternion w0 = w[s[0]], w1 = w[s[1]], w2 = w[s[2]];
  const Quaternion y3inv = conj(y[2]);
  return {{y[0] * y3inv, y[1] * y3inv}, rotate(y[2], w0 - w2), rotate(y[2], w1 - w2)};
}

Mat6 differential_matrix(const Isometry& f, const Point& pt) {
  Mat6 m;
  for (int j = 0; j < 6; ++j) {
    m.col(j) = coords(iso_differential(f, from_coords(pt, Vec6::Unit(j))));
  }
  return m;
}

Isometry iso_compose(const Isometry& f1, const Isometry& f2) {
  const Slots s1 = psi_slots(f1.kappa, f1.tau);
  const Slots s2 = psi_slots(f2.kappa, f2.tau);
  const Slots s2inv = inverse_slots(s2);
  const auto u1 = slots_of(f1);
  const auto u2 = slots_of(f2);
  std::array<Quaternion, 3> u;
  for (int t = 0; t < 3; ++t) u[t] = u1[s2inv[t]] * u2[t];
  const Slots s{s2[s1[0]], s2[s1[1]], s2[s1[2]]};
  const auto [kappa, tau] = psi_label(s);
  Isometry out;
  out.a = normalized(u[0]);
  out.b = normalized(u[1]);
  out.c = normalized(u[2]);
  out.kappa = kappa;
  out.tau = tau;
  return out.canonical();
}

Isometry iso_inverse(const Isometry& f) {
  const Slots s = psi_slots(f.kappa, f.tau);
  const auto u = slots_of(f);
  const auto [kappa, tau] = psi_label(inverse_slots(s));
  Isometry out;
  out.a = conj(u[s[0]]);
  out.b = conj(u[s[1]]);
  out.c = conj(u[s[2]]);
  out.kappa = kappa;
  out.tau = tau;
  return out.canonical();
}

double distance(const Isometry& f1, const Isometry& f2) {
  if (f1.kappa != f2.kappa || f1.tau != f2.tau) return std::numeric_limits<double>::infinity();
  const double plus = std::max({max_abs_diff(f1.a, f2.a), max_abs_diff(f1.b, f2.b),
                                max_abs_diff(f1.c, f2.c)});
  const double minus = std::max({max_abs_diff(f1.a, -f2.a), max_abs_diff(f1.b, -f2.b),
                                 max_abs_diff(f1.c, -f2.c)});
  return std::min(plus, minus);
}

IsometryOracle make_oracle(const Isometry& f) {
  return {[f](const Point& p) { return iso_apply(f, p); },
          [f](const Tangent& x) { return iso_differential(f, x); }};
}

IsometryOracle compose(const IsometryOracle& outer, const IsometryOracle& inner) {
  return {[outer, inner](const Point& p) { return outer.apply(inner.apply(p)); },
          [outer, inner](const Tangent& x) { return outer.differential(inner.differential(x)); }};
}

namespace {

Mat6 oracle_matrix(const IsometryOracle& f, const Point& pt, double tol) {
  Mat6 m;
  for (int j = 0; j < 6; ++j) m.col(j) = coords(f.differential(from_coords(pt, Vec6::Unit(j))));
  // Linearity probe on a fixed combination of the basis.
  Vec6 probe;
  probe << 0.3, -1.1, 0.7, 0.25, 0.9, -0.4;
  const Vec6 image = coords(f.differential(from_coords(pt, probe)));
  if ((image - m * probe).cwiseAbs().maxCoeff() > tol * std::max(1.0, image.norm())) {
    throw Error(ErrorKind::NotAnIsometry, "decompose: differential is not linear");
  }
  return m;
}

}  // namespace

Isometry decompose_isometry(const IsometryOracle& f, double tol) {
  const Point origin{};
  const Mat6 m = oracle_matrix(f, origin, tol);
  const Mat6& g = metric_matrix();
  const Mat6& j = j_matrix();

  if ((m.transpose() * g * m - g).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::NotAnIsometry, "decompose: differential does not preserve the metric");
  }

  // (1) J-sign.
  const double commute = (m * j - j * m).cwiseAbs().maxCoeff();
  const double anti = (m * j + j * m).cwiseAbs().maxCoeff();
  int kappa;
  if (commute <= tol) {
    kappa = 0;
  } else if (anti <= tol) {
    kappa = 1;
  } else {
    throw Error(ErrorKind::JIncompatible, "decompose: differential neither preserves nor reverses J");
  }

  // (2) Transported product structure Q = F_* P F_*^{-1} = cos(t) P + sin(t) J P.
  const Mat6 p = p_matrix();
  const Mat6 jp = j * p;
  const Mat6 q = m * p * m.inverse();
  double cos_acc = 0.0, sin_acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    const Vec6 e = Vec6::Unit(i);
    const Vec6 qe = q * e, pe = p * e, jpe = jp * e;
    cos_acc += g6(qe, pe) / g6(pe, pe);
    sin_acc += g6(qe, jpe) / g6(jpe, jpe);
  }
  const double t = std::atan2(sin_acc / 6.0, cos_acc / 6.0);
  const int tag = static_cast<int>(std::lround(t / (2.0 * std::numbers::pi / 3.0)) + 3) % 3;
  const Rotation tau = static_cast<Rotation>(tag);
  if ((q - p_matrix(tau)).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::PProjectionResidual,
                "decompose: transported P is not one of the compatible product structures");
  }

  // (3) F o Psi preserves J and P.
  const Isometry psi = Isometry::psi(kappa, tau);
  const IsometryOracle f1 = compose(f, make_oracle(psi));

  // (4) Move F(1,1) back to (1,1).
  const Point base = f1.apply(origin);
  const IsometryOracle f2 =
      compose(make_oracle(Isometry::translation(conj(base.p), conj(base.q), Quaternion::one())), f1);

  // (5) The differential at (1,1) is now (alpha, beta) -> (c alpha c^-1, c beta c^-1).
  const Mat6 m2 = oracle_matrix(f2, origin, tol);
  const Eigen::Matrix3d r = m2.block<3, 3>(0, 0);
  Mat6 expected = Mat6::Zero();
  expected.block<3, 3>(0, 0) = r;
  expected.block<3, 3>(3, 3) = r;
  if ((m2 - expected).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::NotAnIsometry,
                "decompose: residual map does not act diagonally at the base point");
  }
  std::array<ImQuaternion, 3> alphas{ImQuaternion{1, 0, 0}, ImQuaternion{0, 1, 0},
                                     ImQuaternion{0, 0, 1}};
  std::array<ImQuaternion, 3> betas;
  for (int i = 0; i < 3; ++i) betas[i] = {r(0, i), r(1, i), r(2, i)};
  const Quaternion c = su2_lift_from_frames(alphas, betas, std::max(tol, 1e-10));

  // (6) F = phi_(p0 c, q0 c, c) o Psi^-1.
  const Isometry result =
      iso_compose(Isometry::translation(base.p * c, base.q * c, c), iso_inverse(psi));

  for (const Point& probe : {origin, Point{normalized({0.5, -0.2, 0.7, 0.1}),
                                           normalized({-0.3, 0.8, 0.2, 0.4})}}) {
    if (point_distance(iso_apply(result, probe), f.apply(probe)) > tol) {
      throw Error(ErrorKind::NotAnIsometry, "decompose: recovered element does not reproduce the map");
    }
  }
  return result;
}

oracle::Chart<Tangent> chart_at(const Point& center) {
  oracle::Chart<Tangent> chart;
  chart.dim = 6;
  chart.frame = [center](const oracle::Vec& x) {
    const Quaternion ua{1.0, x(0), x(1), x(2)};
    const Quaternion ub{1.0, x(3), x(4), x(5)};
    const double la = norm(ua), lb = norm(ub);
    const Quaternion na = (1.0 / la) * ua, nb = (1.0 / lb) * ub;
    const Point base{center.p * na, center.q * nb};
    std::vector<Tangent> frame;
    frame.reserve(6);
    const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
    // d/dx n(u) = (e - n <n, e>) / |u|; left-trivialized by conj(n).
    for (int i = 0; i < 3; ++i) {
      const Quaternion dn = (1.0 / la) * (units[i] - dot(na, units[i]) * na);
      frame.push_back({base, (conj(na) * dn).imag(), {}});
    }
    for (int i = 0; i < 3; ++i) {
      const Quaternion dn = (1.0 / lb) * (units[i] - dot(nb, units[i]) * nb);
      frame.push_back({base, {}, (conj(nb) * dn).imag()});
    }
    return frame;
  };
  return chart;
}

Point random_point(CounterRng& rng) {
  const Quaternion p = random_unit_quaternion(rng);
  return {p, random_unit_quaternion(rng)};
}

Tangent random_tangent(const Point& base, CounterRng& rng) {
  const ImQuaternion a = random_im_quaternion(rng);
  return {base, a, random_im_quaternion(rng)};
}

Isometry random_isometry(CounterRng& rng) {
  const Quaternion a = random_unit_quaternion(rng);
  const Quaternion b = random_unit_quaternion(rng);
  const Quaternion c = random_unit_quaternion(rng);
  Isometry f = Isometry::translation(a, b, c);
  f.kappa = static_cast<int>(rng.next_u64() % 2);
  f.tau = static_cast<Rotation>(rng.next_u64() % 3);
  return f;
}

}  // namespace nkiso::s3s3
