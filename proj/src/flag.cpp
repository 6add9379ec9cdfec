#include "nkiso/flag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "nkiso/error.hpp"

namespace nkiso::flag {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

Mat3c conj_if(const Mat3c& m, int k) { return k ? Mat3c(m.conjugate()) : m; }

/// Coefficients of the off-diagonal part, read from the anti-Hermitian average.
Vec6 m_projection(const Mat3c& x) {
  const cplx z1 = 0.5 * (x(1, 0) - std::conj(x(0, 1)));
  const cplx z2 = 0.5 * (x(0, 2) - std::conj(x(2, 0)));
  const cplx z3 = 0.5 * (x(2, 1) - std::conj(x(1, 2)));
  Vec6 c;
  c << z1.real(), z1.imag(), z2.real(), z2.imag(), z3.real(), z3.imag();
  return c;
}

Mat6 j_matrix(Acs which) {
  Mat6 j = Mat6::Zero();
  for (int b = 0; b < 3; ++b) {
    double s = 1.0;
    if (which != Acs::J && static_cast<int>(which) != b + 1) s = -1.0;
    j(2 * b + 1, 2 * b) = s;
    j(2 * b, 2 * b + 1) = -s;
  }
  return j;
}

/// y expressed in the frame of x's representative.
Vec6 aligned(const Tangent& x, const Tangent& y) {
  if (x.base.rep == y.base.rep) return y.coeffs;
  return express_at(y, x.base).coeffs;
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

Point canonical(const Point& p) {
  Mat3c u = p.rep;
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 3; ++r) {
      const double mod = std::abs(u(r, c));
      if (mod > 1e-6) {
        u.col(c) *= std::conj(u(r, c)) / mod;
        break;
      }
    }
  }
  const cplx d = u.determinant();
  u.col(2) *= std::conj(d) / std::abs(d);
  return {u};
}

Point make_point(const Mat3c& u, double tol) {
  if (!group_membership(u, MatrixGroup::SpecialUnitary, tol)) {
    throw Error(ErrorKind::NotUnitary, "flag point representative is not special unitary");
  }
  return canonical(Point{u});
}

double point_distance(const Point& a, const Point& b) {
  Mat3c d = a.rep.adjoint() * b.rep;
  d.diagonal().setZero();
  return d.cwiseAbs().maxCoeff();
}

bool same_point(const Point& a, const Point& b, double tol) { return point_distance(a, b) <= tol; }

Point flag_from_subspaces(const Vec3c& l, const Vec3c& pi_second, double tol) {
  for (const Vec3c* v : {&l, &pi_second}) {
    if (v->norm() == 0.0) throw Error(ErrorKind::ZeroVector, "flag_from_subspaces: zero vector");
    if (std::abs(v->norm() - 1.0) > tol) {
      throw Error(ErrorKind::NonUnit, "flag_from_subspaces: vectors must be unit");
    }
  }
  if (std::abs(l.dot(pi_second)) > tol) {
    throw Error(ErrorKind::NonOrthogonal, "flag_from_subspaces: vectors are not orthogonal");
  }
  Mat3c u;
  u.col(0) = l;
  u.col(1) = pi_second;
  u.col(2) = l.cross(pi_second);  // Eigen conjugates complex cross products
  return canonical(Point{u});
}

Vec3c projection(const Point& p, int which) {
  if (which < 1 || which > 3) throw Error(ErrorKind::InvalidArgument, "projection index must be 1, 2 or 3");
  return p.rep.col(3 - which);
}

double line_distance(const Vec3c& v, const Vec3c& w) { return (w - v.dot(w) * v).norm(); }

const std::array<Mat3c, 6>& m_basis() {
  static const std::array<Mat3c, 6> basis = [] {
    std::array<Mat3c, 6> m;
    for (Mat3c& x : m) x.setZero();
    m[0](0, 1) = -1.0, m[0](1, 0) = 1.0;
    m[1](0, 1) = kI, m[1](1, 0) = kI;
    m[2](0, 2) = 1.0, m[2](2, 0) = -1.0;
    m[3](0, 2) = kI, m[3](2, 0) = kI;
    m[4](1, 2) = -1.0, m[4](2, 1) = 1.0;
    m[5](1, 2) = kI, m[5](2, 1) = kI;
    return m;
  }();
  return basis;
}

Mat3c algebra_element(const Vec6& coeffs) {
  Mat3c x = Mat3c::Zero();
  for (int i = 0; i < 6; ++i) x += coeffs(i) * m_basis()[i];
  return x;
}

Vec6 algebra_coeffs(const Mat3c& x, double tol) {
  const double residual =
      std::max(max_abs(x + x.adjoint()), x.diagonal().cwiseAbs().maxCoeff());
  if (residual > tol) {
    throw Error(ErrorKind::ReductiveResidual, "matrix is not in the reductive complement m");
  }
  return m_projection(x);
}

Tangent express_at(const Tangent& x, const Point& target) {
  const Mat3c t = target.rep.adjoint() * x.base.rep;
  Mat3c off = t;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorKind::BaseMismatch, "flag tangents live over different points");
  }
  const Mat3c torus = t.diagonal().asDiagonal();
  return {target, m_projection(torus * algebra_element(x.coeffs) * torus.adjoint())};
}

Vec6 block_part(const Vec6& c, int block) {
  Vec6 out = Vec6::Zero();
  out.segment<2>(2 * (block - 1)) = c.segment<2>(2 * (block - 1));
  return out;
}

double metric_flag(const Tangent& x, const Tangent& y) { return x.coeffs.dot(aligned(x, y)); }

double metric_flag_i(const Tangent& x, const Tangent& y, int block) {
  const Vec6 yc = aligned(x, y);
  return x.coeffs.dot(yc) + block_part(x.coeffs, block).dot(yc);
}

Acs acs_for_block(int block) {
  static constexpr Acs kBlocks[3] = {Acs::J1, Acs::J2, Acs::J3};
  return kBlocks[block - 1];
}

Tangent acs_flag(const Tangent& x, Acs which) { return {x.base, j_matrix(which) * x.coeffs}; }

Tangent curvature_flag(const Tangent& x, const Tangent& y, const Tangent& z) {
  const Vec6 X = x.coeffs, Y = aligned(x, y), Z = aligned(x, z);
  Vec6 r = 0.25 * (Y.dot(Z) * X - X.dot(Z) * Y);
  const auto term = [&](const Mat6& j) {
    const Vec6 jx = j * X, jy = j * Y, jz = j * Z;
    return Vec6(jy.dot(Z) * jx - jx.dot(Z) * jy + 2.0 * X.dot(jy) * jz);
  };
  r -= 0.25 * term(j_matrix(Acs::J));
  for (Acs a : {Acs::J1, Acs::J2, Acs::J3}) r += 0.5 * term(j_matrix(a));
  return {x.base, r};
}

double hol_sec_curvature(const Tangent& x, double tol) {
  if (std::abs(x.coeffs.squaredNorm() - 1.0) > tol) {
    throw Error(ErrorKind::NonUnit, "hol_sec_curvature needs a unit vector");
  }
  const Mat6 j = j_matrix(Acs::J);
  double sum = 0.0;
  for (Acs a : {Acs::J1, Acs::J2, Acs::J3}) {
    const double v = (j * j_matrix(a) * x.coeffs).dot(x.coeffs);
    sum += v * v;
  }
  return -0.5 + 1.5 * sum;
}

Perm phi_perm(int index) {
  static const Perm kPhis[6] = {{1, 2, 3}, {2, 1, 3}, {3, 2, 1}, {1, 3, 2}, {2, 3, 1}, {3, 1, 2}};
  if (index < 0 || index > 5) throw Error(ErrorKind::InvalidArgument, "phi index must be 0..5");
  return kPhis[index];
}

int perm_sign(const Perm& s) {
  int inversions = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) inversions += s[a] > s[b];
  return inversions % 2 ? -1 : 1;
}

Perm perm_compose(const Perm& a, const Perm& b) { return {a[b[0] - 1], a[b[1] - 1], a[b[2] - 1]}; }

Perm perm_inverse(const Perm& s) {
  Perm inv{};
  for (int j = 0; j < 3; ++j) inv[s[j] - 1] = j + 1;
  return inv;
}

bool perm_valid(const Perm& s) {
  Perm sorted = s;
  std::sort(sorted.begin(), sorted.end());
  return sorted == Perm{1, 2, 3};
}

Mat3c perm_matrix(const Perm& s) {
  if (!perm_valid(s)) throw Error(ErrorKind::InvalidArgument, "not a permutation of (1, 2, 3)");
  Mat3c p = Mat3c::Zero();
  for (int j = 0; j < 3; ++j) p(s[j] - 1, j) = j == 1 ? perm_sign(s) : 1;
  return p;
}

Isometry Isometry::canonical() const {
  for (int r = 0; r < 3; ++r) {
    if (std::abs(a(r, 0)) > 1e-6) {
      const double phase = std::arg(a(r, 0));
      const int m = static_cast<int>(std::floor(phase / (2.0 * kPi / 3.0)));
      return {a * std::polar(1.0, -2.0 * kPi / 3.0 * m), sigma, k};
    }
  }
  return *this;
}

Point iso_apply_flag(const Isometry& f, const Point& p) {
  return canonical(Point{conj_if(Mat3c(f.a * p.rep * perm_matrix(f.sigma)), f.k)});
}

Tangent iso_differential_flag(const Isometry& f, const Tangent& x) {
  const Mat3c pm = perm_matrix(f.sigma);
  const Point raw{conj_if(Mat3c(f.a * x.base.rep * pm), f.k)};
  const Mat3c y = conj_if(Mat3c(pm.transpose() * algebra_element(x.coeffs) * pm), f.k);
  return express_at({raw, algebra_coeffs(y)}, canonical(raw));
}

Isometry iso_compose_flag(const Isometry& f1, const Isometry& f2) {
  return Isometry{conj_if(f1.a, f2.k) * f2.a, perm_compose(f2.sigma, f1.sigma), (f1.k + f2.k) % 2}
      .canonical();
}

Isometry iso_inverse_flag(const Isometry& f) {
  return Isometry{conj_if(Mat3c(f.a.adjoint()), f.k), perm_inverse(f.sigma), f.k}.canonical();
}

double distance(const Isometry& f1, const Isometry& f2) {
  if (f1.sigma != f2.sigma || f1.k != f2.k) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 3; ++m) {
    best = std::min(best, max_abs(f1.a - std::polar(1.0, 2.0 * kPi / 3.0 * m) * f2.a));
  }
  return best;
}

oracle::Chart<Tangent> chart_at(const Point& center) {
  oracle::Chart<Tangent> chart;
  chart.dim = 6;
  chart.frame = [center](const oracle::Vec& x) {
    const Mat3c big_x = algebra_element(Vec6(x));
    MatXc block = MatXc::Zero(6, 6);
    block.topLeftCorner(3, 3) = big_x;
    block.bottomRightCorner(3, 3) = big_x;
    std::vector<Tangent> frame;
    frame.reserve(6);
    Mat3c ex;
    for (int i = 0; i < 6; ++i) {
      // exp [[X, m_i], [0, X]] carries the derivative of exp at X along m_i.
      block.topRightCorner(3, 3) = m_basis()[i];
      const MatXc e = expm(block);
      ex = e.topLeftCorner(3, 3);
      const Mat3c left = ex.adjoint() * e.topRightCorner(3, 3);
      frame.push_back({Point{}, m_projection(left)});
    }
    const Point base{center.rep * ex};
    for (Tangent& t : frame) t.base = base;
    return frame;
  };
  return chart;
}

Tangent nablaJ_flag(const Tangent& x, const Tangent& y, oracle::Step step) {
  const auto chart = chart_at(x.base);
  const oracle::MatrixField metric = oracle::pullback_metric(chart, metric_flag);
  const oracle::MatrixField j = oracle::pullback_endomorphism(
      chart, metric_flag, [](const Tangent& t) { return acs_flag(t, Acs::J); });
  const oracle::Tensor3 n = oracle::nabla_endomorphism_numeric(metric, j, oracle::Vec::Zero(6), step);
  const Vec6 yc = aligned(x, y);
  Vec6 out = Vec6::Zero();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) out(c) += x.coeffs(a) * yc(b) * n(a, b, c);
  return {x.base, out};
}

IsometryOracle make_oracle(const Isometry& f) {
  return {[f](const Point& p) { return iso_apply_flag(f, p); },
          [f](const Tangent& t) { return iso_differential_flag(f, t); }};
}

Isometry decompose_flag_isometry(const IsometryOracle& f, double tol) {
  const Point origin{};
  const Point image = canonical(f.apply(origin));
  std::array<Tangent, 6> pushed;
  Mat6 m;
  for (int i = 0; i < 6; ++i) {
    pushed[i] = express_at(f.differential({origin, Vec6::Unit(i)}), image);
    m.col(i) = pushed[i].coeffs;
  }
  if ((m.transpose() * m - Mat6::Identity()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::NotAnIsometry, "differential at the origin is not orthogonal");
  }

  // Block images must be whole blocks (the holomorphic sectional curvature 4 locus).
  std::array<int, 3> target{};
  for (int b = 0; b < 3; ++b) {
    int found = -1;
    for (int t = 0; t < 3; ++t) {
      const double mass = m.block<2, 2>(2 * t, 2 * b).squaredNorm();
      if (mass >= 2.0 - tol) found = t;
    }
    if (found < 0) {
      throw Error(ErrorKind::DistributionAmbiguity, "a distribution is not mapped onto a single block");
    }
    target[b] = found;
  }
  if (target[0] == target[1] || target[0] == target[2] || target[1] == target[2]) {
    throw Error(ErrorKind::DistributionAmbiguity, "distribution images are not a permutation");
  }

  // The phi whose pushforward returns every block to its place.
  Isometry phi;
  bool matched = false;
  for (int index = 0; index < 6 && !matched; ++index) {
    phi = Isometry::phi(index);
    matched = true;
    for (int b = 0; b < 3 && matched; ++b) {
      const Vec6 back = iso_differential_flag(phi, pushed[2 * b]).coeffs;
      matched = back.segment<2>(2 * b).squaredNorm() >= 1.0 - tol;
    }
  }
  if (!matched) throw Error(ErrorKind::DistributionAmbiguity, "no permutation restores the blocks");

  const Point moved = iso_apply_flag(phi, image);
  const Isometry correction = iso_compose_flag(Isometry::translation(moved.rep.adjoint()), phi);
  Mat6 residue;
  for (int i = 0; i < 6; ++i) {
    residue.col(i) = express_at(iso_differential_flag(correction, pushed[i]), origin).coeffs;
  }

  std::array<double, 3> angle{};
  int k = -1;
  for (int b = 0; b < 3; ++b) {
    Eigen::Matrix2d block = residue.block<2, 2>(2 * b, 2 * b);
    const int kb = block.determinant() < 0.0 ? 1 : 0;
    if (k >= 0 && kb != k) {
      throw Error(ErrorKind::NotAnIsometry, "residue neither preserves nor reverses J");
    }
    k = kb;
    if (kb) block.row(1) *= -1.0;
    angle[b] = std::atan2(block(1, 0), block(0, 0));
  }
  if (std::abs(wrap_angle(angle[0] + angle[1] + angle[2])) > tol) {
    throw Error(ErrorKind::AngleInconsistency, "block rotation angles do not sum to zero");
  }
  // diag(e^{i a}, e^{i b}, e^{i c}) rotates the blocks by b - a, a - c, c - b.
  const double ta = (angle[1] - angle[0]) / 3.0;
  Mat3c torus = Mat3c::Zero();
  torus.diagonal() << std::polar(1.0, ta), std::polar(1.0, ta + angle[0]), std::polar(1.0, ta - angle[1]);
  const Isometry residual{torus, {1, 2, 3}, k};
  const Isometry result = iso_compose_flag(iso_inverse_flag(correction), residual).canonical();

  CounterRng rng(0x5eed);
  for (int n = 0; n < 4; ++n) {
    const Point p = random_point(rng);
    const Tangent v = random_tangent(p, rng);
    const Point fp = canonical(f.apply(p));
    if (point_distance(fp, iso_apply_flag(result, p)) > tol) {
      throw Error(ErrorKind::NotAnIsometry, "recovered element disagrees with the map");
    }
    const Vec6 expected = iso_differential_flag(result, v).coeffs;
    const Vec6 actual = express_at(f.differential(v), fp).coeffs;
    if ((expected - actual).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::NotAnIsometry, "recovered differential disagrees with the map");
    }
  }
  return result;
}

Point random_point(CounterRng& rng) { return canonical(Point{random_su3(rng)}); }

Tangent random_tangent(const Point& base, CounterRng& rng) {
  Vec6 c;
  for (int i = 0; i < 6; ++i) c(i) = rng.normal();
  return {base, c};
}

Isometry random_isometry(CounterRng& rng) {
  const Mat3c a = random_su3(rng);
  const int index = static_cast<int>(rng.next_u64() % 6);
  const int k = static_cast<int>(rng.next_u64() % 2);
  return Isometry{a, phi_perm(index), k}.canonical();
}

}  // namespace nkiso::flag
