#pragma once

// The homogeneous nearly Kaehler S^3 x S^3 and its isometry group
// P(SU(2) x SU(2) x SU(2)) x| S_3.

#include <array>
#include <functional>
#include <utility>

#include "nkiso/linalg.hpp"
#include "nkiso/oracle.hpp"
#include "nkiso/quaternion.hpp"

namespace nkiso::s3s3 {

struct Point {
  Quaternion p = Quaternion::one();
  Quaternion q = Quaternion::one();
};

/// Validates |p| = |q| = 1 within 1e-12.
Point make_point(Quaternion p, Quaternion q);
double point_distance(const Point& a, const Point& b);

/// The tangent vector (p alpha, q beta) at base = (p, q).
struct Tangent {
  Point base;
  ImQuaternion alpha;
  ImQuaternion beta;
};

/// Coordinates (alpha.x, alpha.y, alpha.z, beta.x, beta.y, beta.z).
Vec6 coords(const Tangent& v);
Tangent from_coords(const Point& base, const Vec6& c);

/// Rotation angle selecting one of the three compatible product structures.
enum class Rotation { Zero = 0, TwoThirds = 1, FourThirds = 2 };
double angle(Rotation tau);
Rotation rotation_from_tag(int tag);

double metric_g(const Tangent& x, const Tangent& y);
Tangent acs_J(const Tangent& x);
/// cos(tau) P X + sin(tau) J P X.
Tangent aps_P(const Tangent& x, Rotation tau = Rotation::Zero);
Tangent curvature_R(const Tangent& u, const Tangent& v, const Tangent& w);

// Left-invariant structures as constant matrices on coords().
const Mat6& metric_matrix();
const Mat6& j_matrix();
Mat6 p_matrix(Rotation tau = Rotation::Zero);

/// The curvature formula with `product` in place of P; used to check that the
/// rotated product structures leave the curvature invariant.
Vec6 curvature_with_product(const Vec6& u, const Vec6& v, const Vec6& w, const Mat6& product);

/// Slot permutation of the triple model S^3 x S^3 = SU(2)^3 / diag: the point
/// (p, q) is the class of (p, q, 1), and a permutation map sends (x_1, x_2, x_3)
/// to (x_{s[0]}, x_{s[1]}, x_{s[2]}) (0-based).
using Slots = std::array<int, 3>;

/// Element (a, b, c) modulo a common sign, followed by Psi_{kappa, tau}.
///
/// Psi_{kappa, tau} is the permutation map with J o dPsi = (-1)^kappa dPsi o J
/// and P o dPsi = dPsi o (cos(tau) P + sin(tau) J P):
///   Psi_{0,0}      (p, q)            Psi_{1,0}      (q, p)
///   Psi_{0,2pi/3}  (q p^-1, p^-1)    Psi_{1,2pi/3}  (p^-1, q p^-1)
///   Psi_{0,4pi/3}  (q^-1, p q^-1)    Psi_{1,4pi/3}  (p q^-1, q^-1)
struct Isometry {
  Quaternion a = Quaternion::one();
  Quaternion b = Quaternion::one();
  Quaternion c = Quaternion::one();
  int kappa = 0;
  Rotation tau = Rotation::Zero;

  static Isometry identity() { return {}; }
  static Isometry translation(Quaternion a, Quaternion b, Quaternion c);
  static Isometry psi(int kappa, Rotation tau);

  /// Same isometry with (a, b, c) sign-canonical.
  Isometry canonical() const;
};

Slots psi_slots(int kappa, Rotation tau);
std::pair<int, Rotation> psi_label(const Slots& slots);

/// (Psi o phi_(a,b,c))(p, q).
Point iso_apply(const Isometry& f, const Point& pt);
Tangent iso_differential(const Isometry& f, const Tangent& x);
/// Matrix of the differential at pt in coords() (source at pt, target at f(pt)).
Mat6 differential_matrix(const Isometry& f, const Point& pt);
/// iso_apply(f1 * f2, x) = iso_apply(f1, iso_apply(f2, x)).
Isometry iso_compose(const Isometry& f1, const Isometry& f2);
Isometry iso_inverse(const Isometry& f);

/// Infinity when the discrete parts differ, otherwise the largest coefficient
/// deviation of (a, b, c) minimized over the common sign.
double distance(const Isometry& f1, const Isometry& f2);

/// Black-box isometry: point map together with its differential.
struct IsometryOracle {
  std::function<Point(const Point&)> apply;
  std::function<Tangent(const Tangent&)> differential;
};

IsometryOracle make_oracle(const Isometry& f);
/// outer o inner.
IsometryOracle compose(const IsometryOracle& outer, const IsometryOracle& inner);

/// Recovers group coordinates of a black-box isometry.
///
/// Throws NotAnIsometry when the differential distorts g, JIncompatible when
/// it neither commutes nor anticommutes with J, and PProjectionResidual when
/// the transported P is not one of the three compatible product structures.
Isometry decompose_isometry(const IsometryOracle& f, double tol = 1e-8);

/// Chart x -> (p0 n(1 + x_0 i + x_1 j + x_2 k), q0 n(1 + x_3 i + x_4 j + x_5 k)),
/// n the normalization, with analytic frame. At x = 0 the frame is the
/// coordinate basis of coords().
oracle::Chart<Tangent> chart_at(const Point& center);

Point random_point(CounterRng& rng);
Tangent random_tangent(const Point& base, CounterRng& rng);
Isometry random_isometry(CounterRng& rng);

}  // namespace nkiso::s3s3
