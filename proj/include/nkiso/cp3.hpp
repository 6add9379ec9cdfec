#pragma once

// The nearly Kaehler CP^3 through the Hopf fibration S^7 -> CP^3, with
// H^2 = C^4 via q = z + w j -> (z, w) in each quaternionic coordinate, and its
// isometry group PSp(2) x| Z_2.

#include <array>
#include <optional>

#include "nkiso/linalg.hpp"
#include "nkiso/oracle.hpp"

namespace nkiso::cp3 {

/// Unit representative of a complex line.
struct Point {
  Vec4c rep = Vec4c::UnitX();
};

/// Normalizes v; throws ZeroVector for v = 0.
Point make_point(const Vec4c& v);
/// |b - <a, b> a| = sqrt(1 - |<a, b>|^2): zero iff the representatives span the same line.
double point_distance(const Point& a, const Point& b);

/// Real inner product Re(a^* b) on C^4 = R^8.
double real_inner(const Vec4c& a, const Vec4c& b);

/// Left quaternionic multiplication: j v = Omega conj(v), k v = i j v.
Vec4c quat_j(const Vec4c& v);
Vec4c quat_k(const Vec4c& v);

struct QuaternionicMaps {
  Vec4c ip, jp, kp;
};
QuaternionicMaps quaternionic_maps(const Point& p);

/// Horizontal lift at base.rep, split into span_R{jp, kp} and its complement.
struct Tangent {
  Point base;
  Vec4c horiz = Vec4c::Zero();
  Vec4c d2 = Vec4c::Zero();
  Vec4c d4 = Vec4c::Zero();
};

/// Drops the components along rep and i rep, then splits the remainder.
Tangent split_tangent(const Point& p, const Vec4c& v);

/// Nearly Kaehler metric: unrescaled on D^2, doubled on D^4.
double metric_g_nk(const Tangent& x, const Tangent& y);
/// Fubini-Study metric of the unit-sphere submersion.
double metric_fs(const Tangent& x, const Tangent& y);

enum class Structure { P, Jcirc, Jnk };
/// P = -Id on D^2 and Id on D^4; Jcirc = multiplication by i; Jnk = P Jcirc.
Tangent structures(const Tangent& x, Structure which);

/// (A, k) acting by [p] -> [Conj^k(A p)], A in Sp(2) modulo -Id.
struct Isometry {
  Mat4c a = Mat4c::Identity();
  int k = 0;

  static Isometry identity() { return {}; }
  static Isometry conjugation() { return {Mat4c::Identity(), 1}; }
  /// Representative with the first nonzero real coordinate positive.
  Isometry canonical() const;
};

Point iso_apply_cp3(const Isometry& f, const Point& p);
/// Pushforward of the horizontal lift, re-projected at the image.
Tangent iso_differential_cp3(const Isometry& f, const Tangent& x);
/// (A, k1) * (B, k2) = (Conj^{k2}(A) B, k1 + k2).
Isometry iso_compose_cp3(const Isometry& f1, const Isometry& f2);
Isometry iso_inverse_cp3(const Isometry& f);
/// Infinity when k differs, else max entry deviation minimized over the sign.
double distance(const Isometry& f1, const Isometry& f2);

/// If some phase lambda makes lambda A symplectic-unitary, the induced
/// isometry (lambda A, 0); empty otherwise. Throws NotUnitary.
std::optional<Isometry> descends_to_nk_isometry(const Mat4c& a, double tol = 1e-10);

/// Real orthonormal basis (jp, kp, then four vectors of D^4) of the horizontal space.
std::array<Vec4c, 6> horizontal_basis(const Point& p);

/// Chart x -> [n(p0 + sum x_i e_i)], e_i = horizontal_basis(p0), analytic frame.
/// At x = 0 the frame is e_i itself.
oracle::Chart<Tangent> chart_at(const Point& center);

Point random_point(CounterRng& rng);
Tangent random_tangent(const Point& base, CounterRng& rng);
Isometry random_isometry(CounterRng& rng);

}  // namespace nkiso::cp3
