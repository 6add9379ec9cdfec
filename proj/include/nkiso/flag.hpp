#pragma once

// The nearly Kaehler flag manifold F(C^3) = SU(3)/T^2 in its reductive model.
// Tangent vectors at [U] are U x with x in m = span{m_1, ..., m_6}, stored as
// the six coefficients of x. The coefficients depend on the representative U:
// changing U to U t rotates them by Ad_{t^-1}.

#include <array>
#include <functional>

#include "nkiso/linalg.hpp"
#include "nkiso/oracle.hpp"

namespace nkiso::flag {

/// Class of a special unitary matrix modulo the diagonal torus.
struct Point {
  Mat3c rep = Mat3c::Identity();
};

/// Checks special unitarity (NotUnitary) and canonicalizes: the first entry
/// of modulus above 1e-6 in columns 1 and 2 is made real positive, column 3
/// absorbs the determinant.
Point make_point(const Mat3c& u, double tol = 1e-10);
Point canonical(const Point& p);
/// Largest off-diagonal modulus of a^* b: zero iff the classes agree.
double point_distance(const Point& a, const Point& b);
bool same_point(const Point& a, const Point& b, double tol = 1e-10);

/// (v1 | v2 | v3) with v3 the Hermitian complement, det fixed through v3.
/// Throws ZeroVector, NonUnit or NonOrthogonal.
Point flag_from_subspaces(const Vec3c& l, const Vec3c& pi_second, double tol = 1e-10);

/// pi_1 -> v3, pi_2 -> v2, pi_3 -> v1 (unit representatives of lines in CP^2).
Vec3c projection(const Point& p, int which);
/// |w - <v, w> v| for unit v, w: zero iff the lines agree.
double line_distance(const Vec3c& v, const Vec3c& w);

/// m_1, ..., m_6 (index 0..5).
const std::array<Mat3c, 6>& m_basis();
Mat3c algebra_element(const Vec6& coeffs);
/// Coefficients of the m-part of x. Throws ReductiveResidual if x is not
/// anti-Hermitian with vanishing diagonal within tol.
Vec6 algebra_coeffs(const Mat3c& x, double tol = 1e-10);

struct Tangent {
  Point base;
  Vec6 coeffs = Vec6::Zero();
};

/// The same vector expressed in the frame of another representative of its class.
/// Throws BaseMismatch when the classes differ.
Tangent express_at(const Tangent& x, const Point& target);

/// Block i in {1, 2, 3} holds coefficient pairs (1,2), (3,4), (5,6).
Vec6 block_part(const Vec6& c, int block);

/// Coefficient dot product (an orthonormal frame for -1/2 Tr(xy)).
double metric_flag(const Tangent& x, const Tangent& y);
/// g_i: the metric doubled on block i.
double metric_flag_i(const Tangent& x, const Tangent& y, int block);

enum class Acs { J, J1, J2, J3 };
/// J rotates each pair by +pi/2; J_i is J on block i and -J elsewhere.
Tangent acs_flag(const Tangent& x, Acs which);
Acs acs_for_block(int block);

Tangent curvature_flag(const Tangent& x, const Tangent& y, const Tangent& z);
/// -1/2 + 3/2 sum_i g(J J_i X, X)^2 for unit X; throws NonUnit.
double hol_sec_curvature(const Tangent& x, double tol = 1e-10);

/// Permutation as the ordered triple (sigma(1), sigma(2), sigma(3)).
using Perm = std::array<int, 3>;
/// phi_0..phi_5 = (1,2,3), (2,1,3), (3,2,1), (1,3,2), (2,3,1), (3,1,2).
Perm phi_perm(int index);
int perm_sign(const Perm& s);
/// (a * b)(j) = a(b(j)).
Perm perm_compose(const Perm& a, const Perm& b);
Perm perm_inverse(const Perm& s);
bool perm_valid(const Perm& s);
/// Column j is sign(sigma)^[j == 2] e_{sigma(j)}.
Mat3c perm_matrix(const Perm& s);

/// (A, sigma, k) acting by [U] -> [Conj^k(A U P^sigma)], A modulo the center.
struct Isometry {
  Mat3c a = Mat3c::Identity();
  Perm sigma{1, 2, 3};
  int k = 0;

  static Isometry identity() { return {}; }
  static Isometry phi(int index) { return {Mat3c::Identity(), phi_perm(index), 0}; }
  static Isometry conjugation() { return {Mat3c::Identity(), {1, 2, 3}, 1}; }
  static Isometry translation(const Mat3c& a) { return Isometry{a, {1, 2, 3}, 0}.canonical(); }
  /// Multiplies A by the cube root of unity putting the phase of the first
  /// nonzero entry of column 1 in [0, 2 pi / 3).
  Isometry canonical() const;
};

Point iso_apply_flag(const Isometry& f, const Point& p);
/// Result expressed at the canonical representative of the image.
Tangent iso_differential_flag(const Isometry& f, const Tangent& x);
/// First f2, then f1: (Conj^{k2}(A1) A2, sigma2 o sigma1, k1 + k2).
Isometry iso_compose_flag(const Isometry& f1, const Isometry& f2);
Isometry iso_inverse_flag(const Isometry& f);
/// Infinity when the discrete parts differ, else the matrix deviation
/// minimized over the center.
double distance(const Isometry& f1, const Isometry& f2);

/// Chart x -> [U0 exp(sum x_i m_i)] with its analytic frame; at x = 0 the frame
/// is the m-frame at U0.
oracle::Chart<Tangent> chart_at(const Point& center);

/// Numeric (nabla_X J) Y at the common base through the chart oracle.
Tangent nablaJ_flag(const Tangent& x, const Tangent& y, oracle::Step step = {});

struct IsometryOracle {
  std::function<Point(const Point&)> apply;
  std::function<Tangent(const Tangent&)> differential;
};
IsometryOracle make_oracle(const Isometry& f);

/// Recovers (A, sigma, k) from an isometry given as a black box.
/// Throws NotAnIsometry, DistributionAmbiguity or AngleInconsistency.
Isometry decompose_flag_isometry(const IsometryOracle& f, double tol = 1e-8);

Point random_point(CounterRng& rng);
Tangent random_tangent(const Point& base, CounterRng& rng);
Isometry random_isometry(CounterRng& rng);

}  // namespace nkiso::flag
