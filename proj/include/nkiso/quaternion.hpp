#pragma once

#include <array>
#include <cmath>

#include "nkiso/rng.hpp"

namespace nkiso {

/// Purely imaginary quaternion x i + y j + z k.
struct ImQuaternion {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend ImQuaternion operator+(ImQuaternion a, ImQuaternion b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend ImQuaternion operator-(ImQuaternion a, ImQuaternion b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend ImQuaternion operator-(ImQuaternion a) { return {-a.x, -a.y, -a.z}; }
  friend ImQuaternion operator*(double s, ImQuaternion a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  friend bool operator==(const ImQuaternion&, const ImQuaternion&) = default;
};

/// w + x i + y j + z k.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}
  constexpr Quaternion(ImQuaternion a) : w(0.0), x(a.x), y(a.y), z(a.z) {}

  static constexpr Quaternion one() { return {1, 0, 0, 0}; }
  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }

  ImQuaternion imag() const { return {x, y, z}; }
  std::array<double, 4> coeffs() const { return {w, x, y, z}; }

  friend Quaternion operator+(Quaternion a, Quaternion b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(Quaternion a, Quaternion b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator-(Quaternion a) { return {-a.w, -a.x, -a.y, -a.z}; }
  friend Quaternion operator*(double s, Quaternion a) {
    return {s * a.w, s * a.x, s * a.y, s * a.z};
  }
  /// Hamilton product.
  friend Quaternion operator*(Quaternion a, Quaternion b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline Quaternion quat_mul(Quaternion a, Quaternion b) { return a * b; }
inline Quaternion conj(Quaternion a) { return {a.w, -a.x, -a.y, -a.z}; }
inline double dot(Quaternion a, Quaternion b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double norm(Quaternion a) { return std::sqrt(dot(a, a)); }
inline Quaternion inverse(Quaternion a) { return (1.0 / dot(a, a)) * conj(a); }
Quaternion normalized(Quaternion a);

/// Euclidean inner product of coefficients; positive definite.
inline double im_inner(ImQuaternion a, ImQuaternion b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double norm(ImQuaternion a) { return std::sqrt(im_inner(a, a)); }

/// c a c^{-1} for a unit quaternion c.
ImQuaternion rotate(Quaternion c, ImQuaternion a);

/// Largest absolute coefficient difference.
double max_abs_diff(Quaternion a, Quaternion b);
double max_abs_diff(ImQuaternion a, ImQuaternion b);

/// Flips sign so the first coefficient with |x| > eps is positive.
Quaternion sign_canonical(Quaternion a, double eps = 1e-12);

/// Haar-distributed unit quaternion.
Quaternion random_unit_quaternion(CounterRng& rng);
ImQuaternion random_im_quaternion(CounterRng& rng);

/// Unit quaternion c with c alphas[i] c^{-1} = betas[i].
///
/// Requires matching Gram matrices within tol. The answer is defined up to
/// sign; the returned representative is sign_canonical.
Quaternion su2_lift_from_frames(const std::array<ImQuaternion, 3>& alphas,
                                const std::array<ImQuaternion, 3>& betas,
                                double tol = 1e-10);

}  // namespace nkiso
