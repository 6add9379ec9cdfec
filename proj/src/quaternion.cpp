#include "nkiso/quaternion.hpp"

#include <algorithm>
#include <Eigen/Dense>

#include "nkiso/error.hpp"

namespace nkiso {

Quaternion normalized(Quaternion a) {
  const double n = norm(a);
  if (n == 0.0) throw Error(ErrorKind::ZeroVector, "cannot normalize the zero quaternion");
  return (1.0 / n) * a;
}

ImQuaternion rotate(Quaternion c, ImQuaternion a) {
  return (c * Quaternion(a) * conj(c)).imag();
}

double max_abs_diff(Quaternion a, Quaternion b) {
  return std::max({std::abs(a.w - b.w), std::abs(a.x - b.x), std::abs(a.y - b.y),
                   std::abs(a.z - b.z)});
}

double max_abs_diff(ImQuaternion a, ImQuaternion b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

Quaternion sign_canonical(Quaternion a, double eps) {
  for (double c : a.coeffs()) {
    if (std::abs(c) > eps) return c < 0.0 ? -a : a;
  }
  return a;
}

Quaternion random_unit_quaternion(CounterRng& rng) {
  Quaternion q;
  do {
    q = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
  } while (norm(q) < 1e-8);
  return normalized(q);
}

ImQuaternion random_im_quaternion(CounterRng& rng) {
  return {rng.normal(), rng.normal(), rng.normal()};
}

namespace {

Eigen::Matrix3d columns(const std::array<ImQuaternion, 3>& v) {
  Eigen::Matrix3d m;
  for (int c = 0; c < 3; ++c) m.col(c) << v[c].x, v[c].y, v[c].z;
  return m;
}

Eigen::Matrix3d gram_schmidt(const Eigen::Matrix3d& a) {
  Eigen::Matrix3d e;
  for (int c = 0; c < 3; ++c) {
    Eigen::Vector3d v = a.col(c);
    for (int p = 0; p < c; ++p) v -= e.col(p).dot(v) * e.col(p);
    e.col(c) = v.normalized();
  }
  return e;
}

// Shepperd's method: branch on the largest of trace and the diagonal.
Quaternion quaternion_from_rotation(const Eigen::Matrix3d& r) {
  const double t = r.trace();
  const double d0 = r(0, 0), d1 = r(1, 1), d2 = r(2, 2);
  Quaternion q;
  if (t >= d0 && t >= d1 && t >= d2) {
    const double w = 0.5 * std::sqrt(1.0 + t);
    q = {w, (r(2, 1) - r(1, 2)) / (4 * w), (r(0, 2) - r(2, 0)) / (4 * w),
         (r(1, 0) - r(0, 1)) / (4 * w)};
  } else if (d0 >= d1 && d0 >= d2) {
    const double x = 0.5 * std::sqrt(1.0 + d0 - d1 - d2);
    q = {(r(2, 1) - r(1, 2)) / (4 * x), x, (r(0, 1) + r(1, 0)) / (4 * x),
         (r(0, 2) + r(2, 0)) / (4 * x)};
  } else if (d1 >= d2) {
    const double y = 0.5 * std::sqrt(1.0 - d0 + d1 - d2);
    q = {(r(0, 2) - r(2, 0)) / (4 * y), (r(0, 1) + r(1, 0)) / (4 * y), y,
         (r(1, 2) + r(2, 1)) / (4 * y)};
  } else {
    const double z = 0.5 * std::sqrt(1.0 - d0 - d1 + d2);
    q = {(r(1, 0) - r(0, 1)) / (4 * z), (r(0, 2) + r(2, 0)) / (4 * z),
         (r(1, 2) + r(2, 1)) / (4 * z), z};
  }
  return normalized(q);
}

}  // namespace

Quaternion su2_lift_from_frames(const std::array<ImQuaternion, 3>& alphas,
                                const std::array<ImQuaternion, 3>& betas, double tol) {
  const Eigen::Matrix3d a = columns(alphas);
  const Eigen::Matrix3d b = columns(betas);

  for (const Eigen::Matrix3d* m : {&a, &b}) {
    const double vol = m->col(0).norm() * m->col(1).norm() * m->col(2).norm();
    if (vol == 0.0 || std::abs(m->determinant()) <= 1e-10 * vol) {
      throw Error(ErrorKind::DegenerateBasis, "su2 lift: frame is numerically dependent");
    }
  }

  const Eigen::Matrix3d ga = a.transpose() * a;
  const Eigen::Matrix3d gb = b.transpose() * b;
  const double scale = std::max(1.0, ga.cwiseAbs().maxCoeff());
  if ((ga - gb).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error(ErrorKind::GramMismatch, "su2 lift: Gram matrices of the frames differ");
  }
  if (a.determinant() * b.determinant() < 0.0) {
    throw Error(ErrorKind::OrientationMismatch,
                "su2 lift: frames have opposite orientation, no rotation maps one to the other");
  }

  const Eigen::Matrix3d rot = gram_schmidt(b) * gram_schmidt(a).transpose();
  return sign_canonical(quaternion_from_rotation(rot));
}

}  // namespace nkiso
