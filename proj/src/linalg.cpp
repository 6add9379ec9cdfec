#include "nkiso/linalg.hpp"

#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "nkiso/error.hpp"

namespace nkiso {

const Mat4c& symplectic_form() {
  static const Mat4c omega = [] {
    Mat4c m = Mat4c::Zero();
    m(0, 1) = 1.0;
    m(1, 0) = -1.0;
    m(2, 3) = 1.0;
    m(3, 2) = -1.0;
    return m;
  }();
  return omega;
}

double max_abs(const MatXc& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool group_membership(const MatXc& a, MatrixGroup group, double tol) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "group membership: matrix is not square");
  }
  const Eigen::Index n = a.rows();
  if (group == MatrixGroup::SymplecticUnitary && n != 4) {
    throw Error(ErrorKind::DimensionMismatch, "symplectic-unitary membership needs a 4x4 matrix");
  }
  if (group == MatrixGroup::SpecialUnitary && n != 3) {
    throw Error(ErrorKind::DimensionMismatch, "special-unitary membership needs a 3x3 matrix");
  }
  if (max_abs(a.adjoint() * a - MatXc::Identity(n, n)) > tol) return false;
  switch (group) {
    case MatrixGroup::Unitary:
      return true;
    case MatrixGroup::SpecialUnitary:
      return std::abs(a.determinant() - cplx(1.0)) <= tol;
    case MatrixGroup::SymplecticUnitary: {
      const MatXc omega = symplectic_form();
      return max_abs(a.transpose() * omega * a - omega) <= tol;
    }
  }
  return false;
}

MatXc expm(const MatXc& a) { return a.exp(); }

MatXc random_unitary(int n, CounterRng& rng) {
  const double s = 1.0 / std::numbers::sqrt2;
  MatXc z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = cplx(s * rng.normal(), s * rng.normal());
  Eigen::HouseholderQR<MatXc> qr(z);
  MatXc q = qr.householderQ();
  const MatXc r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    const double mag = std::abs(r(c, c));
    if (mag > 0.0) q.col(c) *= r(c, c) / mag;
  }
  return q;
}

Mat3c random_su3(CounterRng& rng) {
  Mat3c u = random_unitary(3, rng);
  const cplx det = u.determinant();
  u *= std::pow(det, -1.0 / 3.0);
  return u;
}

Mat4c random_sp2_algebra(CounterRng& rng, double scale) {
  Mat4c y;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) y(r, c) = cplx(rng.normal(), rng.normal());
  y = 0.5 * scale * (y - y.adjoint()).eval();
  const Mat4c& omega = symplectic_form();
  // Omega^{-1} = -Omega.
  return 0.5 * (y + (-omega) * y.conjugate() * omega);
}

Mat4c random_sp2(CounterRng& rng) {
  return expm(random_sp2_algebra(rng, 1.5));
}

}  // namespace nkiso
