#pragma once

#include <complex>

#include <Eigen/Dense>

#include "nkiso/rng.hpp"

namespace nkiso {

using cplx = std::complex<double>;
using Mat3c = Eigen::Matrix3cd;
using Mat4c = Eigen::Matrix4cd;
using Vec3c = Eigen::Vector3cd;
using Vec4c = Eigen::Vector4cd;
using MatXc = Eigen::MatrixXcd;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

enum class MatrixGroup { Unitary, SpecialUnitary, SymplecticUnitary };

/// Block-diagonal form with 2x2 blocks [[0,1],[-1,0]] on coordinates (1,2), (3,4).
const Mat4c& symplectic_form();

/// A^*A = Id; additionally det A = 1 (special unitary) or A^T Omega A = Omega
/// (symplectic unitary, 4x4 only). Throws DimensionMismatch for the wrong size.
bool group_membership(const MatXc& a, MatrixGroup group, double tol = 1e-12);

/// Matrix exponential of a square complex matrix.
MatXc expm(const MatXc& a);

/// Haar-random SU(3) (QR of a Ginibre matrix with phase correction, then det fixed).
Mat3c random_su3(CounterRng& rng);
/// Haar-random U(n).
MatXc random_unitary(int n, CounterRng& rng);
/// Random element of sp(2) = {X : X^* = -X, X^T Omega + Omega X = 0}.
Mat4c random_sp2_algebra(CounterRng& rng, double scale = 1.0);
/// exp of random_sp2_algebra with a scale large enough to wrap the group.
Mat4c random_sp2(CounterRng& rng);

double max_abs(const MatXc& a);

}  // namespace nkiso
