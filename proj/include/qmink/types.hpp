#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qmink {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Mat2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
using Mat4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

template <typename Scalar>
using CVec4 = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

template <typename Scalar>
using RVec4 = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using RMat4 = Eigen::Matrix<Scalar, 4, 4>;

using cplx = std::complex<double>;
using Mat2c = Mat2<double>;
using Mat4c = Mat4<double>;
using CVec4c = CVec4<double>;
using Vec4d = RVec4<double>;
using Mat4d = RMat4<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// Zero test used for signatures, cones and domain boundaries.
inline constexpr double kDegeneracyTol = 1e-10;

}  // namespace qmink
