#pragma once

#include <random>

#include "qmink/conformal_geometry.hpp"
#include "qmink/types.hpp"

namespace qmink::testing {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline double gaussian()
{
    return std::normal_distribution<double>(0.0, 1.0)(rng());
}

inline Mat2c random_matrix(double scale = 1.0)
{
    Mat2c M;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) M(r, c) = scale * cplx(gaussian(), gaussian());
    return M;
}

inline Mat2c random_hermitian(double scale = 1.0)
{
    const Mat2c A = random_matrix(scale);
    return 0.5 * (A + A.adjoint());
}

inline Mat2c random_positive(double shift = 0.3)
{
    const Mat2c B = random_matrix(0.7);
    return B * B.adjoint() + shift * Mat2c::Identity();
}

/// Random matrix rescaled to operator norm `radius` times a uniform factor in (0, 1].
inline Mat2c random_in_ball(double radius)
{
    Mat2c M = random_matrix();
    Eigen::JacobiSVD<Mat2c> svd(M);
    const double op = svd.singularValues()(0);
    return (radius * uniform(0.0, 1.0) / op) * M;
}

inline Mat2c random_tube_point()
{
    return random_hermitian() + cplx(0, 1) * random_positive();
}

inline Mat4c random_4x4(double scale = 1.0)
{
    Mat4c M;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) M(r, c) = scale * cplx(gaussian(), gaussian());
    return M;
}

inline AlgebraElement<double> random_algebra(EtaConvention c, double scale = 0.5)
{
    return AlgebraElement<double>::make(project_to_algebra<double>(random_4x4(scale), c), c, 1e-10);
}

inline GroupElement<double> random_group(EtaConvention c, double scale = 0.5)
{
    return exp_algebra(random_algebra(c, scale), 1.0);
}

inline double max_abs(const Eigen::MatrixXcd& M)
{
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

}  // namespace qmink::testing
