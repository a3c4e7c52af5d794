#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qmink/errors.hpp"
#include "qmink/types.hpp"

namespace qmink {

// Pauli matrices in the convention sigma_a sigma_b = delta_ab - i eps_abc sigma_c,
// i.e. sigma_2 = [[0, i], [-i, 0]].
template <typename Scalar = double>
Mat2<Scalar> pauli(int mu)
{
    using C = Complex<Scalar>;
    const C i(0, 1);
    Mat2<Scalar> s;
    switch (mu) {
    case 0: s << C(1), C(0), C(0), C(1); break;
    case 1: s << C(0), C(1), C(1), C(0); break;
    case 2: s << C(0), i, -i, C(0); break;
    case 3: s << C(1), C(0), C(0), C(-1); break;
    default: throw InvalidParameter("Pauli index must be 0..3");
    }
    return s;
}

template <typename Scalar = double>
Mat2<Scalar> identity2()
{
    return Mat2<Scalar>::Identity();
}

/// Minkowski metric diag(+,-,-,-).
template <typename Scalar = double>
Scalar metric(int mu)
{
    return mu == 0 ? Scalar(1) : Scalar(-1);
}

template <typename V>
V lower_index(const V& v)
{
    V out = v;
    for (int k = 1; k < 4; ++k) out(k) = -out(k);
    return out;
}

/// Bilinear Minkowski product (no complex conjugation).
template <typename V>
typename V::Scalar minkowski(const V& u, const V& v)
{
    return u(0) * v(0) - u(1) * v(1) - u(2) * v(2) - u(3) * v(3);
}

/// Components w^mu = Tr(W sigma_mu) / 2.
template <typename Scalar>
CVec4<Scalar> vector_of(const Mat2<Scalar>& W)
{
    CVec4<Scalar> w;
    for (int mu = 0; mu < 4; ++mu) w(mu) = Scalar(0.5) * (W * pauli<Scalar>(mu)).trace();
    return w;
}

template <typename Scalar>
Mat2<Scalar> matrix_of(const CVec4<Scalar>& w)
{
    Mat2<Scalar> W = Mat2<Scalar>::Zero();
    for (int mu = 0; mu < 4; ++mu) W += w(mu) * pauli<Scalar>(mu);
    return W;
}

template <typename Scalar>
Mat2<Scalar> hermitian_part(const Mat2<Scalar>& W)
{
    return Scalar(0.5) * (W + W.adjoint());
}

/// (W - W^dagger) / 2i
template <typename Scalar>
Mat2<Scalar> imaginary_part(const Mat2<Scalar>& W)
{
    return (W - W.adjoint()) / Complex<Scalar>(0, 2);
}

// ---------------------------------------------------------------------------
// Block helpers

template <typename Scalar>
struct Blocks {
    Mat2<Scalar> A, B, C, D;
};

template <typename Scalar>
Blocks<Scalar> blocks_of(const Mat4<Scalar>& g)
{
    return {g.template block<2, 2>(0, 0), g.template block<2, 2>(0, 2), g.template block<2, 2>(2, 0),
            g.template block<2, 2>(2, 2)};
}

template <typename Scalar>
Mat4<Scalar> from_blocks(const Mat2<Scalar>& A, const Mat2<Scalar>& B, const Mat2<Scalar>& C,
                         const Mat2<Scalar>& D)
{
    Mat4<Scalar> g;
    g << A, B, C, D;
    return g;
}

template <typename Scalar>
bool invertible(const Mat2<Scalar>& M)
{
    const Scalar scale = std::max(Scalar(1), M.cwiseAbs2().sum());
    return std::abs(M.determinant()) > Scalar(1e-14) * scale;
}

template <typename Scalar>
Mat2<Scalar> checked_inverse(const Mat2<Scalar>& M, const char* what)
{
    if (!invertible(M)) throw SingularMatrix(what);
    return M.inverse();
}

// ---------------------------------------------------------------------------
// Conventions and group / algebra elements

/// offdiag: eta = [[0, iE], [-iE, 0]] (tube chart); diag: eta = diag(E, -E) (ball chart).
enum class EtaConvention { offdiag, diag };

inline const char* to_string(EtaConvention c)
{
    return c == EtaConvention::offdiag ? "offdiag" : "diag";
}

template <typename Scalar = double>
Mat4<Scalar> eta(EtaConvention c)
{
    using C = Complex<Scalar>;
    const Mat2<Scalar> I = identity2<Scalar>();
    const Mat2<Scalar> O = Mat2<Scalar>::Zero();
    if (c == EtaConvention::diag) return from_blocks<Scalar>(I, O, O, -I);
    return from_blocks<Scalar>(O, C(0, 1) * I, C(0, -1) * I, O);
}

template <typename Scalar>
Scalar eta_unitarity_defect(const Mat4<Scalar>& g, EtaConvention c)
{
    const Mat4<Scalar> e = eta<Scalar>(c);
    return (g.adjoint() * e * g - e).cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar algebra_defect(const Mat4<Scalar>& X, EtaConvention c)
{
    const Mat4<Scalar> e = eta<Scalar>(c);
    return std::max((X.adjoint() * e + e * X).cwiseAbs().maxCoeff(), std::abs(X.trace()));
}

/// Orthogonal-ish projection of an arbitrary 4x4 matrix onto su(2,2) in the given chart.
template <typename Scalar>
Mat4<Scalar> project_to_algebra(const Mat4<Scalar>& M, EtaConvention c)
{
    const Mat4<Scalar> e = eta<Scalar>(c);
    // eta is its own inverse in both conventions
    Mat4<Scalar> X = Scalar(0.5) * (M - e * M.adjoint() * e);
    X -= (X.trace() / Scalar(4)) * Mat4<Scalar>::Identity();
    return X;
}

template <typename Scalar = double>
class GroupElement {
public:
    static GroupElement make(const Mat4<Scalar>& g, EtaConvention c, Scalar tol = Scalar(1e-10))
    {
        if (eta_unitarity_defect(g, c) > tol)
            throw ConventionMismatch(std::string("matrix is not eta-unitary in the ") + to_string(c) +
                                     " convention");
        if (std::abs(g.determinant() - Complex<Scalar>(1)) > tol)
            throw ConventionMismatch("determinant differs from 1");
        return GroupElement(g, c);
    }
    /// Skips validation; for results of operations that preserve the invariants by construction.
    static GroupElement trusted(const Mat4<Scalar>& g, EtaConvention c) { return GroupElement(g, c); }
    static GroupElement identity(EtaConvention c) { return GroupElement(Mat4<Scalar>::Identity(), c); }

    const Mat4<Scalar>& matrix() const { return g_; }
    EtaConvention convention() const { return c_; }

    GroupElement operator*(const GroupElement& h) const
    {
        if (h.c_ != c_) throw ConventionMismatch("product of elements in different charts");
        return GroupElement(g_ * h.g_, c_);
    }
    /// eta^{-1} g^dagger eta
    GroupElement inverse() const
    {
        const Mat4<Scalar> e = eta<Scalar>(c_);
        return GroupElement(e * g_.adjoint() * e, c_);
    }

private:
    GroupElement(const Mat4<Scalar>& g, EtaConvention c) : g_(g), c_(c) {}
    Mat4<Scalar> g_;
    EtaConvention c_;
};

template <typename Scalar = double>
class AlgebraElement {
public:
    static AlgebraElement make(const Mat4<Scalar>& X, EtaConvention c, Scalar tol = Scalar(1e-12))
    {
        const Scalar scale = std::max(Scalar(1), X.cwiseAbs().maxCoeff());
        if (algebra_defect(X, c) > tol * scale)
            throw ConventionMismatch(std::string("matrix is not in su(2,2) for the ") + to_string(c) +
                                     " convention");
        return AlgebraElement(X, c);
    }
    static AlgebraElement zero(EtaConvention c) { return AlgebraElement(Mat4<Scalar>::Zero(), c); }

    const Mat4<Scalar>& matrix() const { return X_; }
    EtaConvention convention() const { return c_; }

private:
    AlgebraElement(const Mat4<Scalar>& X, EtaConvention c) : X_(X), c_(c) {}
    Mat4<Scalar> X_;
    EtaConvention c_;
};

template <typename Scalar>
Mat4<Scalar> bracket(const Mat4<Scalar>& X, const Mat4<Scalar>& Y)
{
    return X * Y - Y * X;
}

template <typename Scalar>
GroupElement<Scalar> exp_algebra(const AlgebraElement<Scalar>& X, Scalar t)
{
    const Mat4<Scalar> tX = t * X.matrix();
    Mat4<Scalar> g = tX.exp();
    return GroupElement<Scalar>::trusted(g, X.convention());
}

// ---------------------------------------------------------------------------
// Cayley transform and the chart intertwiner

/// Z = (W - iE)(W + iE)^{-1}
template <typename Scalar>
Mat2<Scalar> cayley(const Mat2<Scalar>& W)
{
    const Complex<Scalar> i(0, 1);
    const Mat2<Scalar> I = identity2<Scalar>();
    return (W - i * I) * checked_inverse<Scalar>(W + i * I, "W + iE is singular");
}

/// W = i(E + Z)(E - Z)^{-1}
template <typename Scalar>
Mat2<Scalar> cayley_inv(const Mat2<Scalar>& Z)
{
    const Complex<Scalar> i(0, 1);
    const Mat2<Scalar> I = identity2<Scalar>();
    return i * (I + Z) * checked_inverse<Scalar>(I - Z, "E - Z is singular");
}

/// K with K^dagger eta_diag K = -eta_offdiag; conjugation by K carries the tube chart to the ball chart,
/// mobius(K g K^{-1}, cayley(W)) = cayley(mobius(g, W)).
template <typename Scalar = double>
Mat4<Scalar> cayley_intertwiner()
{
    using C = Complex<Scalar>;
    const Mat2<Scalar> I = identity2<Scalar>();
    const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
    return r * from_blocks<Scalar>(I, C(0, -1) * I, I, C(0, 1) * I);
}

template <typename Scalar = double>
Mat4<Scalar> cayley_intertwiner_inverse()
{
    using C = Complex<Scalar>;
    const Mat2<Scalar> I = identity2<Scalar>();
    const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
    return r * from_blocks<Scalar>(I, I, C(0, 1) * I, C(0, -1) * I);
}

template <typename Scalar>
Mat4<Scalar> tube_to_ball(const Mat4<Scalar>& M)
{
    return cayley_intertwiner<Scalar>() * M * cayley_intertwiner_inverse<Scalar>();
}

template <typename Scalar>
Mat4<Scalar> ball_to_tube(const Mat4<Scalar>& M)
{
    return cayley_intertwiner_inverse<Scalar>() * M * cayley_intertwiner<Scalar>();
}

template <typename Scalar>
GroupElement<Scalar> to_ball_chart(const GroupElement<Scalar>& g)
{
    if (g.convention() != EtaConvention::offdiag) throw ConventionMismatch("expected a tube-chart element");
    return GroupElement<Scalar>::trusted(tube_to_ball(g.matrix()), EtaConvention::diag);
}

template <typename Scalar>
GroupElement<Scalar> to_tube_chart(const GroupElement<Scalar>& g)
{
    if (g.convention() != EtaConvention::diag) throw ConventionMismatch("expected a ball-chart element");
    return GroupElement<Scalar>::trusted(ball_to_tube(g.matrix()), EtaConvention::offdiag);
}

template <typename Scalar>
AlgebraElement<Scalar> to_ball_chart(const AlgebraElement<Scalar>& X)
{
    if (X.convention() != EtaConvention::offdiag) throw ConventionMismatch("expected a tube-chart element");
    return AlgebraElement<Scalar>::make(tube_to_ball(X.matrix()), EtaConvention::diag, Scalar(1e-10));
}

template <typename Scalar>
AlgebraElement<Scalar> to_tube_chart(const AlgebraElement<Scalar>& X)
{
    if (X.convention() != EtaConvention::diag) throw ConventionMismatch("expected a ball-chart element");
    return AlgebraElement<Scalar>::make(ball_to_tube(X.matrix()), EtaConvention::offdiag, Scalar(1e-10));
}

// ---------------------------------------------------------------------------
// Domains

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> hermitian_eigenvalues(const Mat2<Scalar>& H)
{
    Eigen::SelfAdjointEigenSolver<Mat2<Scalar>> es(Scalar(0.5) * (H + H.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Im W > 0. Eigenvalues within the degeneracy tolerance of zero count as boundary points.
template <typename Scalar>
bool in_tube(const Mat2<Scalar>& W)
{
    return hermitian_eigenvalues<Scalar>(imaginary_part(W)).minCoeff() > Scalar(kDegeneracyTol);
}

/// E - Z^dagger Z > 0
template <typename Scalar>
bool in_domain(const Mat2<Scalar>& Z)
{
    const Mat2<Scalar> H = identity2<Scalar>() - Z.adjoint() * Z;
    return hermitian_eigenvalues<Scalar>(H).minCoeff() > Scalar(kDegeneracyTol);
}

struct PlaneSignature {
    int positive = 0;
    int negative = 0;
    bool degenerate = false;
};

/// Signature of the twistor form restricted to the plane spanned by the columns of [W; E].
template <typename Scalar>
PlaneSignature plane_signature(const Mat2<Scalar>& W)
{
    Eigen::Matrix<Complex<Scalar>, 4, 2> basis;
    basis << W, identity2<Scalar>();
    const Mat2<Scalar> gram = basis.adjoint() * eta<Scalar>(EtaConvention::offdiag) * basis;
    PlaneSignature sig;
    for (Scalar ev : hermitian_eigenvalues<Scalar>(gram)) {
        if (std::abs(ev) < Scalar(kDegeneracyTol))
            sig.degenerate = true;
        else if (ev > 0)
            ++sig.positive;
        else
            ++sig.negative;
    }
    return sig;
}

/// (AZ + B)(CZ + D)^{-1} with the blocks of g.
template <typename Scalar>
Mat2<Scalar> mobius(const Mat4<Scalar>& g, const Mat2<Scalar>& Z)
{
    const Blocks<Scalar> b = blocks_of(g);
    return (b.A * Z + b.B) * checked_inverse<Scalar>(b.C * Z + b.D, "det(CZ + D) vanishes");
}

template <typename Scalar>
Mat2<Scalar> mobius(const GroupElement<Scalar>& g, const Mat2<Scalar>& Z)
{
    return mobius(g.matrix(), Z);
}

/// det(CZ + D) for the blocks of g.
template <typename Scalar>
Complex<Scalar> automorphy_factor(const Mat4<Scalar>& g, const Mat2<Scalar>& Z)
{
    const Blocks<Scalar> b = blocks_of(g);
    return (b.C * Z + b.D).determinant();
}

/// Ball-chart element carrying 0 to Z.
template <typename Scalar>
GroupElement<Scalar> ball_translation(const Mat2<Scalar>& Z)
{
    if (!in_domain(Z)) throw OutsideDomain("ball_translation needs a point of the domain");
    const Mat2<Scalar> I = identity2<Scalar>();
    Eigen::SelfAdjointEigenSolver<Mat2<Scalar>> left(I - Z * Z.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat2<Scalar>> right(I - Z.adjoint() * Z);
    const Mat2<Scalar> L = left.operatorInverseSqrt();
    const Mat2<Scalar> R = right.operatorInverseSqrt();
    return GroupElement<Scalar>::trusted(from_blocks<Scalar>(L, Z * R, Z.adjoint() * L, R), EtaConvention::diag);
}

// ---------------------------------------------------------------------------
// Momentum maps

enum class MomentumMethod { block, projector };

template <typename Scalar>
Mat4<Scalar> momentum_J_lambda(const Mat2<Scalar>& W, Scalar lambda, MomentumMethod method = MomentumMethod::block)
{
    const Complex<Scalar> i(0, 1);
    if (method == MomentumMethod::block) {
        const Mat2<Scalar> X = hermitian_part(W);
        const Mat2<Scalar> Y = imaginary_part(W);
        const Mat2<Scalar> P = lambda * checked_inverse<Scalar>(Y, "W - W^dagger is singular");
        const Mat2<Scalar> Pinv = Y / lambda;
        return from_blocks<Scalar>(X * P, -(X * P * X) - lambda * lambda * Pinv, P, -(P * X));
    }
    Eigen::Matrix<Complex<Scalar>, 4, 2> basis;
    basis << W, identity2<Scalar>();
    const Mat4<Scalar> e = eta<Scalar>(EtaConvention::offdiag);
    const Mat2<Scalar> gram = basis.adjoint() * e * basis;
    const Mat4<Scalar> proj = basis * checked_inverse<Scalar>(gram, "degenerate plane") * basis.adjoint() * e;
    return i * lambda * (Scalar(2) * proj - Mat4<Scalar>::Identity());
}

template <typename Scalar>
Mat4<Scalar> momentum_J0(const Mat2<Scalar>& X, const Mat2<Scalar>& S)
{
    return from_blocks<Scalar>(X * S, -(X * S * X), S, -(S * X));
}

// ---------------------------------------------------------------------------
// Observables

/// All components carry lower indices; metric diag(+,-,-,-).
template <typename Scalar = double>
struct ObservableSet {
    RVec4<Scalar> p = RVec4<Scalar>::Zero();
    RMat4<Scalar> m = RMat4<Scalar>::Zero();
    Scalar d = 0;
    RVec4<Scalar> a = RVec4<Scalar>::Zero();
};

/// The fifteen dual basis matrices in the order p_0..p_3, a_0..a_3, d, m_01, m_02, m_03, m_12, m_13, m_23.
/// Lorentz entries are 2 L*_{mu nu}, the weight they carry in the antisymmetric double sum.
template <typename Scalar = double>
std::array<Mat4<Scalar>, 15> dual_basis()
{
    const Mat2<Scalar> O = Mat2<Scalar>::Zero();
    const Mat2<Scalar> I = identity2<Scalar>();
    std::array<Mat4<Scalar>, 15> out;
    for (int mu = 0; mu < 4; ++mu) {
        out[mu] = from_blocks<Scalar>(O, O, pauli<Scalar>(mu), O);
        out[4 + mu] = from_blocks<Scalar>(O, pauli<Scalar>(mu), O, O);
    }
    out[8] = Scalar(0.5) * from_blocks<Scalar>(I, O, O, -I);
    for (int k = 1; k <= 3; ++k)
        out[8 + k] = from_blocks<Scalar>(pauli<Scalar>(k), O, O, -pauli<Scalar>(k));
    // eps_{k l m} sigma_m for (k,l) = (1,2), (1,3), (2,3)
    out[12] = from_blocks<Scalar>(pauli<Scalar>(3), O, O, pauli<Scalar>(3));
    out[13] = -from_blocks<Scalar>(pauli<Scalar>(2), O, O, pauli<Scalar>(2));
    out[14] = from_blocks<Scalar>(pauli<Scalar>(1), O, O, pauli<Scalar>(1));
    return out;
}

inline constexpr std::array<std::array<int, 2>, 6> kLorentzPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Raw complex coefficients of J against dual_basis(), by least squares.
template <typename Scalar>
Eigen::Matrix<Complex<Scalar>, 15, 1> dual_coefficients(const Mat4<Scalar>& J, Scalar tol = Scalar(1e-9))
{
    const auto basis = dual_basis<Scalar>();
    Eigen::Matrix<Complex<Scalar>, 16, 15> M;
    for (int k = 0; k < 15; ++k) M.col(k) = basis[k].reshaped();
    const Eigen::Matrix<Complex<Scalar>, 16, 1> rhs = J.reshaped();
    const Eigen::Matrix<Complex<Scalar>, 15, 1> c = M.colPivHouseholderQr().solve(rhs);
    const Scalar residual = (M * c - rhs).norm();
    if (residual > tol * std::max(Scalar(1), rhs.norm()))
        throw NotInSpan("matrix is not traceless (residual " + std::to_string(double(residual)) + ")");
    return c;
}

template <typename Scalar>
ObservableSet<Scalar> decompose_su22(const Mat4<Scalar>& J, Scalar tol = Scalar(1e-9))
{
    const auto c = dual_coefficients(J, tol);
    const Complex<Scalar> i(0, 1);
    Eigen::Matrix<Complex<Scalar>, 15, 1> real_coeffs;
    for (int mu = 0; mu < 4; ++mu) {
        real_coeffs(mu) = c(mu);
        real_coeffs(4 + mu) = metric<Scalar>(mu) * c(4 + mu);
    }
    real_coeffs(8) = Scalar(0.5) * c(8);
    for (int k = 0; k < 3; ++k) real_coeffs(9 + k) = c(9 + k);
    for (int k = 0; k < 3; ++k) real_coeffs(12 + k) = -i * c(12 + k);

    const Scalar scale = std::max(Scalar(1), real_coeffs.cwiseAbs().maxCoeff());
    if (real_coeffs.imag().cwiseAbs().maxCoeff() > tol * scale)
        throw NotInSpan("coefficients are not real: matrix is not in the real span of su(2,2)");

    ObservableSet<Scalar> obs;
    for (int mu = 0; mu < 4; ++mu) {
        obs.p(mu) = real_coeffs(mu).real();
        obs.a(mu) = real_coeffs(4 + mu).real();
    }
    obs.d = real_coeffs(8).real();
    for (int k = 0; k < 6; ++k) {
        const auto [mu, nu] = kLorentzPairs[k];
        obs.m(mu, nu) = real_coeffs(9 + k).real();
        obs.m(nu, mu) = -obs.m(mu, nu);
    }
    return obs;
}

/// Inverse of decompose_su22.
template <typename Scalar>
Mat4<Scalar> compose_su22(const ObservableSet<Scalar>& obs)
{
    const auto basis = dual_basis<Scalar>();
    const Complex<Scalar> i(0, 1);
    Mat4<Scalar> J = Mat4<Scalar>::Zero();
    for (int mu = 0; mu < 4; ++mu) {
        J += obs.p(mu) * basis[mu];
        J += metric<Scalar>(mu) * obs.a(mu) * basis[4 + mu];
    }
    J += Scalar(2) * obs.d * basis[8];
    for (int k = 0; k < 6; ++k) {
        const auto [mu, nu] = kLorentzPairs[k];
        const Complex<Scalar> coeff = k < 3 ? Complex<Scalar>(obs.m(mu, nu)) : i * obs.m(mu, nu);
        J += coeff * basis[9 + k];
    }
    return J;
}

namespace detail {

template <typename Scalar>
ObservableSet<Scalar> observables_from(const RVec4<Scalar>& x_up, const RVec4<Scalar>& p_low,
                                       const RVec4<Scalar>& extra_a_up)
{
    ObservableSet<Scalar> obs;
    obs.p = p_low;
    const RVec4<Scalar> x_low = lower_index(x_up);
    const RVec4<Scalar> p_up = lower_index(p_low);
    const Scalar xp = x_up.dot(p_low);
    const Scalar x2 = minkowski(x_up, x_up);
    obs.d = xp;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) obs.m(mu, nu) = x_low(mu) * p_low(nu) - x_low(nu) * p_low(mu);
    const RVec4<Scalar> a_up = Scalar(-2) * xp * x_up + x2 * p_up + extra_a_up;
    obs.a = lower_index(a_up);
    return obs;
}

}  // namespace detail

/// Closed-form observables of the nilpotent model J0(X, S).
template <typename Scalar>
ObservableSet<Scalar> observables_nilpotent(const Mat2<Scalar>& X, const Mat2<Scalar>& S)
{
    const RVec4<Scalar> x = vector_of(X).real();
    const RVec4<Scalar> p = vector_of(S).real();
    return detail::observables_from<Scalar>(x, p, RVec4<Scalar>::Zero());
}

/// Closed-form observables of J_lambda(W); p^mu = lambda y^mu / y^2.
template <typename Scalar>
ObservableSet<Scalar> observables_tube(const Mat2<Scalar>& W, Scalar lambda)
{
    const CVec4<Scalar> w = vector_of(W);
    const RVec4<Scalar> x = w.real();
    const RVec4<Scalar> y = w.imag();
    const Scalar y2 = minkowski(y, y);
    if (std::abs(y2) < Scalar(kDegeneracyTol)) throw OnLightCone("Im w lies on the light cone");
    const RVec4<Scalar> p_up = lambda * y / y2;
    const Scalar p2 = minkowski(p_up, p_up);
    return detail::observables_from<Scalar>(x, lower_index(p_up), -(lambda * lambda / p2) * p_up);
}

// ---------------------------------------------------------------------------
// Acceleration transforms

enum class AccelModel { standard, holomorphic };

template <typename Scalar>
struct PhasePoint {
    Mat2<Scalar> X;
    Mat2<Scalar> P;
};

/// Action of the acceleration [[E, 0], [C, E]] on (X, P). The holomorphic position is
/// [XP + (XPX + lambda^2 P^{-1}) C] P~^{-1}, which tends to X(CX + E)^{-1} as lambda -> 0.
template <typename Scalar>
PhasePoint<Scalar> accel_transform(const Mat2<Scalar>& C, const Mat2<Scalar>& X, const Mat2<Scalar>& P,
                                   AccelModel model, Scalar lambda)
{
    const Mat2<Scalar> I = identity2<Scalar>();
    if (model == AccelModel::standard) {
        const Mat2<Scalar> Xt = X * checked_inverse<Scalar>(C * X + I, "CX + E is singular");
        const Mat2<Scalar> Pt = (C * X + I) * P * (X * C + I);
        return {Xt, Pt};
    }
    const Mat2<Scalar> Pinv = checked_inverse<Scalar>(P, "P is singular");
    const Scalar l2 = lambda * lambda;
    const Mat2<Scalar> Pt = (C * X + I) * P * (X * C + I) + l2 * C * Pinv * C;
    const Mat2<Scalar> upper = X * P + (X * P * X + l2 * Pinv) * C;
    return {upper * checked_inverse<Scalar>(Pt, "transformed P is singular"), Pt};
}

template <typename Scalar = double>
Mat4<Scalar> acceleration_element(const Mat2<Scalar>& C)
{
    const Mat2<Scalar> I = identity2<Scalar>();
    return from_blocks<Scalar>(I, Mat2<Scalar>::Zero(), C, I);
}

// ---------------------------------------------------------------------------
// Poisson bracket on the tube

struct FieldPartials {
    CVec4c d_w = CVec4c::Zero();     // d/dw^mu
    CVec4c d_wbar = CVec4c::Zero();  // d/dwbar^mu
};

using ScalarField = std::function<cplx(const CVec4c& w)>;
using PartialsField = std::function<FieldPartials(const CVec4c& w)>;

/// Wirtinger partials by central differences in the real and imaginary directions.
PartialsField central_partials(ScalarField f, double h = 1e-5);

/// (i / 2 lambda) T^{mu nu} (d_mu f dbar_nu g - d_mu g dbar_nu f),
/// T^{mu nu} = (w - wbar)^2 eta^{mu nu} - 2 (w - wbar)^mu (w - wbar)^nu.
cplx poisson_bracket(const PartialsField& f, const PartialsField& g, const CVec4c& w, double lambda);

/// h_X(w) = Re Tr(J_lambda(W) X) / 2.
ScalarField momentum_component(const Mat4c& X, double lambda);

/// Sign s in {h_X, h_Y} = s h_[X,Y]; calibrated on translation/dilation pairs and frozen.
inline constexpr int kPoissonCommutatorSign = +1;

}  // namespace qmink
