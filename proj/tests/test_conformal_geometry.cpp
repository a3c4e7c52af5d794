#include <doctest.h>

#include "qmink/conformal_geometry.hpp"
#include "test_support.hpp"

using namespace qmink;
using namespace qmink::testing;

namespace {

const cplx I1(0, 1);

double obs_distance(const ObservableSet<double>& a, const ObservableSet<double>& b)
{
    double d = (a.p - b.p).cwiseAbs().maxCoeff();
    d = std::max(d, (a.a - b.a).cwiseAbs().maxCoeff());
    d = std::max(d, (a.m - b.m).cwiseAbs().maxCoeff());
    return std::max(d, std::abs(a.d - b.d));
}

double scale_of(const ObservableSet<double>& a)
{
    return std::max({1.0, a.p.cwiseAbs().maxCoeff(), a.a.cwiseAbs().maxCoeff(), a.m.cwiseAbs().maxCoeff(),
                     std::abs(a.d)});
}

}  // namespace

TEST_CASE("pauli matrices follow the product rule with -i eps")
{
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            Mat2c expected = (a == b ? 1.0 : 0.0) * Mat2c::Identity();
            for (int c = 1; c <= 3; ++c) {
                const int eps = (a - b) * (b - c) * (c - a) / 2;
                expected -= I1 * static_cast<double>(eps) * pauli(c);
            }
            CHECK(max_abs(pauli(a) * pauli(b) - expected) < 1e-15);
        }
}

TEST_CASE("exp_algebra of zero is the identity")
{
    const auto g = exp_algebra(AlgebraElement<double>::zero(EtaConvention::diag), 0.7);
    CHECK(max_abs(g.matrix() - Mat4c::Identity()) == 0.0);
}

TEST_CASE("exp of a translation generator terminates at first order")
{
    const Mat4c X = from_blocks<double>(Mat2c::Zero(), pauli(0), Mat2c::Zero(), Mat2c::Zero());
    const auto g = exp_algebra(AlgebraElement<double>::make(X, EtaConvention::offdiag), 1.0);
    const Mat4c expected = from_blocks<double>(Mat2c::Identity(), pauli(0), Mat2c::Zero(), Mat2c::Identity());
    CHECK(max_abs(g.matrix() - expected) < 1e-14);
    CHECK_NOTHROW(GroupElement<double>::make(g.matrix(), EtaConvention::offdiag));
}

TEST_CASE("exp_algebra preserves eta-unitarity and is a one-parameter group")
{
    for (EtaConvention c : {EtaConvention::diag, EtaConvention::offdiag})
        for (int trial = 0; trial < 20; ++trial) {
            const auto X = random_algebra(c);
            const auto g = exp_algebra(X, 0.3);
            CHECK(eta_unitarity_defect(g.matrix(), c) < 1e-10);
            CHECK(std::abs(g.matrix().determinant() - 1.0) < 1e-10);
            const double t = uniform(), s = uniform();
            const Mat4c lhs = exp_algebra(X, t + s).matrix();
            const Mat4c rhs = exp_algebra(X, t).matrix() * exp_algebra(X, s).matrix();
            CHECK(max_abs(lhs - rhs) < 1e-9);
        }
}

TEST_CASE("GroupElement rejects matrices of the wrong chart")
{
    const auto g = random_group(EtaConvention::offdiag);
    CHECK_THROWS_AS(GroupElement<double>::make(g.matrix(), EtaConvention::diag), ConventionMismatch);
    CHECK_THROWS_AS(GroupElement<double>::make(2.0 * Mat4c::Identity(), EtaConvention::diag), ConventionMismatch);
    CHECK_THROWS_AS(AlgebraElement<double>::make(Mat4c::Identity(), EtaConvention::diag), ConventionMismatch);
}

TEST_CASE("cayley transform examples and inverse")
{
    CHECK(max_abs(cayley<double>(I1 * Mat2c::Identity())) < 1e-15);
    CHECK(max_abs(cayley_inv<double>(Mat2c::Zero()) - I1 * Mat2c::Identity()) < 1e-15);
    for (int trial = 0; trial < 50; ++trial) {
        const Mat2c W = random_tube_point();
        const Mat2c Z = cayley(W);
        CHECK(in_domain(Z));
        CHECK(max_abs(cayley_inv(Z) - W) < 1e-10 * std::max(1.0, max_abs(W)));
    }
    CHECK_THROWS_AS(cayley<double>(-I1 * Mat2c::Identity()), SingularMatrix);
    CHECK_THROWS_AS(cayley_inv<double>(Mat2c::Identity()), SingularMatrix);
}

TEST_CASE("domain membership")
{
    CHECK(in_tube<double>(I1 * Mat2c::Identity()));
    CHECK_FALSE(in_tube(random_hermitian()));
    Mat2c U;
    U << 0, 1, -1, 0;
    CHECK_FALSE(in_domain(U));
    CHECK(in_domain<double>(0.5 * Mat2c::Identity()));
    CHECK_FALSE(in_domain<double>(Mat2c::Identity()));
}

TEST_CASE("plane signature")
{
    auto s = plane_signature<double>(I1 * Mat2c::Identity());
    CHECK(s.positive == 2);
    CHECK(s.negative == 0);
    s = plane_signature<double>(-I1 * Mat2c::Identity());
    CHECK(s.positive == 0);
    CHECK(s.negative == 2);
    s = plane_signature(random_hermitian());
    CHECK(s.degenerate);
    CHECK(s.positive == 0);
    CHECK(s.negative == 0);
}

TEST_CASE("plane signature matches tube membership and is constant on orbits")
{
    for (int trial = 0; trial < 100; ++trial) {
        const Mat2c W = random_matrix(1.5);
        const auto s = plane_signature(W);
        CHECK((s.positive == 2) == in_tube(W));
        const auto g = random_group(EtaConvention::offdiag, 0.3);
        const auto t = plane_signature(mobius(g, W));
        CHECK(t.positive == s.positive);
        CHECK(t.negative == s.negative);
    }
}

TEST_CASE("mobius action")
{
    const Mat2c Z = random_in_ball(0.9);
    CHECK(max_abs(mobius(GroupElement<double>::identity(EtaConvention::diag), Z) - Z) < 1e-15);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_group(EtaConvention::diag);
        const auto h = random_group(EtaConvention::diag);
        const Mat2c Z = random_in_ball(0.95);
        CHECK(in_domain(mobius(g, Z)));
        CHECK(max_abs(mobius(g * h, Z) - mobius(g, mobius(h, Z))) < 1e-9);
    }
}

TEST_CASE("mobius of a ball-chart translation at the origin is B D^-1")
{
    const Mat4c X = tube_to_ball(from_blocks<double>(Mat2c::Zero(), pauli(1), Mat2c::Zero(), Mat2c::Zero()));
    const auto g = exp_algebra(AlgebraElement<double>::make(X, EtaConvention::diag), 0.4);
    const auto b = blocks_of(g.matrix());
    CHECK(max_abs(mobius<double>(g, Mat2c::Zero()) - b.B * b.D.inverse()) < 1e-14);
}

TEST_CASE("the cayley intertwiner relates the two charts")
{
    const Mat4c K = cayley_intertwiner<double>();
    CHECK(max_abs(K * cayley_intertwiner_inverse<double>() - Mat4c::Identity()) < 1e-15);
    CHECK(max_abs(K.adjoint() * eta<double>(EtaConvention::diag) * K + eta<double>(EtaConvention::offdiag)) < 1e-15);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_group(EtaConvention::offdiag);
        const Mat2c W = random_tube_point();
        const auto gb = to_ball_chart(g);
        CHECK(eta_unitarity_defect(gb.matrix(), EtaConvention::diag) < 1e-9);
        CHECK(max_abs(mobius(gb, cayley(W)) - cayley(mobius(g, W))) < 1e-9);
    }
}

TEST_CASE("ball_translation carries the origin to Z")
{
    for (int trial = 0; trial < 20; ++trial) {
        const Mat2c Z = random_in_ball(0.9);
        const auto g = ball_translation(Z);
        CHECK(eta_unitarity_defect(g.matrix(), EtaConvention::diag) < 1e-10);
        CHECK(max_abs(mobius<double>(g, Mat2c::Zero()) - Z) < 1e-12);
    }
}

TEST_CASE("J_lambda at iE")
{
    const double lambda = 3.5;
    const Mat4c J = momentum_J_lambda<double>(I1 * Mat2c::Identity(), lambda);
    const Mat4c expected = from_blocks<double>(Mat2c::Zero(), -lambda * pauli(0), lambda * pauli(0), Mat2c::Zero());
    CHECK(max_abs(J - expected) < 1e-14);
}

TEST_CASE("J_lambda properties")
{
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = uniform(0.5, 6.0);
        const Mat2c W = random_tube_point();
        const Mat4c J = momentum_J_lambda(W, lambda);
        const Mat4c Jp = momentum_J_lambda(W, lambda, MomentumMethod::projector);
        const double scale = std::max(1.0, max_abs(J));
        CHECK(max_abs(J - Jp) < 1e-9 * scale);
        CHECK(max_abs(J * J + lambda * lambda * Mat4c::Identity()) < 1e-9 * scale * scale);
        CHECK(std::abs(J.trace()) < 1e-10 * scale);
        Eigen::ComplexEigenSolver<Mat4c> es(J);
        int plus = 0, minus = 0;
        for (int k = 0; k < 4; ++k) {
            if (std::abs(es.eigenvalues()(k) - cplx(0, lambda)) < 1e-6 * scale) ++plus;
            if (std::abs(es.eigenvalues()(k) + cplx(0, lambda)) < 1e-6 * scale) ++minus;
        }
        CHECK(plus == 2);
        CHECK(minus == 2);
        const auto g = random_group(EtaConvention::offdiag, 0.3);
        const Mat4c lhs = momentum_J_lambda(mobius(g, W), lambda);
        const Mat4c rhs = g.matrix() * J * g.inverse().matrix();
        CHECK(max_abs(lhs - rhs) < 1e-8 * std::max(1.0, max_abs(rhs)));
    }
}

TEST_CASE("J0 examples and rank")
{
    const Mat2c X = random_hermitian();
    CHECK(max_abs(momentum_J0<double>(X, Mat2c::Zero())) == 0.0);
    const Mat4c J = momentum_J0<double>(Mat2c::Zero(), pauli(0));
    CHECK(max_abs(J - from_blocks<double>(Mat2c::Zero(), Mat2c::Zero(), pauli(0), Mat2c::Zero())) == 0.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat4c J0 = momentum_J0(random_hermitian(), random_hermitian());
        Eigen::FullPivLU<Mat4c> lu(J0);
        lu.setThreshold(1e-10);
        CHECK(lu.rank() <= 2);
        CHECK(max_abs(J0 * J0) < 1e-10 * std::max(1.0, max_abs(J0) * max_abs(J0)));
    }
}

TEST_CASE("decompose_su22 basis elements and the momentum map at iE")
{
    const auto basis = dual_basis<double>();
    const auto p0 = decompose_su22(basis[0]);
    CHECK(p0.p(0) == doctest::Approx(1.0));
    CHECK(p0.p.tail<3>().norm() < 1e-14);
    CHECK(p0.a.norm() < 1e-14);
    CHECK(p0.m.norm() < 1e-14);
    CHECK(std::abs(p0.d) < 1e-14);

    const double lambda = 2.5;
    const auto obs = decompose_su22(momentum_J_lambda<double>(I1 * Mat2c::Identity(), lambda));
    CHECK(obs.p(0) == doctest::Approx(lambda));
    CHECK(obs.p.tail<3>().norm() < 1e-12);
    CHECK(obs.a(0) == doctest::Approx(-lambda));
    CHECK(obs.a.tail<3>().norm() < 1e-12);
    CHECK(std::abs(obs.d) < 1e-12);
    CHECK(obs.m.norm() < 1e-12);
}

TEST_CASE("decompose_su22 rejects matrices outside the span")
{
    CHECK_THROWS_AS(decompose_su22<double>(Mat4c::Identity()), NotInSpan);
    // traceless but complex coefficients
    CHECK_THROWS_AS(decompose_su22<double>(I1 * dual_basis<double>()[0]), NotInSpan);
}

TEST_CASE("decompose and compose are inverse")
{
    for (int trial = 0; trial < 20; ++trial) {
        const Mat4c J = random_algebra(EtaConvention::offdiag).matrix();
        const auto obs = decompose_su22(J);
        CHECK(max_abs(compose_su22(obs) - J) < 1e-12);
        CHECK((obs.m + obs.m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("observables: momentum maps agree with closed forms")
{
    for (int trial = 0; trial < 100; ++trial) {
        const Mat2c X = random_hermitian(), S = random_hermitian();
        const auto a = decompose_su22(momentum_J0(X, S));
        const auto b = observables_nilpotent(X, S);
        CHECK(obs_distance(a, b) < 1e-10 * scale_of(b));

        const double lambda = uniform(0.5, 8.0);
        const Mat2c W = random_tube_point();
        const auto c = decompose_su22(momentum_J_lambda(W, lambda));
        const auto d = observables_tube(W, lambda);
        CHECK(obs_distance(c, d) < 1e-9 * scale_of(d));
        CHECK(d.p(0) > 0);
        CHECK(minkowski(d.p, d.p) > 0);
    }
}

TEST_CASE("observables at special points")
{
    const auto t = observables_tube<double>(I1 * Mat2c::Identity(), 3.0);
    CHECK(t.p(0) == doctest::Approx(3.0));
    CHECK(minkowski(t.p, t.p) == doctest::Approx(9.0));
    const Mat2c S = random_hermitian();
    const auto n = observables_nilpotent<double>(Mat2c::Zero(), S);
    CHECK(n.m.norm() == 0.0);
    CHECK(n.d == 0.0);
    CHECK(n.a.norm() == 0.0);
    CHECK((n.p - vector_of(S).real()).norm() < 1e-15);
    // Im W null
    Mat2c W = random_hermitian() + I1 * (pauli(0) + pauli(3));
    CHECK_THROWS_AS(observables_tube(W, 1.0), OnLightCone);
}

TEST_CASE("acceleration transform")
{
    const Mat2c X = random_hermitian(), P = random_positive();
    auto r = accel_transform<double>(Mat2c::Zero(), X, P, AccelModel::holomorphic, 2.0);
    CHECK(max_abs(r.X - X) < 1e-12);
    CHECK(max_abs(r.P - P) < 1e-12);
    r = accel_transform<double>(pauli(0), Mat2c::Zero(), P, AccelModel::standard, 0.0);
    CHECK(max_abs(r.X) == 0.0);
    CHECK(max_abs(r.P - P) < 1e-15);

    for (int trial = 0; trial < 30; ++trial) {
        const Mat2c C = random_hermitian(0.3);
        const Mat2c X = random_hermitian();
        const Mat2c Y = random_positive();
        const double lambda = uniform(0.5, 4.0);
        const Mat2c P = lambda * Y.inverse();
        const auto h = accel_transform(C, X, P, AccelModel::holomorphic, lambda);
        const Mat2c Wt = mobius(acceleration_element(C), Mat2c(X + I1 * Y));
        CHECK(max_abs(h.X - hermitian_part(Wt)) < 1e-8 * std::max(1.0, max_abs(h.X)));
        CHECK(max_abs(h.P - lambda * imaginary_part(Wt).inverse()) < 1e-8 * std::max(1.0, max_abs(h.P)));

        const auto small = accel_transform(C, X, P, AccelModel::holomorphic, 1e-6);
        const auto std_ = accel_transform(C, X, P, AccelModel::standard, 1e-6);
        CHECK(max_abs(small.X - std_.X) < 1e-4);
        CHECK(max_abs(small.P - std_.P) < 1e-4);
    }
}

TEST_CASE("standard acceleration is the conjugation of the nilpotent momentum map")
{
    const Mat2c C = random_hermitian(0.3), X = random_hermitian(), S = random_hermitian();
    const Mat4c g = acceleration_element(C);
    const Mat4c J = g * momentum_J0(X, S) * g.inverse();
    const auto r = accel_transform(C, X, S, AccelModel::standard, 0.0);
    CHECK(max_abs(J - momentum_J0(r.X, r.P)) < 1e-10);
}

TEST_CASE("poisson bracket is antisymmetric and vanishes on itself")
{
    const CVec4c w = vector_of(random_tube_point());
    const auto f = central_partials([](const CVec4c& v) { return v(0) * std::conj(v(1)) + v(2); });
    const auto g = central_partials([](const CVec4c& v) { return std::norm(v(3)) + v(0) * v(1); });
    CHECK(std::abs(poisson_bracket(f, f, w, 2.0)) == 0.0);
    CHECK(poisson_bracket(f, g, w, 2.0) == -poisson_bracket(g, f, w, 2.0));
}

TEST_CASE("momenta Poisson-commute")
{
    const double lambda = 3.0;
    for (int trial = 0; trial < 10; ++trial) {
        const CVec4c w = vector_of(random_tube_point());
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                const auto pm = central_partials([=](const CVec4c& v) {
                    return cplx(observables_tube(matrix_of(v), lambda).p(mu));
                });
                const auto pn = central_partials([=](const CVec4c& v) {
                    return cplx(observables_tube(matrix_of(v), lambda).p(nu));
                });
                CHECK(std::abs(poisson_bracket(pm, pn, w, lambda)) < 1e-8);
            }
    }
}

TEST_CASE("poisson brackets of momentum components reproduce matrix commutators")
{
    for (int trial = 0; trial < 10; ++trial) {
        const double lambda = uniform(1.0, 4.0);
        const Mat4c X = random_algebra(EtaConvention::offdiag).matrix();
        const Mat4c Y = random_algebra(EtaConvention::offdiag).matrix();
        const Mat2c W = random_hermitian() + I1 * (random_positive() + Mat2c::Identity());
        const CVec4c w = vector_of(W);
        const cplx lhs = poisson_bracket(central_partials(momentum_component(X, lambda)),
                                         central_partials(momentum_component(Y, lambda)), w, lambda);
        const cplx rhs = static_cast<double>(kPoissonCommutatorSign) * momentum_component(bracket(X, Y), lambda)(w);
        CHECK(std::abs(lhs - rhs) < 1e-5 * std::max(1.0, std::abs(rhs)));
    }
}
