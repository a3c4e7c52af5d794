#include <doctest.h>

#include <cmath>

#include "qmink/coherent_states.hpp"
#include "qmink/ladder_operators.hpp"
#include "test_support.hpp"

using namespace qmink;
using namespace qmink::testing;

namespace {

VectorXc unit(const FockBasis& basis, const BasisIndex& idx)
{
    VectorXc e = VectorXc::Zero(static_cast<Eigen::Index>(basis.size()));
    e(static_cast<Eigen::Index>(basis.position(idx))) = 1.0;
    return e;
}

VectorXc random_vector(Eigen::Index n)
{
    VectorXc v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = cplx(gaussian(), gaussian());
    return v;
}

}  // namespace

TEST_CASE("annihilation examples")
{
    const int lambda = 5;
    const Truncation t(4);
    const FockBasis basis(t);
    const auto a11 = annihilation(lambda, 1, 1, t);
    const VectorXc vac = unit(basis, {0, 0, 0, 0});
    CHECK(apply_operator(a11, vac).norm() == 0.0);

    const VectorXc r = apply_operator(a11, unit(basis, {1, 0, 1, 1}));
    CHECK(std::abs(r(0) - 1.0 / std::sqrt(lambda)) < 1e-15);
    CHECK((r - r(0) * vac).norm() < 1e-15);

    // the only target of |j=0, m=1> under a11 is |2j=1, m=0, -1/2, -1/2>
    const VectorXc s = apply_operator(a11, unit(basis, {0, 1, 0, 0}));
    const VectorXc target = unit(basis, {1, 0, -1, -1});
    const cplx c = target.dot(s);
    CHECK((s - c * target).norm() < 1e-15);
    CHECK(std::abs(c - std::sqrt(1.0 / (2.0 * (lambda - 1)))) < 1e-14);

    const VectorXc up = apply_operator(adjoint(a11), vac);
    CHECK((up - unit(basis, {1, 0, 1, 1}) / std::sqrt(lambda)).norm() < 1e-15);
}

TEST_CASE("each basis vector has at most two images")
{
    for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l) {
            const auto a = annihilation(6, k, l, Truncation(6));
            for (Eigen::Index col = 0; col < a.dim(); ++col) {
                int nnz = 0;
                for (SparseMatrixC::InnerIterator it(a.matrix(), col); it; ++it)
                    if (it.value() != cplx(0)) ++nnz;
                CHECK(nnz <= 2);
            }
        }
}

TEST_CASE("creation operators act as multiplication by the coordinates")
{
    // z_kl Delta_b(Z) = sum_a (a_kl^dagger)_{ab} Delta_a(Z) whenever deg b < max_degree
    const int lambda = 5;
    const Truncation t(7);
    const LadderAlgebra alg(lambda, t);
    const auto& basis = alg.basis();
    for (int trial = 0; trial < 4; ++trial) {
        const Mat2c Z = random_matrix();
        const VectorXc d = delta_vector(lambda, basis, Z);
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l) {
                const MatrixXc up = alg.a_dag(k, l).dense();
                const VectorXc lhs = Z(k - 1, l - 1) * d;
                const VectorXc rhs = up.transpose() * d;
                for (std::size_t b = 0; b < basis.size(); ++b) {
                    if (basis[b].degree() >= t.max_degree) continue;
                    const auto e = static_cast<Eigen::Index>(b);
                    CHECK(std::abs(lhs(e) - rhs(e)) < 1e-11 * std::max(1.0, std::abs(lhs(e))));
                }
            }
    }
}

TEST_CASE("adjoint and sparse algebra")
{
    const Truncation t(5);
    const auto a = annihilation(6, 1, 2, t);
    const auto ad = adjoint(a);
    CHECK((adjoint(ad).dense() - a.dense()).norm() == 0.0);
    CHECK((ad.dense() - a.dense().adjoint()).norm() == 0.0);
    CHECK(commutator_matrix(a, a).dense().norm() == 0.0);
    for (int trial = 0; trial < 10; ++trial) {
        const VectorXc u = random_vector(a.dim()), v = random_vector(a.dim());
        const cplx lhs = u.dot(apply_operator(a, v));
        const cplx rhs = std::conj(v.dot(apply_operator(ad, u)));
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
    }
    CHECK((product(a, ad).dense() - a.dense() * ad.dense()).norm() < 1e-13);
    CHECK((sum(a, ad, 2.0).dense() - (a.dense() + 2.0 * ad.dense())).norm() < 1e-13);
    CHECK((identity_operator(6, t).dense() - MatrixXc::Identity(a.dim(), a.dim())).norm() == 0.0);
    CHECK_THROWS_AS(commutator_matrix(a, annihilation(6, 1, 2, Truncation(4))), TruncationMismatch);
    CHECK_THROWS_AS(commutator_matrix(a, annihilation(7, 1, 2, t)), TruncationMismatch);
}

TEST_CASE("annihilators commute with each other away from the cutoff")
{
    const Truncation t(6);
    const LadderAlgebra alg(5, t);
    const auto& basis = alg.basis();
    for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q) {
            const MatrixXc c = commutator_matrix(alg.a(p / 2 + 1, p % 2 + 1), alg.a(q / 2 + 1, q % 2 + 1)).dense();
            CHECK(c.norm() < 1e-12);
            const MatrixXc cd =
                commutator_matrix(alg.a_dag(p / 2 + 1, p % 2 + 1), alg.a_dag(q / 2 + 1, q % 2 + 1)).dense();
            for (std::size_t b = 0; b < basis.size(); ++b)
                if (is_interior(basis[b], t, 2)) CHECK(cd.col(static_cast<Eigen::Index>(b)).norm() < 1e-12);
        }
}

TEST_CASE("coherent vectors are approximate eigenvectors")
{
    auto r0 = eigen_residual(5, Mat2c::Zero(), Truncation(6));
    for (double r : r0) CHECK(r == 0.0);
    CHECK_THROWS_AS(eigen_residual(5, Mat2c(Mat2c::Identity()), Truncation(4)), OutsideDomain);

    for (int trial = 0; trial < 3; ++trial) {
        const Mat2c Z = random_in_ball(0.5);
        std::array<double, 4> prev{1e300, 1e300, 1e300, 1e300};
        for (int n = 4; n <= 16; n += 4) {
            const auto res = eigen_residual(5, Z, Truncation(n));
            for (int k = 0; k < 4; ++k) {
                CHECK(res[k] <= prev[k] * (1 + 1e-12));
                prev[k] = res[k];
            }
        }
    }
    const Mat2c Z = random_in_ball(0.5);
    const auto res = eigen_residual(5, Z, Truncation(20));
    for (double r : res) CHECK(r < 1e-5);
}

TEST_CASE("commutator [a11^dagger, a11]")
{
    for (int lambda : {4, 5, 7})
        CHECK(comm_a11_diag_closed(lambda, {0, 0, 0, 0}) == doctest::Approx(-1.0 / lambda).epsilon(1e-14));

    for (int lambda : {4, 5, 8}) {
        const Truncation t(8);
        const LadderAlgebra alg(lambda, t);
        const MatrixXc c = commutator_matrix(alg.a_dag(1, 1), alg.a(1, 1)).dense();
        const auto& basis = alg.basis();
        CHECK(std::abs(c(0, 0) + 1.0 / lambda) < 1e-14);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (!is_interior(basis[b], t, 2)) continue;
            const auto e = static_cast<Eigen::Index>(b);
            CHECK(std::abs(c(e, e) - comm_a11_diag_closed(lambda, basis[b])) < 1e-12);
            double off = 0;
            for (Eigen::Index r = 0; r < c.rows(); ++r)
                if (r != e) off = std::max(off, std::abs(c(r, e)));
            CHECK(off < 1e-12);
        }
    }
}

TEST_CASE("commutator diagonal tends to zero along m")
{
    const int lambda = 5;
    double prev = 1e300;
    for (int m = 10; m <= 10000; m *= 10) {
        const double v = std::abs(comm_a11_diag_closed(lambda, {2, m, 0, 0}));
        CHECK(v < prev);
        // leading behaviour ~ 1/m^2 up to bounded factors
        CHECK(v * m * m < 10.0);
        prev = v;
    }
}

TEST_CASE("trace defect in both orderings")
{
    for (int lambda : {4, 5, 6}) {
        CHECK(trace_defect_diag_closed(lambda, {0, 0, 0, 0}) ==
              doctest::Approx(2.0 - 4.0 / lambda).epsilon(1e-14));
        const Truncation t(8);
        const LadderAlgebra alg(lambda, t);
        const MatrixXc anti = trace_defect_matrix(alg, Ordering::antinormal).dense();
        const MatrixXc normal = trace_defect_matrix(alg, Ordering::normal).dense();
        CHECK(std::abs(anti(0, 0) - (2.0 - 4.0 / lambda)) < 1e-14);
        CHECK(std::abs(normal(0, 0) - 2.0) == 0.0);
        const auto& basis = alg.basis();
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (!is_interior(basis[b], t, 2)) continue;
            const auto e = static_cast<Eigen::Index>(b);
            CHECK(std::abs(anti(e, e) - trace_defect_diag_closed(lambda, basis[b])) < 1e-12);
            CHECK((anti.col(e).norm() - std::abs(anti(e, e))) < 1e-12);
        }
    }
}

TEST_CASE("sigma_a")
{
    const auto s = sigma_a(4, 5);
    REQUIRE(s.size() == 7);
    CHECK(s[0] == doctest::Approx(2.0 / 3.0));
    CHECK(s.back() == 0.0);
    for (int m = 0; m <= 5; ++m) CHECK(s[m] == doctest::Approx(2.0 / (m + 3)));

    // the trace defect approaches sigma_a as j grows, with relative error (m+l-2)/(m+2j+l)
    for (int lambda : {4, 6})
        for (int m : {0, 1, 3}) {
            const double target = sigma_a(lambda, m)[m];
            for (int two_j : {10, 60, 120, 1000}) {
                const double v = trace_defect_diag_closed(lambda, {two_j, m, 0, 0});
                const double rel = (v - target) / target;
                CHECK(rel == doctest::Approx(double(m + lambda - 2) / (m + two_j + lambda)).epsilon(1e-12));
            }
        }
    const double at120 = trace_defect_diag_closed(4, {120, 0, 0, 0});
    CHECK(std::abs(at120 - sigma_a(4, 0)[0]) / sigma_a(4, 0)[0] < 0.02);
}

TEST_CASE("basis vectors are created from the vacuum")
{
    const int lambda = 5;
    const Truncation t(8);
    const LadderAlgebra alg(lambda, t);
    const auto& basis = alg.basis();
    CHECK((basis_from_vacuum(alg, {0, 0, 0, 0}) - unit(basis, {0, 0, 0, 0})).norm() == 0.0);
    const VectorXc one = basis_from_vacuum(alg, {1, 0, 1, 1});
    CHECK((one - std::sqrt(double(lambda)) * apply_operator(alg.a_dag(1, 1), unit(basis, {0, 0, 0, 0}))).norm() < 1e-14);
    for (const auto& idx : basis.indices()) {
        if (idx.degree() > 3) break;
        CHECK((basis_from_vacuum(alg, idx) - unit(basis, idx)).norm() < 1e-9);
    }
    CHECK_THROWS_AS(basis_from_vacuum(lambda, {4, 1, 0, 0}, Truncation(4)), TruncationTooSmall);
}
