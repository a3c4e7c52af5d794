#include "qmink/ladder_operators.hpp"

#include <cmath>

namespace qmink {

namespace {

void require_compatible(const SparseOperator& A, const SparseOperator& B)
{
    if (A.lambda() != B.lambda() || !(A.truncation() == B.truncation()))
        throw TruncationMismatch("operators belong to different (lambda, truncation) pairs");
}

}  // namespace

SparseOperator::SparseOperator(int lambda, const Truncation& trunc, SparseMatrixC matrix)
    : lambda_(lambda), trunc_(trunc), m_(std::move(matrix))
{
    m_.makeCompressed();
}

SparseOperator annihilation(int lambda, int k, int l, const FockBasis& basis)
{
    require_lambda(lambda);
    if (k < 1 || k > 2 || l < 1 || l > 2) throw InvalidParameter("ladder indices must be 1 or 2");
    // doubled shifts of (j1, j2) and the sign of the j + 1/2 branch
    const int da = (k == 1) ? -1 : 1;
    const int db = (l == 1) ? -1 : 1;
    const double sign = (k == l) ? 1.0 : -1.0;
    const double lam = lambda;

    std::vector<Eigen::Triplet<cplx>> trips;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const BasisIndex& s = basis[col];
        const double j = s.two_j / 2.0, j1 = s.two_j1 / 2.0, j2 = s.two_j2 / 2.0;
        const double m = s.m;

        const BasisIndex up{s.two_j + 1, s.m - 1, s.two_j1 + da, s.two_j2 + db};
        if (up.valid()) {
            if (const auto row = basis.find(up)) {
                const double num = (j + da * j1 + 1) * (j + db * j2 + 1) * m;
                const double den = (2 * j + 1) * (2 * j + 2) * (m + lam - 2);
                trips.emplace_back(static_cast<int>(*row), static_cast<int>(col), sign * std::sqrt(num / den));
            }
        }
        const BasisIndex down{s.two_j - 1, s.m, s.two_j1 + da, s.two_j2 + db};
        if (down.valid()) {
            if (const auto row = basis.find(down)) {
                const double num = (j - da * j1) * (j - db * j2) * (m + 2 * j + 1);
                const double den = (m + 2 * j + lam - 1) * (2 * j) * (2 * j + 1);
                trips.emplace_back(static_cast<int>(*row), static_cast<int>(col), std::sqrt(num / den));
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    SparseMatrixC M(n, n);
    M.setFromTriplets(trips.begin(), trips.end());
    return SparseOperator(lambda, basis.truncation(), std::move(M));
}

SparseOperator annihilation(int lambda, int k, int l, const Truncation& trunc)
{
    return annihilation(lambda, k, l, FockBasis(trunc));
}

SparseOperator adjoint(const SparseOperator& op)
{
    return SparseOperator(op.lambda(), op.truncation(), SparseMatrixC(op.matrix().adjoint()));
}

VectorXc apply_operator(const SparseOperator& op, const VectorXc& v)
{
    if (v.size() != op.dim()) throw TruncationMismatch("vector length differs from operator dimension");
    return op.matrix() * v;
}

SparseOperator product(const SparseOperator& A, const SparseOperator& B)
{
    require_compatible(A, B);
    return SparseOperator(A.lambda(), A.truncation(), SparseMatrixC(A.matrix() * B.matrix()));
}

SparseOperator sum(const SparseOperator& A, const SparseOperator& B, cplx beta)
{
    require_compatible(A, B);
    return SparseOperator(A.lambda(), A.truncation(), SparseMatrixC(A.matrix() + beta * B.matrix()));
}

SparseOperator commutator_matrix(const SparseOperator& A, const SparseOperator& B)
{
    require_compatible(A, B);
    SparseMatrixC C = A.matrix() * B.matrix() - B.matrix() * A.matrix();
    return SparseOperator(A.lambda(), A.truncation(), std::move(C));
}

SparseOperator identity_operator(int lambda, const Truncation& trunc)
{
    const auto n = static_cast<Eigen::Index>(truncated_dimension(trunc));
    SparseMatrixC I(n, n);
    I.setIdentity();
    return SparseOperator(lambda, trunc, std::move(I));
}

LadderAlgebra::LadderAlgebra(int lambda, const Truncation& trunc) : lambda_(lambda), basis_(trunc)
{
    for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l) {
            ops_.push_back(annihilation(lambda, k, l, basis_));
            adj_.push_back(adjoint(ops_.back()));
        }
}

std::size_t LadderAlgebra::slot(int k, int l)
{
    if (k < 1 || k > 2 || l < 1 || l > 2) throw InvalidParameter("ladder indices must be 1 or 2");
    return static_cast<std::size_t>(2 * (k - 1) + (l - 1));
}

std::array<double, 4> eigen_residual(const LadderAlgebra& alg, const Mat2c& Z)
{
    const CoherentVector coh = coherent_amplitudes(alg.lambda(), Z, alg.basis());
    const double norm = coh.amplitudes.norm();
    std::array<double, 4> out{};
    for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l) {
            const VectorXc r = apply_operator(alg.a(k, l), coh.amplitudes) - Z(k - 1, l - 1) * coh.amplitudes;
            out[static_cast<std::size_t>(2 * (k - 1) + (l - 1))] = r.norm() / norm;
        }
    return out;
}

std::array<double, 4> eigen_residual(int lambda, const Mat2c& Z, const Truncation& trunc)
{
    if (!in_domain(Z)) throw OutsideDomain("eigen_residual needs a point of the domain");
    return eigen_residual(LadderAlgebra(lambda, trunc), Z);
}

double comm_a11_diag_closed(int lambda, const BasisIndex& idx)
{
    require_lambda(lambda);
    const double l = lambda, m = idx.m, j = idx.two_j / 2.0, j1 = idx.two_j1 / 2.0, j2 = idx.two_j2 / 2.0;
    const double num = (l - 2) * ((j1 + j2) * (m + 2 * j + l) - (m + 2 * j + l) * (m + l - 2) -
                                  (j + j1 + 1) * (j + j2 + 1));
    const double den = (m + 2 * j + l - 1) * (m + 2 * j + l) * (m + l - 2) * (m + l - 1);
    return num / den;
}

double trace_defect_diag_closed(int lambda, const BasisIndex& idx)
{
    require_lambda(lambda);
    const double l = lambda, m = idx.m, j = idx.two_j / 2.0;
    return 2 * (l - 2) * (m + j + l - 1) / ((m + l - 1) * (m + 2 * j + l));
}

SparseOperator trace_defect_matrix(const LadderAlgebra& alg, Ordering ordering)
{
    const Truncation& trunc = alg.basis().truncation();
    SparseMatrixC T = 2.0 * identity_operator(alg.lambda(), trunc).matrix();
    for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l) {
            const SparseMatrixC& a = alg.a(k, l).matrix();
            const SparseMatrixC& ad = alg.a_dag(k, l).matrix();
            if (ordering == Ordering::normal)
                T -= ad * a;
            else
                T -= a * ad;
        }
    return SparseOperator(alg.lambda(), trunc, std::move(T));
}

SparseOperator trace_defect_matrix(int lambda, const Truncation& trunc, Ordering ordering)
{
    return trace_defect_matrix(LadderAlgebra(lambda, trunc), ordering);
}

std::vector<double> sigma_a(int lambda, int m_max)
{
    require_lambda(lambda);
    if (m_max < 0) throw InvalidParameter("m_max must be nonnegative");
    std::vector<double> out;
    for (int m = 0; m <= m_max; ++m) out.push_back((lambda - 2.0) / (m + lambda - 1.0));
    out.push_back(0.0);
    return out;
}

VectorXc basis_from_vacuum(const LadderAlgebra& alg, const BasisIndex& idx)
{
    const int max_degree = alg.basis().truncation().max_degree;
    if (idx.degree() > max_degree)
        throw TruncationTooSmall("index " + to_string(idx) + " exceeds max_degree " + std::to_string(max_degree));
    const auto n = static_cast<Eigen::Index>(alg.basis().size());
    VectorXc out = VectorXc::Zero(n);
    for (const Monomial& term : delta_terms(alg.lambda(), idx)) {
        VectorXc v = VectorXc::Zero(n);
        v(0) = 1.0;
        for (int slot = 3; slot >= 0; --slot) {
            const SparseOperator& creator = alg.a_dag(slot / 2 + 1, slot % 2 + 1);
            for (int e = 0; e < term.exponents[static_cast<std::size_t>(slot)]; ++e) v = apply_operator(creator, v);
        }
        out += term.coeff * v;
    }
    return out;
}

VectorXc basis_from_vacuum(int lambda, const BasisIndex& idx, const Truncation& trunc)
{
    return basis_from_vacuum(LadderAlgebra(lambda, trunc), idx);
}

}  // namespace qmink
