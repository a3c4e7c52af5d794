#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "qmink/coherent_states.hpp"
#include "qmink/fock_basis.hpp"
#include "qmink/types.hpp"

namespace qmink {

using SparseMatrixC = Eigen::SparseMatrix<cplx>;

/// Sparse matrix in the orthonormal basis of a truncated space.
class SparseOperator {
public:
    SparseOperator(int lambda, const Truncation& trunc, SparseMatrixC matrix);

    int lambda() const { return lambda_; }
    const Truncation& truncation() const { return trunc_; }
    const SparseMatrixC& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    cplx entry(Eigen::Index row, Eigen::Index col) const { return m_.coeff(row, col); }
    MatrixXc dense() const { return MatrixXc(m_); }

private:
    int lambda_;
    Truncation trunc_;
    SparseMatrixC m_;
};

/// a_kl, k, l in {1, 2}.
SparseOperator annihilation(int lambda, int k, int l, const Truncation& trunc);
SparseOperator annihilation(int lambda, int k, int l, const FockBasis& basis);

SparseOperator adjoint(const SparseOperator& op);
VectorXc apply_operator(const SparseOperator& op, const VectorXc& v);
SparseOperator product(const SparseOperator& A, const SparseOperator& B);
SparseOperator sum(const SparseOperator& A, const SparseOperator& B, cplx beta = 1.0);
/// AB - BA
SparseOperator commutator_matrix(const SparseOperator& A, const SparseOperator& B);
SparseOperator identity_operator(int lambda, const Truncation& trunc);

/// The four annihilators and their conjugate transposes for one (lambda, truncation), built once.
class LadderAlgebra {
public:
    LadderAlgebra(int lambda, const Truncation& trunc);

    int lambda() const { return lambda_; }
    const FockBasis& basis() const { return basis_; }
    /// slot = 2(k-1) + (l-1)
    const SparseOperator& a(int k, int l) const { return ops_[slot(k, l)]; }
    const SparseOperator& a_dag(int k, int l) const { return adj_[slot(k, l)]; }

private:
    static std::size_t slot(int k, int l);
    int lambda_;
    FockBasis basis_;
    std::vector<SparseOperator> ops_;
    std::vector<SparseOperator> adj_;
};

/// ||(a_kl - z_kl) |Z>|| / |||Z>|| in the order 11, 12, 21, 22.
std::array<double, 4> eigen_residual(int lambda, const Mat2c& Z, const Truncation& trunc);
std::array<double, 4> eigen_residual(const LadderAlgebra& alg, const Mat2c& Z);

/// Diagonal of [a11^dagger, a11] in closed form.
double comm_a11_diag_closed(int lambda, const BasisIndex& idx);

/// 2(l-2)(m+j+l-1) / ((m+l-1)(m+2j+l))
double trace_defect_diag_closed(int lambda, const BasisIndex& idx);

enum class Ordering { normal, antinormal };

/// normal: 2 - sum a^dagger a;  antinormal: 2 - sum a a^dagger
SparseOperator trace_defect_matrix(int lambda, const Truncation& trunc, Ordering ordering);
SparseOperator trace_defect_matrix(const LadderAlgebra& alg, Ordering ordering);

/// (l-2)/(m+l-1) for m = 0..m_max, followed by the limit point 0.
std::vector<double> sigma_a(int lambda, int m_max);

/// Delta_idx with z_kl replaced by a_kl^dagger, applied to the vacuum. Each monomial is evaluated as
/// a11^dag^e11 a12^dag^e12 a21^dag^e21 a22^dag^e22 |0>.
VectorXc basis_from_vacuum(const LadderAlgebra& alg, const BasisIndex& idx);
VectorXc basis_from_vacuum(int lambda, const BasisIndex& idx, const Truncation& trunc);

}  // namespace qmink
