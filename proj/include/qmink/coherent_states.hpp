#pragma once

#include <array>
#include <vector>

#include "qmink/conformal_geometry.hpp"
#include "qmink/fock_basis.hpp"
#include "qmink/types.hpp"

namespace qmink {

/// Integer weight lambda >= 4 of the discrete series.
struct QuantizationParam {
    int lambda = 4;

    explicit QuantizationParam(int lambda_);
};

/// Throws InvalidParameter unless lambda is an integer >= 4.
void require_lambda(int lambda);

/// log N^lambda_{jm} with
/// N = (l-1)(l-2)^2(l-3) G(l-2) G(l-3) m! (m+2j+1)! / ((2j+1) G(m+l-1) G(m+2j+l)).
double log_norm_const(int lambda, int two_j, int m);

/// c_lambda = (l-1)(l-2)^2(l-3) / pi^4
double measure_constant(int lambda);

/// One term coeff * z11^e[0] z12^e[1] z21^e[2] z22^e[3].
struct Monomial {
    std::array<int, 4> exponents{};
    double coeff = 0.0;
};

/// Full monomial expansion of Delta_idx, sorted by exponent tuple, like terms combined.
std::vector<Monomial> delta_terms(int lambda, const BasisIndex& idx);

/// Delta^{jm}_{j1 j2}(Z) = N^{-1/2} (det Z)^m sum_S (...)
cplx delta(int lambda, const BasisIndex& idx, const Mat2c& Z);

struct CoherentVector {
    VectorXc amplitudes;
    Mat2c z;
    int lambda = 4;
    Truncation trunc;
};

/// Delta_idx(Z) for every index of the basis, in basis order. No domain check.
VectorXc delta_vector(int lambda, const FockBasis& basis, const Mat2c& Z);

/// delta_vector with the coefficients of every index computed once, for repeated evaluation.
class DeltaEvaluator {
public:
    DeltaEvaluator(int lambda, const FockBasis& basis);

    Eigen::Index size() const { return static_cast<Eigen::Index>(begin_.size()) - 1; }
    VectorXc operator()(const Mat2c& Z) const;
    /// Writes size() values to out.
    void evaluate(const Mat2c& Z, cplx* out) const;

private:
    struct Term {
        std::array<int, 4> exponents;
        double coeff;
    };
    int max_degree_;
    std::vector<int> det_power_;
    std::vector<std::size_t> begin_;
    std::vector<Term> terms_;
};

CoherentVector coherent_amplitudes(int lambda, const Mat2c& Z, const Truncation& trunc);
CoherentVector coherent_amplitudes(int lambda, const Mat2c& Z, const FockBasis& basis);

/// <Z|V> = det(E - Z^dagger V)^{-lambda}
cplx kernel_closed(int lambda, const Mat2c& Z, const Mat2c& V);

/// sum_idx conj(Delta_idx(Z)) Delta_idx(V)
cplx kernel_series(int lambda, const Mat2c& Z, const Mat2c& V, const Truncation& trunc);

/// <Z|V> / sqrt(<Z|Z><V|V>)
cplx amplitude(int lambda, const Mat2c& Z, const Mat2c& V);

/// (((w - wbar)^2 (v - vbar)^2)^{1/2} / (w - vbar)^2)^lambda, the root being the product of the roots
/// 2i sqrt(y^2) of the two negative factors, so that the amplitude is 1 at w = v.
cplx amplitude_tube(int lambda, const CVec4c& w, const CVec4c& v);

/// Integer power by repeated squaring; negative exponents invert.
cplx ipow(cplx base, int n);
double binomial(int n, int k);

}  // namespace qmink
