#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qmink/coherent_states.hpp"
#include "qmink/conformal_geometry.hpp"
#include "qmink/fock_basis.hpp"

namespace qmink {

/// ball: variables (z11, z12, z21, z22); tube: variables (w^0, w^1, w^2, w^3).
enum class Chart { ball, tube };

using Exponents = std::array<int, 4>;

inline constexpr int kMaxPolyDegree = 64;

class Poly4 {
public:
    explicit Poly4(Chart chart = Chart::ball) : chart_(chart) {}

    static Poly4 constant(Chart chart, cplx c);
    static Poly4 variable(Chart chart, int k);
    static Poly4 monomial(Chart chart, const Exponents& e, cplx c);

    Chart chart() const { return chart_; }
    const std::map<Exponents, cplx>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Highest total degree; -1 for the zero polynomial.
    int degree() const;

    void add_term(const Exponents& e, cplx c);
    cplx coeff(const Exponents& e) const;

    Poly4& operator+=(const Poly4& o);
    Poly4& operator-=(const Poly4& o);
    Poly4& operator*=(cplx c);

    Poly4 derivative(int k) const;
    Poly4 homogeneous_part(int d) const;
    double max_abs_coeff() const;

    cplx evaluate(const std::array<cplx, 4>& vars) const;
    /// Ball chart: entries of the matrix; tube chart: w^mu = Tr(W sigma_mu) / 2.
    cplx evaluate(const Mat2c& M) const;

private:
    void require_same_chart(const Poly4& o) const;
    Chart chart_;
    std::map<Exponents, cplx> terms_;
};

Poly4 operator+(Poly4 a, const Poly4& b);
Poly4 operator-(Poly4 a, const Poly4& b);
Poly4 operator*(const Poly4& a, const Poly4& b);
Poly4 operator*(cplx c, Poly4 a);

/// Largest coefficient difference.
double max_abs_diff(const Poly4& a, const Poly4& b);

/// Monomials of total degree d in a fixed order.
std::vector<Exponents> monomials_of_degree(int d);

/// Exact coefficient map of Delta_idx in the ball chart.
Poly4 delta_poly(int lambda, const BasisIndex& idx);

/// A linear map on polynomials.
using PolyMap = std::function<Poly4(const Poly4&)>;

/// Derivative at t = 0 of (U(exp tX) psi)(Z) = det(C Z + D)^{-lambda} psi((A Z + B)(C Z + D)^{-1}),
/// (A, B; C, D) the blocks of exp(-tX):
///   psi -> lambda Tr(gamma Z + delta) psi - D psi[beta + alpha Z - Z delta - Z gamma Z].
/// X must be in the diagonal-eta algebra (ball chart).
PolyMap dU(int lambda, const AlgebraElement<double>& X);

/// Same formula in the tube chart, X in the off-diagonal-eta algebra.
PolyMap dU_tube(int lambda, const AlgebraElement<double>& X);

struct GeneratorMatrix {
    MatrixXc matrix;
    /// clipped[b]: the image of basis vector b has a component above max_degree.
    std::vector<bool> clipped;
};

/// Matrix of dU(X) in the Delta basis of the truncated space.
GeneratorMatrix dU_matrix(int lambda, const AlgebraElement<double>& X, const Truncation& trunc);

enum class GeneratorFamily { translation, lorentz, dilation, acceleration };

struct GeneratorLabel {
    GeneratorFamily family = GeneratorFamily::translation;
    int mu = 0;
    int nu = 0;

    bool operator==(const GeneratorLabel&) const = default;
};

std::string to_string(const GeneratorLabel& label);

/// p_0..p_3, m_01, m_02, m_03, m_12, m_13, m_23, d, a_0..a_3.
std::vector<GeneratorLabel> all_generator_labels();

/// Tube-chart su(2,2) element X with i dU_tube(X) equal to the differential operator of the label.
Mat4c generator_matrix(const GeneratorLabel& label);

/// The differential operators
///   p_mu = -i d_mu,  m_mu nu = -i (w_mu d_nu - w_nu d_mu),  d = -2i w^mu d_mu - 2i lambda,
///   a_nu = -i (w^2 delta^beta_nu - 2 w_nu w^beta) d_beta + 2i lambda w_nu.
PolyMap tube_diff_ops(const GeneratorLabel& label, int lambda);

/// conj(det(CV + D)^{-lambda}) det(CZ + D)^{-lambda} K(s V, s Z) - K(V, Z), relative to |K(V, Z)|,
/// where (A, B; C, D) are the blocks of g^{-1} and s is the corresponding Mobius map.
double rep_cocycle_check(int lambda, const GroupElement<double>& g, const Mat2c& Z, const Mat2c& V);

/// (U(g) psi)(Z) = det(CZ + D)^{-lambda} psi((AZ + B)(CZ + D)^{-1}), (A, B; C, D) = g^{-1}.
cplx apply_group(int lambda, const GroupElement<double>& g, const std::function<cplx(const Mat2c&)>& psi,
                 const Mat2c& Z);

/// Pull back a ball-chart function to the tube: W -> det((W + iE)/sqrt 2)^{-lambda} f(cayley(W)).
cplx transport_to_tube(int lambda, const std::function<cplx(const Mat2c&)>& f, const Mat2c& W);

}  // namespace qmink
