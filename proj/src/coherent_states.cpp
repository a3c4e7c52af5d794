#include "qmink/coherent_states.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qmink {

QuantizationParam::QuantizationParam(int lambda_) : lambda(lambda_)
{
    require_lambda(lambda);
}

void require_lambda(int lambda)
{
    if (lambda < 4)
        throw InvalidParameter("lambda must be an integer greater than 3 (got " + std::to_string(lambda) + ")");
}

double log_norm_const(int lambda, int two_j, int m)
{
    require_lambda(lambda);
    const double l = lambda;
    return std::log(l - 1) + 2 * std::log(l - 2) + std::log(l - 3) + std::lgamma(l - 2) + std::lgamma(l - 3) +
           std::lgamma(m + 1.0) + std::lgamma(m + two_j + 2.0) - std::log(two_j + 1.0) -
           std::lgamma(m + l - 1) - std::lgamma(m + two_j + l);
}

double measure_constant(int lambda)
{
    require_lambda(lambda);
    const double l = lambda;
    return (l - 1) * (l - 2) * (l - 2) * (l - 3) / std::pow(std::numbers::pi, 4);
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

cplx ipow(cplx base, int n)
{
    if (n < 0) return 1.0 / ipow(base, -n);
    cplx r = 1.0;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

namespace {

struct DeltaShape {
    int jp1, jm1, jp2, jm2, shift, s_lo, s_hi;
    double prefactor;  // N^{-1/2} sqrt(jp1! jm1! / (jp2! jm2!))
};

DeltaShape shape_of(int lambda, const BasisIndex& idx)
{
    if (!idx.valid()) throw InvalidParameter("invalid basis index " + to_string(idx));
    DeltaShape s{};
    s.jp1 = (idx.two_j + idx.two_j1) / 2;
    s.jm1 = (idx.two_j - idx.two_j1) / 2;
    s.jp2 = (idx.two_j + idx.two_j2) / 2;
    s.jm2 = (idx.two_j - idx.two_j2) / 2;
    s.shift = (idx.two_j1 + idx.two_j2) / 2;
    s.s_lo = std::max(0, s.shift);
    s.s_hi = std::min(s.jp1, s.jp2);
    const double log_ratio = std::lgamma(s.jp1 + 1.0) + std::lgamma(s.jm1 + 1.0) - std::lgamma(s.jp2 + 1.0) -
                             std::lgamma(s.jm2 + 1.0);
    s.prefactor = std::exp(0.5 * (log_ratio - log_norm_const(lambda, idx.two_j, idx.m)));
    return s;
}

// Powers z^0..z^n of one entry.
struct PowerTable {
    std::array<std::vector<cplx>, 4> entry;
    std::vector<cplx> det;

    PowerTable(const Mat2c& Z, int n)
    {
        const std::array<cplx, 4> z{Z(0, 0), Z(0, 1), Z(1, 0), Z(1, 1)};
        for (int k = 0; k < 4; ++k) {
            entry[k].resize(n + 1);
            entry[k][0] = 1.0;
            for (int e = 1; e <= n; ++e) entry[k][e] = entry[k][e - 1] * z[k];
        }
        const cplx d = Z.determinant();
        det.resize(n / 2 + 1);
        det[0] = 1.0;
        for (std::size_t e = 1; e < det.size(); ++e) det[e] = det[e - 1] * d;
    }
};

cplx delta_with(const DeltaShape& s, int m, const PowerTable& pw)
{
    cplx sum = 0.0;
    for (int S = s.s_lo; S <= s.s_hi; ++S) {
        const double c = binomial(s.jp2, S) * binomial(s.jm2, S - s.shift);
        sum += c * pw.entry[0][S] * pw.entry[1][s.jp1 - S] * pw.entry[2][s.jp2 - S] * pw.entry[3][S - s.shift];
    }
    return s.prefactor * pw.det[m] * sum;
}

}  // namespace

cplx delta(int lambda, const BasisIndex& idx, const Mat2c& Z)
{
    const DeltaShape s = shape_of(lambda, idx);
    const PowerTable pw(Z, idx.degree());
    return delta_with(s, idx.m, pw);
}

std::vector<Monomial> delta_terms(int lambda, const BasisIndex& idx)
{
    const DeltaShape s = shape_of(lambda, idx);
    std::map<std::array<int, 4>, double> acc;
    // (z11 z22 - z12 z21)^m = sum_k C(m,k) (-1)^k (z11 z22)^{m-k} (z12 z21)^k
    for (int S = s.s_lo; S <= s.s_hi; ++S) {
        const double c = s.prefactor * binomial(s.jp2, S) * binomial(s.jm2, S - s.shift);
        for (int k = 0; k <= idx.m; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const std::array<int, 4> e{S + idx.m - k, s.jp1 - S + k, s.jp2 - S + k, S - s.shift + idx.m - k};
            acc[e] += sign * binomial(idx.m, k) * c;
        }
    }
    std::vector<Monomial> out;
    out.reserve(acc.size());
    for (const auto& [e, c] : acc)
        if (c != 0.0) out.push_back({e, c});
    return out;
}

VectorXc delta_vector(int lambda, const FockBasis& basis, const Mat2c& Z)
{
    return DeltaEvaluator(lambda, basis)(Z);
}

DeltaEvaluator::DeltaEvaluator(int lambda, const FockBasis& basis) : max_degree_(basis.truncation().max_degree)
{
    require_lambda(lambda);
    begin_.reserve(basis.size() + 1);
    det_power_.reserve(basis.size());
    for (const BasisIndex& idx : basis.indices()) {
        const DeltaShape s = shape_of(lambda, idx);
        begin_.push_back(terms_.size());
        det_power_.push_back(idx.m);
        for (int S = s.s_lo; S <= s.s_hi; ++S)
            terms_.push_back({{S, s.jp1 - S, s.jp2 - S, S - s.shift},
                              s.prefactor * binomial(s.jp2, S) * binomial(s.jm2, S - s.shift)});
    }
    begin_.push_back(terms_.size());
}

void DeltaEvaluator::evaluate(const Mat2c& Z, cplx* out) const
{
    const PowerTable pw(Z, max_degree_);
    const auto n = static_cast<std::size_t>(size());
    for (std::size_t pos = 0; pos < n; ++pos) {
        cplx sum = 0.0;
        for (std::size_t t = begin_[pos]; t < begin_[pos + 1]; ++t) {
            const auto& e = terms_[t].exponents;
            sum += terms_[t].coeff * (pw.entry[0][e[0]] * pw.entry[1][e[1]] * pw.entry[2][e[2]] * pw.entry[3][e[3]]);
        }
        out[pos] = pw.det[static_cast<std::size_t>(det_power_[pos])] * sum;
    }
}

VectorXc DeltaEvaluator::operator()(const Mat2c& Z) const
{
    VectorXc out(size());
    evaluate(Z, out.data());
    return out;
}

CoherentVector coherent_amplitudes(int lambda, const Mat2c& Z, const FockBasis& basis)
{
    require_lambda(lambda);
    if (!in_domain(Z)) throw OutsideDomain("coherent state needs E - Z^dagger Z > 0");
    return {delta_vector(lambda, basis, Z), Z, lambda, basis.truncation()};
}

CoherentVector coherent_amplitudes(int lambda, const Mat2c& Z, const Truncation& trunc)
{
    return coherent_amplitudes(lambda, Z, FockBasis(trunc));
}

cplx kernel_closed(int lambda, const Mat2c& Z, const Mat2c& V)
{
    require_lambda(lambda);
    const cplx d = (Mat2c::Identity() - Z.adjoint() * V).determinant();
    if (std::abs(d) < 1e-300) throw SingularMatrix("det(E - Z^dagger V) vanishes");
    return ipow(d, -lambda);
}

cplx kernel_series(int lambda, const Mat2c& Z, const Mat2c& V, const Truncation& trunc)
{
    const FockBasis basis(trunc);
    const CoherentVector z = coherent_amplitudes(lambda, Z, basis);
    const CoherentVector v = coherent_amplitudes(lambda, V, basis);
    return z.amplitudes.dot(v.amplitudes);  // dot conjugates the left argument
}

cplx amplitude(int lambda, const Mat2c& Z, const Mat2c& V)
{
    if (!in_domain(Z) || !in_domain(V)) throw OutsideDomain("amplitude needs points of the domain");
    const double kz = kernel_closed(lambda, Z, Z).real();
    const double kv = kernel_closed(lambda, V, V).real();
    return kernel_closed(lambda, Z, V) / std::sqrt(kz * kv);
}

cplx amplitude_tube(int lambda, const CVec4c& w, const CVec4c& v)
{
    require_lambda(lambda);
    if (!in_tube(matrix_of(w)) || !in_tube(matrix_of(v))) throw OutsideDomain("amplitude_tube needs tube points");
    const CVec4c dw = w - w.conjugate();
    const CVec4c dv = v - v.conjugate();
    const CVec4c cross = w - v.conjugate();
    const cplx denom = minkowski(cross, cross);
    if (std::abs(denom) < 1e-300) throw SingularMatrix("(w - vbar)^2 vanishes");
    // (w - wbar)^2 = -4 y^2 < 0 on the tube; each factor's root is taken as 2i sqrt(y^2), so the
    // product of roots is -4 sqrt(y^2 y'^2) and the amplitude equals 1 at w = v.
    const double yy = -minkowski(dw, dw).real() / 4.0;
    const double vv = -minkowski(dv, dv).real() / 4.0;
    const cplx base = -4.0 * std::sqrt(yy * vv) / denom;
    return ipow(base, lambda);
}

}  // namespace qmink
