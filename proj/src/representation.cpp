#include "qmink/representation.hpp"

#include <algorithm>
#include <cmath>

namespace qmink {

// ---------------------------------------------------------------------------
// Poly4

Poly4 Poly4::constant(Chart chart, cplx c)
{
    Poly4 p(chart);
    p.add_term({0, 0, 0, 0}, c);
    return p;
}

Poly4 Poly4::variable(Chart chart, int k)
{
    Exponents e{0, 0, 0, 0};
    e.at(static_cast<std::size_t>(k)) = 1;
    return monomial(chart, e, 1.0);
}

Poly4 Poly4::monomial(Chart chart, const Exponents& e, cplx c)
{
    Poly4 p(chart);
    p.add_term(e, c);
    return p;
}

int Poly4::degree() const
{
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    return d;
}

void Poly4::add_term(const Exponents& e, cplx c)
{
    if (c == cplx(0)) return;
    if (e[0] + e[1] + e[2] + e[3] > kMaxPolyDegree) throw InvalidParameter("polynomial degree exceeds the cap");
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == cplx(0)) terms_.erase(it);
    }
}

cplx Poly4::coeff(const Exponents& e) const
{
    const auto it = terms_.find(e);
    return it == terms_.end() ? cplx(0) : it->second;
}

void Poly4::require_same_chart(const Poly4& o) const
{
    if (o.chart_ != chart_) throw ConventionMismatch("polynomials live in different charts");
}

Poly4& Poly4::operator+=(const Poly4& o)
{
    require_same_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly4& Poly4::operator-=(const Poly4& o)
{
    require_same_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly4& Poly4::operator*=(cplx c)
{
    if (c == cplx(0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Poly4 Poly4::derivative(int k) const
{
    Poly4 out(chart_);
    const auto kk = static_cast<std::size_t>(k);
    for (const auto& [e, c] : terms_) {
        if (e[kk] == 0) continue;
        Exponents f = e;
        f[kk] -= 1;
        out.add_term(f, c * static_cast<double>(e[kk]));
    }
    return out;
}

Poly4 Poly4::homogeneous_part(int d) const
{
    Poly4 out(chart_);
    for (const auto& [e, c] : terms_)
        if (e[0] + e[1] + e[2] + e[3] == d) out.add_term(e, c);
    return out;
}

double Poly4::max_abs_coeff() const
{
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

cplx Poly4::evaluate(const std::array<cplx, 4>& vars) const
{
    cplx sum = 0.0;
    for (const auto& [e, c] : terms_) {
        cplx t = c;
        for (std::size_t k = 0; k < 4; ++k) t *= ipow(vars[k], e[k]);
        sum += t;
    }
    return sum;
}

cplx Poly4::evaluate(const Mat2c& M) const
{
    if (chart_ == Chart::ball) return evaluate(std::array<cplx, 4>{M(0, 0), M(0, 1), M(1, 0), M(1, 1)});
    const CVec4c w = vector_of(M);
    return evaluate(std::array<cplx, 4>{w(0), w(1), w(2), w(3)});
}

Poly4 operator+(Poly4 a, const Poly4& b)
{
    a += b;
    return a;
}

Poly4 operator-(Poly4 a, const Poly4& b)
{
    a -= b;
    return a;
}

Poly4 operator*(const Poly4& a, const Poly4& b)
{
    if (a.chart() != b.chart()) throw ConventionMismatch("polynomials live in different charts");
    Poly4 out(a.chart());
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms())
            out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]}, ca * cb);
    return out;
}

Poly4 operator*(cplx c, Poly4 a)
{
    a *= c;
    return a;
}

double max_abs_diff(const Poly4& a, const Poly4& b)
{
    return (a - b).max_abs_coeff();
}

std::vector<Exponents> monomials_of_degree(int d)
{
    std::vector<Exponents> out;
    for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b)
            for (int c = d - a - b; c >= 0; --c) out.push_back({a, b, c, d - a - b - c});
    return out;
}

Poly4 delta_poly(int lambda, const BasisIndex& idx)
{
    Poly4 p(Chart::ball);
    for (const Monomial& t : delta_terms(lambda, idx)) p.add_term(t.exponents, t.coeff);
    return p;
}

// ---------------------------------------------------------------------------
// 2x2 matrices with polynomial entries

namespace {

using PolyMat = std::array<Poly4, 4>;  // (0,0), (0,1), (1,0), (1,1)

PolyMat constant_mat(Chart chart, const Mat2c& A)
{
    return {Poly4::constant(chart, A(0, 0)), Poly4::constant(chart, A(0, 1)), Poly4::constant(chart, A(1, 0)),
            Poly4::constant(chart, A(1, 1))};
}

PolyMat coordinate_matrix(Chart chart)
{
    if (chart == Chart::ball)
        return {Poly4::variable(chart, 0), Poly4::variable(chart, 1), Poly4::variable(chart, 2),
                Poly4::variable(chart, 3)};
    PolyMat W{Poly4(chart), Poly4(chart), Poly4(chart), Poly4(chart)};
    for (int mu = 0; mu < 4; ++mu) {
        const Mat2c s = pauli(mu);
        const Poly4 w = Poly4::variable(chart, mu);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) W[static_cast<std::size_t>(2 * r + c)] += s(r, c) * w;
    }
    return W;
}

PolyMat multiply(const PolyMat& P, const PolyMat& Q)
{
    const Chart chart = P[0].chart();
    PolyMat out{Poly4(chart), Poly4(chart), Poly4(chart), Poly4(chart)};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            for (int k = 0; k < 2; ++k)
                out[static_cast<std::size_t>(2 * r + c)] +=
                    P[static_cast<std::size_t>(2 * r + k)] * Q[static_cast<std::size_t>(2 * k + c)];
    return out;
}

PolyMat add(PolyMat P, const PolyMat& Q, cplx beta)
{
    for (std::size_t k = 0; k < 4; ++k) P[k] += beta * Q[k];
    return P;
}

Poly4 trace(const PolyMat& P)
{
    return P[0] + P[3];
}

/// D psi [H]
Poly4 directional(const Poly4& psi, const PolyMat& H)
{
    const Chart chart = psi.chart();
    Poly4 out(chart);
    if (chart == Chart::ball) {
        for (int k = 0; k < 4; ++k) out += H[static_cast<std::size_t>(k)] * psi.derivative(k);
        return out;
    }
    for (int beta = 0; beta < 4; ++beta) {
        // h^beta = Tr(H sigma_beta) / 2
        const Mat2c s = pauli(beta);
        Poly4 h(chart);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) h += (0.5 * s(c, r)) * H[static_cast<std::size_t>(2 * r + c)];
        out += h * psi.derivative(beta);
    }
    return out;
}

PolyMap make_dU(int lambda, const Mat4c& X, Chart chart)
{
    const Blocks<double> b = blocks_of(X);
    const PolyMat Z = coordinate_matrix(chart);
    const PolyMat alphaZ = multiply(constant_mat(chart, b.A), Z);
    const PolyMat Zdelta = multiply(Z, constant_mat(chart, b.D));
    const PolyMat gammaZ = multiply(constant_mat(chart, b.C), Z);
    const PolyMat ZgammaZ = multiply(Z, gammaZ);
    PolyMat field = constant_mat(chart, b.B);
    field = add(field, alphaZ, 1.0);
    field = add(field, Zdelta, -1.0);
    field = add(field, ZgammaZ, -1.0);
    const Poly4 mult = static_cast<double>(lambda) * (trace(gammaZ) + Poly4::constant(chart, b.D.trace()));
    return [mult, field, chart](const Poly4& psi) {
        if (psi.chart() != chart) throw ConventionMismatch("polynomial chart does not match the generator");
        return mult * psi - directional(psi, field);
    };
}

}  // namespace

PolyMap dU(int lambda, const AlgebraElement<double>& X)
{
    require_lambda(lambda);
    if (X.convention() != EtaConvention::diag) throw ConventionMismatch("dU expects a diagonal-eta algebra element");
    return make_dU(lambda, X.matrix(), Chart::ball);
}

PolyMap dU_tube(int lambda, const AlgebraElement<double>& X)
{
    require_lambda(lambda);
    if (X.convention() != EtaConvention::offdiag)
        throw ConventionMismatch("dU_tube expects an off-diagonal-eta algebra element");
    return make_dU(lambda, X.matrix(), Chart::tube);
}

// ---------------------------------------------------------------------------
// Matrices in the Delta basis

GeneratorMatrix dU_matrix(int lambda, const AlgebraElement<double>& X, const Truncation& trunc)
{
    if (trunc.max_degree < 1) throw InvalidParameter("dU_matrix needs max_degree >= 1");
    const PolyMap op = dU(lambda, X);
    const FockBasis basis(trunc);
    const auto n = static_cast<Eigen::Index>(basis.size());

    // Per degree: monomial coefficients of the Delta polynomials, factorized once.
    struct DegreeSystem {
        std::vector<Exponents> monomials;
        std::map<Exponents, Eigen::Index> row_of;
        Eigen::Index offset = 0;
        MatrixXc M;
        Eigen::PartialPivLU<MatrixXc> lu;
    };
    std::vector<DegreeSystem> systems(static_cast<std::size_t>(trunc.max_degree) + 1);
    std::vector<Poly4> deltas;
    deltas.reserve(basis.size());
    for (std::size_t pos = 0; pos < basis.size(); ++pos) deltas.push_back(delta_poly(lambda, basis[pos]));

    for (int d = 0; d <= trunc.max_degree; ++d) {
        DegreeSystem& sys = systems[static_cast<std::size_t>(d)];
        sys.monomials = monomials_of_degree(d);
        const auto m = static_cast<Eigen::Index>(sys.monomials.size());
        for (Eigen::Index r = 0; r < m; ++r) sys.row_of[sys.monomials[static_cast<std::size_t>(r)]] = r;
        sys.offset = static_cast<Eigen::Index>(basis.degree_begin(d));
        sys.M = MatrixXc::Zero(m, m);
        for (Eigen::Index c = 0; c < m; ++c)
            for (const auto& [e, coef] : deltas[static_cast<std::size_t>(sys.offset + c)].terms())
                sys.M(sys.row_of.at(e), c) = coef;
        sys.lu.compute(sys.M);
    }

    GeneratorMatrix out{MatrixXc::Zero(n, n), std::vector<bool>(basis.size(), false)};
    for (Eigen::Index col = 0; col < n; ++col) {
        const Poly4 image = op(deltas[static_cast<std::size_t>(col)]);
        std::map<int, Eigen::VectorXcd> parts;
        for (const auto& [e, coef] : image.terms()) {
            const int d = e[0] + e[1] + e[2] + e[3];
            if (d > trunc.max_degree) {
                out.clipped[static_cast<std::size_t>(col)] = true;
                continue;
            }
            const DegreeSystem& sys = systems[static_cast<std::size_t>(d)];
            auto [it, inserted] = parts.try_emplace(d, Eigen::VectorXcd::Zero(sys.M.rows()));
            it->second(sys.row_of.at(e)) += coef;
        }
        for (const auto& [d, rhs] : parts) {
            const DegreeSystem& sys = systems[static_cast<std::size_t>(d)];
            const Eigen::VectorXcd sol = sys.lu.solve(rhs);
            const double residual = (sys.M * sol - rhs).norm();
            if (residual > 1e-8 * std::max(1.0, rhs.norm()))
                throw IllConditioned("change of basis residual " + std::to_string(residual) + " at degree " +
                                     std::to_string(d));
            out.matrix.block(sys.offset, col, sol.size(), 1) = sol;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generator labels and the tube-chart operators

std::string to_string(const GeneratorLabel& label)
{
    switch (label.family) {
    case GeneratorFamily::translation: return "p" + std::to_string(label.mu);
    case GeneratorFamily::lorentz: return "m" + std::to_string(label.mu) + std::to_string(label.nu);
    case GeneratorFamily::dilation: return "d";
    case GeneratorFamily::acceleration: return "a" + std::to_string(label.mu);
    }
    return "?";
}

std::vector<GeneratorLabel> all_generator_labels()
{
    std::vector<GeneratorLabel> out;
    for (int mu = 0; mu < 4; ++mu) out.push_back({GeneratorFamily::translation, mu, 0});
    for (const auto& [mu, nu] : kLorentzPairs) out.push_back({GeneratorFamily::lorentz, mu, nu});
    out.push_back({GeneratorFamily::dilation, 0, 0});
    for (int mu = 0; mu < 4; ++mu) out.push_back({GeneratorFamily::acceleration, mu, 0});
    return out;
}

Mat4c generator_matrix(const GeneratorLabel& label)
{
    const Mat2c O = Mat2c::Zero();
    const Mat2c I = Mat2c::Identity();
    const cplx i(0, 1);
    switch (label.family) {
    case GeneratorFamily::translation: return from_blocks<double>(O, pauli(label.mu), O, O);
    case GeneratorFamily::acceleration:
        return from_blocks<double>(O, O, metric(label.mu) * pauli(label.mu), O);
    case GeneratorFamily::dilation: return from_blocks<double>(I, O, O, -I);
    case GeneratorFamily::lorentz: {
        const int mu = label.mu, nu = label.nu;
        if (mu == nu || mu < 0 || nu > 3 || mu > nu) throw InvalidParameter("Lorentz label needs mu < nu");
        if (mu == 0) return 0.5 * from_blocks<double>(pauli(nu), O, O, -pauli(nu));
        // eps_{mu nu k} sigma_k for the spatial pair
        const int k = 6 - mu - nu;
        const double eps = (mu == 1 && nu == 2) || (mu == 2 && nu == 3) ? 1.0 : -1.0;
        return (-0.5 * i * eps) * from_blocks<double>(pauli(k), O, O, pauli(k));
    }
    }
    throw InvalidParameter("unknown generator label");
}

PolyMap tube_diff_ops(const GeneratorLabel& label, int lambda)
{
    require_lambda(lambda);
    const Chart T = Chart::tube;
    const cplx i(0, 1);
    const double lam = lambda;
    std::array<Poly4, 4> w_low{Poly4(T), Poly4(T), Poly4(T), Poly4(T)};
    for (int mu = 0; mu < 4; ++mu) w_low[static_cast<std::size_t>(mu)] = metric(mu) * Poly4::variable(T, mu);
    Poly4 w2(T);
    for (int mu = 0; mu < 4; ++mu) w2 += Poly4::variable(T, mu) * w_low[static_cast<std::size_t>(mu)];

    const auto euler = [](const Poly4& psi) {
        Poly4 out(Chart::tube);
        for (int b = 0; b < 4; ++b) out += Poly4::variable(Chart::tube, b) * psi.derivative(b);
        return out;
    };

    switch (label.family) {
    case GeneratorFamily::translation:
        return [mu = label.mu, i](const Poly4& psi) { return -i * psi.derivative(mu); };
    case GeneratorFamily::lorentz:
        return [mu = label.mu, nu = label.nu, w_low, i](const Poly4& psi) {
            return -i * (w_low[static_cast<std::size_t>(mu)] * psi.derivative(nu) -
                         w_low[static_cast<std::size_t>(nu)] * psi.derivative(mu));
        };
    case GeneratorFamily::dilation:
        return [euler, lam, i](const Poly4& psi) { return -2.0 * i * euler(psi) - 2.0 * i * lam * psi; };
    case GeneratorFamily::acceleration:
        return [nu = label.mu, w_low, w2, euler, lam, i](const Poly4& psi) {
            const Poly4& wn = w_low[static_cast<std::size_t>(nu)];
            return -i * (w2 * psi.derivative(nu) - 2.0 * (wn * euler(psi))) + (2.0 * i * lam) * (wn * psi);
        };
    }
    throw InvalidParameter("unknown generator label");
}

// ---------------------------------------------------------------------------
// Group level

double rep_cocycle_check(int lambda, const GroupElement<double>& g, const Mat2c& Z, const Mat2c& V)
{
    require_lambda(lambda);
    if (g.convention() != EtaConvention::diag) throw ConventionMismatch("rep_cocycle_check expects the ball chart");
    const Mat4c h = g.inverse().matrix();
    const cplx jz = ipow(automorphy_factor(h, Z), -lambda);
    const cplx jv = ipow(automorphy_factor(h, V), -lambda);
    const cplx lhs = std::conj(jv) * jz * kernel_closed(lambda, mobius(h, V), mobius(h, Z));
    const cplx rhs = kernel_closed(lambda, V, Z);
    return std::abs(lhs - rhs) / std::abs(rhs);
}

cplx apply_group(int lambda, const GroupElement<double>& g, const std::function<cplx(const Mat2c&)>& psi,
                 const Mat2c& Z)
{
    require_lambda(lambda);
    const Mat4c h = g.inverse().matrix();
    return ipow(automorphy_factor(h, Z), -lambda) * psi(mobius(h, Z));
}

cplx transport_to_tube(int lambda, const std::function<cplx(const Mat2c&)>& f, const Mat2c& W)
{
    const Mat4c K = cayley_intertwiner<double>();
    return ipow(automorphy_factor(K, W), -lambda) * f(mobius(K, W));
}

}  // namespace qmink
