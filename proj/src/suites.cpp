#include "qmink/suites.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "qmink/coherent_states.hpp"
#include "qmink/conformal_geometry.hpp"
#include "qmink/errors.hpp"
#include "qmink/fock_basis.hpp"
#include "qmink/ladder_operators.hpp"
#include "qmink/representation.hpp"

namespace qmink {

namespace {

const cplx kI(0.0, 1.0);

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    cplx gaussian() { return {normal_(gen_), normal_(gen_)}; }

    Mat2c matrix(double scale = 1.0)
    {
        Mat2c M;
        for (int k = 0; k < 4; ++k) M(k / 2, k % 2) = scale * gaussian();
        return M;
    }

    Mat2c hermitian(double scale = 1.0)
    {
        const Mat2c M = matrix(scale);
        return 0.5 * (M + M.adjoint());
    }

    /// Operator norm uniform on [0, radius].
    Mat2c in_ball(double radius)
    {
        const Mat2c M = matrix();
        const double op = Eigen::JacobiSVD<Mat2c>(M).singularValues()(0);
        return (uniform(0.0, radius) / op) * M;
    }

    Mat2c positive()
    {
        const Mat2c M = matrix();
        return M * M.adjoint() + 0.1 * Mat2c::Identity();
    }

    Mat2c tube_point() { return hermitian() + kI * positive(); }

    AlgebraElement<double> algebra(EtaConvention c, double scale)
    {
        Mat4c M;
        for (int k = 0; k < 16; ++k) M(k / 4, k % 4) = scale * gaussian();
        return AlgebraElement<double>::make(project_to_algebra<double>(M, c), c, 1e-10);
    }

    Poly4 polynomial(Chart chart, int max_degree)
    {
        Poly4 p(chart);
        for (int d = 0; d <= max_degree; ++d)
            for (const auto& e : monomials_of_degree(d)) p.add_term(e, gaussian());
        return p;
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_;
};

CheckRecord at_most(std::string name, double value, double bound)
{
    return {std::move(name), value, bound, value <= bound, false};
}

CheckRecord informational(std::string name, double value, double bound)
{
    return {std::move(name), value, bound, value <= bound, true};
}

std::string lam(int lambda) { return "lambda=" + std::to_string(lambda); }

template <typename F>
CriterionResult timed(int id, std::string title, F&& body)
{
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    body(r.checks);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

double max_abs(const MatrixXc& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

/// Least-squares slope and coefficient of determination of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double xm = 0, ym = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        xm += x[k] / n;
        ym += y[k] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - xm) * (y[k] - ym);
        sxx += (x[k] - xm) * (x[k] - xm);
        syy += (y[k] - ym) * (y[k] - ym);
    }
    const double slope = sxy / sxx;
    const double r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return {slope, r2};
}

double observable_distance(const ObservableSet<double>& a, const ObservableSet<double>& b)
{
    double d = std::max((a.p - b.p).cwiseAbs().maxCoeff(), (a.a - b.a).cwiseAbs().maxCoeff());
    d = std::max(d, (a.m - b.m).cwiseAbs().maxCoeff());
    d = std::max(d, std::abs(a.d - b.d));
    const double scale = std::max({1.0, b.p.cwiseAbs().maxCoeff(), b.a.cwiseAbs().maxCoeff(),
                                   b.m.cwiseAbs().maxCoeff(), std::abs(b.d)});
    return d / scale;
}

}  // namespace

bool CriterionResult::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.informational || c.pass; });
}

bool RunReport::passed() const
{
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed(); });
}

// ---------------------------------------------------------------------------
// Criterion 1

CriterionResult check_kernel_convergence(const KernelParams& p)
{
    return timed(1, "kernel convergence", [&](std::vector<CheckRecord>& out) {
        Sampler rng(p.seed);
        const FockBasis basis{Truncation(p.max_degree)};
        const DeltaEvaluator eval(p.lambda, basis);
        std::vector<int> degrees;
        for (int d = p.max_degree % 2; d <= p.max_degree; d += 2) degrees.push_back(d);
        std::vector<double> worst(degrees.size(), 0.0);
        for (int k = 0; k < p.pairs; ++k) {
            const Mat2c Z = rng.in_ball(p.radius), V = rng.in_ball(p.radius);
            const VectorXc dz = eval(Z), dv = eval(V);
            const cplx closed = kernel_closed(p.lambda, Z, V);
            cplx partial = 0.0;
            std::size_t next = 0;
            for (std::size_t i = 0; i < degrees.size(); ++i) {
                const std::size_t end = basis.degree_begin(degrees[i] + 1);
                for (; next < end; ++next) {
                    const auto e = static_cast<Eigen::Index>(next);
                    partial += std::conj(dz(e)) * dv(e);
                }
                worst[i] = std::max(worst[i], std::abs(partial / closed - 1.0));
            }
        }
        out.push_back(at_most("max |K_N/K - 1| over " + std::to_string(p.pairs) + " pairs, " + lam(p.lambda) +
                                  ", max_degree=" + std::to_string(p.max_degree),
                              worst.back(), kKernelTol * p.tol_scale));
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < degrees.size(); ++i)
            if (degrees[i] >= 2 && worst[i] > 0) {
                xs.push_back(degrees[i]);
                ys.push_back(std::log(worst[i]));
            }
        const auto [slope, r2] = linear_fit(xs, ys);
        out.push_back(at_most("log-error slope per degree (must be negative)", slope, 0.0));
        out.push_back({"log-linear fit 1 - R^2", 1.0 - r2, 0.05 * p.tol_scale, 1.0 - r2 <= 0.05 * p.tol_scale, false});
    });
}

// ---------------------------------------------------------------------------
// Criterion 2

CriterionResult check_eigenvectors(const EigenParams& p)
{
    return timed(2, "eigenvector property", [&](std::vector<CheckRecord>& out) {
        Sampler rng(p.seed);
        std::vector<Mat2c> points;
        for (int k = 0; k < p.points; ++k) points.push_back(rng.in_ball(p.radius));
        std::vector<LadderAlgebra> algebras;
        for (int d = 4; d <= p.max_degree; d += 2) algebras.emplace_back(p.lambda, Truncation(d));
        if (p.max_degree % 2 != 0) algebras.emplace_back(p.lambda, Truncation(p.max_degree));

        double worst = 0;
        int over = 0, violations = 0;
        for (const Mat2c& Z : points) {
            std::array<double, 4> prev{};
            prev.fill(std::numeric_limits<double>::infinity());
            std::array<double, 4> last{};
            for (const auto& alg : algebras) {
                last = eigen_residual(alg, Z);
                for (int k = 0; k < 4; ++k) {
                    if (last[k] > prev[k] * (1 + 1e-12)) ++violations;
                    prev[k] = last[k];
                }
            }
            const double m = *std::max_element(last.begin(), last.end());
            worst = std::max(worst, m);
            if (m > kEigenTol * p.tol_scale) ++over;
        }
        out.push_back(at_most("max eigen_residual over " + std::to_string(p.points) + " points and a11..a22, " +
                                  lam(p.lambda) + ", max_degree=" + std::to_string(p.max_degree),
                              worst, kEigenTol * p.tol_scale));
        out.push_back(at_most("points with a residual above the bound", over, 0));
        out.push_back(at_most("monotonicity violations in max_degree", violations, 0));
    });
}

// ---------------------------------------------------------------------------
// Criteria 3 and 4

CriterionResult check_commutator_diagonal(const LadderParams& p)
{
    return timed(3, "commutator diagonal", [&](std::vector<CheckRecord>& out) {
        const Truncation t(p.max_degree);
        for (int lambda : p.lambdas) {
            const LadderAlgebra alg(lambda, t);
            const MatrixXc C = commutator_matrix(alg.a_dag(1, 1), alg.a(1, 1)).dense();
            const auto& basis = alg.basis();
            double diag = 0, off = 0;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                if (!is_interior(basis[b], t, 2)) continue;
                const auto e = static_cast<Eigen::Index>(b);
                diag = std::max(diag, std::abs(C(e, e) - comm_a11_diag_closed(lambda, basis[b])));
                for (Eigen::Index r = 0; r < C.rows(); ++r)
                    if (r != e) off = std::max(off, std::abs(C(r, e)));
            }
            const double tol = kCommutatorTol * p.tol_scale;
            out.push_back(at_most("interior diagonal vs closed form, " + lam(lambda), diag, tol));
            out.push_back(at_most("interior off-diagonal magnitude, " + lam(lambda), off, tol));
            out.push_back(at_most("vacuum value + 1/lambda, " + lam(lambda), std::abs(C(0, 0) + 1.0 / lambda), tol));
        }
    });
}

CriterionResult check_trace_defect(const LadderParams& p)
{
    return timed(4, "trace defect", [&](std::vector<CheckRecord>& out) {
        const Truncation t(p.max_degree);
        for (int lambda : p.lambdas) {
            const LadderAlgebra alg(lambda, t);
            const MatrixXc anti = trace_defect_matrix(alg, Ordering::antinormal).dense();
            const MatrixXc normal = trace_defect_matrix(alg, Ordering::normal).dense();
            const auto& basis = alg.basis();
            double diff = 0;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                if (!is_interior(basis[b], t, 2)) continue;
                const auto e = static_cast<Eigen::Index>(b);
                diff = std::max(diff, std::abs(anti(e, e) - trace_defect_diag_closed(lambda, basis[b])));
            }
            const double tol = kTraceDefectTol * p.tol_scale;
            out.push_back(at_most("anti-normal interior diagonal vs closed form, " + lam(lambda), diff, tol));
            const double gap = std::abs(normal(0, 0) - trace_defect_diag_closed(lambda, basis[0]));
            out.push_back(at_most("normal ordering at vacuum differs from the closed form by 4/lambda, " +
                                      lam(lambda) + " (|gap - 4/lambda|)",
                                  std::abs(gap - 4.0 / lambda), tol));
        }
    });
}

// ---------------------------------------------------------------------------
// Criterion 5

CriterionResult check_vacuum_cyclicity(const VacuumParams& p)
{
    return timed(5, "vacuum cyclicity", [&](std::vector<CheckRecord>& out) {
        const LadderAlgebra alg(p.lambda, Truncation(p.max_degree));
        const auto& basis = alg.basis();
        double worst = 0;
        int count = 0;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (basis[k].degree() > p.degree_limit) break;
            VectorXc v = basis_from_vacuum(alg, basis[k]);
            v(static_cast<Eigen::Index>(k)) -= 1.0;
            worst = std::max(worst, v.norm());
            ++count;
        }
        out.push_back(at_most("max |basis_from_vacuum - e_idx| over " + std::to_string(count) + " indices of degree <= " +
                                  std::to_string(p.degree_limit) + ", " + lam(p.lambda) +
                                  ", max_degree=" + std::to_string(p.max_degree),
                              worst, kVacuumTol * p.tol_scale));
    });
}

// ---------------------------------------------------------------------------
// Criterion 6

CriterionResult check_measure(const MeasureParams& p)
{
    return timed(6, "measure normalization", [&](std::vector<CheckRecord>& out) {
        const DomainSamples ds = sample_domain(p.cfg);
        const std::size_t workers = worker_count(p.cfg);
        const double band = kSigmaBand * p.tol_scale;
        for (int lambda : p.lambdas) {
            const MCEstimate mass = integrate_mu_lambda([](const Mat2c&) { return cplx(1.0); }, lambda, ds, workers);
            out.push_back(at_most("unit mass |I - 1| / sigma, " + lam(lambda) + ", I=" + format_double(mass.value.real()),
                                  mass.z_score(1.0), band));
            out.push_back(at_most("unit mass sigma, " + lam(lambda), mass.stderr, kUnitMassStderrMax * p.tol_scale));
            const MCMatrix G = gram(lambda, Truncation(p.gram_degree), ds, workers);
            double worst = 0;
            int over = 0;
            for (Eigen::Index r = 0; r < G.value.rows(); ++r)
                for (Eigen::Index c = 0; c < G.value.cols(); ++c) {
                    const double z = G.at(r, c).z_score(r == c ? 1.0 : 0.0);
                    worst = std::max(worst, z);
                    if (z > band) ++over;
                }
            out.push_back(at_most("Gram max per-entry |G - I| / sigma, " + lam(lambda) + ", max_degree=" +
                                      std::to_string(p.gram_degree) + ", entries beyond band: " + std::to_string(over) +
                                      " of " + std::to_string(G.value.size()),
                                  worst, band));
        }
    });
}

// ---------------------------------------------------------------------------
// Criterion 7

CriterionResult check_representation(const RepParams& p)
{
    return timed(7, "representation", [&](std::vector<CheckRecord>& out) {
        Sampler rng(p.seed);
        double hom = 0;
        for (int k = 0; k < p.pairs; ++k) {
            const auto X = rng.algebra(EtaConvention::diag, 0.5), Y = rng.algebra(EtaConvention::diag, 0.5);
            const auto XY = AlgebraElement<double>::make(bracket(X.matrix(), Y.matrix()), EtaConvention::diag);
            const Poly4 psi = rng.polynomial(Chart::ball, 4);
            const auto dX = dU(p.lambda, X), dY = dU(p.lambda, Y);
            const Poly4 rhs = dU(p.lambda, XY)(psi);
            hom = std::max(hom, max_abs_diff(dX(dY(psi)) - dY(dX(psi)), rhs) / std::max(1.0, rhs.max_abs_coeff()));
        }
        out.push_back(at_most("[dU(X), dU(Y)] - dU([X, Y]) on " + std::to_string(p.pairs) + " pairs, degree <= 4",
                              hom, kRepTol * p.tol_scale));

        double cocycle = 0;
        for (int k = 0; k < p.cocycle_samples; ++k) {
            const auto g = exp_algebra(rng.algebra(EtaConvention::diag, 0.3), 1.0);
            const Mat2c Z = rng.in_ball(0.9), V = rng.in_ball(0.9);
            cocycle = std::max(cocycle, rep_cocycle_check(p.lambda, g, Z, V));
        }
        out.push_back(at_most("rep_cocycle_check over " + std::to_string(p.cocycle_samples) + " (g, Z, V)", cocycle,
                              kCocycleTol * p.tol_scale));

        const Truncation t(p.max_degree);
        const FockBasis basis(t);
        std::vector<MatrixXc> T;
        for (int mu = 0; mu < 4; ++mu) {
            const auto X = to_ball_chart(AlgebraElement<double>::make(
                generator_matrix({GeneratorFamily::translation, mu, 0}), EtaConvention::offdiag));
            T.push_back(dU_matrix(p.lambda, X, t).matrix);
        }
        double comm = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                const MatrixXc C = T[a] * T[b] - T[b] * T[a];
                for (std::size_t c = 0; c < basis.size(); ++c)
                    if (basis[c].degree() <= p.max_degree - 2)
                        comm = std::max(comm, C.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff());
            }
        out.push_back(at_most("translation matrices pairwise commutators on the unclipped subspace, max_degree=" +
                                  std::to_string(p.max_degree),
                              comm, kTranslationTol * p.tol_scale));
    });
}

// ---------------------------------------------------------------------------
// Criteria 8 and 9

CriterionResult check_classical(const ClassicalParams& p)
{
    return timed(8, "classical cross-oracles", [&](std::vector<CheckRecord>& out) {
        Sampler rng(p.seed);
        double tube = 0, nil = 0, square = 0, methods = 0, accel = 0;
        for (int k = 0; k < p.points; ++k) {
            const double lambda = rng.uniform(0.5, 8.0);
            const Mat2c W = rng.tube_point();
            const Mat4c J = momentum_J_lambda(W, lambda);
            const double scale = std::max(1.0, max_abs(J));
            tube = std::max(tube, observable_distance(decompose_su22(J), observables_tube(W, lambda)));
            square = std::max(square, max_abs(J * J + lambda * lambda * Mat4c::Identity()) / (scale * scale));
            methods = std::max(methods, max_abs(J - momentum_J_lambda(W, lambda, MomentumMethod::projector)) / scale);

            const Mat2c X = rng.hermitian(), S = rng.hermitian();
            nil = std::max(nil, observable_distance(decompose_su22(momentum_J0(X, S)), observables_nilpotent(X, S)));

            const Mat2c C = rng.hermitian(0.3), Y = rng.positive();
            const Mat2c P = Y.inverse();
            const auto h = accel_transform(C, X, P, AccelModel::holomorphic, 1e-6);
            const auto s = accel_transform(C, X, P, AccelModel::standard, 1e-6);
            // relative to the transformed point: near the locus det(CX + E) = 0 both models blow up together
            const double size = std::max({1.0, max_abs(s.X), max_abs(s.P)});
            accel = std::max({accel, max_abs(h.X - s.X) / size, max_abs(h.P - s.P) / size});
        }
        const double tol = kClassicalTol * p.tol_scale;
        const std::string n = std::to_string(p.points);
        out.push_back(at_most("decompose(J_lambda(W)) vs closed-form tube observables, " + n + " points", tube, tol));
        out.push_back(at_most("decompose(J_0(X, S)) vs closed-form nilpotent observables, " + n + " points", nil, tol));
        out.push_back(at_most("|J^2 + lambda^2| relative", square, tol));
        out.push_back(at_most("block vs projector J_lambda relative", methods, tol));
        out.push_back(at_most("holomorphic vs standard acceleration at lambda=1e-6, relative", accel, kAccelLimitTol * p.tol_scale));
    });
}

CriterionResult check_orbits(const ClassicalParams& p)
{
    return timed(9, "orbit classification", [&](std::vector<CheckRecord>& out) {
        Sampler rng(p.seed + 1);
        int mismatch = 0;
        for (int k = 0; k < 2 * p.points; ++k) {
            const Mat2c W = (k % 2 == 0) ? rng.matrix(1.5) : rng.tube_point();
            const PlaneSignature s = plane_signature(W);
            if ((s.positive == 2 && s.negative == 0) != in_tube(W)) ++mismatch;
        }
        out.push_back(at_most("plane_signature (2,0) <=> in_tube mismatches over " + std::to_string(2 * p.points) +
                                  " matrices",
                              mismatch, 0));
        int bad = 0;
        for (int k = 0; k < p.points; ++k) {
            const Mat2c W = rng.tube_point();
            const auto obs = observables_tube(W, rng.uniform(0.5, 8.0));
            if (!(obs.p(0) > 0 && minkowski(obs.p, obs.p) > 0)) ++bad;
        }
        out.push_back(at_most("tube samples without p0 > 0 and p^2 > 0", bad, 0));
    });
}

// ---------------------------------------------------------------------------
// Criterion 10

CriterionResult check_star_asymptotics(const StarParams& p)
{
    return timed(10, "semiclassical asymptotics", [&](std::vector<CheckRecord>& out) {
        const SesquiSymbol f = [](const Mat2c&, const Mat2c& v) { return v(0, 0); };
        const SesquiSymbol g = [](const Mat2c& z, const Mat2c&) { return std::conj(z(0, 0)); };
        const auto rows = star_asymptotics(f, g, p.lambdas, Mat2c::Zero(), p.cfg);
        int increases = 0;
        std::vector<double> xs, ys;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const double dev = rows[k].product_deviation();
            if (k > 0 && dev >= rows[k - 1].product_deviation()) ++increases;
            xs.push_back(std::log(rows[k].lambda));
            ys.push_back(std::log(dev));
        }
        out.push_back(at_most("|f*g - fg| not strictly decreasing in lambda (count)", increases, 0));
        const double slope = linear_fit(xs, ys).first;
        out.push_back(at_most("log-log slope of |f*g - fg| (" + format_double(slope) + ") distance from -1",
                              std::abs(slope - kStarSlope), kStarSlopeBand * p.tol_scale));
        const auto& last = rows.back();
        const double sigma = std::max(last.commutator.stderr, 1e-300);
        out.push_back(at_most("|[f,g]_* - i lambda {f,g}| / sigma at " + lam(last.lambda),
                              last.commutator_deviation_literal() / sigma, kSigmaBand * p.tol_scale));
        out.push_back(informational("|[f,g]_* + i {f,g}| / sigma at " + lam(last.lambda) +
                                        " (normalization without the lambda factor)",
                                    last.commutator_deviation_normalized() / sigma, kSigmaBand * p.tol_scale));
    });
}

// ---------------------------------------------------------------------------
// Criterion 11

CriterionResult check_toeplitz(const ToeplitzParams& p)
{
    return timed(11, "Toeplitz consistency", [&](std::vector<CheckRecord>& out) {
        const Truncation t(p.max_degree);
        const FockBasis basis(t);
        const DomainSamples ds = sample_domain(p.cfg);
        const std::size_t workers = worker_count(p.cfg);
        const double band = kSigmaBand * p.tol_scale;
        const MCMatrix G = gram(p.lambda, t, ds, workers);
        const MCMatrix T1 = toeplitz_matrix([](const Mat2c&) { return cplx(1.0); }, p.lambda, t, ds, workers);
        out.push_back(at_most("max |T(1) - Gram| on shared draws", max_abs(T1.value - G.value), 1e-12));

        const MCMatrix Tz = toeplitz_matrix([](const Mat2c& Z) { return Z(0, 0); }, p.lambda, t, ds, workers);
        const MatrixXc up = annihilation(p.lambda, 1, 1, t).dense().adjoint();
        double worst = 0;
        int over = 0;
        for (Eigen::Index r = 0; r < up.rows(); ++r)
            for (Eigen::Index c = 0; c < up.cols(); ++c) {
                const double z = Tz.at(r, c).z_score(up(r, c));
                worst = std::max(worst, z);
                if (z > band) ++over;
            }
        out.push_back(at_most("max per-entry |T(z11) - a11^dagger| / sigma, " + lam(p.lambda) + ", max_degree=" +
                                  std::to_string(p.max_degree) + ", entries beyond band: " + std::to_string(over) +
                                  " of " + std::to_string(up.size()),
                              worst, band));

        const MCMatrix Ttr = toeplitz_matrix(
            [](const Mat2c& Z) { return (Mat2c::Identity() - Z.adjoint() * Z).trace(); }, p.lambda, t, ds, workers);
        double diag = 0;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (!is_interior(basis[k], t, 1)) continue;
            const auto e = static_cast<Eigen::Index>(k);
            diag = std::max(diag, Ttr.at(e, e).z_score(trace_defect_diag_closed(p.lambda, basis[k])));
        }
        out.push_back(at_most("max interior |T(Tr(E - Z^dag Z))_aa - closed form| / sigma", diag, band));
    });
}

// ---------------------------------------------------------------------------
// Runner

SuiteName parse_suite(const std::string& name)
{
    static const std::vector<std::pair<std::string, SuiteName>> table{
        {"classical", SuiteName::classical}, {"kernel", SuiteName::kernel}, {"ladder", SuiteName::ladder},
        {"rep", SuiteName::rep},             {"measure", SuiteName::measure}, {"star", SuiteName::star},
        {"all", SuiteName::all}};
    for (const auto& [key, value] : table)
        if (key == name) return value;
    throw InvalidParameter("unknown suite '" + name + "'");
}

std::string to_string(SuiteName s)
{
    switch (s) {
    case SuiteName::classical: return "classical";
    case SuiteName::kernel: return "kernel";
    case SuiteName::ladder: return "ladder";
    case SuiteName::rep: return "rep";
    case SuiteName::measure: return "measure";
    case SuiteName::star: return "star";
    case SuiteName::all: return "all";
    }
    return "?";
}

void validate(const SuiteParams& p)
{
    if (p.lambda < 4)
        throw InvalidParameter("lambda must be an integer greater than 3 (the quantization restricts lambda > 3 to "
                               "integer values); got " + std::to_string(p.lambda));
    if (p.max_degree < 0 || p.max_degree > kMaxDegreeCap)
        throw InvalidParameter("max_degree must lie in [0, " + std::to_string(kMaxDegreeCap) + "]");
    if (p.samples == 0) throw InvalidParameter("samples must be positive");
    if (p.shards == 0) throw InvalidParameter("shards must be positive");
    if (!(p.tol_scale > 0)) throw InvalidParameter("tol_scale must be positive");
}

RunReport run_suite(SuiteName suite, const SuiteParams& params)
{
    validate(params);
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.suite = to_string(suite);
    report.params = params;
    const MCConfig cfg{params.seed, params.samples, params.shards};
    const double ts = params.tol_scale;
    const bool all = suite == SuiteName::all;
    auto& crit = report.criteria;

    if (all || suite == SuiteName::classical) {
        crit.push_back(check_classical({100, params.seed, ts}));
        crit.push_back(check_orbits({100, params.seed, ts}));
    }
    if (all || suite == SuiteName::kernel)
        crit.push_back(check_kernel_convergence({params.lambda, params.max_degree, 50, 0.6, params.seed, ts}));
    if (all || suite == SuiteName::ladder) {
        crit.push_back(check_eigenvectors({params.lambda, 20, 20, 0.5, params.seed, ts}));
        crit.push_back(check_commutator_diagonal({{params.lambda}, params.max_degree, ts}));
        crit.push_back(check_trace_defect({{params.lambda}, params.max_degree, ts}));
        crit.push_back(
            check_vacuum_cyclicity({params.lambda, std::min(4, params.max_degree), params.max_degree, ts}));
    }
    if (all || suite == SuiteName::rep)
        crit.push_back(check_representation({params.lambda, 50, 100, std::clamp(params.max_degree, 2, 8), params.seed, ts}));
    if (all || suite == SuiteName::measure)
        crit.push_back(check_measure({{params.lambda}, cfg, std::min(4, params.max_degree), ts}));
    if (all || suite == SuiteName::star) {
        crit.push_back(check_star_asymptotics({{8, 16, 32, 64}, cfg, ts}));
        crit.push_back(check_toeplitz({params.lambda, std::min(2, params.max_degree), cfg, ts}));
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

// ---------------------------------------------------------------------------
// Tables

TableKind parse_table(const std::string& name)
{
    static const std::vector<std::pair<std::string, TableKind>> table{{"trdiag", TableKind::trdiag},
                                                                        {"sigma_a", TableKind::sigma_a},
                                                                        {"commdiag", TableKind::commdiag},
                                                                        {"observables", TableKind::observables},
                                                                        {"basis", TableKind::basis}};
    for (const auto& [key, value] : table)
        if (key == name) return value;
    throw InvalidParameter("unknown table '" + name + "'");
}

std::string to_string(TableKind k)
{
    switch (k) {
    case TableKind::trdiag: return "trdiag";
    case TableKind::sigma_a: return "sigma_a";
    case TableKind::commdiag: return "commdiag";
    case TableKind::observables: return "observables";
    case TableKind::basis: return "basis";
    }
    return "?";
}

std::string format_double(double x)
{
    if (x == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string half(int twice) { return twice % 2 == 0 ? std::to_string(twice / 2) : format_double(twice / 2.0); }

void row(std::ostringstream& os, std::initializer_list<std::string> cells)
{
    bool first = true;
    for (const auto& c : cells) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '\n';
}

}  // namespace

std::string emit_table(TableKind kind, const SuiteParams& params, int m_max)
{
    validate(params);
    std::ostringstream os;
    os << "# qmink " << kToolVersion << " table=" << to_string(kind) << " lambda=" << params.lambda
       << " max_degree=" << params.max_degree << " seed=" << params.seed << '\n';
    const int lambda = params.lambda;
    const auto fd = [](double x) { return format_double(x); };

    switch (kind) {
    case TableKind::trdiag: {
        // rows (j, m) with degree <= max_degree, evaluated at j1 = j2 = j where the truncation two degrees
        // higher leaves every contributing path intact
        const Truncation t(params.max_degree + 2);
        const LadderAlgebra alg(lambda, t);
        const MatrixXc anti = trace_defect_matrix(alg, Ordering::antinormal).dense();
        const MatrixXc normal = trace_defect_matrix(alg, Ordering::normal).dense();
        row(os, {"j", "m", "closed_form", "antinormal_matrix", "normal_matrix", "abs_diff"});
        for (int two_j = 0; two_j <= params.max_degree; ++two_j)
            for (int m = 0; 2 * m + two_j <= params.max_degree; ++m) {
                const BasisIndex idx{two_j, m, two_j, two_j};
                const auto e = static_cast<Eigen::Index>(alg.basis().position(idx));
                const double closed = trace_defect_diag_closed(lambda, idx);
                const double a = anti(e, e).real();
                row(os, {half(two_j), std::to_string(m), fd(closed), fd(a), fd(normal(e, e).real()),
                         fd(std::abs(closed - a))});
            }
        break;
    }
    case TableKind::sigma_a: {
        const auto s = sigma_a(lambda, m_max);
        row(os, {"m", "sigma_a"});
        for (int m = 0; m <= m_max; ++m) row(os, {std::to_string(m), fd(s[static_cast<std::size_t>(m)])});
        row(os, {"inf", fd(s.back())});
        break;
    }
    case TableKind::commdiag: {
        const Truncation t(params.max_degree);
        const LadderAlgebra alg(lambda, t);
        const MatrixXc C = commutator_matrix(alg.a_dag(1, 1), alg.a(1, 1)).dense();
        row(os, {"j", "m", "j1", "j2", "closed_form", "matrix", "abs_diff"});
        const auto& basis = alg.basis();
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const auto& idx = basis[k];
            if (!is_interior(idx, t, 2)) continue;
            const auto e = static_cast<Eigen::Index>(k);
            const double closed = comm_a11_diag_closed(lambda, idx);
            row(os, {half(idx.two_j), std::to_string(idx.m), half(idx.two_j1), half(idx.two_j2), fd(closed),
                     fd(C(e, e).real()), fd(std::abs(C(e, e).real() - closed))});
        }
        break;
    }
    case TableKind::observables: {
        Sampler rng(params.seed);
        row(os, {"sample", "x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3", "p0", "p1", "p2", "p3", "d", "a0", "a1",
                 "a2", "a3", "m01", "m02", "m03", "m12", "m13", "m23", "decomposition_residual"});
        for (int k = 0; k < 20; ++k) {
            const Mat2c W = rng.tube_point();
            const CVec4c w = vector_of(W);
            const auto obs = observables_tube(W, static_cast<double>(lambda));
            const double res = observable_distance(decompose_su22(momentum_J_lambda(W, double(lambda))), obs);
            std::vector<std::string> cells{std::to_string(k)};
            for (int mu = 0; mu < 4; ++mu) cells.push_back(fd(w(mu).real()));
            for (int mu = 0; mu < 4; ++mu) cells.push_back(fd(w(mu).imag()));
            for (int mu = 0; mu < 4; ++mu) cells.push_back(fd(obs.p(mu)));
            cells.push_back(fd(obs.d));
            for (int mu = 0; mu < 4; ++mu) cells.push_back(fd(obs.a(mu)));
            for (const auto& [mu, nu] : kLorentzPairs) cells.push_back(fd(obs.m(mu, nu)));
            cells.push_back(fd(res));
            for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
            os << '\n';
        }
        break;
    }
    case TableKind::basis: {
        row(os, {"position", "j", "m", "j1", "j2", "degree"});
        const auto idx = enumerate(Truncation(params.max_degree));
        for (std::size_t k = 0; k < idx.size(); ++k)
            row(os, {std::to_string(k), half(idx[k].two_j), std::to_string(idx[k].m), half(idx[k].two_j1),
                     half(idx[k].two_j2), std::to_string(idx[k].degree())});
        break;
    }
    }
    return os.str();
}

}  // namespace qmink
