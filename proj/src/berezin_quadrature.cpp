#include "qmink/berezin_quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "qmink/conformal_geometry.hpp"

namespace qmink {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block)
{
    const std::uint64_t s = splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x632BE59BD9B4E019ULL + block));
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

/// Runs fn(task) for task in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn)
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t t = 0; t < n; ++t) fn(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < n; t = next++) {
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

bool inside_ball(const Mat2c& Z)
{
    // E - Z^dag Z = [[a, b], [conj b, d]]; positive definite iff its smaller eigenvalue is
    const Mat2c H = Mat2c::Identity() - Z.adjoint() * Z;
    const double a = H(0, 0).real(), d = H(1, 1).real();
    const double min_ev = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + std::norm(H(0, 1)));
    return min_ev > kDegeneracyTol;
}

struct RawBlock {
    std::vector<Mat2c> points;
    std::vector<std::size_t> ordinal;  // proposal number of each kept point
    std::size_t proposed = 0;
};

RawBlock cube_block(std::uint64_t seed, std::uint64_t stream, std::size_t b, std::size_t proposals)
{
    std::mt19937_64 rng = block_rng(seed, stream, b);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RawBlock blk;
    blk.proposed = proposals;
    for (std::size_t k = 0; k < proposals; ++k) {
        Mat2c Z;
        for (int e = 0; e < 4; ++e) {
            const double re = u(rng);
            const double im = u(rng);
            Z(e / 2, e % 2) = cplx(re, im);
        }
        if (inside_ball(Z)) {
            blk.points.push_back(Z);
            blk.ordinal.push_back(k);
        }
    }
    return blk;
}

RawBlock beta_block(int lambda, std::uint64_t seed, std::uint64_t stream, std::size_t b, std::size_t count)
{
    std::mt19937_64 rng = block_rng(seed, stream, b);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    RawBlock blk;
    blk.proposed = count;
    const int rows = lambda - 2;
    for (std::size_t k = 0; k < count; ++k) {
        Mat2c G1;
        for (int e = 0; e < 4; ++e) {
            const double re = n(rng);
            const double im = n(rng);
            G1(e / 2, e % 2) = cplx(re, im);
        }
        Mat2c gram = G1.adjoint() * G1;
        for (int r = 0; r < rows; ++r) {
            Eigen::Matrix<cplx, 1, 2> row;
            for (int c = 0; c < 2; ++c) {
                const double re = n(rng);
                const double im = n(rng);
                row(c) = cplx(re, im);
            }
            gram += row.adjoint() * row;
        }
        Eigen::SelfAdjointEigenSolver<Mat2c> es(gram);
        const Mat2c Z = G1 * es.operatorInverseSqrt();
        blk.points.push_back(Z);
        blk.ordinal.push_back(k);
    }
    return blk;
}

/// Generates blocks until `samples` points are kept, then trims the last block.
template <typename MakeBlock>
std::vector<SampleBlock> collect_blocks(std::size_t samples, std::size_t expected_blocks, std::size_t workers,
                                        MakeBlock&& make)
{
    std::vector<SampleBlock> out;
    std::size_t kept = 0;
    std::size_t next = 0;
    while (kept < samples) {
        const std::size_t wave = std::max(expected_blocks > next ? expected_blocks - next : 1, workers);
        std::vector<RawBlock> raw(wave);
        parallel_for(wave, workers, [&](std::size_t t) { raw[t] = make(next + t); });
        next += wave;
        for (RawBlock& blk : raw) {
            if (kept >= samples) break;
            const std::size_t need = samples - kept;
            SampleBlock sb;
            if (blk.points.size() > need) {
                blk.points.resize(need);
                sb.proposed = blk.ordinal[need - 1] + 1;
            } else {
                sb.proposed = blk.proposed;
            }
            sb.points = std::move(blk.points);
            kept += sb.points.size();
            out.push_back(std::move(sb));
        }
    }
    return out;
}

DomainSamples draw(int lambda, const MCConfig& cfg, std::uint64_t stream, std::size_t target_blocks,
                   MeasureSampler sampler)
{
    cfg.validate();
    target_blocks = std::max<std::size_t>(2, target_blocks);
    const std::size_t workers = worker_count(cfg);
    DomainSamples ds;
    ds.sampler = sampler;
    if (sampler == MeasureSampler::cube_rejection) {
        const double p = domain_acceptance();
        const auto per_block = static_cast<std::size_t>(
            std::max(64.0, std::ceil(static_cast<double>(cfg.samples) / (static_cast<double>(target_blocks) * p))));
        const auto expected = static_cast<std::size_t>(std::ceil(static_cast<double>(cfg.samples) /
                                                                 (static_cast<double>(per_block) * p)));
        ds.volume = 256.0;
        ds.blocks = collect_blocks(cfg.samples, expected, workers, [&](std::size_t b) {
            return cube_block(cfg.seed, stream, b, per_block);
        });
    } else {
        require_lambda(lambda);
        ds.lambda = lambda;
        ds.volume = 1.0;
        const std::size_t per_block = std::max<std::size_t>(1, (cfg.samples + target_blocks - 1) / target_blocks);
        const std::size_t expected = (cfg.samples + per_block - 1) / per_block;
        ds.blocks = collect_blocks(cfg.samples, expected, workers, [&](std::size_t b) {
            return beta_block(lambda, cfg.seed, stream, b, per_block);
        });
    }
    return ds;
}

/// Per-block sums S_b of a vector-valued integrand; value = volume S / N, delete-one-block jackknife error.
struct BlockSums {
    std::vector<VectorXc> sums;
    std::vector<std::size_t> proposed;
};

struct Combined {
    VectorXc value;
    Eigen::VectorXd stderr;
};

Combined combine(const BlockSums& bs, double volume)
{
    const std::size_t B = bs.sums.size();
    const Eigen::Index dim = B ? bs.sums[0].size() : 0;
    VectorXc total = VectorXc::Zero(dim);
    std::size_t N = 0;
    for (std::size_t b = 0; b < B; ++b) {
        total += bs.sums[b];
        N += bs.proposed[b];
    }
    Combined out;
    out.value = (volume / static_cast<double>(N)) * total;
    out.stderr = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::infinity());
    if (B < 2) return out;
    std::vector<VectorXc> theta(B);
    VectorXc mean = VectorXc::Zero(dim);
    for (std::size_t b = 0; b < B; ++b) {
        theta[b] = (volume / static_cast<double>(N - bs.proposed[b])) * (total - bs.sums[b]);
        mean += theta[b];
    }
    mean /= static_cast<double>(B);
    Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
    for (std::size_t b = 0; b < B; ++b) var += (theta[b] - mean).cwiseAbs2();
    out.stderr = (var * (static_cast<double>(B - 1) / static_cast<double>(B))).cwiseSqrt();
    return out;
}

template <typename Fill>
BlockSums block_sums(const DomainSamples& ds, Eigen::Index dim, std::size_t workers, Fill&& fill)
{
    BlockSums bs;
    bs.sums.assign(ds.blocks.size(), VectorXc::Zero(dim));
    bs.proposed.resize(ds.blocks.size());
    parallel_for(ds.blocks.size(), workers, [&](std::size_t b) {
        VectorXc scratch(dim);
        for (const Mat2c& Z : ds.blocks[b].points) {
            fill(Z, scratch);
            bs.sums[b] += scratch;
        }
        bs.proposed[b] = ds.blocks[b].proposed;
    });
    return bs;
}

MCMatrix to_matrix(const Combined& c, Eigen::Index n, const DomainSamples& ds)
{
    MCMatrix m;
    m.value = c.value.reshaped(n, n);
    m.stderr = c.stderr.reshaped(n, n);
    m.accepted = ds.accepted();
    m.proposed = ds.proposed();
    return m;
}

/// Weight of one point for integrals against d mu_lambda.
double point_weight(const DomainSamples& ds, int lambda, const Mat2c& Z)
{
    if (ds.sampler == MeasureSampler::cube_rejection) return measure_density(lambda, Z);
    if (ds.lambda != lambda) throw InvalidParameter("samples were drawn for a different lambda");
    return 1.0;
}

/// sum over points of w(Z) h(Z) conj(Delta(Z)) Delta(Z)^T, assembled with one matrix product per block.
MCMatrix hermitian_form(int lambda, const Truncation& trunc, const DomainSamples& ds, std::size_t workers,
                        const DomainFunction* h)
{
    const FockBasis basis(trunc);
    const DeltaEvaluator eval(lambda, basis);
    const auto n = static_cast<Eigen::Index>(basis.size());
    BlockSums bs;
    bs.sums.assign(ds.blocks.size(), VectorXc());
    bs.proposed.resize(ds.blocks.size());
    parallel_for(ds.blocks.size(), workers, [&](std::size_t b) {
        const auto& pts = ds.blocks[b].points;
        const auto m = static_cast<Eigen::Index>(pts.size());
        MatrixXc left(n, m), right(n, m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const Mat2c& Z = pts[static_cast<std::size_t>(k)];
            eval.evaluate(Z, right.col(k).data());
            cplx w = point_weight(ds, lambda, Z);
            if (h) w *= (*h)(Z);
            left.col(k) = w * right.col(k).conjugate();
        }
        MatrixXc S = MatrixXc::Zero(n, n);
        if (m > 0) S.noalias() = left * right.transpose();
        bs.sums[b] = S.reshaped();
        bs.proposed[b] = ds.blocks[b].proposed;
    });
    return to_matrix(combine(bs, ds.volume), n, ds);
}

}  // namespace

void MCConfig::validate() const
{
    if (samples < 1) throw InvalidParameter("samples must be positive");
    if (shards < 1) throw InvalidParameter("shards must be positive");
}

double MCEstimate::z_score(cplx target) const
{
    const double diff = std::abs(value - target);
    // exact estimators (zero spread) still carry rounding noise
    if (diff <= 1e-13 * std::max(1.0, std::abs(target))) return 0.0;
    if (stderr == 0.0) return std::numeric_limits<double>::infinity();
    return diff / stderr;
}

bool MCEstimate::within(cplx target, double sigmas) const
{
    return std::abs(value - target) <= sigmas * stderr;
}

MCEstimate MCMatrix::at(Eigen::Index row, Eigen::Index col) const
{
    return {value(row, col), stderr(row, col), accepted, proposed};
}

std::size_t DomainSamples::accepted() const
{
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.points.size();
    return n;
}

std::size_t DomainSamples::proposed() const
{
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.proposed;
    return n;
}

double domain_acceptance()
{
    return std::pow(std::numbers::pi, 4) / 3072.0;
}

std::size_t worker_count(const MCConfig& cfg)
{
    std::size_t n = std::max<std::size_t>(1, cfg.shards);
    if (const char* env = std::getenv("QMINK_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    if (hw > 0) n = std::min<std::size_t>(n, hw);
    return n;
}

DomainSamples sample_domain(const MCConfig& cfg, std::size_t target_blocks)
{
    return draw(0, cfg, 0, target_blocks, MeasureSampler::cube_rejection);
}

DomainSamples sample_measure(int lambda, const MCConfig& cfg, std::size_t target_blocks)
{
    return draw(lambda, cfg, 0, target_blocks, MeasureSampler::matrix_beta);
}

double measure_density(int lambda, const Mat2c& Z)
{
    const double det = (Mat2c::Identity() - Z.adjoint() * Z).determinant().real();
    return measure_constant(lambda) * std::pow(det, lambda - 4);
}

MCEstimate integrate_mu_lambda(const DomainFunction& f, int lambda, const DomainSamples& ds, std::size_t workers)
{
    require_lambda(lambda);
    const BlockSums bs = block_sums(ds, 1, workers, [&](const Mat2c& Z, VectorXc& out) {
        out(0) = point_weight(ds, lambda, Z) * f(Z);
    });
    const Combined c = combine(bs, ds.volume);
    return {c.value(0), c.stderr(0), ds.accepted(), ds.proposed()};
}

MCEstimate integrate_mu_lambda(const DomainFunction& f, int lambda, const MCConfig& cfg, MeasureSampler sampler)
{
    const DomainSamples ds = draw(lambda, cfg, 0, kJackknifeBlocks, sampler);
    return integrate_mu_lambda(f, lambda, ds, worker_count(cfg));
}

MCMatrix gram(int lambda, const Truncation& trunc, const DomainSamples& samples, std::size_t workers)
{
    require_lambda(lambda);
    return hermitian_form(lambda, trunc, samples, workers, nullptr);
}

MCMatrix gram(int lambda, const Truncation& trunc, const MCConfig& cfg, MeasureSampler sampler)
{
    return gram(lambda, trunc, draw(lambda, cfg, 0, kJackknifeBlocks, sampler), worker_count(cfg));
}

MCMatrix toeplitz_matrix(const DomainFunction& f, int lambda, const Truncation& trunc, const DomainSamples& samples,
                         std::size_t workers)
{
    require_lambda(lambda);
    return hermitian_form(lambda, trunc, samples, workers, &f);
}

MCMatrix toeplitz_matrix(const DomainFunction& f, int lambda, const Truncation& trunc, const MCConfig& cfg,
                         MeasureSampler sampler)
{
    return toeplitz_matrix(f, lambda, trunc, draw(lambda, cfg, 0, kJackknifeBlocks, sampler), worker_count(cfg));
}

cplx covariant2(const SparseOperator& F, int lambda, const Mat2c& Z, const Mat2c& V)
{
    if (F.lambda() != lambda) throw TruncationMismatch("operator was built for another lambda");
    const FockBasis basis(F.truncation());
    const VectorXc z = coherent_amplitudes(lambda, Z, basis).amplitudes;
    const VectorXc v = coherent_amplitudes(lambda, V, basis).amplitudes;
    return z.dot(F.matrix() * v) / z.dot(v);
}

cplx covariant_symbol(const SparseOperator& F, int lambda, const Mat2c& Z)
{
    return covariant2(F, lambda, Z, Z);
}

MCEstimate star(const SesquiSymbol& f, const SesquiSymbol& g, int lambda, const Mat2c& Z, const MCConfig& cfg,
                MeasureSampler sampler)
{
    require_lambda(lambda);
    if (!in_domain(Z)) throw OutsideDomain("star product needs a point of the domain");
    const DomainSamples ds = draw(lambda, cfg, 0, kJackknifeBlocks, sampler);
    const std::size_t workers = worker_count(cfg);
    BlockSums bs;
    if (sampler == MeasureSampler::matrix_beta) {
        const Mat4c h = ball_translation(Z).matrix();
        bs = block_sums(ds, 1, workers, [&](const Mat2c& V0, VectorXc& out) {
            const Mat2c V = mobius(h, V0);
            out(0) = f(Z, V) * g(V, Z);
        });
    } else {
        const double kzz = kernel_closed(lambda, Z, Z).real();
        bs = block_sums(ds, 1, workers, [&](const Mat2c& V, VectorXc& out) {
            const double w = std::norm(kernel_closed(lambda, Z, V)) / kzz * measure_density(lambda, V);
            out(0) = w * f(Z, V) * g(V, Z);
        });
    }
    const Combined c = combine(bs, ds.volume);
    return {c.value(0), c.stderr(0), ds.accepted(), ds.proposed()};
}

double StarAsymptoticsRow::product_deviation() const
{
    return std::abs(star_fg.value - product);
}

double StarAsymptoticsRow::commutator_deviation_literal() const
{
    return std::abs(commutator.value - cplx(0, lambda) * poisson);
}

double StarAsymptoticsRow::commutator_deviation_normalized() const
{
    return std::abs(commutator.value + cplx(0, 1) * poisson);
}

std::vector<StarAsymptoticsRow> star_asymptotics(const SesquiSymbol& f, const SesquiSymbol& g,
                                                 const std::vector<int>& lambdas, const Mat2c& Z,
                                                 const MCConfig& cfg)
{
    if (!in_domain(Z)) throw OutsideDomain("star_asymptotics needs a point of the domain");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        require_lambda(lambdas[k]);
        if (k > 0 && lambdas[k] <= lambdas[k - 1]) throw InvalidParameter("lambda list must be ascending");
    }
    // Diagonal restrictions carried to the tube.
    const auto on_tube = [](const SesquiSymbol& s) {
        return ScalarField([s](const CVec4c& w) {
            const Mat2c P = cayley(matrix_of(w));
            return s(P, P);
        });
    };
    const PartialsField df = central_partials(on_tube(f));
    const PartialsField dg = central_partials(on_tube(g));
    const CVec4c w0 = vector_of(cayley_inv(Z));
    const Mat4c h = ball_translation(Z).matrix();

    std::vector<StarAsymptoticsRow> rows;
    for (int lambda : lambdas) {
        const DomainSamples ds = draw(lambda, cfg, 0, kJackknifeBlocks, MeasureSampler::matrix_beta);
        const BlockSums bs = block_sums(ds, 3, worker_count(cfg), [&](const Mat2c& V0, VectorXc& out) {
            const Mat2c V = mobius(h, V0);
            out(0) = f(Z, V) * g(V, Z);
            out(1) = g(Z, V) * f(V, Z);
            out(2) = out(0) - out(1);
        });
        const Combined c = combine(bs, ds.volume);
        StarAsymptoticsRow row;
        row.lambda = lambda;
        row.star_fg = {c.value(0), c.stderr(0), ds.accepted(), ds.proposed()};
        row.star_gf = {c.value(1), c.stderr(1), ds.accepted(), ds.proposed()};
        row.commutator = {c.value(2), c.stderr(2), ds.accepted(), ds.proposed()};
        row.product = f(Z, Z) * g(Z, Z);
        row.poisson = poisson_bracket(df, dg, w0, lambda);
        rows.push_back(row);
    }
    return rows;
}

MCMatrix contravariant_quantize(const SesquiSymbol& f, int lambda, const Truncation& trunc, const MCConfig& cfg,
                                double budget, MeasureSampler sampler)
{
    require_lambda(lambda);
    cfg.validate();
    const FockBasis basis(trunc);
    const auto n = static_cast<Eigen::Index>(basis.size());
    const double cost = static_cast<double>(cfg.samples) * static_cast<double>(cfg.samples) *
                        static_cast<double>(n) * static_cast<double>(n);
    if (cost > budget)
        throw BudgetExceeded("projected cost " + std::to_string(cost) + " exceeds budget " + std::to_string(budget));

    constexpr std::size_t kPairBlocks = 16;
    const DomainSamples zs = draw(lambda, cfg, 1, kPairBlocks, sampler);
    const DomainSamples vs = draw(lambda, cfg, 2, kPairBlocks, sampler);

    struct Prepared {
        std::vector<Mat2c> pts;
        std::vector<VectorXc> delta;
        std::vector<double> weight;
    };
    const DeltaEvaluator eval(lambda, basis);
    const auto prepare = [&](const DomainSamples& ds) {
        std::vector<Prepared> out(ds.blocks.size());
        for (std::size_t b = 0; b < ds.blocks.size(); ++b)
            for (const Mat2c& P : ds.blocks[b].points) {
                out[b].pts.push_back(P);
                out[b].delta.push_back(eval(P));
                out[b].weight.push_back(point_weight(ds, lambda, P));
            }
        return out;
    };
    const std::vector<Prepared> zp = prepare(zs), vp = prepare(vs);
    const std::size_t BZ = zp.size(), BV = vp.size();

    // Pair-block sums X[bz][bv] of Delta_a(Z) <Z|V>_N conj(Delta_b(V)) f w_Z w_V.
    std::vector<MatrixXc> X(BZ * BV, MatrixXc::Zero(n, n));
    parallel_for(BZ * BV, worker_count(cfg), [&](std::size_t t) {
        const Prepared& A = zp[t / BV];
        const Prepared& B = vp[t % BV];
        const auto ma = static_cast<Eigen::Index>(A.pts.size());
        const auto mb = static_cast<Eigen::Index>(B.pts.size());
        if (ma == 0 || mb == 0) return;
        MatrixXc DA(n, ma), DB(n, mb);
        for (Eigen::Index i = 0; i < ma; ++i) DA.col(i) = A.delta[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < mb; ++j) DB.col(j) = B.delta[static_cast<std::size_t>(j)];
        MatrixXc kernel = DA.adjoint() * DB;  // truncated <Z_i|V_j>
        for (Eigen::Index i = 0; i < ma; ++i)
            for (Eigen::Index j = 0; j < mb; ++j)
                kernel(i, j) *= f(A.pts[static_cast<std::size_t>(i)], B.pts[static_cast<std::size_t>(j)]) *
                                A.weight[static_cast<std::size_t>(i)] * B.weight[static_cast<std::size_t>(j)];
        X[t].noalias() = DA * kernel * DB.adjoint();
    });

    std::vector<double> NZb(BZ), NVb(BV);
    double NZ = 0, NV = 0;
    for (std::size_t b = 0; b < BZ; ++b) NZ += (NZb[b] = static_cast<double>(zs.blocks[b].proposed));
    for (std::size_t b = 0; b < BV; ++b) NV += (NVb[b] = static_cast<double>(vs.blocks[b].proposed));
    const double vol = zs.volume * vs.volume;

    MatrixXc total = MatrixXc::Zero(n, n);
    std::vector<MatrixXc> rowsum(BZ, MatrixXc::Zero(n, n)), colsum(BV, MatrixXc::Zero(n, n));
    for (std::size_t a = 0; a < BZ; ++a)
        for (std::size_t b = 0; b < BV; ++b) {
            total += X[a * BV + b];
            rowsum[a] += X[a * BV + b];
            colsum[b] += X[a * BV + b];
        }
    MCMatrix out;
    out.value = (vol / (NZ * NV)) * total;
    out.accepted = zs.accepted() + vs.accepted();
    out.proposed = zs.proposed() + vs.proposed();
    // Jackknife deleting block k from both streams.
    const std::size_t B = std::min(BZ, BV);
    std::vector<MatrixXc> theta(B);
    MatrixXc mean = MatrixXc::Zero(n, n);
    for (std::size_t k = 0; k < B; ++k) {
        const MatrixXc rest = total - rowsum[k] - colsum[k] + X[k * BV + k];
        theta[k] = (vol / ((NZ - NZb[k]) * (NV - NVb[k]))) * rest;
        mean += theta[k];
    }
    mean /= static_cast<double>(B);
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < B; ++k) var += (theta[k] - mean).cwiseAbs2();
    out.stderr = (var * (static_cast<double>(B - 1) / static_cast<double>(B))).cwiseSqrt();
    return out;
}

}  // namespace qmink
