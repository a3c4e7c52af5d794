#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qmink/coherent_states.hpp"
#include "qmink/fock_basis.hpp"
#include "qmink/ladder_operators.hpp"
#include "qmink/types.hpp"

namespace qmink {

struct MCConfig {
    std::uint64_t seed = 42;
    /// Number of points of the domain kept (accepted samples).
    std::size_t samples = 200000;
    /// Upper bound on parallel workers; never changes the result.
    std::size_t shards = 8;

    void validate() const;
};

struct MCEstimate {
    cplx value = 0.0;
    double stderr = 0.0;
    std::size_t accepted = 0;
    std::size_t proposed = 0;

    /// |value - target| / stderr
    double z_score(cplx target) const;
    bool within(cplx target, double sigmas = 3.0) const;
};

struct MCMatrix {
    MatrixXc value;
    Eigen::MatrixXd stderr;
    std::size_t accepted = 0;
    std::size_t proposed = 0;

    MCEstimate at(Eigen::Index row, Eigen::Index col) const;
};

/// cube_rejection: uniform proposals in [-1,1]^8 kept when E - Z^dagger Z > 0, density as an importance weight.
/// matrix_beta: exact draws from d mu_lambda, Z = G1 (G1^dag G1 + G2^dag G2)^{-1/2} with complex Gaussian
/// G1 (2x2) and G2 ((lambda-2)x2).
enum class MeasureSampler { cube_rejection, matrix_beta };

struct SampleBlock {
    std::vector<Mat2c> points;
    std::size_t proposed = 0;
};

/// Points grouped in fixed blocks. Block b depends only on (seed, b), so the stream is independent of
/// the number of workers. An integral is estimated as volume / proposed * sum f(Z_i).
struct DomainSamples {
    std::vector<SampleBlock> blocks;
    double volume = 256.0;
    MeasureSampler sampler = MeasureSampler::cube_rejection;
    int lambda = 0;  // matrix_beta only

    std::size_t accepted() const;
    std::size_t proposed() const;
    /// Weight carried by each kept point.
    double weight() const { return volume / static_cast<double>(proposed()); }
};

inline constexpr std::size_t kJackknifeBlocks = 128;

/// vol(D) / 2^8 = pi^4 / 3072
double domain_acceptance();

/// min(shards, QMINK_THREADS if set, hardware threads), at least 1.
std::size_t worker_count(const MCConfig& cfg);

DomainSamples sample_domain(const MCConfig& cfg, std::size_t target_blocks = kJackknifeBlocks);
DomainSamples sample_measure(int lambda, const MCConfig& cfg, std::size_t target_blocks = kJackknifeBlocks);

using DomainFunction = std::function<cplx(const Mat2c&)>;
/// f(Z^dagger, V): antiholomorphic in the first point, holomorphic in the second.
using SesquiSymbol = std::function<cplx(const Mat2c& z, const Mat2c& v)>;

/// Density of d mu_lambda with respect to Lebesgue measure: c_lambda det(E - Z^dagger Z)^{lambda-4}.
double measure_density(int lambda, const Mat2c& Z);

MCEstimate integrate_mu_lambda(const DomainFunction& f, int lambda, const MCConfig& cfg,
                               MeasureSampler sampler = MeasureSampler::cube_rejection);
MCEstimate integrate_mu_lambda(const DomainFunction& f, int lambda, const DomainSamples& samples,
                               std::size_t workers = 1);

/// Entry (a, b) = integral of conj(Delta_a) Delta_b d mu_lambda.
MCMatrix gram(int lambda, const Truncation& trunc, const MCConfig& cfg,
              MeasureSampler sampler = MeasureSampler::cube_rejection);
MCMatrix gram(int lambda, const Truncation& trunc, const DomainSamples& samples, std::size_t workers = 1);

/// Entry (a, b) = integral of conj(Delta_a) f Delta_b d mu_lambda.
MCMatrix toeplitz_matrix(const DomainFunction& f, int lambda, const Truncation& trunc, const MCConfig& cfg,
                         MeasureSampler sampler = MeasureSampler::cube_rejection);
MCMatrix toeplitz_matrix(const DomainFunction& f, int lambda, const Truncation& trunc,
                         const DomainSamples& samples, std::size_t workers = 1);

/// <Z|F Z> / <Z|Z> with truncated coherent vectors.
cplx covariant_symbol(const SparseOperator& F, int lambda, const Mat2c& Z);
/// <Z|F V> / <Z|V> with truncated coherent vectors.
cplx covariant2(const SparseOperator& F, int lambda, const Mat2c& Z, const Mat2c& V);

/// (f * g)(Z) = integral of f(Z^dag, V) g(V^dag, Z) |a(Z, V)|^2 c_lambda d mu(V).
/// matrix_beta draws V exactly from the probability measure c_lambda |a(Z, V)|^2 d mu(V) by carrying
/// mu_lambda samples with the Mobius map that sends 0 to Z.
MCEstimate star(const SesquiSymbol& f, const SesquiSymbol& g, int lambda, const Mat2c& Z, const MCConfig& cfg,
                MeasureSampler sampler = MeasureSampler::matrix_beta);

struct StarAsymptoticsRow {
    int lambda = 0;
    MCEstimate star_fg;
    MCEstimate star_gf;
    /// f * g - g * f, estimated on the same draws.
    MCEstimate commutator;
    cplx product = 0.0;
    /// {f, g}_lambda at the tube point cayley_inv(Z).
    cplx poisson = 0.0;

    double product_deviation() const;
    /// |commutator - i lambda {f, g}_lambda|
    double commutator_deviation_literal() const;
    /// |commutator + i {f, g}_lambda|
    double commutator_deviation_normalized() const;
};

std::vector<StarAsymptoticsRow> star_asymptotics(const SesquiSymbol& f, const SesquiSymbol& g,
                                                 const std::vector<int>& lambdas, const Mat2c& Z,
                                                 const MCConfig& cfg);

inline constexpr double kDefaultContravariantBudget = 4e9;

/// Matrix of c^2 integral f(Z^dag, V) |Z><Z|V><V| / (<Z|Z><V|V>) d mu d mu. The middle overlap is the
/// truncated kernel sum_c conj(Delta_c(Z)) Delta_c(V), which reproduces the operator exactly for
/// polynomial symbols and keeps the estimator variance finite. Z and V come from independent streams;
/// every pair is used. Throws BudgetExceeded when samples^2 dim^2 exceeds the budget.
MCMatrix contravariant_quantize(const SesquiSymbol& f, int lambda, const Truncation& trunc, const MCConfig& cfg,
                                double budget = kDefaultContravariantBudget,
                                MeasureSampler sampler = MeasureSampler::matrix_beta);

}  // namespace qmink
