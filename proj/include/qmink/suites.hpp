#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmink/berezin_quadrature.hpp"

namespace qmink {

/// One numerical check: pass iff value <= bound (or the recorded boolean outcome for structural checks).
struct CheckRecord {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
    /// Reported but left out of the verdict.
    bool informational = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<CheckRecord> checks;
    double seconds = 0.0;

    bool passed() const;
};

// Tolerances of the acceptance criteria. The runner multiplies them by --tol-scale; the acceptance
// binary uses them as they are.
inline constexpr double kKernelTol = 1e-6;
inline constexpr double kEigenTol = 1e-5;
inline constexpr double kCommutatorTol = 1e-12;
inline constexpr double kTraceDefectTol = 1e-12;
inline constexpr double kVacuumTol = 1e-9;
inline constexpr double kSigmaBand = 3.0;
inline constexpr double kUnitMassStderrMax = 1e-2;
inline constexpr double kRepTol = 1e-10;
inline constexpr double kCocycleTol = 1e-9;
inline constexpr double kTranslationTol = 1e-9;
inline constexpr double kClassicalTol = 1e-9;
inline constexpr double kAccelLimitTol = 1e-4;
inline constexpr double kStarSlope = -1.0;
inline constexpr double kStarSlopeBand = 0.3;

struct KernelParams {
    int lambda = 5;
    int max_degree = 24;
    int pairs = 50;
    double radius = 0.6;
    std::uint64_t seed = 42;
    double tol_scale = 1.0;
};
CriterionResult check_kernel_convergence(const KernelParams& p);

struct EigenParams {
    int lambda = 5;
    int max_degree = 20;
    int points = 20;
    double radius = 0.5;
    std::uint64_t seed = 42;
    double tol_scale = 1.0;
};
CriterionResult check_eigenvectors(const EigenParams& p);

struct LadderParams {
    std::vector<int> lambdas{4, 5, 7};
    int max_degree = 8;
    double tol_scale = 1.0;
};
CriterionResult check_commutator_diagonal(const LadderParams& p);
CriterionResult check_trace_defect(const LadderParams& p);

struct VacuumParams {
    int lambda = 5;
    int degree_limit = 4;
    int max_degree = 10;
    double tol_scale = 1.0;
};
CriterionResult check_vacuum_cyclicity(const VacuumParams& p);

struct MeasureParams {
    std::vector<int> lambdas{4, 5, 6};
    MCConfig cfg{42, 1000000, 8};
    int gram_degree = 4;
    double tol_scale = 1.0;
};
CriterionResult check_measure(const MeasureParams& p);

struct RepParams {
    int lambda = 5;
    int pairs = 50;
    int cocycle_samples = 100;
    int max_degree = 6;
    std::uint64_t seed = 42;
    double tol_scale = 1.0;
};
CriterionResult check_representation(const RepParams& p);

struct ClassicalParams {
    int points = 100;
    std::uint64_t seed = 42;
    double tol_scale = 1.0;
};
CriterionResult check_classical(const ClassicalParams& p);
CriterionResult check_orbits(const ClassicalParams& p);

struct StarParams {
    std::vector<int> lambdas{8, 16, 32, 64};
    MCConfig cfg{42, 400000, 8};
    double tol_scale = 1.0;
};
/// f(Z^dag, V) = v11 and g(Z^dag, V) = conj(z11) at Z = 0.
CriterionResult check_star_asymptotics(const StarParams& p);

struct ToeplitzParams {
    int lambda = 5;
    int max_degree = 2;
    MCConfig cfg{42, 1000000, 8};
    double tol_scale = 1.0;
};
CriterionResult check_toeplitz(const ToeplitzParams& p);

enum class SuiteName { classical, kernel, ladder, rep, measure, star, all };

SuiteName parse_suite(const std::string& name);
std::string to_string(SuiteName s);

/// Flags shared by the runner and the table emitter.
struct SuiteParams {
    int lambda = 5;
    int max_degree = 8;
    std::size_t samples = 200000;
    std::uint64_t seed = 42;
    std::size_t shards = 8;
    double tol_scale = 1.0;
};

inline constexpr int kMaxDegreeCap = 40;

/// Throws InvalidParameter for lambda < 4, max_degree outside [0, cap], samples or shards of 0,
/// or a nonpositive tolerance scale.
void validate(const SuiteParams& p);

struct RunReport {
    std::string suite;
    SuiteParams params;
    std::vector<CriterionResult> criteria;
    double wall_seconds = 0.0;

    bool passed() const;
};

RunReport run_suite(SuiteName suite, const SuiteParams& params);

enum class TableKind { trdiag, sigma_a, commdiag, observables, basis };

TableKind parse_table(const std::string& name);
std::string to_string(TableKind k);

/// CSV text: a provenance comment line, a header row, then the data rows.
std::string emit_table(TableKind kind, const SuiteParams& params, int m_max = 10);

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double x);

}  // namespace qmink
