#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "qmink/coherent_states.hpp"
#include "qmink/errors.hpp"
#include "qmink/suites.hpp"
#include "test_support.hpp"

using namespace qmink;

namespace {

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("DeltaEvaluator agrees with the per-index evaluation")
{
    const FockBasis basis{Truncation(6)};
    const DeltaEvaluator eval(5, basis);
    for (int trial = 0; trial < 5; ++trial) {
        const Mat2c Z = testing::random_in_ball(0.8);
        const VectorXc v = eval(Z);
        for (std::size_t k = 0; k < basis.size(); ++k)
            CHECK(std::abs(v(static_cast<Eigen::Index>(k)) - delta(5, basis[k], Z)) < 1e-12);
    }
}

TEST_CASE("suite parameter validation")
{
    SuiteParams p;
    CHECK_NOTHROW(validate(p));
    p.lambda = 3;
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    try {
        validate(p);
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find("integer greater than 3") != std::string::npos);
    }
    p = {};
    p.max_degree = kMaxDegreeCap + 1;
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    p = {};
    p.samples = 0;
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    p = {};
    p.tol_scale = 0.0;
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    CHECK_THROWS_AS(run_suite(SuiteName::classical, SuiteParams{3}), InvalidParameter);
}

TEST_CASE("suite and table names round-trip")
{
    for (auto s : {SuiteName::classical, SuiteName::kernel, SuiteName::ladder, SuiteName::rep, SuiteName::measure,
                   SuiteName::star, SuiteName::all})
        CHECK(parse_suite(to_string(s)) == s);
    for (auto k : {TableKind::trdiag, TableKind::sigma_a, TableKind::commdiag, TableKind::observables,
                   TableKind::basis})
        CHECK(parse_table(to_string(k)) == k);
    CHECK_THROWS_AS(parse_suite("everything"), InvalidParameter);
    CHECK_THROWS_AS(parse_table("plot"), InvalidParameter);
}

TEST_CASE("format_double is the shortest round-trip form")
{
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-12) == "1e-12");
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("tables: provenance line, header and row counts")
{
    SuiteParams p;
    const auto basis = lines(emit_table(TableKind::basis, p));
    REQUIRE(basis.size() == 2 + 495);
    CHECK(basis[0].rfind("# qmink", 0) == 0);
    CHECK(basis[0].find("seed=42") != std::string::npos);
    CHECK(basis[0].find("lambda=5") != std::string::npos);
    CHECK(basis[1] == "position,j,m,j1,j2,degree");
    CHECK(basis[2] == "0,0,0,0,0,0");

    p.lambda = 4;
    const auto sigma = lines(emit_table(TableKind::sigma_a, p, 10));
    REQUIRE(sigma.size() == 2 + 11 + 1);
    CHECK(sigma[2] == "0," + format_double(2.0 / 3.0));
    CHECK(sigma.back() == "inf,0");

    p.max_degree = 6;
    const auto tr = lines(emit_table(TableKind::trdiag, p));
    CHECK(tr[1] == "j,m,closed_form,antinormal_matrix,normal_matrix,abs_diff");
    std::size_t expected = 0;
    for (int two_j = 0; two_j <= 6; ++two_j) expected += static_cast<std::size_t>((6 - two_j) / 2 + 1);
    REQUIRE(tr.size() == 2 + expected);
    for (std::size_t k = 2; k < tr.size(); ++k) CHECK(std::stod(tr[k].substr(tr[k].rfind(',') + 1)) < 1e-12);
    // vacuum row at lambda = 4: closed form 1, normal ordering 1 + 4/lambda
    CHECK(tr[2] == "0,0,1,1,2,0");

    const auto obs = lines(emit_table(TableKind::observables, p));
    CHECK(obs.size() == 2 + 20);
    CHECK(emit_table(TableKind::observables, p) == emit_table(TableKind::observables, p));

    const auto comm = lines(emit_table(TableKind::commdiag, p));
    CHECK(comm.size() > 2);
}

TEST_CASE("reports carry one result per criterion of the suite")
{
    SuiteParams p;
    p.max_degree = 4;
    const RunReport r = run_suite(SuiteName::classical, p);
    REQUIRE(r.criteria.size() == 2);
    CHECK(r.criteria[0].id == 8);
    CHECK(r.criteria[1].id == 9);
    CHECK(r.passed());

    const RunReport ladder = run_suite(SuiteName::ladder, p);
    REQUIRE(ladder.criteria.size() == 4);
    CHECK(ladder.criteria[1].passed());
    CHECK(ladder.criteria[2].passed());
    CHECK(ladder.criteria[3].passed());

    CriterionResult c;
    c.checks.push_back({"strict", 1.0, 2.0, true, false});
    c.checks.push_back({"reported only", 5.0, 2.0, false, true});
    CHECK(c.passed());
    c.checks.push_back({"failing", 3.0, 2.0, false, false});
    CHECK_FALSE(c.passed());
}
