#include <doctest.h>

#include <algorithm>
#include <map>

#include "qmink/errors.hpp"
#include "qmink/fock_basis.hpp"

using namespace qmink;

TEST_CASE("enumeration dimensions")
{
    CHECK(enumerate(Truncation(0)).size() == 1);
    CHECK(enumerate(Truncation(0))[0] == BasisIndex{0, 0, 0, 0});
    CHECK(enumerate(Truncation(1)).size() == 5);
    CHECK(enumerate(Truncation(2)).size() == 15);
    CHECK(enumerate(Truncation(8)).size() == 495);
    for (int n = 0; n <= 12; ++n) {
        CHECK(enumerate(Truncation(n)).size() == truncated_dimension(Truncation(n)));
        std::size_t total = 0;
        for (int d = 0; d <= n; ++d) total += degree_dimension(d);
        CHECK(total == truncated_dimension(Truncation(n)));
    }
    CHECK_THROWS_AS(Truncation(-1), InvalidParameter);
}

TEST_CASE("enumeration is ordered and contains exactly the valid indices")
{
    const Truncation t(7);
    const auto idx = enumerate(t);
    auto key = [](const BasisIndex& b) { return std::tuple(b.degree(), b.two_j, b.m, b.two_j1, b.two_j2); };
    for (std::size_t k = 1; k < idx.size(); ++k) CHECK(key(idx[k - 1]) < key(idx[k]));
    std::size_t brute = 0;
    for (int tj = 0; tj <= 7; ++tj)
        for (int m = 0; 2 * m + tj <= 7; ++m)
            for (int a = -tj; a <= tj; ++a)
                for (int b = -tj; b <= tj; ++b) {
                    const BasisIndex bi{tj, m, a, b};
                    const bool ok = ((a - tj) % 2 == 0) && ((b - tj) % 2 == 0);
                    CHECK(bi.valid() == ok);
                    if (ok) {
                        ++brute;
                        CHECK(std::binary_search(idx.begin(), idx.end(), bi,
                                                 [&](const BasisIndex& x, const BasisIndex& y) { return key(x) < key(y); }));
                    }
                }
    CHECK(brute == idx.size());
    CHECK(enumerate(t) == idx);
}

TEST_CASE("shell count is (2j+1)^2")
{
    std::map<std::pair<int, int>, int> shells;
    for (const auto& b : enumerate(Truncation(10))) ++shells[{b.two_j, b.m}];
    for (const auto& [key, count] : shells) CHECK(count == (key.first + 1) * (key.first + 1));
}

TEST_CASE("lookup is the inverse of enumeration")
{
    const FockBasis basis(Truncation(9));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        CHECK(index_lookup(basis, basis[k]) == k);
        CHECK(basis.find(basis[k]).value() == k);
    }
    CHECK_FALSE(basis.find(BasisIndex{10, 0, 0, 0}).has_value());
    CHECK_THROWS_AS(basis.position(BasisIndex{10, 0, 0, 0}), TruncationTooSmall);
    for (int d = 0; d <= 9; ++d) {
        CHECK(basis.degree_begin(d + 1) - basis.degree_begin(d) == degree_dimension(d));
        CHECK(basis[basis.degree_begin(d)].degree() == d);
    }
}

TEST_CASE("degree and interior examples")
{
    CHECK(degree(BasisIndex{1, 1, 1, -1}) == 3);
    CHECK(is_interior(BasisIndex{0, 0, 0, 0}, Truncation(4), 1));
    CHECK_FALSE(is_interior(BasisIndex{4, 0, 0, 0}, Truncation(4), 1));
    CHECK_FALSE(is_interior(BasisIndex{0, 2, 0, 0}, Truncation(4), 1));
    CHECK(is_interior(BasisIndex{1, 1, 1, 1}, Truncation(5), 2));
    CHECK_FALSE(is_interior(BasisIndex{1, 1, 1, 1}, Truncation(4), 2));
}

TEST_CASE("index labels")
{
    CHECK(to_string(BasisIndex{1, 2, -1, 1}) == "(2j=1, m=2, 2j1=-1, 2j2=1)");
    CHECK_FALSE(BasisIndex{1, 0, 0, 1}.valid());
    CHECK_FALSE(BasisIndex{0, -1, 0, 0}.valid());
}
