#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qmink {

/// Label (j, m, j1, j2) of one orthonormal basis vector. Half-integers are stored doubled.
struct BasisIndex {
    int two_j = 0;
    int m = 0;
    int two_j1 = 0;
    int two_j2 = 0;

    int degree() const { return 2 * m + two_j; }
    bool valid() const;

    auto operator<=>(const BasisIndex&) const = default;
};

std::string to_string(const BasisIndex& idx);

inline int degree(const BasisIndex& idx) { return idx.degree(); }

/// Keeps the polynomials of degree 2m + 2j <= max_degree.
struct Truncation {
    int max_degree = 0;

    explicit Truncation(int max_degree_ = 0);
    bool operator==(const Truncation&) const = default;
};

/// Ordered by (degree, 2j, m, 2j1, 2j2).
std::vector<BasisIndex> enumerate(const Truncation& trunc);

/// Number of basis states of degree d: (d+3 choose 3).
std::size_t degree_dimension(int d);
std::size_t truncated_dimension(const Truncation& trunc);

struct BasisIndexHash {
    std::size_t operator()(const BasisIndex& i) const noexcept;
};

class FockBasis {
public:
    explicit FockBasis(const Truncation& trunc);

    const Truncation& truncation() const { return trunc_; }
    const std::vector<BasisIndex>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    const BasisIndex& operator[](std::size_t pos) const { return indices_[pos]; }

    std::optional<std::size_t> find(const BasisIndex& idx) const;
    /// Throws TruncationTooSmall when idx is not part of the truncated space.
    std::size_t position(const BasisIndex& idx) const;

    /// Positions of all indices of one degree are contiguous: [degree_begin(d), degree_begin(d+1)).
    std::size_t degree_begin(int d) const;

private:
    Truncation trunc_;
    std::vector<BasisIndex> indices_;
    std::unordered_map<BasisIndex, std::size_t, BasisIndexHash> lookup_;
    std::vector<std::size_t> degree_offsets_;
};

std::size_t index_lookup(const FockBasis& basis, const BasisIndex& idx);

/// True iff every ladder image of idx within |degree shift| <= shift stays in the truncation.
bool is_interior(const BasisIndex& idx, const Truncation& trunc, int shift);

}  // namespace qmink
