#include "qmink/fock_basis.hpp"

#include <cstdlib>

#include "qmink/errors.hpp"

namespace qmink {

bool BasisIndex::valid() const
{
    return two_j >= 0 && m >= 0 && std::abs(two_j1) <= two_j && std::abs(two_j2) <= two_j &&
           (two_j - two_j1) % 2 == 0 && (two_j - two_j2) % 2 == 0;
}

std::string to_string(const BasisIndex& idx)
{
    return "(2j=" + std::to_string(idx.two_j) + ", m=" + std::to_string(idx.m) +
           ", 2j1=" + std::to_string(idx.two_j1) + ", 2j2=" + std::to_string(idx.two_j2) + ")";
}

Truncation::Truncation(int max_degree_) : max_degree(max_degree_)
{
    if (max_degree < 0) throw InvalidParameter("max_degree must be nonnegative");
}

std::vector<BasisIndex> enumerate(const Truncation& trunc)
{
    std::vector<BasisIndex> out;
    out.reserve(truncated_dimension(trunc));
    for (int deg = 0; deg <= trunc.max_degree; ++deg)
        for (int two_j = deg % 2; two_j <= deg; two_j += 2) {
            const int m = (deg - two_j) / 2;
            for (int a = -two_j; a <= two_j; a += 2)
                for (int b = -two_j; b <= two_j; b += 2) out.push_back({two_j, m, a, b});
        }
    return out;
}

std::size_t degree_dimension(int d)
{
    const std::size_t n = static_cast<std::size_t>(d);
    return (n + 3) * (n + 2) * (n + 1) / 6;
}

std::size_t truncated_dimension(const Truncation& trunc)
{
    const std::size_t n = static_cast<std::size_t>(trunc.max_degree);
    return (n + 4) * (n + 3) * (n + 2) * (n + 1) / 24;
}

std::size_t BasisIndexHash::operator()(const BasisIndex& i) const noexcept
{
    std::size_t h = static_cast<std::size_t>(i.two_j);
    h = h * 1000003u + static_cast<std::size_t>(i.m);
    h = h * 1000003u + static_cast<std::size_t>(i.two_j1 + 4096);
    h = h * 1000003u + static_cast<std::size_t>(i.two_j2 + 4096);
    return h;
}

FockBasis::FockBasis(const Truncation& trunc) : trunc_(trunc), indices_(enumerate(trunc))
{
    lookup_.reserve(indices_.size());
    degree_offsets_.assign(static_cast<std::size_t>(trunc.max_degree) + 2, indices_.size());
    for (std::size_t pos = indices_.size(); pos-- > 0;) {
        lookup_.emplace(indices_[pos], pos);
        degree_offsets_[static_cast<std::size_t>(indices_[pos].degree())] = pos;
    }
}

std::optional<std::size_t> FockBasis::find(const BasisIndex& idx) const
{
    const auto it = lookup_.find(idx);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t FockBasis::position(const BasisIndex& idx) const
{
    if (!idx.valid()) throw InvalidParameter("invalid basis index " + to_string(idx));
    const auto pos = find(idx);
    if (!pos) throw TruncationTooSmall("index " + to_string(idx) + " exceeds max_degree " +
                                       std::to_string(trunc_.max_degree));
    return *pos;
}

std::size_t FockBasis::degree_begin(int d) const
{
    if (d <= 0) return 0;
    if (d > trunc_.max_degree) return indices_.size();
    return degree_offsets_[static_cast<std::size_t>(d)];
}

std::size_t index_lookup(const FockBasis& basis, const BasisIndex& idx)
{
    return basis.position(idx);
}

bool is_interior(const BasisIndex& idx, const Truncation& trunc, int shift)
{
    return idx.degree() + shift <= trunc.max_degree;
}

}  // namespace qmink
