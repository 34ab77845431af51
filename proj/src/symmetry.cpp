#include "tsdyn/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

#include "tsdyn/sparsity.hpp"

namespace tsdyn {

namespace {

int lowest_bit(std::uint64_t w) { return std::countr_zero(w); }

// Row-reduce in place; returns the nonzero rows in RREF with ascending pivots.
std::vector<std::uint64_t> reduce(std::vector<std::uint64_t> rows, std::size_t dim) {
    std::vector<std::uint64_t> out;
    for (std::size_t col = 0; col < dim; ++col) {
        const std::uint64_t bit = std::uint64_t{1} << col;
        auto it = std::find_if(rows.begin(), rows.end(), [&](std::uint64_t r) { return r & bit; });
        if (it == rows.end()) continue;
        const std::uint64_t pivot = *it;
        rows.erase(it);
        for (auto& r : rows)
            if (r & bit) r ^= pivot;
        for (auto& r : out)
            if (r & bit) r ^= pivot;
        out.push_back(pivot);
    }
    return out;
}

}  // namespace

SignSymmetryGroup::SignSymmetryGroup(std::size_t dim, std::vector<std::uint64_t> generators) : dim_(dim) {
    if (dim > 64) throw std::invalid_argument("sign symmetry groups support dim <= 64");
    const std::uint64_t mask = dim == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << dim) - 1);
    for (auto g : generators)
        if (g & ~mask) throw std::invalid_argument("generator has bits beyond the dimension");
    basis_ = reduce(std::move(generators), dim);
}

bool SignSymmetryGroup::contains(std::uint64_t r) const {
    for (auto b : basis_)
        if (r & (std::uint64_t{1} << lowest_bit(b))) r ^= b;
    return r == 0;
}

std::vector<std::uint64_t> SignSymmetryGroup::elements() const {
    std::vector<std::uint64_t> out;
    const std::size_t count = std::size_t{1} << basis_.size();
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::uint64_t r = 0;
        for (std::size_t b = 0; b < basis_.size(); ++b)
            if (k & (std::size_t{1} << b)) r ^= basis_[b];
        out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SignSymmetryGroup gf2_null_space(std::size_t dim, const std::vector<std::uint64_t>& rows) {
    auto rref = reduce(rows, dim);
    std::vector<bool> is_pivot(dim, false);
    for (auto r : rref) is_pivot[static_cast<std::size_t>(lowest_bit(r))] = true;
    std::vector<std::uint64_t> kernel;
    for (std::size_t free = 0; free < dim; ++free) {
        if (is_pivot[free]) continue;
        std::uint64_t v = std::uint64_t{1} << free;
        // each pivot variable equals the sum of the free variables in its row
        for (auto r : rref)
            if (r & (std::uint64_t{1} << free)) v |= std::uint64_t{1} << lowest_bit(r);
        kernel.push_back(v);
    }
    return SignSymmetryGroup(dim, std::move(kernel));
}

SignSymmetryGroup sign_symmetries_of_support(const SupportSet& support) {
    std::vector<std::uint64_t> rows;
    rows.reserve(support.size());
    for (const auto& a : support) {
        auto m = a.parity_mask();
        if (m) rows.push_back(m);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return gf2_null_space(support.dim(), rows);
}

SignSymmetryGroup sign_symmetries(const DynamicalSystem& sys, int d) {
    if (d < sys.min_order()) throw std::invalid_argument("relaxation order below max(ceil(d_f/2), ceil(d_p/2))");
    return sign_symmetries_of_support(initial_support(sys, d));
}

bool in_r_perp(const SignSymmetryGroup& group, const Exponent& alpha) {
    return symmetry_signature(group, alpha) == 0;
}

std::uint64_t symmetry_signature(const SignSymmetryGroup& group, const Exponent& alpha) {
    if (alpha.dim() != group.dim()) throw std::invalid_argument("exponent dimension mismatch");
    const std::uint64_t p = alpha.parity_mask();
    std::uint64_t sig = 0;
    for (std::size_t k = 0; k < group.rank(); ++k)
        if (std::popcount(group.basis()[k] & p) & 1) sig |= std::uint64_t{1} << k;
    return sig;
}

std::vector<std::vector<std::size_t>> symmetry_blocks(const SignSymmetryGroup& group, const SupportSet& basis_monomials) {
    std::map<std::uint64_t, std::size_t> slot;
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < basis_monomials.size(); ++i) {
        const auto sig = symmetry_signature(group, basis_monomials.elements()[i]);
        auto [it, inserted] = slot.try_emplace(sig, blocks.size());
        if (inserted) blocks.emplace_back();
        blocks[it->second].push_back(i);
    }
    return blocks;
}

bool blocks_equal(const CliqueSet& cliques, const std::vector<std::vector<std::size_t>>& blocks) {
    auto a = cliques.cliques;
    auto b = blocks;
    for (auto& c : a) std::sort(c.begin(), c.end());
    for (auto& c : b) std::sort(c.begin(), c.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

}  // namespace tsdyn
