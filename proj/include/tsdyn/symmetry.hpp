#pragma once

#include <cstdint>
#include <vector>

#include "tsdyn/graphs.hpp"
#include "tsdyn/poly.hpp"

namespace tsdyn {

// Subgroup R of Z_2^n given by a GF(2) basis. Bit i of a basis word is the
// component r_i. The basis is kept in reduced row echelon form (pivot = lowest
// set bit, ascending), which makes it canonical for a given group.
class SignSymmetryGroup {
public:
    SignSymmetryGroup() = default;
    SignSymmetryGroup(std::size_t dim, std::vector<std::uint64_t> generators);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return basis_.size(); }
    const std::vector<std::uint64_t>& basis() const { return basis_; }
    bool contains(std::uint64_t r) const;
    // all 2^rank members, ascending
    std::vector<std::uint64_t> elements() const;

    bool operator==(const SignSymmetryGroup& other) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<std::uint64_t> basis_;
};

// Parities orthogonal to every row: {r : popcount(r & row) even for all rows}.
SignSymmetryGroup gf2_null_space(std::size_t dim, const std::vector<std::uint64_t>& rows);

SignSymmetryGroup sign_symmetries_of_support(const SupportSet& support);

// Sign symmetries of the system, computed from the parities of the initial
// support at order d (requires d >= sys.min_order()).
SignSymmetryGroup sign_symmetries(const DynamicalSystem& sys, int d);

bool in_r_perp(const SignSymmetryGroup& group, const Exponent& alpha);

// bit k = parity of basis[k] . alpha
std::uint64_t symmetry_signature(const SignSymmetryGroup& group, const Exponent& alpha);

// Partition of the indices of `basis_monomials` into classes of equal
// signature; b and g share a class iff b + g lies in R-perp. Classes are
// sorted index lists ordered by their smallest member.
std::vector<std::vector<std::size_t>> symmetry_blocks(const SignSymmetryGroup& group, const SupportSet& basis_monomials);

bool blocks_equal(const CliqueSet& cliques, const std::vector<std::vector<std::size_t>>& blocks);

}  // namespace tsdyn
