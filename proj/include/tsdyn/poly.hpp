#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsdyn {

// Exponent vector alpha in N^n. Ordered graded-lexicographically: lower total
// degree first, then x1 > x2 > ... > xn within a degree, so iteration yields
// 1, x1, x2, ..., x1^2, x1*x2, ...
class Exponent {
public:
    Exponent() = default;
    explicit Exponent(std::size_t dim) : e_(dim, 0) {}
    Exponent(std::initializer_list<int> entries);
    explicit Exponent(std::vector<std::uint16_t> entries);

    static Exponent unit(std::size_t dim, std::size_t i);

    std::size_t dim() const { return e_.size(); }
    int degree() const;
    int operator[](std::size_t i) const { return e_[i]; }
    void set(std::size_t i, int value);
    std::span<const std::uint16_t> entries() const { return e_; }

    Exponent operator+(const Exponent& other) const;
    Exponent doubled() const;
    bool all_even() const;
    // bit i set iff entry i is odd; requires dim <= 64
    std::uint64_t parity_mask() const;

    bool operator==(const Exponent& other) const = default;
    std::strong_ordering operator<=>(const Exponent& other) const;

private:
    std::vector<std::uint16_t> e_;
};

struct ExponentHash {
    std::size_t operator()(const Exponent& a) const noexcept;
};

// Finite set of exponents of a common dimension, stored sorted and unique.
class SupportSet {
public:
    SupportSet() = default;
    explicit SupportSet(std::size_t dim) : dim_(dim) {}
    SupportSet(std::size_t dim, std::vector<Exponent> elements);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    const std::vector<Exponent>& elements() const { return elems_; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool contains(const Exponent& a) const;
    // index in sorted order, or -1
    long index_of(const Exponent& a) const;
    void insert(const Exponent& a);
    void insert_all(const SupportSet& other);
    bool is_subset_of(const SupportSet& other) const;

    SupportSet united(const SupportSet& other) const;
    SupportSet intersected(const SupportSet& other) const;
    SupportSet filtered_by_degree(int max_degree) const;
    // Minkowski sum {a + b}
    SupportSet minkowski(const SupportSet& other) const;

    bool operator==(const SupportSet& other) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Exponent> elems_;
};

// All exponents of total degree <= degree, in graded-lex order.
SupportSet monomials_up_to(std::size_t dim, int degree);

class Polynomial {
public:
    using TermMap = std::map<Exponent, double>;

    Polynomial() = default;
    explicit Polynomial(std::size_t dim) : dim_(dim) {}
    Polynomial(std::size_t dim, TermMap terms);

    static Polynomial constant(std::size_t dim, double c);
    static Polynomial monomial(const Exponent& a, double c = 1.0);
    static Polynomial variable(std::size_t dim, std::size_t i);

    std::size_t dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }
    double coefficient(const Exponent& a) const;
    // Highest total degree; kNoDegree for the zero polynomial.
    int degree() const;
    static constexpr int kNoDegree = -1'000'000;

    void add_term(const Exponent& a, double c);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double s) const;
    Polynomial pow(int k) const;
    Polynomial derivative(std::size_t i) const;

    double eval(std::span<const double> point) const;
    bool operator==(const Polynomial& o) const = default;

private:
    std::size_t dim_ = 0;
    TermMap terms_;
};

SupportSet support(const Polynomial& p);

struct DynamicalSystem {
    std::vector<std::string> variables;
    std::vector<Polynomial> field;        // f_1..f_n
    std::vector<Polynomial> constraints;  // p_1..p_m

    std::size_t dim() const { return variables.size(); }
    std::size_t num_constraints() const { return constraints.size(); }
    int field_degree() const;                  // d_f
    int constraint_degree(std::size_t j) const;  // d_j with p_0 = 1 at j = 0
    int max_constraint_degree() const;           // d_p
    // smallest admissible relaxation order max(ceil(d_f/2), ceil(d_p/2))
    int min_order() const;
    // p_j with the convention p_0 = 1
    Polynomial constraint_with_unit(std::size_t j) const;
    void validate() const;
};

// Union over alpha in v_support and i with alpha_i > 0 of
// (alpha - e_i) + supp(f_i): support of grad(v).f for generic v.
SupportSet generic_lie_support(const SupportSet& v_support, const DynamicalSystem& sys);

// beta*v - grad(v).f, computed exactly
Polynomial lie_polynomial(const Polynomial& v, const DynamicalSystem& sys, double beta);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& variables);
std::string to_string(const Polynomial& p, const std::vector<std::string>& variables);
std::string to_string(const Exponent& a, const std::vector<std::string>& variables);
std::vector<std::string> default_variable_names(std::size_t dim);

}  // namespace tsdyn
