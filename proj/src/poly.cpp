#include "tsdyn/poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace tsdyn {

// ---------------------------------------------------------------- Exponent

Exponent::Exponent(std::initializer_list<int> entries) {
    e_.reserve(entries.size());
    for (int v : entries) {
        if (v < 0) throw std::invalid_argument("negative exponent entry");
        e_.push_back(static_cast<std::uint16_t>(v));
    }
}

Exponent::Exponent(std::vector<std::uint16_t> entries) : e_(std::move(entries)) {}

Exponent Exponent::unit(std::size_t dim, std::size_t i) {
    Exponent a(dim);
    a.e_.at(i) = 1;
    return a;
}

int Exponent::degree() const {
    return std::accumulate(e_.begin(), e_.end(), 0);
}

void Exponent::set(std::size_t i, int value) {
    if (value < 0) throw std::invalid_argument("negative exponent entry");
    e_.at(i) = static_cast<std::uint16_t>(value);
}

Exponent Exponent::operator+(const Exponent& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("exponent dimension mismatch");
    Exponent r(*this);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = static_cast<std::uint16_t>(r.e_[i] + other.e_[i]);
    return r;
}

Exponent Exponent::doubled() const {
    Exponent r(*this);
    for (auto& v : r.e_) v = static_cast<std::uint16_t>(2 * v);
    return r;
}

bool Exponent::all_even() const {
    return std::all_of(e_.begin(), e_.end(), [](std::uint16_t v) { return v % 2 == 0; });
}

std::uint64_t Exponent::parity_mask() const {
    if (e_.size() > 64) throw std::invalid_argument("parity mask needs dim <= 64");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] & 1u) m |= std::uint64_t{1} << i;
    return m;
}

std::strong_ordering Exponent::operator<=>(const Exponent& other) const {
    if (auto c = degree() <=> other.degree(); c != 0) return c;
    // same degree: larger leading powers come first
    for (std::size_t i = 0; i < std::min(e_.size(), other.e_.size()); ++i) {
        if (e_[i] != other.e_[i]) return other.e_[i] <=> e_[i];
    }
    return e_.size() <=> other.e_.size();
}

std::size_t ExponentHash::operator()(const Exponent& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : a.entries()) {
        h ^= v;
        h *= 1099511628211ull;
    }
    return h;
}

// -------------------------------------------------------------- SupportSet

SupportSet::SupportSet(std::size_t dim, std::vector<Exponent> elements) : dim_(dim), elems_(std::move(elements)) {
    for (const auto& a : elems_)
        if (a.dim() != dim_) throw std::invalid_argument("support element dimension mismatch");
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool SupportSet::contains(const Exponent& a) const {
    return std::binary_search(elems_.begin(), elems_.end(), a);
}

long SupportSet::index_of(const Exponent& a) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), a);
    if (it == elems_.end() || *it != a) return -1;
    return static_cast<long>(it - elems_.begin());
}

void SupportSet::insert(const Exponent& a) {
    if (a.dim() != dim_) throw std::invalid_argument("support element dimension mismatch");
    auto it = std::lower_bound(elems_.begin(), elems_.end(), a);
    if (it == elems_.end() || *it != a) elems_.insert(it, a);
}

void SupportSet::insert_all(const SupportSet& other) {
    *this = united(other);
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

SupportSet SupportSet::united(const SupportSet& other) const {
    if (!other.empty() && !empty() && other.dim_ != dim_) throw std::invalid_argument("support dimension mismatch");
    SupportSet r(std::max(dim_, other.dim_));
    r.elems_.reserve(elems_.size() + other.elems_.size());
    std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                   std::back_inserter(r.elems_));
    return r;
}

SupportSet SupportSet::intersected(const SupportSet& other) const {
    SupportSet r(dim_);
    std::set_intersection(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                          std::back_inserter(r.elems_));
    return r;
}

SupportSet SupportSet::filtered_by_degree(int max_degree) const {
    SupportSet r(dim_);
    for (const auto& a : elems_)
        if (a.degree() <= max_degree) r.elems_.push_back(a);
    return r;
}

SupportSet SupportSet::minkowski(const SupportSet& other) const {
    std::vector<Exponent> out;
    out.reserve(elems_.size() * other.elems_.size());
    for (const auto& a : elems_)
        for (const auto& b : other.elems_) out.push_back(a + b);
    return SupportSet(dim_, std::move(out));
}

SupportSet monomials_up_to(std::size_t dim, int degree) {
    std::vector<Exponent> out;
    if (degree < 0) return SupportSet(dim);
    Exponent cur(dim);
    // enumerate all compositions with sum <= degree
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == dim) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur.set(i, v);
            self(self, i + 1, remaining - v);
        }
        cur.set(i, 0);
    };
    rec(rec, 0, degree);
    return SupportSet(dim, std::move(out));
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::size_t dim, TermMap terms) : dim_(dim), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first.dim() != dim_) throw std::invalid_argument("term dimension mismatch");
        if (it->second == 0.0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Polynomial Polynomial::constant(std::size_t dim, double c) {
    Polynomial p(dim);
    p.add_term(Exponent(dim), c);
    return p;
}

Polynomial Polynomial::monomial(const Exponent& a, double c) {
    Polynomial p(a.dim());
    p.add_term(a, c);
    return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t i) {
    return monomial(Exponent::unit(dim, i), 1.0);
}

double Polynomial::coefficient(const Exponent& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? 0.0 : it->second;
}

int Polynomial::degree() const {
    int d = kNoDegree;
    for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
    return d;
}

void Polynomial::add_term(const Exponent& a, double c) {
    if (a.dim() != dim_) throw std::invalid_argument("term dimension mismatch");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r(*this);
    if (is_zero()) r.dim_ = o.dim_;
    for (const auto& [a, c] : o.terms_) r.add_term(a, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + (-o);
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& [a, c] : r.terms_) c = -c;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r(dim_);
    for (const auto& [a, c] : terms_)
        for (const auto& [b, d] : o.terms_) r.add_term(a + b, c * d);
    return r;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial r(dim_);
    for (const auto& [a, c] : terms_) r.add_term(a, c * s);
    return r;
}

Polynomial Polynomial::pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial r = constant(dim_, 1.0);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

Polynomial Polynomial::derivative(std::size_t i) const {
    Polynomial r(dim_);
    for (const auto& [a, c] : terms_) {
        if (a[i] == 0) continue;
        Exponent b = a;
        b.set(i, a[i] - 1);
        r.add_term(b, c * a[i]);
    }
    return r;
}

double Polynomial::eval(std::span<const double> point) const {
    if (point.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
    double total = 0.0;
    for (const auto& [a, c] : terms_) {
        double t = c;
        for (std::size_t i = 0; i < dim_; ++i)
            for (int k = 0; k < a[i]; ++k) t *= point[i];
        total += t;
    }
    return total;
}

SupportSet support(const Polynomial& p) {
    std::vector<Exponent> keys;
    keys.reserve(p.num_terms());
    for (const auto& [a, c] : p.terms()) keys.push_back(a);
    return SupportSet(p.dim(), std::move(keys));
}

// --------------------------------------------------------- DynamicalSystem

int DynamicalSystem::field_degree() const {
    int d = 0;
    for (const auto& f : field) d = std::max(d, f.degree());
    return d;
}

int DynamicalSystem::constraint_degree(std::size_t j) const {
    if (j == 0) return 0;
    return constraints.at(j - 1).degree();
}

int DynamicalSystem::max_constraint_degree() const {
    int d = 0;
    for (const auto& p : constraints) d = std::max(d, p.degree());
    return d;
}

int DynamicalSystem::min_order() const {
    return std::max((field_degree() + 1) / 2, (max_constraint_degree() + 1) / 2);
}

Polynomial DynamicalSystem::constraint_with_unit(std::size_t j) const {
    if (j == 0) return Polynomial::constant(dim(), 1.0);
    return constraints.at(j - 1);
}

void DynamicalSystem::validate() const {
    const std::size_t n = dim();
    if (n == 0) throw std::invalid_argument("system has no variables");
    if (field.size() != n) throw std::invalid_argument("need one dynamics polynomial per variable");
    if (constraints.empty()) throw std::invalid_argument("at least one constraint polynomial is required");
    for (const auto& f : field)
        if (f.dim() != n) throw std::invalid_argument("dynamics polynomial dimension mismatch");
    for (const auto& p : constraints) {
        if (p.dim() != n) throw std::invalid_argument("constraint polynomial dimension mismatch");
        if (p.is_zero()) throw std::invalid_argument("constraint polynomials must be nonzero");
    }
}

SupportSet generic_lie_support(const SupportSet& v_support, const DynamicalSystem& sys) {
    const std::size_t n = sys.dim();
    if (v_support.dim() != n && !v_support.empty()) throw std::invalid_argument("support dimension mismatch");
    std::vector<SupportSet> fsupp;
    fsupp.reserve(n);
    for (const auto& f : sys.field) fsupp.push_back(support(f));
    std::vector<Exponent> out;
    for (const auto& a : v_support) {
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            Exponent b = a;
            b.set(i, a[i] - 1);
            for (const auto& g : fsupp[i]) out.push_back(b + g);
        }
    }
    return SupportSet(n, std::move(out));
}

Polynomial lie_polynomial(const Polynomial& v, const DynamicalSystem& sys, double beta) {
    Polynomial r = v * beta;
    for (std::size_t i = 0; i < sys.dim(); ++i) r = r - v.derivative(i) * sys.field[i];
    return r;
}

// ------------------------------------------------------------------ parser

ParseError::ParseError(const std::string& msg, std::size_t position)
    : std::runtime_error(msg + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        return p;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        skip_ws();
        Polynomial acc(vars_.size());
        bool first = true;
        while (true) {
            double sign = 1.0;
            bool had_sign = false;
            skip_ws();
            while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
                if (s_[pos_] == '-') sign = -sign;
                had_sign = true;
                ++pos_;
                skip_ws();
            }
            if (!first && !had_sign) break;
            acc = acc + term() * sign;
            first = false;
            skip_ws();
            if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = power();
        while (true) {
            if (accept('*')) {
                acc = acc * power();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Polynomial den = power();
                if (den.degree() > 0 || den.is_zero())
                    throw ParseError("division only by nonzero constants", at);
                acc = acc * (1.0 / den.coefficient(Exponent(vars_.size())));
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial power() {
        Polynomial base = atom();
        if (accept('^')) {
            skip_ws();
            std::size_t at = pos_;
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) throw ParseError("expected integer exponent", at);
            int k = std::stoi(s_.substr(start, pos_ - start));
            base = base.pow(k);
        }
        return base;
    }

    Polynomial atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (c == '-' || c == '+') {
            ++pos_;
            Polynomial inner = power();
            return c == '-' ? -inner : inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    Polynomial number() {
        std::size_t start = pos_;
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", start);
        pos_ += static_cast<std::size_t>(end - begin);
        return Polynomial::constant(vars_.size(), v);
    }

    Polynomial identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) throw ParseError("unknown variable '" + name + "'", start);
        return Polynomial::variable(vars_.size(), static_cast<std::size_t>(it - vars_.begin()));
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

std::string format_coefficient(double c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& variables) {
    if (variables.empty()) throw std::invalid_argument("variable list must be nonempty");
    return Parser(text, variables).parse();
}

std::string to_string(const Exponent& a, const std::vector<std::string>& variables) {
    std::string out;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += variables.at(i);
        if (a[i] > 1) out += "^" + std::to_string(a[i]);
    }
    return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& variables) {
    if (p.is_zero()) return "0";
    std::string out;
    // highest degree first reads naturally
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [a, c] = *it;
        double mag = std::fabs(c);
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (a.degree() == 0) {
            out += format_coefficient(mag);
        } else {
            if (mag != 1.0) out += format_coefficient(mag) + "*";
            out += to_string(a, variables);
        }
    }
    return out;
}

std::vector<std::string> default_variable_names(std::size_t dim) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

}  // namespace tsdyn
