#pragma once

// Ordinals below epsilon_0 in Cantor normal form.
//
// Values that are finite and fit in 64 bits are stored inline; everything
// else keeps an immutable, shared CNF term list. The invariant
// "terms_ != nullptr  <=>  value >= 2^64" makes mixed comparisons trivial.

#include <algorithm>
#include <cctype>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dsw/error.hpp"

namespace dsw {

using Natural = boost::multiprecision::cpp_int;

struct Term;

class Ordinal {
public:
    Ordinal() = default;

    template <std::integral I>
    Ordinal(I n) // NOLINT(google-explicit-constructor): ordinals read like numbers
    {
        if constexpr (std::is_signed_v<I>) {
            if (n < 0) {
                throw PreconditionError("negative value is not an ordinal");
            }
        }
        small_ = static_cast<std::uint64_t>(n);
    }

    static Ordinal from_natural(const Natural& n);
    static Ordinal omega();
    /// omega^exponent * coefficient
    static Ordinal omega_power(const Ordinal& exponent, const Natural& coefficient = 1);
    /// Builds from CNF terms; rejects increasing/equal exponents and zero coefficients.
    static Ordinal from_terms(std::vector<Term> terms);

    bool is_zero() const noexcept { return !terms_ && small_ == 0; }
    bool is_finite() const;
    /// The value as a machine integer, when finite and small enough.
    std::optional<std::uint64_t> as_u64() const noexcept
    {
        if (terms_) {
            return std::nullopt;
        }
        return small_;
    }

    /// Full CNF listing; empty for zero.
    std::vector<Term> terms() const;
    std::size_t term_count() const noexcept;

    friend std::strong_ordering compare(const Ordinal& a, const Ordinal& b);
    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) { return compare(a, b); }
    friend bool operator==(const Ordinal& a, const Ordinal& b) { return compare(a, b) == 0; }

    friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
    friend Ordinal mul_nat(const Ordinal& a, const Natural& n);

private:
    static Ordinal normalize(std::vector<Term> terms);

    std::uint64_t small_ = 0;
    std::shared_ptr<const std::vector<Term>> terms_;
};

struct Term {
    Ordinal exponent;
    Natural coefficient;

    friend bool operator==(const Term&, const Term&) = default;
};

inline Ordinal operator*(const Ordinal& a, const Natural& n) { return mul_nat(a, n); }
inline Ordinal& operator+=(Ordinal& a, const Ordinal& b) { return a = a + b; }
inline const Ordinal& max(const Ordinal& a, const Ordinal& b) { return compare(a, b) < 0 ? b : a; }

// ---------------------------------------------------------------------------

inline Ordinal Ordinal::normalize(std::vector<Term> terms)
{
    Ordinal out;
    if (terms.empty()) {
        return out;
    }
    if (terms.size() == 1 && terms.front().exponent.is_zero()
        && terms.front().coefficient <= std::numeric_limits<std::uint64_t>::max()) {
        out.small_ = terms.front().coefficient.convert_to<std::uint64_t>();
        return out;
    }
    out.terms_ = std::make_shared<const std::vector<Term>>(std::move(terms));
    return out;
}

inline Ordinal Ordinal::from_natural(const Natural& n)
{
    if (n < 0) {
        throw PreconditionError("negative value is not an ordinal");
    }
    if (n == 0) {
        return {};
    }
    return normalize({Term{Ordinal{}, n}});
}

inline Ordinal Ordinal::omega() { return omega_power(Ordinal{1}); }

inline Ordinal Ordinal::omega_power(const Ordinal& exponent, const Natural& coefficient)
{
    if (coefficient <= 0) {
        throw PreconditionError("CNF coefficient must be positive");
    }
    return normalize({Term{exponent, coefficient}});
}

inline Ordinal Ordinal::from_terms(std::vector<Term> terms)
{
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coefficient <= 0) {
            throw PreconditionError("CNF coefficient must be positive");
        }
        if (i > 0 && compare(terms[i - 1].exponent, terms[i].exponent) <= 0) {
            throw PreconditionError("CNF exponents must be strictly decreasing");
        }
    }
    return normalize(std::move(terms));
}

inline bool Ordinal::is_finite() const
{
    return !terms_ || (terms_->size() == 1 && terms_->front().exponent.is_zero());
}

inline std::vector<Term> Ordinal::terms() const
{
    if (terms_) {
        return *terms_;
    }
    if (small_ == 0) {
        return {};
    }
    return {Term{Ordinal{}, Natural{small_}}};
}

inline std::size_t Ordinal::term_count() const noexcept
{
    if (terms_) {
        return terms_->size();
    }
    return small_ == 0 ? 0 : 1;
}

inline std::strong_ordering compare(const Ordinal& a, const Ordinal& b)
{
    if (!a.terms_ || !b.terms_) {
        if (!a.terms_ && !b.terms_) {
            return a.small_ <=> b.small_;
        }
        return a.terms_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    const auto& ta = *a.terms_;
    const auto& tb = *b.terms_;
    const std::size_t common = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (auto c = compare(ta[i].exponent, tb[i].exponent); c != 0) {
            return c;
        }
        if (ta[i].coefficient != tb[i].coefficient) {
            return ta[i].coefficient < tb[i].coefficient ? std::strong_ordering::less
                                                         : std::strong_ordering::greater;
        }
    }
    return ta.size() <=> tb.size();
}

inline Ordinal operator+(const Ordinal& a, const Ordinal& b)
{
    if (b.is_zero()) {
        return a;
    }
    if (a.is_zero()) {
        return b;
    }
    if (!a.terms_ && !b.terms_ && a.small_ <= std::numeric_limits<std::uint64_t>::max() - b.small_) {
        return Ordinal{a.small_ + b.small_};
    }
    auto left = a.terms();
    auto right = b.terms();
    const Ordinal& lead = right.front().exponent;
    std::vector<Term> out;
    out.reserve(left.size() + right.size());
    std::size_t i = 0;
    for (; i < left.size() && compare(left[i].exponent, lead) > 0; ++i) {
        out.push_back(left[i]);
    }
    // Terms of a below b's leading power are absorbed.
    if (i < left.size() && compare(left[i].exponent, lead) == 0) {
        right.front().coefficient += left[i].coefficient;
    }
    out.insert(out.end(), right.begin(), right.end());
    return Ordinal::normalize(std::move(out));
}

inline Ordinal mul_nat(const Ordinal& a, const Natural& n)
{
    if (n < 0) {
        throw PreconditionError("multiplier must be a natural number");
    }
    if (n == 0 || a.is_zero()) {
        return {};
    }
    if (!a.terms_ && n <= std::numeric_limits<std::uint64_t>::max()) {
        const auto m = n.convert_to<std::uint64_t>();
        if (a.small_ <= std::numeric_limits<std::uint64_t>::max() / m) {
            return Ordinal{a.small_ * m};
        }
    }
    // (w^e*c + rest) * n = w^e*(c*n) + rest for n >= 1
    auto terms = a.terms();
    terms.front().coefficient *= n;
    return Ordinal::normalize(std::move(terms));
}

// ---------------------------------------------------------------------------
// Literal syntax
//
//   literal  := term ("+" term)*
//   term     := natural | "w" ("^" exponent)? ("*" positive-natural)?
//   exponent := natural | "w" ("^" exponent)? | "(" literal ")"
//
// Exponents bind tighter than "+", so "w^2+1" is w^2 + 1; a compound
// exponent needs parentheses: "w^(w+1)".

namespace detail {

class Cursor {
public:
    explicit Cursor(std::string_view text, std::size_t base = 0) : text_(text), base_(base) {}

    bool done() const noexcept { return pos_ >= text_.size(); }
    char peek() const noexcept { return done() ? '\0' : text_[pos_]; }
    std::size_t position() const noexcept { return base_ + pos_; }

    bool accept(char c)
    {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    Natural natural()
    {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
            fail("expected a natural number");
        }
        Natural value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return value;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, position()); }

private:
    std::string_view text_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

Ordinal parse_literal(Cursor& in);

inline Ordinal parse_exponent(Cursor& in)
{
    if (in.accept('(')) {
        Ordinal e = parse_literal(in);
        in.expect(')');
        return e;
    }
    if (in.accept('w')) {
        Ordinal e = in.accept('^') ? parse_exponent(in) : Ordinal{1};
        return Ordinal::omega_power(e);
    }
    return Ordinal::from_natural(in.natural());
}

inline Ordinal parse_literal(Cursor& in)
{
    std::vector<Term> terms;
    do {
        const std::size_t start = in.position();
        Term term;
        if (in.accept('w')) {
            term.exponent = in.accept('^') ? parse_exponent(in) : Ordinal{1};
            term.coefficient = 1;
            if (in.accept('*')) {
                term.coefficient = in.natural();
                if (term.coefficient == 0) {
                    throw ParseError("coefficient must be positive", start);
                }
            }
        } else {
            term.coefficient = in.natural();
            if (term.coefficient == 0) {
                if (!terms.empty() || in.peek() == '+') {
                    throw ParseError("zero term inside a sum", start);
                }
                return {};
            }
        }
        if (!terms.empty() && compare(terms.back().exponent, term.exponent) <= 0) {
            throw ParseError("exponents not strictly decreasing", start);
        }
        terms.push_back(std::move(term));
    } while (in.accept('+'));
    return Ordinal::from_terms(std::move(terms));
}

inline std::string format_exponent(const Ordinal& e);

} // namespace detail

/// Parses a complete ordinal literal; `base` offsets reported positions.
inline Ordinal parse_ordinal(std::string_view text, std::size_t base = 0)
{
    detail::Cursor in(text, base);
    Ordinal value = detail::parse_literal(in);
    if (!in.done()) {
        in.fail("unexpected trailing input");
    }
    return value;
}

inline std::string to_string(const Ordinal& a)
{
    if (auto v = a.as_u64()) {
        return std::to_string(*v);
    }
    std::string out;
    for (const auto& t : a.terms()) {
        if (!out.empty()) {
            out += '+';
        }
        if (t.exponent.is_zero()) {
            out += t.coefficient.str();
            continue;
        }
        out += 'w';
        if (t.exponent != Ordinal{1}) {
            out += '^';
            out += detail::format_exponent(t.exponent);
        }
        if (t.coefficient != 1) {
            out += '*';
            out += t.coefficient.str();
        }
    }
    return out;
}

inline std::string detail::format_exponent(const Ordinal& e)
{
    if (e.is_finite()) {
        return to_string(e);
    }
    auto terms = e.terms();
    if (terms.size() == 1 && terms.front().coefficient == 1) {
        const auto& inner = terms.front().exponent;
        return inner == Ordinal{1} ? std::string("w") : "w^" + format_exponent(inner);
    }
    return "(" + to_string(e) + ")";
}

} // namespace dsw
