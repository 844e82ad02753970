#pragma once

// Terms for scattered linear orders built from points by ordinal-indexed
// products (forward or reversed) and binary sums, and their embedding into
// (ds(alpha), <3).
//
// A position in a term is the list of choices made walking down from the
// root: the copy index gamma < beta at a product, 0/1 at a sum.
//
// With alpha the bound of the base term, product copies are placed by
//
//     fwd: (eta, gamma) -> <alpha+beta+gamma+1, alpha+beta> ^ eta
//     rev: (eta, gamma) -> <alpha+beta*2, alpha+beta+gamma> ^ eta
//
// A sum places both summands in ds(max of their bounds) and then applies the
// forward map with beta = 2.

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsw/decseq.hpp"
#include "dsw/error.hpp"
#include "dsw/ordinal.hpp"
#include "dsw/orders.hpp"

namespace dsw {

enum class Direction { Fwd, Rev };

class HausdorffTerm {
public:
    enum class Kind { Atom, Prod, Sum };

    static HausdorffTerm atom() { return HausdorffTerm(std::make_shared<const Node>(Node{Kind::Atom, {}, {}, {}, {}})); }

    static HausdorffTerm prod(HausdorffTerm base, Ordinal beta, Direction dir)
    {
        if (beta.is_zero()) {
            throw PreconditionError("product needs beta >= 1");
        }
        return HausdorffTerm(std::make_shared<const Node>(Node{Kind::Prod, std::move(base.node_), {}, std::move(beta), dir}));
    }

    static HausdorffTerm sum(HausdorffTerm left, HausdorffTerm right)
    {
        return HausdorffTerm(
            std::make_shared<const Node>(Node{Kind::Sum, std::move(left.node_), std::move(right.node_), {}, Direction::Fwd}));
    }

    Kind kind() const noexcept { return node_->kind; }
    /// PROD base or SUM left operand.
    HausdorffTerm base() const { return HausdorffTerm(node_->first); }
    HausdorffTerm left() const { return base(); }
    HausdorffTerm right() const { return HausdorffTerm(node_->second); }
    const Ordinal& beta() const noexcept { return node_->beta; }
    Direction direction() const noexcept { return node_->dir; }

    /// Nesting depth; an atom has depth 0.
    std::size_t depth() const
    {
        switch (kind()) {
        case Kind::Atom: return 0;
        case Kind::Prod: return 1 + base().depth();
        case Kind::Sum: return 1 + std::max(left().depth(), right().depth());
        }
        return 0;
    }

    bool is_finite() const
    {
        switch (kind()) {
        case Kind::Atom: return true;
        case Kind::Prod: return beta().is_finite() && base().is_finite();
        case Kind::Sum: return left().is_finite() && right().is_finite();
        }
        return true;
    }

private:
    struct Node {
        Kind kind;
        std::shared_ptr<const Node> first;
        std::shared_ptr<const Node> second;
        Ordinal beta;
        Direction dir;
    };

    explicit HausdorffTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

inline std::string to_string(const HausdorffTerm& t)
{
    switch (t.kind()) {
    case HausdorffTerm::Kind::Atom: return "atom";
    case HausdorffTerm::Kind::Prod:
        return "prod(" + to_string(t.base()) + "," + to_string(t.beta()) + ","
               + (t.direction() == Direction::Fwd ? "fwd" : "rev") + ")";
    case HausdorffTerm::Kind::Sum: return "sum(" + to_string(t.left()) + "," + to_string(t.right()) + ")";
    }
    return {};
}

namespace detail {

inline std::string read_word(Cursor& in)
{
    std::string word;
    while (std::isalpha(static_cast<unsigned char>(in.peek()))) {
        word += in.peek();
        in.accept(in.peek());
    }
    return word;
}

inline HausdorffTerm parse_term(Cursor& in)
{
    const std::size_t start = in.position();
    const std::string head = read_word(in);
    if (head == "atom") {
        return HausdorffTerm::atom();
    }
    if (head == "prod") {
        in.expect('(');
        HausdorffTerm base = parse_term(in);
        in.expect(',');
        const std::size_t at = in.position();
        Ordinal beta = parse_literal(in);
        if (beta.is_zero()) {
            throw ParseError("beta must be at least 1", at);
        }
        in.expect(',');
        const std::size_t dir_at = in.position();
        const std::string dir = read_word(in);
        if (dir != "fwd" && dir != "rev") {
            throw ParseError("expected fwd or rev", dir_at);
        }
        in.expect(')');
        return HausdorffTerm::prod(std::move(base), std::move(beta), dir == "fwd" ? Direction::Fwd : Direction::Rev);
    }
    if (head == "sum") {
        in.expect('(');
        HausdorffTerm left = parse_term(in);
        in.expect(',');
        HausdorffTerm right = parse_term(in);
        in.expect(')');
        return HausdorffTerm::sum(std::move(left), std::move(right));
    }
    throw ParseError("expected atom, prod or sum", start);
}

} // namespace detail

/// Parses `atom`, `prod(T,BETA,fwd|rev)` or `sum(T,T)`; whitespace is ignored.
inline HausdorffTerm parse_term(std::string_view text)
{
    std::string compact;
    std::vector<std::size_t> origin;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!std::isspace(static_cast<unsigned char>(text[i]))) {
            compact += text[i];
            origin.push_back(i);
        }
    }
    try {
        detail::Cursor in(compact);
        HausdorffTerm t = detail::parse_term(in);
        if (!in.done()) {
            in.fail("unexpected trailing input");
        }
        return t;
    } catch (const ParseError& e) {
        const std::size_t pos = e.position() < origin.size() ? origin[e.position()] : text.size();
        throw ParseError(e.message(), pos);
    }
}

// ---------------------------------------------------------------------------

inline Ordinal alpha_bound(const HausdorffTerm& t)
{
    switch (t.kind()) {
    case HausdorffTerm::Kind::Atom: return {};
    case HausdorffTerm::Kind::Prod: return alpha_bound(t.base()) + t.beta() * Natural{2} + Ordinal{1};
    case HausdorffTerm::Kind::Sum: return max(alpha_bound(t.left()), alpha_bound(t.right())) + Ordinal{5};
    }
    return {};
}

using Position = std::vector<Ordinal>;

inline std::string to_string(const Position& p)
{
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out += (i ? "," : "") + to_string(p[i]);
    }
    return "(" + out + ")";
}

namespace detail {

inline std::vector<Ordinal> place(const HausdorffTerm& t, std::span<const Ordinal> pos)
{
    auto coordinate = [&]() -> const Ordinal& {
        if (pos.empty()) {
            throw PreconditionError("position too short for the term");
        }
        return pos.front();
    };
    switch (t.kind()) {
    case HausdorffTerm::Kind::Atom:
        if (!pos.empty()) {
            throw PreconditionError("position too long for the term");
        }
        return {};
    case HausdorffTerm::Kind::Prod: {
        const Ordinal& gamma = coordinate();
        if (compare(gamma, t.beta()) >= 0) {
            throw PreconditionError("copy index " + to_string(gamma) + " is not below " + to_string(t.beta()));
        }
        const Ordinal alpha = alpha_bound(t.base());
        const Ordinal ab = alpha + t.beta();
        std::vector<Ordinal> out;
        if (t.direction() == Direction::Fwd) {
            out = {ab + gamma + Ordinal{1}, ab};
        } else {
            out = {alpha + t.beta() * Natural{2}, ab + gamma};
        }
        auto rest = place(t.base(), pos.subspan(1));
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    case HausdorffTerm::Kind::Sum: {
        const Ordinal& side = coordinate();
        if (compare(side, Ordinal{1}) > 0) {
            throw PreconditionError("sum coordinate must be 0 or 1");
        }
        // both summands sit in ds(alpha); then the 2-copy forward map
        const Ordinal alpha = max(alpha_bound(t.left()), alpha_bound(t.right()));
        const Ordinal ab = alpha + Ordinal{2};
        std::vector<Ordinal> out{ab + side + Ordinal{1}, ab};
        auto rest = place(side.is_zero() ? t.left() : t.right(), pos.subspan(1));
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    }
    return {};
}

} // namespace detail

/// Image of one position; defined for infinite betas too.
inline DecSeq embed_position(const HausdorffTerm& t, const Position& pos)
{
    return DecSeq(detail::place(t, pos));
}

struct LinearOrder {
    /// positions, in increasing order of the denoted type
    std::vector<Position> elements;

    std::size_t size() const noexcept { return elements.size(); }
};

inline constexpr std::size_t kMaterializeCap = 100'000;

namespace detail {

inline std::size_t finite_size(const HausdorffTerm& t, std::size_t cap)
{
    switch (t.kind()) {
    case HausdorffTerm::Kind::Atom: return 1;
    case HausdorffTerm::Kind::Prod: {
        auto beta = t.beta().as_u64();
        if (!beta) {
            throw PreconditionError("cannot materialize infinite beta " + to_string(t.beta()));
        }
        const std::size_t base = finite_size(t.base(), cap);
        if (*beta > cap / base) {
            throw BudgetExceeded("term denotes more than " + std::to_string(cap) + " points");
        }
        return base * *beta;
    }
    case HausdorffTerm::Kind::Sum: {
        const std::size_t total = finite_size(t.left(), cap) + finite_size(t.right(), cap);
        if (total > cap) {
            throw BudgetExceeded("term denotes more than " + std::to_string(cap) + " points");
        }
        return total;
    }
    }
    return 0;
}

inline void materialize_into(const HausdorffTerm& t, Position& prefix, std::vector<Position>& out)
{
    switch (t.kind()) {
    case HausdorffTerm::Kind::Atom: out.push_back(prefix); return;
    case HausdorffTerm::Kind::Prod: {
        const std::uint64_t beta = *t.beta().as_u64();
        for (std::uint64_t i = 0; i < beta; ++i) {
            prefix.emplace_back(t.direction() == Direction::Fwd ? i : beta - 1 - i);
            materialize_into(t.base(), prefix, out);
            prefix.pop_back();
        }
        return;
    }
    case HausdorffTerm::Kind::Sum:
        prefix.emplace_back(0);
        materialize_into(t.left(), prefix, out);
        prefix.back() = Ordinal{1};
        materialize_into(t.right(), prefix, out);
        prefix.pop_back();
        return;
    }
}

} // namespace detail

/// The finite order denoted by t: products repeat the base beta times
/// (copies in reverse for rev), sums put left before right.
inline LinearOrder materialize(const HausdorffTerm& t, std::size_t cap = kMaterializeCap)
{
    LinearOrder order;
    order.elements.reserve(detail::finite_size(t, cap));
    Position prefix;
    detail::materialize_into(t, prefix, order.elements);
    return order;
}

/// Positions of the finite term in order, with their images.
inline std::vector<std::pair<Position, DecSeq>> embed_term(const HausdorffTerm& t, std::size_t cap = kMaterializeCap)
{
    std::vector<std::pair<Position, DecSeq>> out;
    for (auto& p : materialize(t, cap).elements) {
        DecSeq image = embed_position(t, p);
        out.emplace_back(std::move(p), std::move(image));
    }
    return out;
}

/// Images lie in ds(alpha_bound(t)) and increase strictly under <3 along the
/// denoted order. Consecutive comparisons suffice since <3 is transitive.
inline bool check_order_embedding(const HausdorffTerm& t, std::size_t cap = kMaterializeCap)
{
    const Ordinal bound = alpha_bound(t);
    const auto images = embed_term(t, cap);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!images[i].second.bounded_by(bound)) {
            return false;
        }
        if (i > 0 && cmp_lex3(images[i - 1].second, images[i].second) >= 0) {
            return false;
        }
    }
    return true;
}

/// All terms of depth <= max_depth with finite betas 1..max_beta.
inline std::vector<HausdorffTerm> enumerate_terms(std::size_t max_depth, std::uint64_t max_beta)
{
    std::vector<HausdorffTerm> all{HausdorffTerm::atom()};
    for (std::size_t d = 1; d <= max_depth; ++d) {
        std::vector<HausdorffTerm> next{HausdorffTerm::atom()};
        for (const auto& b : all) {
            for (std::uint64_t beta = 1; beta <= max_beta; ++beta) {
                next.push_back(HausdorffTerm::prod(b, Ordinal{beta}, Direction::Fwd));
                next.push_back(HausdorffTerm::prod(b, Ordinal{beta}, Direction::Rev));
            }
        }
        for (const auto& l : all) {
            for (const auto& r : all) {
                next.push_back(HausdorffTerm::sum(l, r));
            }
        }
        all = std::move(next);
    }
    return all;
}

} // namespace dsw
