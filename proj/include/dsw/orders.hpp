#pragma once

// The four orders on ds(∞).
//
//   <1  first difference decides; a proper prefix is smaller
//   <2  first difference decides; a proper prefix is larger
//   <*  intersection of <1 and <2 (partial)
//   <3  first difference decides ascending at even positions and
//       descending at odd ones; a proper prefix is smaller
//
// Comparators walk the entries in place and never allocate.

#include <compare>
#include <optional>
#include <span>
#include <string_view>

#include "dsw/decseq.hpp"

namespace dsw {

enum class OrderKind { Lex1, Lex2, Lex3, Star };

inline std::optional<OrderKind> parse_order_kind(std::string_view s)
{
    if (s == "lex1") return OrderKind::Lex1;
    if (s == "lex2") return OrderKind::Lex2;
    if (s == "lex3") return OrderKind::Lex3;
    if (s == "star") return OrderKind::Star;
    return std::nullopt;
}

namespace detail {

/// Position of the first differing entry within the common length, or the common length.
inline std::size_t first_difference(const DecSeq& a, const DecSeq& b) { return meet_length(a, b); }

inline std::strong_ordering reverse(std::strong_ordering c) { return 0 <=> c; }

} // namespace detail

inline std::strong_ordering cmp_lex1(const DecSeq& a, const DecSeq& b)
{
    const std::size_t l = detail::first_difference(a, b);
    if (l < a.size() && l < b.size()) {
        return compare(a[l], b[l]);
    }
    return a.size() <=> b.size();
}

inline std::strong_ordering cmp_lex2(const DecSeq& a, const DecSeq& b)
{
    const std::size_t l = detail::first_difference(a, b);
    if (l < a.size() && l < b.size()) {
        return compare(a[l], b[l]);
    }
    return b.size() <=> a.size();
}

inline std::strong_ordering cmp_lex3(const DecSeq& a, const DecSeq& b)
{
    const std::size_t l = detail::first_difference(a, b);
    if (l < a.size() && l < b.size()) {
        auto c = compare(a[l], b[l]);
        return l % 2 == 0 ? c : detail::reverse(c);
    }
    return a.size() <=> b.size();
}

/// a ≤* b, i.e. a ≤1 b and a ≤2 b.
inline bool leq_star(const DecSeq& a, const DecSeq& b) { return cmp_lex1(a, b) <= 0 && cmp_lex2(a, b) <= 0; }

/// <* as a partial comparison; `unordered` when <1 and <2 disagree.
inline std::partial_ordering cmp_star(const DecSeq& a, const DecSeq& b)
{
    const auto c1 = cmp_lex1(a, b);
    return c1 == cmp_lex2(a, b) ? std::partial_ordering(c1) : std::partial_ordering::unordered;
}

inline std::partial_ordering compare_by(OrderKind kind, const DecSeq& a, const DecSeq& b)
{
    switch (kind) {
    case OrderKind::Lex1: return cmp_lex1(a, b);
    case OrderKind::Lex2: return cmp_lex2(a, b);
    case OrderKind::Lex3: return cmp_lex3(a, b);
    case OrderKind::Star: return cmp_star(a, b);
    }
    return std::partial_ordering::unordered;
}

struct Lex2Less {
    bool operator()(const DecSeq& a, const DecSeq& b) const { return cmp_lex2(a, b) < 0; }
};

/// The <2-minimum of a non-empty set, built greedily: take the least first
/// entry, then the least next entry among members continuing that prefix,
/// until no member continues it.
inline DecSeq min_lex2(std::span<const DecSeq> set)
{
    if (set.empty()) {
        throw PreconditionError("min_lex2 of an empty set");
    }
    std::vector<std::size_t> live(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        live[i] = i;
    }
    // Invariant: every live member starts with the n entries chosen so far.
    for (std::size_t n = 0;; ++n) {
        const Ordinal* least = nullptr;
        for (auto i : live) {
            if (set[i].size() > n && (least == nullptr || compare(set[i][n], *least) < 0)) {
                least = &set[i][n];
            }
        }
        if (least == nullptr) {
            // Only members equal to the chosen prefix remain.
            return set[live.front()];
        }
        const Ordinal chosen = *least;
        std::erase_if(live, [&](std::size_t i) { return set[i].size() <= n || set[i][n] != chosen; });
    }
}

/// The <1-minimum: the shortest prefix of the <2-minimum that is a member.
inline DecSeq min_lex1(std::span<const DecSeq> set)
{
    const DecSeq greedy = min_lex2(set);
    std::size_t shortest = greedy.size();
    for (const auto& s : set) {
        if (s.size() < shortest && s.is_prefix_of(greedy)) {
            shortest = s.size();
        }
    }
    return greedy.prefix(shortest);
}

} // namespace dsw
