#pragma once

// Similarity of finite tuples of decreasing sequences, colourings of tuples,
// and the uniformity checkers.
//
// A finite set of nodes is always handled as its <2-increasing listing.
// Tuples drawn from a tree are enumerated in canonical order: by size, then
// lexicographically with items compared by <2.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dsw/decseq.hpp"
#include "dsw/error.hpp"
#include "dsw/orders.hpp"
#include "dsw/tree.hpp"

namespace dsw {

using Tuple = std::vector<DecSeq>;
using Colour = std::uint32_t;

inline bool is_lex2_increasing(std::span<const DecSeq> items)
{
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (cmp_lex2(items[i - 1], items[i]) >= 0) {
            return false;
        }
    }
    return true;
}

/// Lists a finite set of sequences <2-increasingly; duplicates are an error.
inline Tuple as_tuple(std::vector<DecSeq> items)
{
    std::sort(items.begin(), items.end(), Lex2Less{});
    if (std::adjacent_find(items.begin(), items.end()) != items.end()) {
        throw PreconditionError("tuple has duplicate items");
    }
    return items;
}

/// "a ; b ; c" in sequence syntax; the empty tuple prints as "".
inline std::string to_string(const Tuple& u)
{
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += (i ? " ; " : "") + to_string(u[i]);
    }
    return out;
}

/// Items separated by ';' in sequence syntax.
inline Tuple parse_items(std::string_view text)
{
    Tuple items;
    if (detail::trim(text).empty()) {
        return items;
    }
    std::size_t start = 0;
    while (true) {
        const std::size_t semi = text.find(';', start);
        items.push_back(parse_seq(text.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start)));
        if (semi == std::string_view::npos) {
            break;
        }
        start = semi + 1;
    }
    return items;
}

// ---------------------------------------------------------------------------
// Similarity codes

/// Complete similarity invariant of a finite sequence of distinct items.
/// Field order is the canonical registry order.
struct SimCode {
    std::uint32_t n = 0;
    std::vector<std::uint32_t> lengths;
    /// n*n row-major, lg(item_l ∩ item_m)
    std::vector<std::uint32_t> meets;
    /// order[i] is the position of item i in the <2 listing
    std::vector<std::uint32_t> order;

    std::uint32_t meet(std::size_t l, std::size_t m) const { return meets[l * n + m]; }

    friend auto operator<=>(const SimCode&, const SimCode&) = default;
};

inline std::string to_string(const SimCode& code)
{
    auto join = [](auto first, auto last, const char* sep) {
        std::string s;
        for (auto it = first; it != last; ++it) {
            s += (it == first ? "" : sep) + std::to_string(*it);
        }
        return s;
    };
    std::string rows;
    for (std::uint32_t l = 0; l < code.n; ++l) {
        rows += (l ? ";" : "") + join(code.meets.begin() + l * code.n, code.meets.begin() + (l + 1) * code.n, ",");
    }
    return "n=" + std::to_string(code.n) + " lengths=" + join(code.lengths.begin(), code.lengths.end(), ",")
           + " meets=" + rows + " order=" + join(code.order.begin(), code.order.end(), ",");
}

namespace detail {

template <class Lg, class Meet, class Less>
SimCode make_code(std::size_t n, Lg lg, Meet meet, Less lex2_less)
{
    SimCode code;
    code.n = static_cast<std::uint32_t>(n);
    code.lengths.resize(n);
    code.meets.resize(n * n);
    for (std::size_t l = 0; l < n; ++l) {
        code.lengths[l] = static_cast<std::uint32_t>(lg(l));
        for (std::size_t m = 0; m < n; ++m) {
            code.meets[l * n + m] = static_cast<std::uint32_t>(l == m ? lg(l) : meet(l, m));
        }
    }
    std::vector<std::uint32_t> sorted(n);
    for (std::size_t i = 0; i < n; ++i) {
        sorted[i] = static_cast<std::uint32_t>(i);
    }
    std::sort(sorted.begin(), sorted.end(), lex2_less);
    code.order.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        code.order[sorted[pos]] = static_cast<std::uint32_t>(pos);
    }
    return code;
}

} // namespace detail

inline SimCode sim_code(std::span<const DecSeq> u)
{
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            if (u[i] == u[j]) {
                throw PreconditionError("sim_code: duplicate item " + show(u[i]));
            }
        }
    }
    return detail::make_code(
        u.size(), [&](std::size_t l) { return u[l].size(); },
        [&](std::size_t l, std::size_t m) { return meet_length(u[l], u[m]); },
        [&](std::uint32_t a, std::uint32_t b) { return cmp_lex2(u[a], u[b]) < 0; });
}

/// Code of a tuple of host-tree nodes (assumed distinct).
inline SimCode sim_code(const Tree& host, std::span<const NodeId> items)
{
    return detail::make_code(
        items.size(), [&](std::size_t l) { return host.depth(items[l]); },
        [&](std::size_t l, std::size_t m) { return host.meet_length(items[l], items[m]); },
        [&](std::uint32_t a, std::uint32_t b) { return host.lex2_rank(items[a]) < host.lex2_rank(items[b]); });
}

inline bool is_similar(std::span<const DecSeq> u, std::span<const DecSeq> v) { return sim_code(u) == sim_code(v); }

/// Sufficient test for prefix^<r1> ~ prefix^<r2> when both extend the
/// <2-increasing prefix upward: equal lengths, and equal meets with the last
/// prefix item.
inline bool end_ext_similar(const Tuple& prefix, const DecSeq& r1, const DecSeq& r2)
{
    if (!is_lex2_increasing(prefix)) {
        throw PreconditionError("end_ext_similar: prefix is not <2-increasing");
    }
    if (!prefix.empty() && (cmp_lex2(prefix.back(), r1) >= 0 || cmp_lex2(prefix.back(), r2) >= 0)) {
        throw PreconditionError("end_ext_similar: extension is not <2-above the prefix");
    }
    if (r1.size() != r2.size()) {
        return false;
    }
    return prefix.empty() || meet_length(r1, prefix.back()) == meet_length(r2, prefix.back());
}

// ---------------------------------------------------------------------------
// Registry of similarity classes

/// A finite universe of similarity classes in canonical order; a class's
/// index is its position.
class ClassRegistry {
public:
    ClassRegistry() = default;
    explicit ClassRegistry(std::vector<SimCode> codes) : codes_(std::move(codes))
    {
        std::sort(codes_.begin(), codes_.end());
        codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    }

    /// Every class realized by a <2-increasing tuple of at most `max_size` nodes of t.
    static ClassRegistry realized_in(const Tree& t, std::size_t max_size);

    std::size_t size() const noexcept { return codes_.size(); }
    const std::vector<SimCode>& codes() const noexcept { return codes_; }
    const SimCode& code(std::size_t index) const { return codes_.at(index); }

    std::optional<std::size_t> find(const SimCode& code) const
    {
        auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
        if (it == codes_.end() || *it != code) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - codes_.begin());
    }

    std::size_t index(const SimCode& code) const
    {
        if (auto i = find(code)) {
            return *i;
        }
        throw PreconditionError("similarity class outside the registry: " + to_string(code));
    }

private:
    std::vector<SimCode> codes_;
};

inline std::size_t class_index(const ClassRegistry& reg, const SimCode& code) { return reg.index(code); }

// ---------------------------------------------------------------------------
// Tuple enumeration

/// Calls f on every k-subset of `pool` in lexicographic order of positions.
/// With `pool` sorted by <2 this is the canonical tuple order. f returns
/// false to stop; the function returns false iff stopped.
template <class F>
bool for_each_combination(std::span<const NodeId> pool, std::size_t k, F&& f)
{
    if (k > pool.size()) {
        return true;
    }
    std::vector<std::size_t> idx(k);
    std::vector<NodeId> items(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        for (std::size_t i = 0; i < k; ++i) {
            items[i] = pool[idx[i]];
        }
        if (!f(std::span<const NodeId>(items))) {
            return false;
        }
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return true;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

inline Tuple to_tuple(const Tree& host, std::span<const NodeId> ids)
{
    Tuple out;
    out.reserve(ids.size());
    for (auto id : ids) {
        out.push_back(host.node(id));
    }
    return out;
}

inline ClassRegistry ClassRegistry::realized_in(const Tree& t, std::size_t max_size)
{
    std::set<SimCode> seen;
    for (std::size_t k = 0; k <= max_size; ++k) {
        for_each_combination(t.by_lex2(), k, [&](std::span<const NodeId> u) {
            seen.insert(sim_code(t, u));
            return true;
        });
    }
    return ClassRegistry(std::vector<SimCode>(seen.begin(), seen.end()));
}

// ---------------------------------------------------------------------------
// Colourings

/// A finite table of colours for tuples of declared sizes, colours < mu.
class Colouring {
public:
    Colouring(Colour num_colours, std::set<std::size_t> arities) : mu_(num_colours), arities_(std::move(arities))
    {
        if (mu_ == 0) {
            throw PreconditionError("a colouring needs at least one colour");
        }
    }

    void assign(Tuple u, Colour colour)
    {
        if (!arities_.contains(u.size())) {
            throw PreconditionError("tuple size " + std::to_string(u.size()) + " is not a declared arity");
        }
        if (colour >= mu_) {
            throw PreconditionError("colour " + std::to_string(colour) + " out of range for mu=" + std::to_string(mu_));
        }
        if (!is_lex2_increasing(u)) {
            throw PreconditionError("tuple [" + to_string(u) + "] is not listed <2-increasingly");
        }
        table_.insert_or_assign(std::move(u), colour);
    }

    std::optional<Colour> colour(const Tuple& u) const
    {
        auto it = table_.find(u);
        if (it == table_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    Colour num_colours() const noexcept { return mu_; }
    const std::set<std::size_t>& arities() const noexcept { return arities_; }
    const std::map<Tuple, Colour>& assignments() const noexcept { return table_; }

    friend bool operator==(const Colouring&, const Colouring&) = default;

private:
    Colour mu_;
    std::set<std::size_t> arities_;
    std::map<Tuple, Colour> table_;
};

/// Colours every tuple of t of the given arities with f(tuple).
inline Colouring colouring_from(const Tree& t, const std::set<std::size_t>& arities, Colour mu,
                                const std::function<Colour(std::span<const NodeId>)>& f)
{
    Colouring c(mu, arities);
    for (auto a : arities) {
        for_each_combination(t.by_lex2(), a, [&](std::span<const NodeId> u) {
            c.assign(to_tuple(t, u), f(u));
            return true;
        });
    }
    return c;
}

inline Colouring constant_colouring(const Tree& t, const std::set<std::size_t>& arities, Colour mu, Colour colour)
{
    return colouring_from(t, arities, mu, [&](std::span<const NodeId>) { return colour; });
}

/// Colour depends only on the lengths of the items.
inline Colouring length_colouring(const Tree& t, const std::set<std::size_t>& arities, Colour mu,
                                  const std::function<Colour(const std::vector<std::size_t>&)>& by_lengths)
{
    return colouring_from(t, arities, mu, [&](std::span<const NodeId> u) {
        std::vector<std::size_t> lengths;
        for (auto id : u) {
            lengths.push_back(t.depth(id));
        }
        return by_lengths(lengths);
    });
}

/// Colour = class index mod mu; uniform by construction.
inline Colouring class_colouring(const Tree& t, const std::set<std::size_t>& arities, Colour mu, const ClassRegistry& reg)
{
    return colouring_from(t, arities, mu,
                          [&](std::span<const NodeId> u) { return static_cast<Colour>(reg.index(sim_code(t, u)) % mu); });
}

inline Colouring random_colouring(const Tree& t, const std::set<std::size_t>& arities, Colour mu, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return colouring_from(t, arities, mu, [&](std::span<const NodeId>) { return static_cast<Colour>(rng() % mu); });
}

// Colouring file format:
//
//   mu=2
//   arities=1,2            (optional; inferred from the entries otherwise)
//   0 ; 1,0 -> 1
//   - -> 0
//
// Items of a tuple are separated by ';' and listed <2-increasingly.

inline Colouring read_colouring(std::istream& in)
{
    std::optional<Colour> mu;
    std::optional<std::set<std::size_t>> declared;
    std::vector<std::pair<Tuple, Colour>> entries;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [](const std::string& what) -> void { throw ParseError(what, 0); };
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        try {
            if (body.starts_with("mu=")) {
                detail::Cursor cur(body.substr(3));
                auto value = cur.natural();
                if (!cur.done() || value == 0 || value > std::numeric_limits<Colour>::max()) {
                    fail("bad mu");
                }
                mu = value.convert_to<Colour>();
                continue;
            }
            if (body.starts_with("arities=")) {
                std::set<std::size_t> arities;
                std::string list(body.substr(8));
                std::istringstream parts(list);
                std::string piece;
                while (std::getline(parts, piece, ',')) {
                    detail::Cursor cur(detail::trim(piece));
                    arities.insert(cur.natural().convert_to<std::size_t>());
                    if (!cur.done()) {
                        fail("bad arity list");
                    }
                }
                declared = std::move(arities);
                continue;
            }
            const auto arrow = body.find("->");
            if (arrow == std::string_view::npos) {
                fail("expected 'ITEMS -> COLOUR'");
            }
            Tuple u = parse_items(body.substr(0, arrow));
            detail::Cursor cur(detail::trim(body.substr(arrow + 2)));
            auto colour = cur.natural();
            if (!cur.done() || colour > std::numeric_limits<Colour>::max()) {
                fail("bad colour");
            }
            if (!is_lex2_increasing(u)) {
                fail("tuple is not listed <2-increasingly");
            }
            entries.emplace_back(std::move(u), colour.convert_to<Colour>());
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.message(), e.position());
        }
    }
    if (!mu) {
        throw ParseError("colouring file has no mu= header", 0);
    }
    std::set<std::size_t> arities;
    if (declared) {
        arities = *declared;
    } else {
        for (const auto& [u, colour] : entries) {
            arities.insert(u.size());
        }
    }
    Colouring c(*mu, arities);
    for (auto& [u, colour] : entries) {
        c.assign(std::move(u), colour);
    }
    return c;
}

inline Colouring parse_colouring(const std::string& text)
{
    std::istringstream in(text);
    return read_colouring(in);
}

inline void write_colouring(std::ostream& out, const Colouring& c)
{
    out << "mu=" << c.num_colours() << '\n' << "arities=";
    bool first = true;
    for (auto a : c.arities()) {
        out << (first ? "" : ",") << a;
        first = false;
    }
    out << '\n';
    for (const auto& [u, colour] : c.assignments()) {
        out << to_string(u) << (u.empty() ? "" : " ") << "-> " << colour << '\n';
    }
}

// ---------------------------------------------------------------------------
// Constraint groups

/// Tuples of one size drawn from a node pool, grouped by (first k items,
/// similarity class of the whole tuple). A colouring is k-prefix constant on
/// the pool iff it is constant on every group.
struct EndGroups {
    struct Group {
        std::vector<NodeId> prefix;
        SimCode code;
        std::vector<std::uint32_t> members;
    };

    std::size_t arity = 0;
    std::size_t k = 0;
    /// arity ids per tuple, canonical order
    std::vector<NodeId> flat;
    std::vector<std::uint32_t> group_of;
    /// ordered by first member
    std::vector<Group> groups;

    std::size_t tuple_count() const noexcept { return group_of.size(); }
    std::span<const NodeId> tuple(std::size_t i) const { return {flat.data() + i * arity, arity}; }
};

/// `pool` must be sorted by <2 rank in `host`.
inline EndGroups end_groups(const Tree& host, std::span<const NodeId> pool, std::size_t arity, std::size_t k)
{
    if (k > arity) {
        throw PreconditionError("prefix longer than tuple");
    }
    EndGroups out;
    out.arity = arity;
    out.k = k;
    std::map<std::pair<std::vector<NodeId>, SimCode>, std::uint32_t> index;
    for_each_combination(pool, arity, [&](std::span<const NodeId> u) {
        const auto id = static_cast<std::uint32_t>(out.group_of.size());
        out.flat.insert(out.flat.end(), u.begin(), u.end());
        auto key = std::make_pair(std::vector<NodeId>(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k)), sim_code(host, u));
        auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(out.groups.size()));
        if (fresh) {
            out.groups.push_back({std::move(key.first), std::move(key.second), {}});
        }
        out.groups[it->second].members.push_back(id);
        out.group_of.push_back(it->second);
        return true;
    });
    return out;
}

namespace detail {

struct SpanLess {
    using is_transparent = void;
    template <class A, class B>
    bool operator()(const A& a, const B& b) const
    {
        return std::lexicographical_compare(std::begin(a), std::end(a), std::begin(b), std::end(b));
    }
};

/// Colours of a colouring addressed by host node ids.
class IndexedColours {
public:
    IndexedColours(const Colouring& c, const Tree& host)
    {
        for (const auto& [u, colour] : c.assignments()) {
            std::vector<NodeId> ids;
            ids.reserve(u.size());
            for (const auto& s : u) {
                auto id = host.find(s);
                if (!id) {
                    break;
                }
                ids.push_back(*id);
            }
            if (ids.size() == u.size()) {
                table_.emplace(std::move(ids), colour);
            }
        }
    }

    std::optional<Colour> at(std::span<const NodeId> ids) const
    {
        auto it = table_.find(ids);
        if (it == table_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// Throws TotalityError for an unassigned tuple.
    Colour require(const Tree& host, std::span<const NodeId> ids) const
    {
        if (auto c = at(ids)) {
            return *c;
        }
        throw TotalityError("colouring has no value for [" + to_string(to_tuple(host, ids)) + "]");
    }

private:
    std::map<std::vector<NodeId>, Colour, SpanLess> table_;
};

/// First tuple (canonical order) whose colour differs from its group's first member.
template <class ColourOf>
std::optional<std::pair<std::uint32_t, std::uint32_t>> first_conflict(const EndGroups& eg, ColourOf&& colour_of)
{
    std::vector<Colour> seen(eg.groups.size());
    for (std::uint32_t i = 0; i < eg.tuple_count(); ++i) {
        const Colour c = colour_of(i);
        const auto& g = eg.groups[eg.group_of[i]];
        if (g.members.front() == i) {
            seen[eg.group_of[i]] = c;
        } else if (seen[eg.group_of[i]] != c) {
            return std::make_pair(g.members.front(), i);
        }
    }
    return std::nullopt;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Uniformity checkers

struct TupleViolation {
    Tuple first;
    Tuple second;
    Colour first_colour = 0;
    Colour second_colour = 0;
};

struct UniformityVerdict {
    std::optional<TupleViolation> violation;

    bool holds() const noexcept { return !violation; }
    explicit operator bool() const noexcept { return holds(); }
};

namespace detail {

inline UniformityVerdict check_groups(const Tree& host, std::span<const NodeId> pool, const IndexedColours& colours,
                                      const std::set<std::size_t>& arities, std::size_t tail)
{
    for (auto a : arities) {
        if (a < tail) {
            continue;
        }
        const auto eg = end_groups(host, pool, a, a - tail);
        auto conflict = first_conflict(eg, [&](std::uint32_t i) { return colours.require(host, eg.tuple(i)); });
        if (conflict) {
            const auto [x, y] = *conflict;
            return {TupleViolation{to_tuple(host, eg.tuple(x)), to_tuple(host, eg.tuple(y)),
                                   *colours.at(eg.tuple(x)), *colours.at(eg.tuple(y))}};
        }
    }
    return {};
}

} // namespace detail

/// c is constant on every similarity class of tuples from tp (declared arities).
inline UniformityVerdict is_uniform(const Tree& tp, const Colouring& c)
{
    const detail::IndexedColours colours(c, tp);
    for (auto a : c.arities()) {
        // k = 0 groups by class alone
        if (auto v = detail::check_groups(tp, tp.by_lex2(), colours, {a}, a); !v) {
            return v;
        }
    }
    return {};
}

/// Whenever two tuples from tp share their first k items literally and are
/// similar as wholes (the last n items being the ones that may differ), c
/// agrees on them. n = 1 is plain end-uniformity.
inline UniformityVerdict is_n_end_uniform(const Tree& tp, const Colouring& c, std::size_t n)
{
    if (n == 0) {
        throw PreconditionError("n-end-uniformity needs n >= 1");
    }
    const detail::IndexedColours colours(c, tp);
    return detail::check_groups(tp, tp.by_lex2(), colours, c.arities(), n);
}

inline UniformityVerdict is_end_uniform(const Tree& tp, const Colouring& c) { return is_n_end_uniform(tp, c, 1); }

} // namespace dsw
