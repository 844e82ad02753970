#pragma once

// Tree embeddings, end-uniform copy search, exhaustive partition
// verification, and the colouring reduction used to lift end-uniformity
// from n to n+1.
//
// "First" always refers to canonical order: pattern nodes are assigned in
// (length, <2) order and candidate images are tried in the same order.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dsw/embedding.hpp"
#include "dsw/error.hpp"
#include "dsw/similarity.hpp"
#include "dsw/tree.hpp"

namespace dsw {

struct SearchLimits {
    std::size_t max_pattern = 64;
    std::size_t max_target = 4096;
    /// backtracking steps before the enumeration gives up
    std::uint64_t node_budget = 50'000'000;
    std::uint64_t colouring_budget = std::uint64_t{1} << 24;
    unsigned threads = 1;
};

// ---------------------------------------------------------------------------
// Embedding enumeration

/// Calls f(image) for every embedding of s into t in canonical order, where
/// image[i] is the t-node assigned to s-node i. f returns false to stop.
/// Throws BudgetExceeded when the step budget runs out.
template <class F>
void for_each_embedding(const Tree& s, const Tree& t, const SearchLimits& limits, F&& f)
{
    if (s.size() > limits.max_pattern) {
        throw BudgetExceeded("pattern has " + std::to_string(s.size()) + " nodes, cap is "
                             + std::to_string(limits.max_pattern));
    }
    if (t.size() > limits.max_target) {
        throw BudgetExceeded("target has " + std::to_string(t.size()) + " nodes, cap is "
                             + std::to_string(limits.max_target));
    }
    // Previous sibling of each pattern node, or the node itself for a first child.
    std::vector<NodeId> prev(s.size());
    for (NodeId v = 0; v < s.size(); ++v) {
        const auto kids = s.children(v);
        for (std::size_t i = 0; i < kids.size(); ++i) {
            prev[kids[i]] = i == 0 ? kids[i] : kids[i - 1];
        }
    }
    std::vector<NodeId> image(s.size(), Tree::root());
    std::uint64_t steps = 0;
    bool stopped = false;
    auto rec = [&](auto&& self, NodeId i) -> void {
        if (i == s.size()) {
            stopped = !f(std::span<const NodeId>(image));
            return;
        }
        const auto options = t.children(image[s.parent(i)]);
        std::size_t first = 0;
        if (prev[i] != i) {
            // siblings map to <*-increasing, i.e. label-increasing, children
            const NodeId left = image[prev[i]];
            while (first < options.size() && options[first] <= left) {
                ++first;
            }
        }
        for (std::size_t j = first; j < options.size() && !stopped; ++j) {
            if (++steps > limits.node_budget) {
                throw BudgetExceeded("embedding search exceeded " + std::to_string(limits.node_budget) + " steps");
            }
            image[i] = options[j];
            self(self, i + 1);
        }
    };
    rec(rec, 1);
}

inline Embedding to_embedding(const Tree& s, const Tree& t, std::span<const NodeId> image)
{
    Embedding e;
    for (NodeId v = 0; v < s.size(); ++v) {
        e.set(s.node(v), t.node(image[v]));
    }
    return e;
}

inline std::vector<Embedding> enum_embeddings(const Tree& s, const Tree& t, const SearchLimits& limits = {})
{
    std::vector<Embedding> out;
    for_each_embedding(s, t, limits, [&](std::span<const NodeId> image) {
        out.push_back(to_embedding(s, t, image));
        return true;
    });
    return out;
}

inline std::uint64_t count_embeddings(const Tree& s, const Tree& t, const SearchLimits& limits = {})
{
    std::uint64_t count = 0;
    for_each_embedding(s, t, limits, [&](std::span<const NodeId>) {
        ++count;
        return true;
    });
    return count;
}

// ---------------------------------------------------------------------------
// Tuple indexing

/// All tuples of the given sizes from a tree, numbered in canonical order.
class TupleIndex {
public:
    TupleIndex(const Tree& t, const std::set<std::size_t>& arities)
    {
        start_.push_back(0);
        for (auto a : arities) {
            for_each_combination(t.by_lex2(), a, [&](std::span<const NodeId> u) {
                const auto id = static_cast<std::uint32_t>(size());
                flat_.insert(flat_.end(), u.begin(), u.end());
                start_.push_back(static_cast<std::uint32_t>(flat_.size()));
                index_.emplace(std::vector<NodeId>(u.begin(), u.end()), id);
                return true;
            });
        }
    }

    std::size_t size() const noexcept { return start_.size() - 1; }
    std::span<const NodeId> tuple(std::size_t i) const { return {flat_.data() + start_[i], start_[i + 1] - start_[i]}; }

    std::optional<std::uint32_t> find(std::span<const NodeId> ids) const
    {
        auto it = index_.find(ids);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::uint32_t at(std::span<const NodeId> ids) const
    {
        if (auto i = find(ids)) {
            return *i;
        }
        throw PreconditionError("tuple outside the index");
    }

private:
    std::vector<NodeId> flat_;
    std::vector<std::uint32_t> start_;
    std::map<std::vector<NodeId>, std::uint32_t, detail::SpanLess> index_;
};

/// Number of tuples of the given sizes from an n-node tree, saturating at
/// the u64 maximum.
inline std::uint64_t count_tuples(std::size_t nodes, const std::set<std::size_t>& arities)
{
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    for (auto a : arities) {
        if (a > nodes) {
            continue;
        }
        // C(nodes, a) with exact intermediate division
        boost::multiprecision::uint128_t c = 1;
        for (std::size_t i = 0; i < a; ++i) {
            c = c * (nodes - i) / (i + 1);
            if (c > kMax) {
                return kMax;
            }
        }
        if (total > kMax - static_cast<std::uint64_t>(c)) {
            return kMax;
        }
        total += static_cast<std::uint64_t>(c);
    }
    return total;
}

/// mu^exponent, or nullopt above `cap`.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t mu, std::uint64_t exponent, std::uint64_t cap)
{
    std::uint64_t value = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        if (mu != 0 && value > cap / mu) {
            return std::nullopt;
        }
        value *= mu;
    }
    if (value > cap) {
        return std::nullopt;
    }
    return value;
}

// ---------------------------------------------------------------------------
// End-uniform copies

namespace detail {

/// End-groups of the pattern at every arity a with n <= a <= |s|, k = a - n.
/// Embeddings preserve similarity and <2, so these are also the groups of
/// any image.
inline std::vector<EndGroups> pattern_groups(const Tree& s, const std::set<std::size_t>& arities, std::size_t n)
{
    std::vector<EndGroups> out;
    for (auto a : arities) {
        if (a >= n && a <= s.size()) {
            out.push_back(end_groups(s, s.by_lex2(), a, a - n));
        }
    }
    return out;
}

inline std::vector<NodeId> map_tuple(std::span<const NodeId> tuple, std::span<const NodeId> image)
{
    std::vector<NodeId> out;
    out.reserve(tuple.size());
    for (auto v : tuple) {
        out.push_back(image[v]);
    }
    return out;
}

} // namespace detail

struct CertificateEntry {
    Tuple prefix;
    SimCode code;
    Colour colour = 0;
    std::size_t members = 0;
};

struct Witness {
    Embedding embedding;
    std::size_t n = 1;
    /// every constraint group of the image, with its common colour
    std::vector<CertificateEntry> certificate;
};

inline void check_n(std::size_t n)
{
    if (n == 0) {
        throw PreconditionError("n must be at least 1");
    }
}

/// First embedding of s into t (canonical order) whose image is
/// n-end-uniform for c.
inline std::optional<Witness> find_n_end_uniform_copy(const Tree& t, const Tree& s, const Colouring& c, std::size_t n,
                                                      const SearchLimits& limits = {})
{
    check_n(n);
    const detail::IndexedColours colours(c, t);
    const auto groups = detail::pattern_groups(s, c.arities(), n);
    std::optional<Witness> found;
    for_each_embedding(s, t, limits, [&](std::span<const NodeId> image) {
        for (const auto& eg : groups) {
            for (const auto& g : eg.groups) {
                const Colour first = colours.require(t, detail::map_tuple(eg.tuple(g.members.front()), image));
                for (std::size_t j = 1; j < g.members.size(); ++j) {
                    if (colours.require(t, detail::map_tuple(eg.tuple(g.members[j]), image)) != first) {
                        return true;
                    }
                }
            }
        }
        Witness w{to_embedding(s, t, image), n, {}};
        for (const auto& eg : groups) {
            for (const auto& g : eg.groups) {
                w.certificate.push_back({to_tuple(t, detail::map_tuple(g.prefix, image)), g.code,
                                         *colours.at(detail::map_tuple(eg.tuple(g.members.front()), image)),
                                         g.members.size()});
            }
        }
        found = std::move(w);
        return false;
    });
    return found;
}

inline std::optional<Witness> find_end_uniform_copy(const Tree& t, const Tree& s, const Colouring& c,
                                                    const SearchLimits& limits = {})
{
    return find_n_end_uniform_copy(t, s, c, 1, limits);
}

// ---------------------------------------------------------------------------
// Exhaustive verification

struct VerifyReport {
    bool holds = false;
    std::optional<Colouring> counterexample;
    /// colourings examined in lexicographic order, up to and including the first failure
    std::uint64_t colourings_checked = 0;
    std::uint64_t colourings_total = 0;
};

/// Checks that every mu-colouring of the tuples of t with sizes in `arities`
/// admits an n-end-uniform copy of s. Colourings are visited as base-mu
/// numerals whose most significant digit is the first tuple in canonical
/// order; the report names the first failing one.
inline VerifyReport verify_partition_exhaustive(const Tree& t, const Tree& s, Colour mu,
                                                const std::set<std::size_t>& arities, std::size_t n,
                                                const SearchLimits& limits = {})
{
    check_n(n);
    if (mu == 0) {
        throw PreconditionError("mu must be at least 1");
    }
    if (arities.empty() || arities.contains(0)) {
        throw PreconditionError("arities must be positive");
    }
    const std::uint64_t tuples = count_tuples(t.size(), arities);
    const auto total = bounded_power(mu, tuples, limits.colouring_budget);
    if (!total) {
        throw BudgetExceeded(std::to_string(mu) + "^" + std::to_string(tuples) + " colourings exceed the budget of "
                             + std::to_string(limits.colouring_budget));
    }
    const TupleIndex domain(t, arities);

    // Per embedding, the tuple pairs whose colours must agree.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> constraints;
    const auto groups = detail::pattern_groups(s, arities, n);
    for_each_embedding(s, t, limits, [&](std::span<const NodeId> image) {
        auto& pairs = constraints.emplace_back();
        for (const auto& eg : groups) {
            for (const auto& g : eg.groups) {
                const auto head = domain.at(detail::map_tuple(eg.tuple(g.members.front()), image));
                for (std::size_t j = 1; j < g.members.size(); ++j) {
                    pairs.emplace_back(head, domain.at(detail::map_tuple(eg.tuple(g.members[j]), image)));
                }
            }
        }
        return true;
    });

    const std::size_t width = domain.size();
    auto passes = [&](const std::vector<Colour>& colours) {
        for (const auto& pairs : constraints) {
            bool ok = true;
            for (const auto& [x, y] : pairs) {
                if (colours[x] != colours[y]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                return true;
            }
        }
        return false;
    };
    auto decode = [&](std::uint64_t index, std::vector<Colour>& colours) {
        for (std::size_t j = width; j-- > 0;) {
            colours[j] = static_cast<Colour>(index % mu);
            index /= mu;
        }
    };
    auto increment = [&](std::vector<Colour>& colours) {
        for (std::size_t j = width; j-- > 0;) {
            if (++colours[j] < mu) {
                return;
            }
            colours[j] = 0;
        }
    };

    const unsigned threads = std::max(1u, limits.threads);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, *total / (std::uint64_t{threads} * 64));
    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<std::uint64_t> first_fail{std::numeric_limits<std::uint64_t>::max()};
    auto worker = [&] {
        std::vector<Colour> colours(width);
        while (true) {
            const std::uint64_t begin = next_chunk.fetch_add(chunk);
            if (begin >= *total || begin >= first_fail.load()) {
                return;
            }
            const std::uint64_t end = std::min(*total, begin + chunk);
            decode(begin, colours);
            for (std::uint64_t i = begin; i < end; ++i) {
                if (i >= first_fail.load(std::memory_order_relaxed)) {
                    return;
                }
                if (!passes(colours)) {
                    std::uint64_t seen = first_fail.load();
                    while (i < seen && !first_fail.compare_exchange_weak(seen, i)) {
                    }
                    break;
                }
                increment(colours);
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    VerifyReport report;
    report.colourings_total = *total;
    const std::uint64_t fail = first_fail.load();
    if (fail == std::numeric_limits<std::uint64_t>::max()) {
        report.holds = true;
        report.colourings_checked = *total;
        return report;
    }
    report.colourings_checked = fail + 1;
    std::vector<Colour> colours(width);
    decode(fail, colours);
    Colouring cx(mu, arities);
    for (std::size_t j = 0; j < width; ++j) {
        cx.assign(to_tuple(t, domain.tuple(j)), colours[j]);
    }
    if (find_n_end_uniform_copy(t, s, cx, n, limits)) {
        throw std::logic_error("counterexample colouring admits a copy");
    }
    report.counterexample = std::move(cx);
    return report;
}

inline VerifyReport verify_partition_exhaustive(const Tree& t, const Tree& s, Colour mu, std::size_t arity,
                                                std::size_t n, const SearchLimits& limits = {})
{
    return verify_partition_exhaustive(t, s, mu, std::set<std::size_t>{arity}, n, limits);
}

// ---------------------------------------------------------------------------
// Colouring reduction

/// -1 in a d-row: no one-point extension lands in that class.
inline constexpr std::int64_t kAbsent = -1;

/// d(rho) as a finite map from class index to colour; classes without an
/// entry read as kAbsent.
using DRow = std::map<std::size_t, std::int64_t>;

inline std::int64_t d_at(const DRow& row, std::size_t m)
{
    auto it = row.find(m);
    return it == row.end() ? kAbsent : it->second;
}

/// d for every tuple of tp whose one-point extensions carry colours, i.e.
/// tuples of size a-1 for each arity a of c. Tuples of other sizes have the
/// all-absent row and are omitted.
inline std::map<Tuple, DRow> transform_colouring_d(const Tree& tp, const Colouring& c, const ClassRegistry& reg)
{
    const detail::IndexedColours colours(c, tp);
    std::map<Tuple, DRow> out;
    for (auto a : c.arities()) {
        if (a == 0) {
            continue;
        }
        for_each_combination(tp.by_lex2(), a - 1, [&](std::span<const NodeId> rho) {
            DRow row;
            std::map<std::size_t, std::vector<NodeId>> origin;
            std::vector<NodeId> u(rho.begin(), rho.end());
            u.push_back(0);
            const std::size_t from = rho.empty() ? 0 : tp.lex2_rank(rho.back()) + 1;
            for (std::size_t r = from; r < tp.size(); ++r) {
                u.back() = tp.by_lex2()[r];
                const std::size_t m = reg.index(sim_code(tp, u));
                const std::int64_t colour = colours.require(tp, u);
                auto [it, fresh] = row.try_emplace(m, colour);
                if (fresh) {
                    origin.emplace(m, u);
                } else if (it->second != colour) {
                    throw NotEndUniform("d is not well defined: [" + to_string(to_tuple(tp, origin.at(m))) + "] and ["
                                        + to_string(to_tuple(tp, u)) + "] are similar end extensions with colours "
                                        + std::to_string(it->second) + " and " + std::to_string(colour));
                }
            }
            out.emplace(to_tuple(tp, rho), std::move(row));
            return true;
        });
    }
    return out;
}

/// Injective numbering of d-rows: the sorted (class, colour) entries are
/// serialized and numbered densely in order of first appearance, with the
/// all-absent row numbered 0.
class PairingFunction {
public:
    explicit PairingFunction(const ClassRegistry& reg) : classes_(reg.size()) { codes_.emplace(Key{}, 0); }

    std::size_t operator()(const DRow& row)
    {
        key_.clear();
        for (const auto& [m, colour] : row) {
            if (m >= classes_) {
                throw PreconditionError("class index " + std::to_string(m) + " outside the registry");
            }
            if (colour < kAbsent || colour > std::numeric_limits<Colour>::max() - 1) {
                throw PreconditionError("d-row entry out of range");
            }
            if (colour != kAbsent) {
                key_.push_back(pack(m, static_cast<Colour>(colour)));
            }
        }
        return number(key_);
    }

    /// Numbering of an already serialized row (entries sorted by class).
    std::size_t number(const std::vector<std::uint64_t>& key)
    {
        auto [it, fresh] = codes_.try_emplace(key, codes_.size());
        if (fresh) {
            decoded_.push_back(&it->first);
        }
        return it->second;
    }

    static std::uint64_t pack(std::size_t m, Colour colour) { return (std::uint64_t{m} << 32) | colour; }

    std::size_t size() const noexcept { return codes_.size(); }

    /// The row numbered `code`, as serialized entries.
    const std::vector<std::uint64_t>& decode(std::size_t code) const
    {
        return code == 0 ? empty_ : *decoded_.at(code - 1);
    }

private:
    using Key = std::vector<std::uint64_t>;

    std::size_t classes_;
    std::map<Key, std::size_t> codes_;
    std::vector<const Key*> decoded_;
    Key key_;
    Key empty_;
};

inline std::size_t pair_f(PairingFunction& f, const DRow& row) { return f(row); }

/// The composite colouring f o d on tuples of tp of sizes a-1 (a an arity of c).
inline Colouring compose_pairing(const Tree& tp, const Colouring& c, const ClassRegistry& reg, PairingFunction& f)
{
    const auto d = transform_colouring_d(tp, c, reg);
    std::set<std::size_t> sizes;
    for (auto a : c.arities()) {
        if (a > 0) {
            sizes.insert(a - 1);
        }
    }
    std::vector<std::pair<Tuple, std::size_t>> values;
    for (const auto& [rho, row] : d) {
        values.emplace_back(rho, f(row));
    }
    Colour mu = 1;
    for (const auto& [rho, code] : values) {
        mu = std::max<Colour>(mu, static_cast<Colour>(code + 1));
    }
    Colouring out(mu, sizes);
    for (auto& [rho, code] : values) {
        out.assign(std::move(rho), static_cast<Colour>(code));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dense lift checker

/// For a fixed host tp (assumed end-uniform for the colourings fed in),
/// checks the induction step of the reduction on every subtree T'' of tp
/// with at most `max_pattern` nodes: if T'' is n-end-uniform for f o d then
/// it is (n+1)-end-uniform for c.
///
/// Colourings are given as dense vectors over tuples() (canonical order).
class ReductionLift {
public:
    struct Outcome {
        bool conflict_free = true;
        std::optional<std::size_t> failing_subtree;
        bool holds() const noexcept { return conflict_free && !failing_subtree; }
    };

    ReductionLift(const Tree& tp, const std::set<std::size_t>& arities, std::size_t n, std::size_t max_pattern,
                  const ClassRegistry& reg)
        : tp_(tp), c_domain_(tp, arities), e_domain_(tp, e_sizes(arities))
    {
        check_n(n);
        // Extension groups: tuples of size a sharing the first a-1 items, by class.
        rows_.resize(e_domain_.size());
        for (auto a : arities) {
            if (a == 0) {
                continue;
            }
            const auto eg = end_groups(tp, tp.by_lex2(), a, a - 1);
            for (const auto& g : eg.groups) {
                Extension ext{reg.index(g.code), {}};
                for (auto i : g.members) {
                    ext.members.push_back(c_domain_.at(eg.tuple(i)));
                }
                rows_[e_domain_.at(g.prefix)].push_back(std::move(ext));
            }
        }
        for (auto& row : rows_) {
            std::sort(row.begin(), row.end(), [](const Extension& x, const Extension& y) { return x.m < y.m; });
        }
        collect_pairs(e_domain_, e_sizes(arities), n, e_pairs_);
        collect_pairs(c_domain_, arities, n + 1, c_pairs_);

        for_each_subtree(tp, max_pattern, [&](std::span<const NodeId> ids) {
            std::vector<char> inside(tp.size(), 0);
            for (auto v : ids) {
                inside[v] = 1;
            }
            subtrees_.push_back({std::vector<NodeId>(ids.begin(), ids.end()), restrict(e_domain_, e_pairs_, inside),
                                 restrict(c_domain_, c_pairs_, inside)});
            return true;
        });
        std::sort(subtrees_.begin(), subtrees_.end(), [&](const Subtree& x, const Subtree& y) {
            return canonical_nodes(x.nodes) < canonical_nodes(y.nodes);
        });
        e_values_.resize(e_domain_.size());
        e_equal_.assign(words(e_pairs_.size()), 0);
        c_equal_.assign(words(c_pairs_.size()), 0);
    }

    const TupleIndex& tuples() const noexcept { return c_domain_; }
    const TupleIndex& reduced_tuples() const noexcept { return e_domain_; }
    std::size_t subtree_count() const noexcept { return subtrees_.size(); }
    Tree subtree(std::size_t i) const
    {
        std::vector<DecSeq> nodes;
        for (auto v : subtrees_.at(i).nodes) {
            nodes.push_back(tp_.node(v));
        }
        return Tree::from_nodes(std::move(nodes));
    }

    /// f(d(rho)) for the last checked colouring, indexed like reduced_tuples().
    std::span<const std::size_t> reduced_colours() const noexcept { return e_values_; }

    Outcome check(std::span<const Colour> colours, PairingFunction& f)
    {
        Outcome out;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            key_.clear();
            for (const auto& ext : rows_[r]) {
                const Colour colour = colours[ext.members.front()];
                for (std::size_t j = 1; j < ext.members.size(); ++j) {
                    if (colours[ext.members[j]] != colour) {
                        out.conflict_free = false;
                        return out;
                    }
                }
                key_.push_back(PairingFunction::pack(ext.m, colour));
            }
            e_values_[r] = f.number(key_);
        }
        fill_equal(e_pairs_, e_equal_, [&](std::uint32_t x, std::uint32_t y) { return e_values_[x] == e_values_[y]; });
        fill_equal(c_pairs_, c_equal_, [&](std::uint32_t x, std::uint32_t y) { return colours[x] == colours[y]; });
        for (std::size_t i = 0; i < subtrees_.size(); ++i) {
            if (covered(subtrees_[i].e_need, e_equal_) && !covered(subtrees_[i].c_need, c_equal_)) {
                out.failing_subtree = i;
                return out;
            }
        }
        return out;
    }

private:
    struct Extension {
        std::size_t m;
        std::vector<std::uint32_t> members;
    };
    struct Subtree {
        std::vector<NodeId> nodes;
        std::vector<std::uint64_t> e_need;
        std::vector<std::uint64_t> c_need;
    };
    using Pairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

    static std::set<std::size_t> e_sizes(const std::set<std::size_t>& arities)
    {
        std::set<std::size_t> out;
        for (auto a : arities) {
            if (a > 0) {
                out.insert(a - 1);
            }
        }
        return out;
    }

    static std::size_t words(std::size_t bits) { return (bits + 63) / 64; }

    std::vector<NodeId> canonical_nodes(std::vector<NodeId> ids) const
    {
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    /// Every pair of tuples in one (k = size - tail) end-group.
    void collect_pairs(const TupleIndex& domain, const std::set<std::size_t>& sizes, std::size_t tail, Pairs& out) const
    {
        for (auto b : sizes) {
            if (b < tail) {
                continue;
            }
            const auto eg = end_groups(tp_, tp_.by_lex2(), b, b - tail);
            for (const auto& g : eg.groups) {
                for (std::size_t x = 0; x < g.members.size(); ++x) {
                    for (std::size_t y = x + 1; y < g.members.size(); ++y) {
                        out.emplace_back(domain.at(eg.tuple(g.members[x])), domain.at(eg.tuple(g.members[y])));
                    }
                }
            }
        }
    }

    static std::vector<std::uint64_t> restrict(const TupleIndex& domain, const Pairs& pairs, const std::vector<char>& inside)
    {
        auto within = [&](std::uint32_t t) {
            for (auto v : domain.tuple(t)) {
                if (!inside[v]) {
                    return false;
                }
            }
            return true;
        };
        std::vector<std::uint64_t> mask(words(pairs.size()), 0);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (within(pairs[i].first) && within(pairs[i].second)) {
                mask[i / 64] |= std::uint64_t{1} << (i % 64);
            }
        }
        return mask;
    }

    template <class Eq>
    static void fill_equal(const Pairs& pairs, std::vector<std::uint64_t>& mask, Eq eq)
    {
        std::fill(mask.begin(), mask.end(), 0);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (eq(pairs[i].first, pairs[i].second)) {
                mask[i / 64] |= std::uint64_t{1} << (i % 64);
            }
        }
    }

    static bool covered(const std::vector<std::uint64_t>& need, const std::vector<std::uint64_t>& have)
    {
        for (std::size_t w = 0; w < need.size(); ++w) {
            if (need[w] & ~have[w]) {
                return false;
            }
        }
        return true;
    }

    const Tree& tp_;
    TupleIndex c_domain_;
    TupleIndex e_domain_;
    std::vector<std::vector<Extension>> rows_;
    Pairs e_pairs_;
    Pairs c_pairs_;
    std::vector<Subtree> subtrees_;
    std::vector<std::size_t> e_values_;
    std::vector<std::uint64_t> e_equal_;
    std::vector<std::uint64_t> c_equal_;
    std::vector<std::uint64_t> key_;
};

} // namespace dsw
