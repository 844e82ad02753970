#pragma once

// Finite trees of decreasing sequences: non-empty, prefix-closed node sets.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dsw/decseq.hpp"
#include "dsw/error.hpp"
#include "dsw/orders.hpp"

namespace dsw {

using NodeId = std::uint32_t;

class Tree {
public:
    /// Checks the tree invariants and builds the indexed form. Duplicates are merged.
    static Tree from_nodes(std::vector<DecSeq> nodes)
    {
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        if (nodes.empty()) {
            throw InvalidTree("tree is empty");
        }
        Tree t;
        t.nodes_ = std::move(nodes);
        const std::size_t n = t.nodes_.size();
        if (n > std::numeric_limits<NodeId>::max()) {
            throw BudgetExceeded("tree too large");
        }
        t.parent_.assign(n, 0);
        t.children_.assign(n, {});
        for (std::size_t i = 0; i < n; ++i) {
            const DecSeq& s = t.nodes_[i];
            if (s.empty()) {
                continue;
            }
            auto p = t.find(s.prefix(s.size() - 1));
            if (!p) {
                throw InvalidTree("prefix " + show(s.prefix(s.size() - 1)) + " missing (needed by " + show(s) + ")");
            }
            t.parent_[i] = *p;
            // Canonical order lists siblings by increasing last entry.
            t.children_[*p].push_back(static_cast<NodeId>(i));
        }
        t.by_lex2_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            t.by_lex2_[i] = static_cast<NodeId>(i);
        }
        std::sort(t.by_lex2_.begin(), t.by_lex2_.end(),
                  [&](NodeId a, NodeId b) { return cmp_lex2(t.nodes_[a], t.nodes_[b]) < 0; });
        t.lex2_rank_.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            t.lex2_rank_[t.by_lex2_[r]] = static_cast<NodeId>(r);
        }
        return t;
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    /// Nodes in canonical order: by length, then <2.
    const std::vector<DecSeq>& nodes() const noexcept { return nodes_; }
    const DecSeq& node(NodeId id) const { return nodes_[id]; }
    static constexpr NodeId root() noexcept { return 0; }

    std::optional<NodeId> find(const DecSeq& s) const
    {
        auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s);
        if (it == nodes_.end() || *it != s) {
            return std::nullopt;
        }
        return static_cast<NodeId>(it - nodes_.begin());
    }
    bool contains(const DecSeq& s) const { return find(s).has_value(); }

    NodeId parent(NodeId id) const { return parent_[id]; }
    std::span<const NodeId> children(NodeId id) const { return children_[id]; }
    std::size_t depth(NodeId id) const { return nodes_[id].size(); }

    /// Node ids sorted by <2.
    std::span<const NodeId> by_lex2() const noexcept { return by_lex2_; }
    NodeId lex2_rank(NodeId id) const { return lex2_rank_[id]; }

    std::size_t meet_length(NodeId a, NodeId b) const { return dsw::meet_length(nodes_[a], nodes_[b]); }

    friend bool operator==(const Tree& a, const Tree& b) { return a.nodes_ == b.nodes_; }

private:
    Tree() = default;

    std::vector<DecSeq> nodes_;
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<NodeId> by_lex2_;
    std::vector<NodeId> lex2_rank_;
};

/// Validates a raw node set: every sequence strictly decreasing, the set
/// non-empty and closed under initial segments.
inline Tree validate_tree(const std::vector<std::vector<Ordinal>>& raw)
{
    std::vector<DecSeq> nodes;
    nodes.reserve(raw.size());
    for (const auto& entries : raw) {
        if (DecSeq::first_non_decreasing(entries) < entries.size()) {
            std::string text;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                text += (i ? "," : "") + to_string(entries[i]);
            }
            throw InvalidTree("<" + text + "> is not strictly decreasing");
        }
        nodes.emplace_back(entries);
    }
    return Tree::from_nodes(std::move(nodes));
}

/// eta ^ T: the prefixes of eta together with eta prepended to every node of T.
inline Tree graft(const DecSeq& eta, const Tree& t)
{
    if (eta.empty()) {
        throw PreconditionError("graft needs a non-empty stem");
    }
    // sup over an empty set of first entries is vacuous
    for (const auto& nu : t.nodes()) {
        if (!nu.empty() && compare(eta.back(), nu[0]) <= 0) {
            throw PreconditionError("graft side condition violated: " + to_string(nu[0]) + " >= " + to_string(eta.back())
                                    + " (stem " + show(eta) + ", node " + show(nu) + ")");
        }
    }
    std::vector<DecSeq> nodes;
    nodes.reserve(eta.size() + t.size());
    for (std::size_t len = 0; len < eta.size(); ++len) {
        nodes.push_back(eta.prefix(len));
    }
    for (const auto& nu : t.nodes()) {
        nodes.push_back(eta.concat(nu));
    }
    return Tree::from_nodes(std::move(nodes));
}

inline constexpr std::size_t kDefaultEnumCap = 20;

/// ds(n) for finite n: every strictly decreasing sequence over {0..n-1}.
inline Tree enum_ds(std::size_t n, std::size_t cap = kDefaultEnumCap)
{
    if (n > cap) {
        throw BudgetExceeded("ds(" + std::to_string(n) + ") exceeds the enumeration cap " + std::to_string(cap));
    }
    std::vector<DecSeq> nodes;
    nodes.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<Ordinal> entries;
        for (std::size_t b = n; b-- > 0;) {
            if (mask & (std::uint64_t{1} << b)) {
                entries.emplace_back(b);
            }
        }
        nodes.emplace_back(std::move(entries));
    }
    return Tree::from_nodes(std::move(nodes));
}

/// Visits every subtree (prefix-closed node set containing the root) with at
/// most `max_nodes` nodes, exactly once each. The callback receives node ids
/// in inclusion order and returns false to stop.
inline void for_each_subtree(const Tree& t, std::size_t max_nodes, const std::function<bool(std::span<const NodeId>)>& visit)
{
    if (max_nodes == 0) {
        return;
    }
    std::vector<NodeId> chosen{Tree::root()};
    std::vector<NodeId> open(t.children(Tree::root()).begin(), t.children(Tree::root()).end());
    bool stopped = false;
    // Decide the open candidates from the back: exclude first, then include.
    auto rec = [&](auto&& self) -> void {
        if (stopped) {
            return;
        }
        if (open.empty() || chosen.size() == max_nodes) {
            stopped = !visit(chosen);
            return;
        }
        const NodeId next = open.back();
        open.pop_back();
        self(self);
        if (!stopped) {
            chosen.push_back(next);
            const auto kids = t.children(next);
            open.insert(open.end(), kids.begin(), kids.end());
            self(self);
            open.resize(open.size() - kids.size());
            chosen.pop_back();
        }
        open.push_back(next);
    };
    rec(rec);
}

// Tree file format: one sequence per line in sequence syntax, "#" starts a
// comment line, blank lines are ignored.

inline Tree read_tree(std::istream& in)
{
    std::vector<std::vector<Ordinal>> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        try {
            raw.push_back(parse_entries(body));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.message(), e.position());
        }
    }
    return validate_tree(raw);
}

inline Tree parse_tree(const std::string& text)
{
    std::istringstream in(text);
    return read_tree(in);
}

inline void write_tree(std::ostream& out, const Tree& t)
{
    for (const auto& s : t.nodes()) {
        out << to_string(s) << '\n';
    }
}

} // namespace dsw
