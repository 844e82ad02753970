#pragma once

// The multiplicity rank rk_{T,mu} on finite trees.
//
// rk >= 0 iff the node is in T, and rk >= a+1 iff at least mu immediate
// successors have rk >= a. On a finite tree this closes to
//
//     rk(eta) = 0                               if eta has fewer than mu children
//             = 1 + (mu-th largest child rank)  otherwise
//
// which is what rank_mu computes. rank_fixpoint_oracle evaluates the
// defining clauses level by level instead; tests keep the two in agreement.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dsw/embedding.hpp"
#include "dsw/error.hpp"
#include "dsw/tree.hpp"

namespace dsw {

/// A finite rank, or std::nullopt for sequences outside the tree (the -1 value).
using RankValue = std::optional<std::size_t>;
inline constexpr std::nullopt_t kNotInTree = std::nullopt;

struct RankParams {
    std::size_t mu = 1;
    std::optional<std::size_t> lambda;
};

inline void check_mu(std::size_t mu)
{
    if (mu == 0) {
        throw PreconditionError("mu must be at least 1");
    }
}

/// Ranks of every node, indexed by NodeId.
inline std::vector<std::size_t> rank_table(const Tree& t, std::size_t mu)
{
    check_mu(mu);
    std::vector<std::size_t> rank(t.size(), 0);
    std::vector<std::size_t> scratch;
    // Children are longer, hence later in canonical order.
    for (std::size_t i = t.size(); i-- > 0;) {
        const auto kids = t.children(static_cast<NodeId>(i));
        if (kids.size() < mu) {
            continue;
        }
        scratch.clear();
        for (auto k : kids) {
            scratch.push_back(rank[k]);
        }
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mu - 1), scratch.end(),
                         std::greater<>{});
        rank[i] = 1 + scratch[mu - 1];
    }
    return rank;
}

inline RankValue rank_mu(const Tree& t, std::size_t mu, const DecSeq& eta)
{
    check_mu(mu);
    auto id = t.find(eta);
    if (!id) {
        return kNotInTree;
    }
    return rank_table(t, mu)[*id];
}

inline constexpr std::size_t kOracleCap = 4096;

/// Literal evaluation of the rank clauses for every node: ge holds the nodes
/// with rk >= a, and the next level keeps a node iff at least mu of its
/// immediate successors are in ge.
inline std::vector<std::size_t> rank_oracle_table(const Tree& t, std::size_t mu)
{
    check_mu(mu);
    if (t.size() > kOracleCap) {
        throw BudgetExceeded("rank oracle is capped at " + std::to_string(kOracleCap) + " nodes");
    }
    std::vector<std::size_t> rank(t.size(), 0);
    std::vector<char> ge(t.size(), 1);
    std::vector<std::size_t> count(t.size());
    for (std::size_t alpha = 1; alpha <= t.size(); ++alpha) {
        std::fill(count.begin(), count.end(), 0);
        for (NodeId id = 1; id < t.size(); ++id) {
            if (ge[id]) {
                ++count[t.parent(id)];
            }
        }
        bool any = false;
        for (NodeId v = 0; v < t.size(); ++v) {
            ge[v] = count[v] >= mu;
            if (ge[v]) {
                rank[v] = alpha;
                any = true;
            }
        }
        if (!any) {
            break;
        }
    }
    return rank;
}

inline RankValue rank_fixpoint_oracle(const Tree& t, std::size_t mu, const DecSeq& eta)
{
    auto table = rank_oracle_table(t, mu);
    auto id = t.find(eta);
    if (!id) {
        return kNotInTree;
    }
    return table[*id];
}

/// min(lambda, rk_{T,mu}(eta)).
inline RankValue reduced_rank(const Tree& t, std::size_t mu, std::size_t lambda, const DecSeq& eta)
{
    auto r = rank_mu(t, mu, eta);
    if (!r) {
        return kNotInTree;
    }
    return std::min(lambda, *r);
}

inline RankValue rank(const Tree& t, const RankParams& params, const DecSeq& eta)
{
    return params.lambda ? reduced_rank(t, params.mu, *params.lambda, eta) : rank_mu(t, params.mu, eta);
}

/// The tree eta ^ ds(alpha) (or ds(alpha) itself for the empty stem).
inline Tree stemmed_ds(const DecSeq& eta, std::size_t alpha)
{
    Tree ds = enum_ds(alpha);
    return eta.empty() ? ds : graft(eta, ds);
}

struct DsEmbedding {
    Tree domain;
    Embedding map;
};

/// Embeds eta ^ ds(alpha) into t fixing every prefix of eta. Needs
/// rk_{T,mu}(eta) >= alpha; alpha <= mu guarantees the greedy choice below
/// never runs dry, otherwise it may and the call throws.
///
/// Below a node mapped to `target`, successor beta < alpha goes to the least
/// child label of `target` that exceeds all earlier choices and has rank at
/// least beta; the subtree under it is filled the same way with beta in
/// place of alpha.
inline DsEmbedding embed_ds(const Tree& t, std::size_t mu, std::size_t alpha, const DecSeq& eta)
{
    check_mu(mu);
    const auto stem = t.find(eta);
    if (!stem) {
        throw PreconditionError("embed_ds: " + show(eta) + " is not in the tree");
    }
    const auto ranks = rank_table(t, mu);
    if (ranks[*stem] < alpha) {
        throw PreconditionError("embed_ds: rank " + std::to_string(ranks[*stem]) + " < " + std::to_string(alpha) + " at "
                                + show(eta));
    }

    DsEmbedding out{stemmed_ds(eta, alpha), {}};
    for (std::size_t len = 0; len <= eta.size(); ++len) {
        out.map.set(eta.prefix(len), eta.prefix(len));
    }

    auto fill = [&](auto&& self, const DecSeq& domain_node, NodeId target, std::size_t height) -> void {
        const auto kids = t.children(target);
        std::size_t next = 0;
        for (std::size_t beta = 0; beta < height; ++beta) {
            while (next < kids.size() && ranks[kids[next]] < beta) {
                ++next;
            }
            if (next == kids.size()) {
                throw PreconditionError("embed_ds: no successor of rank " + std::to_string(beta) + " below "
                                        + show(t.node(target)));
            }
            const NodeId chosen = kids[next++];
            DecSeq child = domain_node.extended(Ordinal{beta});
            out.map.set(child, t.node(chosen));
            self(self, child, chosen, beta);
        }
    };
    fill(fill, eta, *stem, alpha);
    return out;
}

} // namespace dsw
