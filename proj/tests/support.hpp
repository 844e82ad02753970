#pragma once

// Seeded generators and brute-force oracles shared by the test binaries.
// The oracles work on plain integer vectors and re-derive each definition
// directly, so they share no code paths with the library beyond I/O.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "dsw/decseq.hpp"
#include "dsw/embedding.hpp"
#include "dsw/similarity.hpp"
#include "dsw/tree.hpp"

namespace dsw::testing {

using Rng = std::mt19937_64;
using Ints = std::vector<std::int64_t>;

inline Ints ints(const DecSeq& s)
{
    Ints out;
    for (const auto& e : s.entries()) {
        out.push_back(static_cast<std::int64_t>(*e.as_u64()));
    }
    return out;
}

inline DecSeq seq(std::initializer_list<int> entries)
{
    std::vector<Ordinal> v;
    for (int e : entries) {
        v.emplace_back(e);
    }
    return DecSeq(std::move(v));
}

/// Uniform random strictly decreasing sequence over {0..universe-1}.
inline DecSeq random_seq(Rng& rng, int universe)
{
    std::vector<Ordinal> entries;
    for (int v = universe - 1; v >= 0; --v) {
        if (rng() % 2) {
            entries.emplace_back(v);
        }
    }
    return DecSeq(std::move(entries));
}

/// Random tree grown by repeatedly extending a random node with a label
/// below its last entry.
inline Tree random_tree(Rng& rng, std::size_t max_nodes, int universe)
{
    std::vector<DecSeq> nodes{DecSeq{}};
    std::set<DecSeq> present{DecSeq{}};
    const std::size_t target = 1 + rng() % max_nodes;
    std::size_t attempts = 0;
    while (nodes.size() < target && attempts++ < 50 * max_nodes) {
        const DecSeq& parent = nodes[rng() % nodes.size()];
        const std::uint64_t bound = parent.empty() ? universe : *parent.back().as_u64();
        if (bound == 0) {
            continue;
        }
        DecSeq child = parent.extended(Ordinal{rng() % bound});
        if (present.insert(child).second) {
            nodes.push_back(std::move(child));
        }
    }
    return Tree::from_nodes(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Order oracles: encode each sequence so that std::lexicographical_compare
// on the encodings decides the order.

/// Entries followed by an end marker; marker below every entry makes a
/// proper prefix smaller, above makes it larger.
inline std::vector<std::pair<int, std::int64_t>> encode(const DecSeq& s, int marker, bool alternate)
{
    std::vector<std::pair<int, std::int64_t>> out;
    const Ints v = ints(s);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.emplace_back(0, alternate && i % 2 == 1 ? -v[i] : v[i]);
    }
    out.emplace_back(marker, 0);
    return out;
}

inline int oracle_cmp(const DecSeq& a, const DecSeq& b, int marker, bool alternate)
{
    const auto x = encode(a, marker, alternate);
    const auto y = encode(b, marker, alternate);
    if (x == y) return 0;
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end()) ? -1 : 1;
}

inline int oracle_lex1(const DecSeq& a, const DecSeq& b) { return oracle_cmp(a, b, -1, false); }
inline int oracle_lex2(const DecSeq& a, const DecSeq& b) { return oracle_cmp(a, b, +1, false); }
inline int oracle_lex3(const DecSeq& a, const DecSeq& b) { return oracle_cmp(a, b, -1, true); }

// ---------------------------------------------------------------------------
// Similarity oracle straight from clauses (a)-(c): equal lengths, equal
// pairwise meet lengths, and the same <2 comparisons between positions.

inline bool oracle_similar(const std::vector<DecSeq>& u, const std::vector<DecSeq>& v)
{
    if (u.size() != v.size()) {
        return false;
    }
    auto meet = [](const Ints& a, const Ints& b) {
        std::size_t l = 0;
        while (l < a.size() && l < b.size() && a[l] == b[l]) {
            ++l;
        }
        return l;
    };
    for (std::size_t l = 0; l < u.size(); ++l) {
        const Ints ul = ints(u[l]);
        const Ints vl = ints(v[l]);
        if (ul.size() != vl.size()) {
            return false;
        }
        for (std::size_t m = 0; m < u.size(); ++m) {
            if (meet(ul, ints(u[m])) != meet(vl, ints(v[m]))) {
                return false;
            }
            if ((oracle_lex2(u[l], u[m]) < 0) != (oracle_lex2(v[l], v[m]) < 0)) {
                return false;
            }
        }
    }
    return true;
}

/// All k-subsets of the tree, each listed <2-increasingly, in canonical order.
inline std::vector<Tuple> all_tuples(const Tree& t, std::size_t k)
{
    std::vector<DecSeq> sorted = t.nodes();
    std::sort(sorted.begin(), sorted.end(), [](const DecSeq& a, const DecSeq& b) { return oracle_lex2(a, b) < 0; });
    std::vector<Tuple> out;
    std::vector<std::size_t> idx;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (idx.size() == k) {
            Tuple u;
            for (auto i : idx) {
                u.push_back(sorted[i]);
            }
            out.push_back(std::move(u));
            return;
        }
        for (std::size_t i = from; i < sorted.size(); ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return out;
}

/// n-end-uniformity by comparing every pair of same-size tuples.
inline bool oracle_n_end_uniform(const Tree& t, const Colouring& c, std::size_t n)
{
    for (auto a : c.arities()) {
        if (a < n) {
            continue;
        }
        const auto tuples = all_tuples(t, a);
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            for (std::size_t j = i + 1; j < tuples.size(); ++j) {
                const auto& x = tuples[i];
                const auto& y = tuples[j];
                if (!std::equal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(a - n), y.begin())) {
                    continue;
                }
                if (oracle_similar(x, y) && c.colour(x) != c.colour(y)) {
                    return false;
                }
            }
        }
    }
    return true;
}

inline bool oracle_uniform(const Tree& t, const Colouring& c)
{
    for (auto a : c.arities()) {
        const auto tuples = all_tuples(t, a);
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            for (std::size_t j = i + 1; j < tuples.size(); ++j) {
                if (oracle_similar(tuples[i], tuples[j]) && c.colour(tuples[i]) != c.colour(tuples[j])) {
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Embedding oracle: every level-preserving injection, filtered by the
// definition on all pairs: the prefix relation and <1 are preserved.

inline std::size_t oracle_count_embeddings(const Tree& s, const Tree& t)
{
    std::map<std::size_t, std::vector<DecSeq>> level;
    for (const auto& v : t.nodes()) {
        level[v.size()].push_back(v);
    }
    const auto& src = s.nodes();
    std::vector<DecSeq> image(src.size());
    std::set<DecSeq> used;
    std::size_t count = 0;
    auto is_prefix = [](const Ints& a, const Ints& b) {
        return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
    };
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == src.size()) {
            for (std::size_t x = 0; x < src.size(); ++x) {
                for (std::size_t y = 0; y < src.size(); ++y) {
                    if (x == y) {
                        continue;
                    }
                    if (is_prefix(ints(src[x]), ints(src[y])) && !is_prefix(ints(image[x]), ints(image[y]))) {
                        return;
                    }
                    if (oracle_lex1(src[x], src[y]) < 0 && oracle_lex1(image[x], image[y]) >= 0) {
                        return;
                    }
                }
            }
            ++count;
            return;
        }
        for (const auto& cand : level[src[i].size()]) {
            if (used.insert(cand).second) {
                image[i] = cand;
                rec(i + 1);
                used.erase(cand);
            }
        }
    };
    rec(0);
    return count;
}

} // namespace dsw::testing
