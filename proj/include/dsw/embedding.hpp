#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsw/orders.hpp"
#include "dsw/tree.hpp"

namespace dsw {

/// A map between trees of decreasing sequences, keyed by source node.
class Embedding {
public:
    Embedding() = default;
    explicit Embedding(std::map<DecSeq, DecSeq> map) : map_(std::move(map)) {}

    void set(DecSeq from, DecSeq to) { map_.insert_or_assign(std::move(from), std::move(to)); }

    const DecSeq* find(const DecSeq& from) const
    {
        auto it = map_.find(from);
        return it == map_.end() ? nullptr : &it->second;
    }

    const DecSeq& at(const DecSeq& from) const { return map_.at(from); }
    std::size_t size() const noexcept { return map_.size(); }
    const std::map<DecSeq, DecSeq>& map() const noexcept { return map_; }

    std::vector<DecSeq> image() const
    {
        std::vector<DecSeq> out;
        out.reserve(map_.size());
        for (const auto& [from, to] : map_) {
            out.push_back(to);
        }
        return out;
    }

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::map<DecSeq, DecSeq> map_;
};

struct EmbeddingViolation {
    /// One of: total, image, level, prefix, sibling-order.
    std::string clause;
    DecSeq first;
    DecSeq second;

    std::string describe() const { return clause + " violated at " + show(first) + ", " + show(second); }
};

/// Checks that f embeds s into t: defined exactly on s with image inside t,
/// level and ◁ preserved, and for every node the images of two immediate
/// successors eta^<g1>, eta^<g2> (g1 < g2) are <*-ordered. With level and ◁
/// preserved the sibling check implies full order preservation.
inline std::optional<EmbeddingViolation> validate_embedding(const Embedding& f, const Tree& s, const Tree& t)
{
    for (const auto& [from, to] : f.map()) {
        if (!s.contains(from)) {
            return EmbeddingViolation{"total", from, to};
        }
    }
    for (const auto& node : s.nodes()) {
        const DecSeq* image = f.find(node);
        if (image == nullptr) {
            return EmbeddingViolation{"total", node, node};
        }
        if (!t.contains(*image)) {
            return EmbeddingViolation{"image", node, *image};
        }
        if (image->size() != node.size()) {
            return EmbeddingViolation{"level", node, *image};
        }
    }
    for (NodeId id = 1; id < s.size(); ++id) {
        const DecSeq& parent = s.node(s.parent(id));
        if (!f.at(parent).is_proper_prefix_of(f.at(s.node(id)))) {
            return EmbeddingViolation{"prefix", parent, s.node(id)};
        }
    }
    for (NodeId id = 0; id < s.size(); ++id) {
        const auto kids = s.children(id);
        for (std::size_t i = 0; i < kids.size(); ++i) {
            for (std::size_t j = i + 1; j < kids.size(); ++j) {
                const DecSeq& lo = s.node(kids[i]);
                const DecSeq& hi = s.node(kids[j]);
                if (!(leq_star(f.at(lo), f.at(hi)) && f.at(lo) != f.at(hi))) {
                    return EmbeddingViolation{"sibling-order", lo, hi};
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace dsw
