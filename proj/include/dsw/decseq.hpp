#pragma once

#include <cctype>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsw/error.hpp"
#include "dsw/ordinal.hpp"

namespace dsw {

/// A strictly decreasing finite sequence of ordinals.
///
/// The default ordering (`<=>`) is the canonical listing order: shorter
/// sequences first, equal lengths compared entry by entry.
class DecSeq {
public:
    DecSeq() = default;
    DecSeq(std::initializer_list<Ordinal> entries) : DecSeq(std::vector<Ordinal>(entries)) {}
    explicit DecSeq(std::vector<Ordinal> entries) : entries_(std::move(entries))
    {
        if (auto bad = first_non_decreasing(entries_); bad < entries_.size()) {
            throw PreconditionError("sequence is not strictly decreasing at index " + std::to_string(bad));
        }
    }

    /// Index of the first entry that is >= its predecessor, or size() if none.
    static std::size_t first_non_decreasing(std::span<const Ordinal> entries)
    {
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (compare(entries[i - 1], entries[i]) <= 0) {
                return i;
            }
        }
        return entries.size();
    }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const Ordinal& operator[](std::size_t i) const { return entries_[i]; }
    const Ordinal& back() const { return entries_.back(); }
    std::span<const Ordinal> entries() const noexcept { return entries_; }

    /// eta restricted to its first `len` entries.
    DecSeq prefix(std::size_t len) const
    {
        DecSeq out;
        out.entries_.assign(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(std::min(len, size())));
        return out;
    }

    /// eta ^ <gamma>; gamma must be below the last entry.
    DecSeq extended(const Ordinal& gamma) const
    {
        if (!empty() && compare(back(), gamma) <= 0) {
            throw PreconditionError("extension " + to_string(gamma) + " is not below the last entry");
        }
        DecSeq out = *this;
        out.entries_.push_back(gamma);
        return out;
    }

    /// eta ^ nu, checked for decrease at the junction.
    DecSeq concat(const DecSeq& tail) const
    {
        if (!empty() && !tail.empty() && compare(back(), tail[0]) <= 0) {
            throw PreconditionError("concatenation is not decreasing");
        }
        DecSeq out = *this;
        out.entries_.insert(out.entries_.end(), tail.entries_.begin(), tail.entries_.end());
        return out;
    }

    /// this ⊴ other
    bool is_prefix_of(const DecSeq& other) const
    {
        if (size() > other.size()) {
            return false;
        }
        for (std::size_t i = 0; i < size(); ++i) {
            if (entries_[i] != other.entries_[i]) {
                return false;
            }
        }
        return true;
    }

    /// this ◁ other
    bool is_proper_prefix_of(const DecSeq& other) const { return size() < other.size() && is_prefix_of(other); }

    /// Every entry is below `alpha`, i.e. the sequence lies in ds(alpha).
    bool bounded_by(const Ordinal& alpha) const { return empty() || compare(entries_.front(), alpha) < 0; }

    friend std::strong_ordering operator<=>(const DecSeq& a, const DecSeq& b)
    {
        if (auto c = a.size() <=> b.size(); c != 0) {
            return c;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (auto c = compare(a.entries_[i], b.entries_[i]); c != 0) {
                return c;
            }
        }
        return std::strong_ordering::equal;
    }
    friend bool operator==(const DecSeq& a, const DecSeq& b) { return (a <=> b) == 0; }

private:
    std::vector<Ordinal> entries_;
};

/// Length of the longest common prefix.
inline std::size_t meet_length(const DecSeq& a, const DecSeq& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) {
        ++i;
    }
    return i;
}

/// eta ∩ nu: the longest common prefix.
inline DecSeq seq_meet(const DecSeq& a, const DecSeq& b) { return a.prefix(meet_length(a, b)); }

// Sequence syntax: "-" is the empty sequence, otherwise comma-separated
// ordinal literals, e.g. "w+1,w,3".

inline std::string to_string(const DecSeq& s)
{
    if (s.empty()) {
        return "-";
    }
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += to_string(s[i]);
    }
    return out;
}

/// Angle-bracket form used in diagnostics: <2,1,0>, <>.
inline std::string show(const DecSeq& s) { return s.empty() ? "<>" : "<" + to_string(s) + ">"; }

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace detail

/// Parses the entries without checking that they decrease.
inline std::vector<Ordinal> parse_entries(std::string_view text)
{
    const auto trimmed = detail::trim(text);
    const std::size_t base = static_cast<std::size_t>(trimmed.data() - text.data());
    if (trimmed == "-") {
        return {};
    }
    if (trimmed.empty()) {
        throw ParseError("empty sequence must be written as '-'", base);
    }
    std::vector<Ordinal> entries;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = trimmed.find(',', start);
        const auto piece = trimmed.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        const auto item = detail::trim(piece);
        entries.push_back(parse_ordinal(item, base + start + static_cast<std::size_t>(item.data() - piece.data())));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return entries;
}

inline DecSeq parse_seq(std::string_view text)
{
    auto entries = parse_entries(text);
    if (auto bad = DecSeq::first_non_decreasing(entries); bad < entries.size()) {
        throw ParseError("sequence is not strictly decreasing", bad);
    }
    return DecSeq(std::move(entries));
}

} // namespace dsw
