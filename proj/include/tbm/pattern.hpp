#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tbm {

using Item = std::uint32_t;

/// A finite set of variable identifiers (an itemset), stored as a strictly
/// increasing sequence. The empty pattern is the all-zeros outcome.
class Pattern
{
public:
    Pattern() = default;
    Pattern(std::initializer_list<Item> items);

    /// Sorts and removes duplicates.
    explicit Pattern(std::vector<Item> items);

    /// Wraps an already strictly increasing sequence without re-sorting.
    static Pattern from_canonical(std::vector<Item> items);

    std::span<const Item> items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }
    Item back() const { return items_.back(); }

    bool contains(Item item) const noexcept;
    bool is_subset_of(const Pattern& other) const noexcept;
    Pattern union_with(const Pattern& other) const;

    /// "{1,2}" style, "{}" for the empty pattern.
    std::string to_string() const;

    friend bool operator==(const Pattern&, const Pattern&) = default;
    friend std::strong_ordering operator<=>(const Pattern& a, const Pattern& b)
    {
        return a.items_ <=> b.items_;
    }

private:
    std::vector<Item> items_;
};

/// ζ(s, x): 1 iff s ⊆ x.
inline int zeta(const Pattern& s, const Pattern& x) noexcept
{
    return s.is_subset_of(x) ? 1 : 0;
}

/// Cardinality first, then lexicographic. Used for sample spaces and sweep order.
struct CanonicalOrder
{
    bool operator()(const Pattern& a, const Pattern& b) const noexcept
    {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    }
};

struct PatternHash
{
    std::size_t operator()(const Pattern& p) const noexcept;
};

} // namespace tbm

template <>
struct std::hash<tbm::Pattern>
{
    std::size_t operator()(const tbm::Pattern& p) const noexcept { return tbm::PatternHash{}(p); }
};
