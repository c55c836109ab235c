#include <tbm/pattern.hpp>

#include <algorithm>
#include <cassert>
#include <iterator>

namespace tbm {

Pattern::Pattern(std::initializer_list<Item> items) : Pattern(std::vector<Item>(items)) {}

Pattern::Pattern(std::vector<Item> items) : items_(std::move(items))
{
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

Pattern Pattern::from_canonical(std::vector<Item> items)
{
    assert(std::adjacent_find(items.begin(), items.end(), std::greater_equal<>{}) == items.end());
    Pattern p;
    p.items_ = std::move(items);
    return p;
}

bool Pattern::contains(Item item) const noexcept
{
    return std::binary_search(items_.begin(), items_.end(), item);
}

bool Pattern::is_subset_of(const Pattern& other) const noexcept
{
    if (items_.size() > other.items_.size())
        return false;
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

Pattern Pattern::union_with(const Pattern& other) const
{
    std::vector<Item> out;
    out.reserve(items_.size() + other.items_.size());
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out));
    return from_canonical(std::move(out));
}

std::string Pattern::to_string() const
{
    std::string s = "{";
    for (std::size_t i = 0; i < items_.size(); ++i)
    {
        if (i)
            s += ',';
        s += std::to_string(items_[i]);
    }
    s += '}';
    return s;
}

std::size_t PatternHash::operator()(const Pattern& p) const noexcept
{
    // FNV-1a over the identifiers
    std::uint64_t h = 1469598103934665603ull;
    for (Item i : p)
    {
        h ^= i;
        h *= 1099511628211ull;
    }
    h ^= p.size();
    return static_cast<std::size_t>(h);
}

} // namespace tbm
