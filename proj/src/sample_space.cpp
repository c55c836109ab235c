#include <tbm/sample_space.hpp>

#include <algorithm>
#include <iterator>

namespace tbm {

SampleSpace::SampleSpace() : SampleSpace(std::vector<Pattern>{}) {}

SampleSpace::SampleSpace(std::vector<Pattern> outcomes) : outcomes_(std::move(outcomes))
{
    outcomes_.emplace_back();
    std::sort(outcomes_.begin(), outcomes_.end(), CanonicalOrder{});
    outcomes_.erase(std::unique(outcomes_.begin(), outcomes_.end()), outcomes_.end());
    index_.reserve(outcomes_.size());
    for (std::size_t i = 0; i < outcomes_.size(); ++i)
        index_.emplace(outcomes_[i], static_cast<std::uint32_t>(i));
}

std::optional<std::size_t> SampleSpace::find(const Pattern& x) const
{
    auto it = index_.find(x);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

SampleSpace build_sample_space(const ParameterDomain& b, const TransactionDataset& d)
{
    std::vector<Pattern> outcomes(b.begin(), b.end());
    outcomes.reserve(b.size() + d.unique_count());
    for (const auto& [x, count] : d.entries())
        outcomes.push_back(x);
    return SampleSpace(std::move(outcomes));
}

std::size_t Incidence::total() const noexcept
{
    std::size_t t = 0;
    for (const auto& u : up_sets)
        t += u.size();
    return t;
}

void Incidence::erase_parameter(std::size_t i)
{
    for (auto x : up_sets[i])
    {
        auto& m = members[x];
        m.erase(std::lower_bound(m.begin(), m.end(), static_cast<std::uint32_t>(i)));
    }
    up_sets.erase(up_sets.begin() + static_cast<std::ptrdiff_t>(i));
    for (auto& m : members)
        for (auto& a : m)
            if (a > i)
                --a;
}

Incidence build_incidence(const SampleSpace& space, std::span<const Pattern> parameters)
{
    std::unordered_map<Item, std::vector<std::uint32_t>> containing;
    for (const auto& s : parameters)
        for (Item i : s)
            containing.try_emplace(i);
    for (std::size_t x = 0; x < space.size(); ++x)
        for (Item i : space[x])
            if (auto it = containing.find(i); it != containing.end())
                it->second.push_back(static_cast<std::uint32_t>(x));

    Incidence inc;
    inc.up_sets.resize(parameters.size());
    inc.members.resize(space.size());
    std::vector<std::uint32_t> scratch;
    for (std::size_t a = 0; a < parameters.size(); ++a)
    {
        const auto& s = parameters[a];
        if (s.empty())
        {
            inc.up_sets[a].resize(space.size());
            for (std::size_t x = 0; x < space.size(); ++x)
                inc.up_sets[a][x] = static_cast<std::uint32_t>(x);
        }
        else
        {
            auto& acc = inc.up_sets[a];
            acc = containing.at(*s.begin());
            for (auto it = std::next(s.begin()); it != s.end() && !acc.empty(); ++it)
            {
                const auto& other = containing.at(*it);
                scratch.clear();
                std::set_intersection(acc.begin(), acc.end(), other.begin(), other.end(),
                                      std::back_inserter(scratch));
                acc.swap(scratch);
            }
        }
        for (auto x : inc.up_sets[a])
            inc.members[x].push_back(static_cast<std::uint32_t>(a));
    }
    return inc;
}

} // namespace tbm
