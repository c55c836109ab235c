#include <tbm/error.hpp>
#include <tbm/miner.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace tbm {

ParameterDomain::ParameterDomain(std::vector<Pattern> patterns, double sigma, unsigned k)
    : patterns_(std::move(patterns)), sigma_(sigma), k_(k)
{
    std::sort(patterns_.begin(), patterns_.end(), CanonicalOrder{});
    patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
    if (!patterns_.empty() && patterns_.front().empty())
        throw std::invalid_argument("the empty pattern cannot carry a parameter");
    if (k_ == 0)
        k_ = patterns_.empty() ? 0u : static_cast<unsigned>(patterns_.back().size());
    else if (!patterns_.empty() && patterns_.back().size() > k_)
        throw std::invalid_argument("pattern " + patterns_.back().to_string() + " exceeds order " +
                                    std::to_string(k_));
}

bool ParameterDomain::contains(const Pattern& x) const
{
    return std::binary_search(patterns_.begin(), patterns_.end(), x, CanonicalOrder{});
}

std::optional<std::size_t> ParameterDomain::index_of(const Pattern& x) const
{
    auto it = std::lower_bound(patterns_.begin(), patterns_.end(), x, CanonicalOrder{});
    if (it == patterns_.end() || *it != x)
        return std::nullopt;
    return static_cast<std::size_t>(it - patterns_.begin());
}

std::vector<Pattern> ParameterDomain::lexicographic() const
{
    auto out = patterns_;
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t min_support_count(double sigma, std::uint64_t total)
{
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw std::invalid_argument("sigma must lie in [0, 1]");
    if (sigma == 0.0)
        return 0;
    const double t = sigma * static_cast<double>(total);
    const double c = std::ceil(t - 1e-9 * std::max(1.0, t));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c));
}

std::uint64_t max_domain_size(std::size_t n, unsigned k)
{
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    long double binom = 1; // C(n, 0)
    for (unsigned i = 1; i <= k && i <= n; ++i)
    {
        binom = binom * static_cast<long double>(n - i + 1) / i;
        if (binom + total >= static_cast<long double>(kMax))
            return kMax;
        total += static_cast<std::uint64_t>(std::llround(binom));
    }
    return total;
}

namespace {

void validate(double sigma, unsigned k)
{
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw std::invalid_argument("sigma must lie in [0, 1]");
    if (k < 1)
        throw std::invalid_argument("k must be at least 1");
}

struct ClassMember
{
    Item item;
    std::vector<std::uint32_t> tids; // indices of unique transactions
    std::uint64_t support;
};

class Eclat
{
public:
    Eclat(const std::vector<std::uint64_t>& weights, std::uint64_t min_count, unsigned k,
          std::size_t cap)
        : weights_(weights), min_count_(min_count), k_(k), cap_(cap)
    {
    }

    void run(const std::vector<ClassMember>& root)
    {
        std::vector<Item> prefix;
        extend(prefix, root);
    }

    std::vector<Pattern> take() { return std::move(out_); }

private:
    void emit(const std::vector<Item>& items)
    {
        if (out_.size() >= cap_)
            throw LimitError("parameter domain exceeds " + std::to_string(cap_) + " patterns");
        out_.push_back(Pattern::from_canonical(items));
    }

    void extend(std::vector<Item>& prefix, const std::vector<ClassMember>& klass)
    {
        for (std::size_t i = 0; i < klass.size(); ++i)
        {
            prefix.push_back(klass[i].item);
            emit(prefix);
            if (prefix.size() < k_)
            {
                std::vector<ClassMember> next;
                for (std::size_t j = i + 1; j < klass.size(); ++j)
                {
                    ClassMember m{klass[j].item, {}, 0};
                    std::set_intersection(klass[i].tids.begin(), klass[i].tids.end(),
                                          klass[j].tids.begin(), klass[j].tids.end(),
                                          std::back_inserter(m.tids));
                    for (auto t : m.tids)
                        m.support += weights_[t];
                    if (m.support >= min_count_)
                        next.push_back(std::move(m));
                }
                if (!next.empty())
                    extend(prefix, next);
            }
            prefix.pop_back();
        }
    }

    const std::vector<std::uint64_t>& weights_;
    std::uint64_t min_count_;
    unsigned k_;
    std::size_t cap_;
    std::vector<Pattern> out_;
};

} // namespace

ParameterDomain mine_parameter_domain(const TransactionDataset& d, double sigma, unsigned k,
                                      MinerOptions options)
{
    validate(sigma, k);
    if (d.total() == 0)
        throw DataError("cannot mine an empty dataset");
    const std::uint64_t min_count = min_support_count(sigma, d.total());

    if (min_count == 0 && max_domain_size(d.n_variables(), k) > options.max_patterns)
        throw LimitError("sigma = 0 with n = " + std::to_string(d.n_variables()) +
                         ", k = " + std::to_string(k) + " exceeds " +
                         std::to_string(options.max_patterns) + " patterns");

    // Vertical layout: item -> sorted list of unique-transaction indices.
    std::vector<std::uint64_t> weights;
    weights.reserve(d.unique_count());
    std::vector<ClassMember> items;
    {
        std::vector<std::vector<std::uint32_t>> tid_of;
        std::vector<Item> seen;
        std::uint32_t tid = 0;
        std::unordered_map<Item, std::size_t> pos;
        for (const auto& [t, m] : d.entries())
        {
            weights.push_back(m);
            for (Item i : t)
            {
                auto [it, fresh] = pos.try_emplace(i, tid_of.size());
                if (fresh)
                {
                    tid_of.emplace_back();
                    seen.push_back(i);
                }
                tid_of[it->second].push_back(tid);
            }
            ++tid;
        }
        if (min_count == 0)
        {
            // every variable of the universe, observed or not
            for (Item i = 0; i < d.n_variables(); ++i)
            {
                auto it = pos.find(i);
                ClassMember m{i, it == pos.end() ? std::vector<std::uint32_t>{}
                                                 : std::move(tid_of[it->second]),
                              0};
                items.push_back(std::move(m));
            }
        }
        else
        {
            for (std::size_t s = 0; s < seen.size(); ++s)
                items.push_back({seen[s], std::move(tid_of[s]), 0});
        }
        for (auto& m : items)
            for (auto t : m.tids)
                m.support += weights[t];
    }

    std::erase_if(items, [&](const ClassMember& m) { return m.support < min_count; });
    std::sort(items.begin(), items.end(),
              [](const ClassMember& a, const ClassMember& b) { return a.item < b.item; });

    Eclat eclat(weights, min_count, k, options.max_patterns);
    eclat.run(items);
    return ParameterDomain(eclat.take(), sigma, k);
}

ParameterDomain brute_force_domain(const TransactionDataset& d, double sigma, unsigned k)
{
    validate(sigma, k);
    const std::size_t n = d.n_variables();
    if (n > 20)
        throw LimitError("exhaustive enumeration needs n <= 20, got " + std::to_string(n));
    if (d.total() == 0)
        throw DataError("cannot mine an empty dataset");
    const std::uint64_t min_count = min_support_count(sigma, d.total());

    // count[x] = multiplicity of x, then superset sums give support of every x in 2^V
    const std::size_t full = std::size_t{1} << n;
    std::vector<std::uint64_t> count(full, 0);
    for (const auto& [t, m] : d.entries())
    {
        std::size_t mask = 0;
        for (Item i : t)
            mask |= std::size_t{1} << i;
        count[mask] += m;
    }
    for (std::size_t bit = 0; bit < n; ++bit)
        for (std::size_t x = 0; x < full; ++x)
            if (!(x & (std::size_t{1} << bit)))
                count[x] += count[x | (std::size_t{1} << bit)];

    std::vector<Pattern> out;
    for (std::size_t x = 1; x < full; ++x)
    {
        if (static_cast<unsigned>(std::popcount(x)) > k || count[x] < min_count)
            continue;
        std::vector<Item> items;
        for (std::size_t bit = 0; bit < n; ++bit)
            if (x & (std::size_t{1} << bit))
                items.push_back(static_cast<Item>(bit));
        out.push_back(Pattern::from_canonical(std::move(items)));
    }
    return ParameterDomain(std::move(out), sigma, k);
}

} // namespace tbm
