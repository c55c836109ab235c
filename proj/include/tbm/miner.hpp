#pragma once

#include <tbm/dataset.hpp>
#include <tbm/pattern.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace tbm {

/// The set B of patterns that carry a parameter. Members are non-empty and kept
/// in canonical order (cardinality, then lexicographic), which is also the
/// order in which the fitter sweeps over them.
class ParameterDomain
{
public:
    ParameterDomain() = default;

    /// k = 0 means "derive from the largest member".
    explicit ParameterDomain(std::vector<Pattern> patterns, double sigma = 0.0, unsigned k = 0);

    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }
    std::size_t size() const noexcept { return patterns_.size(); }
    bool empty() const noexcept { return patterns_.empty(); }
    const Pattern& operator[](std::size_t i) const { return patterns_[i]; }
    auto begin() const noexcept { return patterns_.begin(); }
    auto end() const noexcept { return patterns_.end(); }

    double sigma() const noexcept { return sigma_; }
    unsigned k() const noexcept { return k_; }

    bool contains(const Pattern& x) const;
    std::optional<std::size_t> index_of(const Pattern& x) const;

    /// Members in plain lexicographic order (the `mine` output order).
    std::vector<Pattern> lexicographic() const;

    friend bool operator==(const ParameterDomain& a, const ParameterDomain& b)
    {
        return a.patterns_ == b.patterns_;
    }

private:
    std::vector<Pattern> patterns_;
    double sigma_ = 0.0;
    unsigned k_ = 0;
};

struct MinerOptions
{
    std::size_t max_patterns = 10'000'000;
};

/// Smallest integer count c with c >= sigma * N (c >= 1 when sigma > 0). Products
/// within 1e-9 relative of an integer are snapped to it so that e.g. 0.3 * 10
/// yields 3 regardless of rounding.
std::uint64_t min_support_count(double sigma, std::uint64_t total);

/// Σ_{i=1..k} C(n, i), saturating at UINT64_MAX.
std::uint64_t max_domain_size(std::size_t n, unsigned k);

/// B = {x ≠ ∅ : count(x) >= ceil(sigma N), |x| <= k} by depth-first tidlist
/// intersection with support pruning. For sigma = 0 every non-empty x over
/// {0..n-1} with |x| <= k is returned. Throws LimitError past options.max_patterns.
ParameterDomain mine_parameter_domain(const TransactionDataset& d, double sigma, unsigned k,
                                      MinerOptions options = {});

/// Exhaustive reference over all of 2^V (n_variables <= 20).
ParameterDomain brute_force_domain(const TransactionDataset& d, double sigma, unsigned k);

} // namespace tbm
