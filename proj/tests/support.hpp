#pragma once

// Shared fixtures and reference implementations for the test binaries.

#include <tbm/dataset.hpp>
#include <tbm/gibbs_model.hpp>
#include <tbm/miner.hpp>
#include <tbm/sample_space.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tbm::testing {

/// {∅:2, {1}:3, {2}:1, {1,2}:4}
inline TransactionDataset worked_example()
{
    return TransactionDataset({{Pattern{}, 2}, {Pattern{1}, 3}, {Pattern{2}, 1}, {Pattern{1, 2}, 4}},
                              3);
}

inline Pattern pattern_from_mask(std::uint32_t mask)
{
    std::vector<Item> items;
    for (Item i = 0; mask; ++i, mask >>= 1)
        if (mask & 1u)
            items.push_back(i);
    return Pattern::from_canonical(std::move(items));
}

/// `n_rows` transactions over n variables, each variable present with probability `density`.
inline TransactionDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t n_rows,
                                         double density)
{
    std::bernoulli_distribution coin(density);
    std::vector<Pattern> rows;
    for (std::size_t r = 0; r < n_rows; ++r)
    {
        std::vector<Item> items;
        for (std::size_t i = 0; i < n; ++i)
            if (coin(rng))
                items.push_back(static_cast<Item>(i));
        rows.push_back(Pattern::from_canonical(std::move(items)));
    }
    return TransactionDataset::from_transactions(rows, n);
}

/// Iterative proportional fitting over the outcomes of `space`: each step
/// rescales the distribution so that one moment η(s) matches its target
/// exactly. Independent of the library fitter; returns probabilities aligned
/// with `space`.
inline std::vector<double> ipf_oracle(const SampleSpace& space, const std::vector<Pattern>& b,
                                      const std::vector<double>& targets, double tol = 1e-14,
                                      std::size_t max_sweeps = 2'000'000)
{
    const std::size_t m = space.size();
    std::vector<double> p(m, 1.0 / static_cast<double>(m));
    std::vector<std::vector<char>> inside(b.size(), std::vector<char>(m, 0));
    for (std::size_t a = 0; a < b.size(); ++a)
        for (std::size_t x = 0; x < m; ++x)
            inside[a][x] = b[a].is_subset_of(space[x]) ? 1 : 0;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep)
    {
        double gap = 0.0;
        for (std::size_t a = 0; a < b.size(); ++a)
        {
            double eta = 0.0;
            for (std::size_t x = 0; x < m; ++x)
                if (inside[a][x])
                    eta += p[x];
            gap = std::max(gap, std::abs(eta - targets[a]));
            const double up = targets[a] / eta;
            const double down = (1.0 - targets[a]) / (1.0 - eta);
            for (std::size_t x = 0; x < m; ++x)
                p[x] *= inside[a][x] ? up : down;
        }
        if (gap < tol)
            break;
    }
    return p;
}

/// Plain summation form of D_KL(p, q).
inline double kl_sum(const std::vector<double>& p, std::span<const double> q)
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0)
            s += p[i] * std::log(p[i] / q[i]);
    return s;
}

/// Σ_x count(x) log p(x) by direct energy summation, no shared code with the model's cache.
inline double direct_log_likelihood(const SampleSpace& space, const ParameterDomain& b,
                                    const std::vector<double>& theta, const TransactionDataset& d)
{
    std::vector<double> w(space.size(), 0.0);
    for (std::size_t x = 0; x < space.size(); ++x)
        for (std::size_t a = 0; a < b.size(); ++a)
            if (b[a].is_subset_of(space[x]))
                w[x] += theta[a];
    const double mx = *std::max_element(w.begin(), w.end());
    double z = 0.0;
    for (double v : w)
        z += std::exp(v - mx);
    const double psi = mx + std::log(z);
    double ll = 0.0;
    for (const auto& [x, c] : d.entries())
        ll += static_cast<double>(c) * (w[*space.find(x)] - psi);
    return ll;
}

} // namespace tbm::testing
