#include <tbm/error.hpp>
#include <tbm/experiments.hpp>
#include <tbm/geometry.hpp>
#include <tbm/metrics.hpp>
#include <tbm/miner.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace tbm {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Pattern random_pattern(std::mt19937_64& rng, std::size_t n_vars)
{
    std::vector<Item> items;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n_vars; ++i)
    {
        if (i % 64 == 0)
            bits = rng();
        if (bits & 1u)
            items.push_back(static_cast<Item>(i));
        bits >>= 1;
    }
    return Pattern::from_canonical(std::move(items));
}

std::vector<Pattern> distinct_random_patterns(std::mt19937_64& rng, std::size_t n_vars,
                                              std::size_t count, bool exclude_empty)
{
    const long double capacity = std::ldexp(1.0L, static_cast<int>(std::min<std::size_t>(n_vars, 4000))) -
                                 (exclude_empty ? 1.0L : 0.0L);
    if (static_cast<long double>(count) > capacity)
        throw std::invalid_argument("cannot draw " + std::to_string(count) +
                                    " distinct patterns over " + std::to_string(n_vars) +
                                    " variables");
    std::set<Pattern> seen;
    std::vector<Pattern> out;
    out.reserve(count);
    while (out.size() < count)
    {
        Pattern p = random_pattern(rng, n_vars);
        if (exclude_empty && p.empty())
            continue;
        if (seen.insert(p).second)
            out.push_back(std::move(p));
    }
    return out;
}

TransactionDataset sample_dataset(std::mt19937_64& rng, const SampleSpace& space,
                                  std::span<const double> probs, std::uint64_t n_samples,
                                  std::size_t n_vars)
{
    if (probs.size() != space.size())
        throw std::invalid_argument("one probability per outcome required");
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    std::vector<std::uint64_t> counts(space.size(), 0);
    for (std::uint64_t i = 0; i < n_samples; ++i)
        ++counts[pick(rng)];
    TransactionDataset::Entries entries;
    for (std::size_t x = 0; x < space.size(); ++x)
        if (counts[x] > 0)
            entries.emplace(space[x], counts[x]);
    return TransactionDataset(std::move(entries), n_vars);
}

SynthResult synth_dataset(const SynthConfig& cfg)
{
    if (cfg.support_size < 1)
        throw std::invalid_argument("support size must be positive");
    std::mt19937_64 rng(cfg.seed);
    SynthResult r;
    r.support = distinct_random_patterns(rng, cfg.n_vars, cfg.support_size, false);
    std::uniform_int_distribution<std::size_t> pick(0, r.support.size() - 1);
    std::vector<std::uint64_t> counts(r.support.size(), 0);
    for (std::uint64_t i = 0; i < cfg.n_samples; ++i)
        ++counts[pick(rng)];
    TransactionDataset::Entries entries;
    for (std::size_t i = 0; i < r.support.size(); ++i)
        if (counts[i] > 0)
            entries.emplace(r.support[i], counts[i]);
    r.dataset = TransactionDataset(std::move(entries), cfg.n_vars);
    return r;
}

double tune_sigma(const TransactionDataset& d, unsigned k, std::size_t min_params,
                  std::size_t max_params)
{
    if (min_params > max_params)
        throw std::invalid_argument("min_params exceeds max_params");
    const double n = static_cast<double>(d.total());
    const ParameterDomain all = mine_parameter_domain(d, 1.0 / n, k);
    if (all.empty())
        throw DataError("no pattern occurs in the data");

    // domain size as a function of the count threshold
    std::map<std::uint64_t, std::size_t, std::greater<>> at_count;
    for (const auto& s : all)
        ++at_count[support_count(d, s)];
    const double mid = 0.5 * static_cast<double>(min_params + max_params);
    std::size_t cumulative = 0;
    std::uint64_t best = 0;
    double best_score = 0.0;
    for (const auto& [count, how_many] : at_count)
    {
        cumulative += how_many;
        const bool in_range = cumulative >= min_params && cumulative <= max_params;
        const double score = std::abs(static_cast<double>(cumulative) - mid) + (in_range ? 0.0 : 1e9);
        if (best == 0 || score < best_score)
        {
            best = count;
            best_score = score;
        }
    }
    return static_cast<double>(best) / n;
}

namespace {

struct Moments
{
    double mean = 0.0;
    double std = 0.0;
    double stderr_ = 0.0;
};

Moments moments(const std::vector<double>& v)
{
    Moments m;
    if (v.empty())
        return m;
    for (double x : v)
        m.mean += x;
    m.mean /= static_cast<double>(v.size());
    if (v.size() > 1)
    {
        double ss = 0.0;
        for (double x : v)
            ss += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
        m.stderr_ = m.std / std::sqrt(static_cast<double>(v.size()));
    }
    return m;
}

} // namespace

BiasVarianceReport bias_variance_experiment(const BiasVarianceConfig& cfg)
{
    if (cfg.space_size < 2)
        throw std::invalid_argument("space_size must be at least 2");
    if (cfg.trials < 2)
        throw std::invalid_argument("at least two trials are required");
    if (cfg.n_samples < 1)
        throw std::invalid_argument("sample size must be positive");

    std::mt19937_64 rng(derive_seed(cfg.seed, 0));
    const SampleSpace base(distinct_random_patterns(rng, cfg.n_vars, cfg.space_size, true));

    std::vector<double> base_probs(base.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double total = 0.0;
    for (auto& p : base_probs)
    {
        p = unit(rng);
        total += p;
    }
    for (auto& p : base_probs)
        p /= total;

    std::mt19937_64 pilot_rng(derive_seed(cfg.seed, 1));
    const TransactionDataset pilot =
        sample_dataset(pilot_rng, base, base_probs, cfg.n_samples, cfg.n_vars);
    const double sigma = cfg.sigma ? *cfg.sigma
                                   : tune_sigma(pilot, cfg.k, cfg.min_params, cfg.max_params);
    const ParameterDomain b = mine_parameter_domain(pilot, sigma, cfg.k);
    if (b.empty())
        throw DataError("mining the pilot sample produced an empty parameter domain");

    // Model space S ∪ B; P* carries no mass on the added members of B.
    std::vector<Pattern> outcomes = base.outcomes();
    outcomes.insert(outcomes.end(), b.begin(), b.end());
    const SampleSpace space(std::move(outcomes));
    std::vector<double> true_probs(space.size(), 0.0);
    for (std::size_t x = 0; x < base.size(); ++x)
        true_probs[*space.find(base[x])] = base_probs[x];

    const FitResult projection = m_projection(space, true_probs, b, cfg.fit);
    if (!projection.report.removed_parameters.empty())
        throw DataError("the projection of P* onto B diverged; choose another sigma or seed");
    const GibbsModel& p_star_b = projection.model;

    BiasVarianceReport r;
    r.sigma = sigma;
    r.domain_size = b.size();
    r.sample_space_size = space.size();
    r.n_samples = cfg.n_samples;
    r.trials = cfg.trials;
    r.bias = kl_divergence(true_probs, p_star_b.probabilities());
    r.lower_bound = variance_lower_bound(b.size(), cfg.n_samples);

    std::vector<double> var_terms;
    std::vector<double> true_terms;
    for (std::size_t t = 0; t < cfg.trials; ++t)
    {
        std::mt19937_64 trial_rng(derive_seed(cfg.seed, 2 + t));
        const TransactionDataset d =
            sample_dataset(trial_rng, space, true_probs, cfg.n_samples, cfg.n_vars);
        const FitResult fitted = fit_on_space(space, b, d, cfg.fit);
        BiasVarianceTrial row;
        row.trial = t;
        row.kl_true_to_fit = kl_divergence(true_probs, fitted.model.probabilities());
        row.kl_proj_to_fit = kl_divergence(p_star_b.probabilities(), fitted.model.probabilities());
        row.removed = fitted.report.removed_parameters.size();
        row.converged = fitted.report.converged;
        var_terms.push_back(row.kl_proj_to_fit);
        true_terms.push_back(row.kl_true_to_fit);
        r.rows.push_back(row);
    }

    const Moments var = moments(var_terms);
    const Moments tru = moments(true_terms);
    r.variance_mean = var.mean;
    r.variance_std = var.std;
    r.variance_stderr = var.stderr_;
    r.kl_true_mean = tru.mean;
    r.kl_true_stderr = tru.stderr_;
    r.decomposition_gap = tru.mean - r.bias - var.mean;
    return r;
}

} // namespace tbm
