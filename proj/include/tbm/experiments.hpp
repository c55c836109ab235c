#pragma once

#include <tbm/dataset.hpp>
#include <tbm/fit.hpp>
#include <tbm/pattern.hpp>
#include <tbm/sample_space.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace tbm {

/// Independent stream seeds from one master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Uniform draw from 2^V: each variable present with probability 1/2.
Pattern random_pattern(std::mt19937_64& rng, std::size_t n_vars);

/// `count` distinct uniform draws from 2^V (optionally excluding ⊥).
std::vector<Pattern> distinct_random_patterns(std::mt19937_64& rng, std::size_t n_vars,
                                              std::size_t count, bool exclude_empty);

/// N i.i.d. draws from a categorical distribution over the outcomes of `space`.
TransactionDataset sample_dataset(std::mt19937_64& rng, const SampleSpace& space,
                                  std::span<const double> probs, std::uint64_t n_samples,
                                  std::size_t n_vars);

struct SynthConfig
{
    std::size_t n_vars = 20;
    std::size_t support_size = 1000;
    std::uint64_t n_samples = 100'000;
    std::uint64_t seed = 0;
};

struct SynthResult
{
    TransactionDataset dataset;
    std::vector<Pattern> support; ///< D', in draw order
};

/// Pick |D'| distinct patterns uniformly from 2^V, then draw N points from D'
/// uniformly with replacement.
SynthResult synth_dataset(const SynthConfig& cfg);

/// Threshold σ = c / N with c a support count of the data such that the mined
/// domain size is in [min_params, max_params], nearest the midpoint. Falls back
/// to the closest achievable size when the range is skipped over by ties.
double tune_sigma(const TransactionDataset& d, unsigned k, std::size_t min_params,
                  std::size_t max_params);

struct BiasVarianceConfig
{
    std::size_t space_size = 200;
    std::size_t n_vars = 20;
    std::optional<double> sigma; ///< tuned from the pilot sample when absent
    unsigned k = 2;
    std::uint64_t n_samples = 10'000;
    std::size_t trials = 50;
    std::uint64_t seed = 0;
    std::size_t min_params = 20;
    std::size_t max_params = 60;
    FitConfig fit{.tolerance = 1e-10};
};

struct BiasVarianceTrial
{
    std::size_t trial = 0;
    double kl_true_to_fit = 0.0; ///< D_KL(P*, P̂_B)
    double kl_proj_to_fit = 0.0; ///< D_KL(P*_B, P̂_B)
    std::size_t removed = 0;
    bool converged = false;
};

struct BiasVarianceReport
{
    double sigma = 0.0;
    std::size_t domain_size = 0;
    std::size_t sample_space_size = 0;
    std::uint64_t n_samples = 0;
    std::size_t trials = 0;
    double bias = 0.0; ///< D_KL(P*, P*_B)
    double variance_mean = 0.0;
    double variance_std = 0.0;
    double variance_stderr = 0.0;
    double kl_true_mean = 0.0;
    double kl_true_stderr = 0.0;
    double lower_bound = 0.0; ///< |B| / 2N
    /// mean D_KL(P*, P̂_B) − bias − mean D_KL(P*_B, P̂_B)
    double decomposition_gap = 0.0;
    std::vector<BiasVarianceTrial> rows;
};

/// Fix S (space_size random patterns plus ⊥) and a uniform-weight P*, mine B
/// once from a pilot sample, then per trial draw D ~ P*, refit on the fixed S and
/// B, and compare the spread of D_KL(P*_B, P̂_B) with |B| / 2N. The model space
/// is S ∪ B; P* is zero on members of B that were not drawn into S.
BiasVarianceReport bias_variance_experiment(const BiasVarianceConfig& cfg);

} // namespace tbm
