#pragma once

#include <tbm/dataset.hpp>
#include <tbm/fit.hpp>
#include <tbm/miner.hpp>

#include <vector>

namespace tbm {

/// Fully visible Boltzmann machine over the whole power set Ω = 2^V, with the
/// same set-indexed parameterization as the transductive model. Exact: ψ is a
/// sum over all 2^n outcomes, so n is capped.
class FullBMModel
{
public:
    static constexpr std::size_t kMaxVariables = 25;

    FullBMModel(std::size_t n_variables, ParameterDomain domain, std::vector<double> theta);

    std::size_t n_variables() const noexcept { return n_; }
    const ParameterDomain& domain() const noexcept { return domain_; }
    std::span<const double> theta() const noexcept { return theta_; }
    double log_partition() const noexcept { return psi_; }

    double energy(const Pattern& x) const;
    double log_probability(const Pattern& x) const { return -energy(x) - psi_; }
    double probability(const Pattern& x) const;
    /// η(x) over all of 2^V.
    double eta(const Pattern& x) const;

private:
    std::size_t n_;
    ParameterDomain domain_;
    std::vector<double> theta_;
    double psi_ = 0.0;
};

struct FullBMResult
{
    FullBMModel model;
    FitReport report;
};

/// Same moment-matching driver and divergence guard as the transductive fitter,
/// with expectations taken over 2^V. Throws LimitError when n exceeds max_variables.
FullBMResult fit_full_bm(const TransactionDataset& d, const ParameterDomain& b,
                         const FitConfig& cfg = {},
                         std::size_t max_variables = FullBMModel::kMaxVariables);

} // namespace tbm
