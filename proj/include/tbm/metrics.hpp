#pragma once

#include <tbm/dataset.hpp>
#include <tbm/gibbs_model.hpp>
#include <tbm/pattern.hpp>

#include <functional>
#include <span>

namespace tbm {

using ProbabilityFn = std::function<double(const Pattern&)>;
using EnergyFn = std::function<double(const Pattern&)>;

/// D_KL(P̂, P) = Σ_{x ∈ supp(P̂)} p̂(x) log(p̂(x) / p(x)), natural log.
/// Throws DataError naming the first support pattern with p(x) <= 0.
double kl_divergence(const EmpiricalDistribution& p_hat, const ProbabilityFn& p);
double kl_divergence(const EmpiricalDistribution& p_hat, const GibbsModel& p);

/// D_KL between two distributions over the same indexed outcomes. Terms with
/// p = 0 vanish; q = 0 where p > 0 throws DataError.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Two models over the same sample space.
double kl_divergence(const GibbsModel& p, const GibbsModel& q);

/// −Σ p log p with 0 log 0 = 0.
double entropy(std::span<const double> p);
double entropy(const EmpiricalDistribution& p);

/// Normalizes exp(−E(x)) over unique(D) by Z' = Σ_{x ∈ unique(D)} exp(−E(x)),
/// then returns D_KL(P̂, P'). Works for any learner that yields an energy.
double reconstruction_error_proxy(const EnergyFn& energy, const TransactionDataset& d);

struct Evaluation
{
    double kl = 0.0;
    double log_likelihood = 0.0;
    double entropy = 0.0;
    double proxy_error = 0.0;
    std::size_t n_eval_patterns = 0;
};

/// Full evaluation of a transductive model against a dataset whose patterns lie in S.
Evaluation evaluate(const GibbsModel& m, const TransactionDataset& d);

} // namespace tbm
