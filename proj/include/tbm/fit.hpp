#pragma once

#include <tbm/dataset.hpp>
#include <tbm/gibbs_model.hpp>
#include <tbm/miner.hpp>
#include <tbm/sample_space.hpp>

#include <cstdint>
#include <vector>

namespace tbm {

enum class StepRule
{
    /// μ(x) = ε (η̂(x) − η(x)).
    gradient,
    /// μ = ε G⁻¹ (η̂ − η) with G the Fisher information on B; ε restarts at its
    /// configured value every sweep and is halved while the sweep would lower the
    /// log-likelihood.
    newton,
};

struct FitConfig
{
    double epsilon = 1.0;
    double tolerance = 1e-6;
    std::size_t max_iters = 10'000;
    double theta_max = 30.0;
    StepRule step = StepRule::newton;
    /// Newton directions are rescaled so that no single coordinate moves by more than this.
    double max_step = 5.0;
    /// Newton rule only: convergence also needs the next step to be at most this
    /// large, so that θ drifting off to infinity reaches the guard instead.
    double step_tolerance = 1e-3;
    /// Beyond this many parameters the dense Newton solve is skipped and the gradient rule used.
    std::size_t newton_max_parameters = 6000;
    bool record_trace = false;
};

struct FitReport
{
    std::size_t iterations = 0; ///< sweeps, including rejected ones
    std::size_t accepted = 0;
    double final_gap = 0.0; ///< max_{x ∈ B} |η̂(x) − η(x)| on the surviving domain
    std::vector<Pattern> removed_parameters;
    bool converged = false;
    bool all_removed = false; ///< B was non-empty and the guard emptied it
    double final_epsilon = 0.0;
    std::uint64_t evaluations = 0; ///< probability reads/updates, all sweeps
    std::uint64_t max_sweep_evaluations = 0;
    std::vector<double> log_likelihood_trace; ///< per accepted sweep, per sample (L_D / N)
};

struct FitResult
{
    GibbsModel model;
    FitReport report;
};

enum class GuardDecision
{
    keep,
    remove,
};

/// A parameter is removed when its target forces some probability to zero
/// (η̂ ∈ {0, 1}), or when |θ| is past theta_max and still growing.
GuardDecision divergence_guard(double target, double theta, double previous_theta,
                               double theta_max);

/// TBM learning: S = B ∪ unique(D) ∪ {⊥}, then moment matching on B.
FitResult fit(const TransactionDataset& d, const ParameterDomain& b, const FitConfig& cfg = {});

/// Moment matching on a fixed space. unique(D) must be contained in `space`.
FitResult fit_on_space(SampleSpace space, const ParameterDomain& b, const TransactionDataset& d,
                       const FitConfig& cfg = {});

/// Moment matching against arbitrary targets (aligned with b.patterns()).
FitResult fit_moments(SampleSpace space, const ParameterDomain& b, std::vector<double> targets,
                      const FitConfig& cfg = {});

/// Σ_{x ∈ D} log p(x). Throws DataError when D has a pattern outside S.
double log_likelihood(const GibbsModel& m, const TransactionDataset& d);

/// ∂L_D/∂θ(y) = N (η̂(y) − η(y)) for every y ∈ B, in domain order.
std::vector<double> log_likelihood_gradient(const GibbsModel& m, const TransactionDataset& d);

/// η̂ on each member of B (integer support count / N).
std::vector<double> empirical_targets(const TransactionDataset& d, const ParameterDomain& b);

} // namespace tbm
