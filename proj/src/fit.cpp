#include <tbm/error.hpp>
#include <tbm/fit.hpp>

#include "moment_fitter.hpp"

#include <cmath>

namespace tbm {

GuardDecision divergence_guard(double target, double theta, double previous_theta,
                               double theta_max)
{
    if (!(target > 0.0 && target < 1.0))
        return GuardDecision::remove;
    const double magnitude = std::abs(theta);
    if (!std::isfinite(theta) || (magnitude > theta_max && magnitude > std::abs(previous_theta)))
        return GuardDecision::remove;
    return GuardDecision::keep;
}

namespace {

/// Fitting state over a reduced sample space: θ on B, and for every x ∈ S the
/// log-weight Σ_{s ⊆ x} θ(s). Updating θ(s) by μ multiplies p on the up-set of s
/// by e^μ; ψ renormalizes once per sweep.
class TransductiveBackend
{
public:
    TransductiveBackend(const SampleSpace& space, std::vector<Pattern> parameters)
        : space_(space), parameters_(std::move(parameters)), theta_(parameters_.size(), 0.0),
          incidence_(build_incidence(space_, parameters_)), weight_(space_.size(), 0.0)
    {
    }

    std::size_t size() const { return parameters_.size(); }
    const std::vector<Pattern>& parameters() const { return parameters_; }
    const std::vector<double>& theta() const { return theta_; }
    std::uint64_t evaluations() const { return evaluations_; }
    const Incidence& incidence() const { return incidence_; }
    Incidence take_incidence() { return std::move(incidence_); }
    std::vector<double> take_theta() { return std::move(theta_); }

    void apply(std::span<const double> mu)
    {
        for (std::size_t a = 0; a < mu.size(); ++a)
        {
            if (mu[a] == 0.0)
                continue;
            theta_[a] += mu[a];
            for (auto x : incidence_.up_sets[a])
                weight_[x] += mu[a];
            evaluations_ += incidence_.up_sets[a].size();
        }
    }

    double log_partition()
    {
        evaluations_ += weight_.size();
        return log_sum_exp(weight_);
    }

    void refresh(double psi, std::vector<double>& eta, Eigen::MatrixXd* fisher)
    {
        const auto n = static_cast<Eigen::Index>(parameters_.size());
        std::fill(eta.begin(), eta.end(), 0.0);
        if (fisher)
            fisher->setZero(n, n);
        for (std::size_t x = 0; x < weight_.size(); ++x)
        {
            const auto& members = incidence_.members[x];
            if (members.empty())
                continue;
            const double p = std::exp(weight_[x] - psi);
            for (std::size_t i = 0; i < members.size(); ++i)
            {
                eta[members[i]] += p;
                if (fisher)
                    for (std::size_t j = 0; j <= i; ++j)
                        (*fisher)(members[i], members[j]) += p;
            }
        }
        evaluations_ += weight_.size();
        if (fisher)
        {
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b <= a; ++b)
                {
                    const double g = (*fisher)(a, b) - eta[a] * eta[b];
                    (*fisher)(a, b) = g;
                    (*fisher)(b, a) = g;
                }
        }
    }

    void remove(std::size_t i)
    {
        for (auto x : incidence_.up_sets[i])
            weight_[x] -= theta_[i];
        evaluations_ += incidence_.up_sets[i].size();
        incidence_.erase_parameter(i);
        parameters_.erase(parameters_.begin() + static_cast<std::ptrdiff_t>(i));
        theta_.erase(theta_.begin() + static_cast<std::ptrdiff_t>(i));
    }

private:
    const SampleSpace& space_;
    std::vector<Pattern> parameters_;
    std::vector<double> theta_;
    Incidence incidence_;
    std::vector<double> weight_;
    std::uint64_t evaluations_ = 0;
};

FitResult run_on_space(SampleSpace space, const ParameterDomain& b,
                       std::vector<double> targets, const FitConfig& cfg)
{
    TransductiveBackend backend(space, b.patterns());
    FitReport report = detail::run_moment_fit(backend, std::move(targets), cfg);
    ParameterDomain remaining(backend.parameters(), b.sigma(), b.k());
    auto theta = backend.take_theta();
    auto incidence = backend.take_incidence();
    GibbsModel model(std::move(space), std::move(remaining), std::move(theta),
                     std::move(incidence));
    return {std::move(model), std::move(report)};
}

std::vector<double> targets_on_space(const SampleSpace& space, const ParameterDomain& b,
                                     const TransactionDataset& d)
{
    if (d.total() == 0)
        throw DataError("cannot fit an empty dataset");
    std::vector<std::uint64_t> count(space.size(), 0);
    for (const auto& [x, m] : d.entries())
    {
        auto i = space.find(x);
        if (!i)
            throw DataError("observed pattern " + x.to_string() + " is outside the sample space");
        count[*i] = m;
    }
    const Incidence inc = build_incidence(space, b.patterns());
    std::vector<double> targets(b.size());
    for (std::size_t a = 0; a < b.size(); ++a)
    {
        std::uint64_t support = 0;
        for (auto x : inc.up_sets[a])
            support += count[x];
        targets[a] = static_cast<double>(support) / static_cast<double>(d.total());
    }
    return targets;
}

} // namespace

FitResult fit(const TransactionDataset& d, const ParameterDomain& b, const FitConfig& cfg)
{
    SampleSpace space = build_sample_space(b, d);
    auto targets = targets_on_space(space, b, d);
    return run_on_space(std::move(space), b, std::move(targets), cfg);
}

FitResult fit_on_space(SampleSpace space, const ParameterDomain& b, const TransactionDataset& d,
                       const FitConfig& cfg)
{
    auto targets = targets_on_space(space, b, d);
    return run_on_space(std::move(space), b, std::move(targets), cfg);
}

FitResult fit_moments(SampleSpace space, const ParameterDomain& b, std::vector<double> targets,
                      const FitConfig& cfg)
{
    return run_on_space(std::move(space), b, std::move(targets), cfg);
}

std::vector<double> empirical_targets(const TransactionDataset& d, const ParameterDomain& b)
{
    return targets_on_space(build_sample_space(b, d), b, d);
}

double log_likelihood(const GibbsModel& m, const TransactionDataset& d)
{
    double ll = 0.0;
    for (const auto& [x, count] : d.entries())
    {
        auto i = m.space().find(x);
        if (!i)
            throw DataError("observed pattern " + x.to_string() + " is outside the sample space");
        ll += static_cast<double>(count) * m.log_probability(*i);
    }
    return ll;
}

std::vector<double> log_likelihood_gradient(const GibbsModel& m, const TransactionDataset& d)
{
    const auto eta = m.eta_domain();
    const double n = static_cast<double>(d.total());
    std::vector<double> grad(eta.size());
    for (std::size_t a = 0; a < eta.size(); ++a)
        grad[a] = n * (empirical_eta(d, m.domain()[a]) - eta[a]);
    return grad;
}

} // namespace tbm
