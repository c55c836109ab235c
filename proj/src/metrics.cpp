#include <tbm/error.hpp>
#include <tbm/fit.hpp>
#include <tbm/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tbm {

double kl_divergence(const EmpiricalDistribution& p_hat, const ProbabilityFn& p)
{
    double kl = 0.0;
    for (const auto& [x, ph] : p_hat.support())
    {
        const double q = p(x);
        if (!(q > 0.0))
            throw DataError("model assigns zero probability to observed pattern " + x.to_string());
        kl += ph * std::log(ph / q);
    }
    return kl;
}

double kl_divergence(const EmpiricalDistribution& p_hat, const GibbsModel& p)
{
    double kl = 0.0;
    for (const auto& [x, ph] : p_hat.support())
    {
        auto i = p.space().find(x);
        if (!i)
            throw DataError("observed pattern " + x.to_string() + " is outside the sample space");
        kl += ph * (std::log(ph) - p.log_probability(*i));
    }
    return kl;
}

double kl_divergence(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size())
        throw DataError("distributions over different outcome sets");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        if (p[i] <= 0.0)
            continue;
        if (!(q[i] > 0.0))
            throw DataError("zero probability at outcome " + std::to_string(i));
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl;
}

double kl_divergence(const GibbsModel& p, const GibbsModel& q)
{
    if (!(p.space() == q.space()))
        throw DataError("models live on different sample spaces");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.space().size(); ++i)
        kl += p.probability(i) * (p.log_probability(i) - q.log_probability(i));
    return kl;
}

double entropy(std::span<const double> p)
{
    double h = 0.0;
    for (double v : p)
        if (v > 0.0)
            h -= v * std::log(v);
    return h;
}

double entropy(const EmpiricalDistribution& p)
{
    double h = 0.0;
    for (const auto& [x, v] : p.support())
        h -= v * std::log(v);
    return h;
}

double reconstruction_error_proxy(const EnergyFn& energy, const TransactionDataset& d)
{
    std::vector<double> neg_energy;
    neg_energy.reserve(d.unique_count());
    for (const auto& [x, count] : d.entries())
    {
        const double e = energy(x);
        if (!std::isfinite(e))
            throw DataError("non-finite energy for " + x.to_string());
        neg_energy.push_back(-e);
    }
    const double log_z = log_sum_exp(neg_energy);
    const double n = static_cast<double>(d.total());
    double kl = 0.0;
    std::size_t i = 0;
    for (const auto& [x, count] : d.entries())
    {
        const double ph = static_cast<double>(count) / n;
        kl += ph * (std::log(ph) - (neg_energy[i++] - log_z));
    }
    return kl;
}

Evaluation evaluate(const GibbsModel& m, const TransactionDataset& d)
{
    const EmpiricalDistribution p_hat(d);
    Evaluation e;
    e.kl = kl_divergence(p_hat, m);
    e.log_likelihood = log_likelihood(m, d);
    e.entropy = entropy(p_hat);
    e.proxy_error = reconstruction_error_proxy([&](const Pattern& x) { return m.energy(x); }, d);
    e.n_eval_patterns = d.unique_count();
    return e;
}

} // namespace tbm
