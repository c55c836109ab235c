#include <tbm/error.hpp>
#include <tbm/full_bm.hpp>
#include <tbm/gibbs_model.hpp>

#include "moment_fitter.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace tbm {

namespace {

using Mask = std::uint32_t;

Mask to_mask(const Pattern& x, std::size_t n)
{
    Mask m = 0;
    for (Item i : x)
    {
        if (i >= n)
            throw DataError("variable " + std::to_string(i) + " outside a universe of " +
                            std::to_string(n));
        m |= Mask{1} << i;
    }
    return m;
}

void check_size(std::size_t n, std::size_t max_variables)
{
    if (n > max_variables || n > FullBMModel::kMaxVariables)
        throw LimitError("exact Boltzmann machine needs 2^" + std::to_string(n) +
                         " outcomes; use the transductive model for n > " +
                         std::to_string(std::min(max_variables, FullBMModel::kMaxVariables)));
}

/// weight[x] = Σ_{s ⊆ x} a[s] (in place).
void subset_sum(std::vector<double>& a, std::size_t n)
{
    const std::size_t full = a.size();
    for (std::size_t bit = 0; bit < n; ++bit)
    {
        const std::size_t b = std::size_t{1} << bit;
        for (std::size_t x = 0; x < full; ++x)
            if (x & b)
                a[x] += a[x ^ b];
    }
}

/// a[x] = Σ_{y ⊇ x} a[y] (in place).
void superset_sum(std::vector<double>& a, std::size_t n)
{
    const std::size_t full = a.size();
    for (std::size_t bit = 0; bit < n; ++bit)
    {
        const std::size_t b = std::size_t{1} << bit;
        for (std::size_t x = 0; x < full; ++x)
            if (!(x & b))
                a[x] += a[x | b];
    }
}

class PowerSetBackend
{
public:
    PowerSetBackend(std::size_t n, std::vector<Pattern> parameters)
        : n_(n), parameters_(std::move(parameters)), theta_(parameters_.size(), 0.0),
          weight_(std::size_t{1} << n, 0.0), eta_all_(weight_.size())
    {
        for (const auto& s : parameters_)
            masks_.push_back(to_mask(s, n_));
    }

    std::size_t size() const { return parameters_.size(); }
    const std::vector<Pattern>& parameters() const { return parameters_; }
    const std::vector<double>& theta() const { return theta_; }
    std::uint64_t evaluations() const { return evaluations_; }
    std::vector<double> take_theta() { return std::move(theta_); }

    void apply(std::span<const double> mu)
    {
        for (std::size_t a = 0; a < mu.size(); ++a)
            theta_[a] += mu[a];
        rebuild();
    }

    double log_partition()
    {
        evaluations_ += weight_.size();
        return log_sum_exp(weight_);
    }

    void refresh(double psi, std::vector<double>& eta, Eigen::MatrixXd* fisher)
    {
        for (std::size_t x = 0; x < weight_.size(); ++x)
            eta_all_[x] = std::exp(weight_[x] - psi);
        evaluations_ += weight_.size();
        superset_sum(eta_all_, n_);
        for (std::size_t a = 0; a < masks_.size(); ++a)
            eta[a] = eta_all_[masks_[a]];
        if (fisher)
        {
            const auto k = static_cast<Eigen::Index>(masks_.size());
            fisher->resize(k, k);
            for (Eigen::Index a = 0; a < k; ++a)
                for (Eigen::Index b = 0; b <= a; ++b)
                {
                    const double g = eta_all_[masks_[a] | masks_[b]] - eta[a] * eta[b];
                    (*fisher)(a, b) = g;
                    (*fisher)(b, a) = g;
                }
        }
    }

    void remove(std::size_t i)
    {
        parameters_.erase(parameters_.begin() + static_cast<std::ptrdiff_t>(i));
        theta_.erase(theta_.begin() + static_cast<std::ptrdiff_t>(i));
        masks_.erase(masks_.begin() + static_cast<std::ptrdiff_t>(i));
        rebuild();
    }

private:
    void rebuild()
    {
        std::fill(weight_.begin(), weight_.end(), 0.0);
        for (std::size_t a = 0; a < masks_.size(); ++a)
            weight_[masks_[a]] += theta_[a];
        subset_sum(weight_, n_);
        evaluations_ += weight_.size();
    }

    std::size_t n_;
    std::vector<Pattern> parameters_;
    std::vector<Mask> masks_;
    std::vector<double> theta_;
    std::vector<double> weight_;
    std::vector<double> eta_all_;
    std::uint64_t evaluations_ = 0;
};

} // namespace

FullBMModel::FullBMModel(std::size_t n_variables, ParameterDomain domain,
                         std::vector<double> theta)
    : n_(n_variables), domain_(std::move(domain)), theta_(std::move(theta))
{
    check_size(n_, kMaxVariables);
    if (theta_.empty())
        theta_.assign(domain_.size(), 0.0);
    if (theta_.size() != domain_.size())
        throw std::invalid_argument("theta size does not match domain");
    std::vector<double> weight(std::size_t{1} << n_, 0.0);
    for (std::size_t a = 0; a < domain_.size(); ++a)
        weight[to_mask(domain_[a], n_)] += theta_[a];
    subset_sum(weight, n_);
    psi_ = log_sum_exp(weight);
}

double FullBMModel::energy(const Pattern& x) const
{
    to_mask(x, n_);
    double e = 0.0;
    for (std::size_t a = 0; a < domain_.size(); ++a)
        if (domain_[a].is_subset_of(x))
            e -= theta_[a];
    return e;
}

double FullBMModel::probability(const Pattern& x) const
{
    return std::exp(log_probability(x));
}

double FullBMModel::eta(const Pattern& x) const
{
    const Mask target = to_mask(x, n_);
    std::vector<double> weight(std::size_t{1} << n_, 0.0);
    for (std::size_t a = 0; a < domain_.size(); ++a)
        weight[to_mask(domain_[a], n_)] += theta_[a];
    subset_sum(weight, n_);
    double s = 0.0;
    for (std::size_t y = 0; y < weight.size(); ++y)
        if ((y & target) == target)
            s += std::exp(weight[y] - psi_);
    return s;
}

FullBMResult fit_full_bm(const TransactionDataset& d, const ParameterDomain& b,
                         const FitConfig& cfg, std::size_t max_variables)
{
    check_size(d.n_variables(), max_variables);
    if (d.total() == 0)
        throw DataError("cannot fit an empty dataset");
    std::vector<double> targets(b.size());
    for (std::size_t a = 0; a < b.size(); ++a)
        targets[a] = empirical_eta(d, b[a]);

    PowerSetBackend backend(d.n_variables(), b.patterns());
    FitReport report = detail::run_moment_fit(backend, std::move(targets), cfg);
    ParameterDomain remaining(backend.parameters(), b.sigma(), b.k());
    FullBMModel model(d.n_variables(), std::move(remaining), backend.take_theta());
    return {std::move(model), std::move(report)};
}

} // namespace tbm
