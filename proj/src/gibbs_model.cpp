#include <tbm/error.hpp>
#include <tbm/gibbs_model.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tbm {

double log_sum_exp(std::span<const double> v)
{
    if (v.empty())
        return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - m);
    return m + std::log(s);
}

GibbsModel::GibbsModel(SampleSpace space, ParameterDomain domain)
    : GibbsModel(std::move(space), std::move(domain), {})
{
}

GibbsModel::GibbsModel(SampleSpace space, ParameterDomain domain, std::vector<double> theta)
    : space_(std::move(space)), domain_(std::move(domain)), theta_(std::move(theta))
{
    if (theta_.empty())
        theta_.assign(domain_.size(), 0.0);
    incidence_ = build_incidence(space_, domain_.patterns());
    compute();
}

GibbsModel::GibbsModel(SampleSpace space, ParameterDomain domain, std::vector<double> theta,
                       Incidence incidence)
    : space_(std::move(space)), domain_(std::move(domain)), theta_(std::move(theta)),
      incidence_(std::move(incidence))
{
    if (incidence_.up_sets.size() != domain_.size() || incidence_.members.size() != space_.size())
        throw std::invalid_argument("incidence does not match sample space and domain");
    compute();
}

void GibbsModel::compute()
{
    if (theta_.size() != domain_.size())
        throw std::invalid_argument("theta has " + std::to_string(theta_.size()) +
                                    " entries for a domain of " + std::to_string(domain_.size()));
    for (double t : theta_)
        if (!std::isfinite(t))
            throw std::invalid_argument("theta must be finite");

    weight_.assign(space_.size(), 0.0);
    for (std::size_t a = 0; a < theta_.size(); ++a)
        for (auto x : incidence_.up_sets[a])
            weight_[x] += theta_[a];
    psi_ = log_sum_exp(weight_);
    log_probs_.resize(space_.size());
    probs_.resize(space_.size());
    for (std::size_t x = 0; x < space_.size(); ++x)
    {
        log_probs_[x] = weight_[x] - psi_;
        probs_[x] = std::exp(log_probs_[x]);
    }
}

double GibbsModel::theta(const Pattern& s) const
{
    auto i = domain_.index_of(s);
    if (!i)
        throw std::out_of_range(s.to_string() + " is not a parameter");
    return theta_[*i];
}

double GibbsModel::probability(const Pattern& x) const
{
    auto i = space_.find(x);
    if (!i)
        throw DataError(x.to_string() + " is outside the sample space");
    return probs_[*i];
}

double GibbsModel::energy(const Pattern& x) const
{
    auto i = space_.find(x);
    if (!i)
        throw DataError(x.to_string() + " is outside the sample space");
    return -weight_[*i];
}

double GibbsModel::eta(const Pattern& x) const
{
    if (x.empty())
        return 1.0;
    double s = 0.0;
    if (auto i = domain_.index_of(x))
    {
        for (auto o : incidence_.up_sets[*i])
            s += probs_[o];
        return s;
    }
    for (std::size_t o = 0; o < space_.size(); ++o)
        if (x.is_subset_of(space_[o]))
            s += probs_[o];
    return s;
}

std::vector<double> GibbsModel::eta_domain() const
{
    std::vector<double> eta(domain_.size(), 0.0);
    for (std::size_t a = 0; a < domain_.size(); ++a)
        for (auto o : incidence_.up_sets[a])
            eta[a] += probs_[o];
    return eta;
}

double GibbsModel::phi() const
{
    double s = 0.0;
    for (std::size_t x = 0; x < probs_.size(); ++x)
        s += probs_[x] * log_probs_[x];
    return s;
}

GibbsModel GibbsModel::with_theta(std::vector<double> theta) const
{
    return GibbsModel(space_, domain_, std::move(theta), incidence_);
}

} // namespace tbm
