#include <tbm/error.hpp>
#include <tbm/geometry.hpp>
#include <tbm/metrics.hpp>

#include <cmath>
#include <stdexcept>

namespace tbm {

double FisherMatrix::min_eigenvalue() const
{
    if (entries.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

FisherMatrix fisher_information(const GibbsModel& m)
{
    const auto& domain = m.domain();
    const auto n = static_cast<Eigen::Index>(domain.size());
    FisherMatrix f{domain.patterns(), Eigen::MatrixXd::Zero(n, n)};
    const auto eta = m.eta_domain();
    // Σ_x p(x) ζ(s, x) ζ(u, x) = η(s ∪ u)
    const auto& members = m.incidence().members;
    for (std::size_t x = 0; x < members.size(); ++x)
    {
        const double p = m.probability(x);
        for (std::size_t i = 0; i < members[x].size(); ++i)
            for (std::size_t j = 0; j <= i; ++j)
                f.entries(members[x][i], members[x][j]) += p;
    }
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b <= a; ++b)
        {
            const double g = f.entries(a, b) - eta[a] * eta[b];
            f.entries(a, b) = g;
            f.entries(b, a) = g;
        }
    return f;
}

std::vector<double> expectation_targets(const SampleSpace& space, std::span<const double> probs,
                                        const ParameterDomain& b)
{
    if (probs.size() != space.size())
        throw std::invalid_argument("one probability per outcome required");
    const Incidence inc = build_incidence(space, b.patterns());
    std::vector<double> eta(b.size(), 0.0);
    for (std::size_t a = 0; a < b.size(); ++a)
        for (auto x : inc.up_sets[a])
            eta[a] += probs[x];
    return eta;
}

FitResult m_projection(const SampleSpace& space, std::span<const double> true_probs,
                       const ParameterDomain& b, const FitConfig& cfg)
{
    double total = 0.0;
    for (double p : true_probs)
    {
        if (!(p >= 0.0))
            throw DataError("true distribution has a negative or NaN entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw DataError("true distribution does not sum to one");
    return fit_moments(space, b, expectation_targets(space, true_probs, b), cfg);
}

double pythagorean_check(const EmpiricalDistribution& p_hat, const GibbsModel& p_mle,
                         const GibbsModel& q)
{
    if (!(p_mle.space() == q.space()) || !(p_mle.domain() == q.domain()))
        throw DataError("pythagorean check needs both models on the same S and B");
    return std::abs(kl_divergence(p_hat, q) - kl_divergence(p_hat, p_mle) -
                    kl_divergence(p_mle, q));
}

double variance_lower_bound(std::size_t b_size, std::uint64_t n_samples)
{
    if (n_samples == 0)
        throw std::invalid_argument("sample size must be positive");
    return static_cast<double>(b_size) / (2.0 * static_cast<double>(n_samples));
}

} // namespace tbm
