#pragma once

#include <tbm/dataset.hpp>
#include <tbm/fit.hpp>
#include <tbm/gibbs_model.hpp>

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tbm {

/// g_su = ∂η(s)/∂θ(u) = η(s ∪ u) − η(s) η(u), indexed by the model's domain.
struct FisherMatrix
{
    std::vector<Pattern> basis;
    Eigen::MatrixXd entries;

    double operator()(std::size_t s, std::size_t u) const
    {
        return entries(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(u));
    }
    double min_eigenvalue() const;
};

FisherMatrix fisher_information(const GibbsModel& m);

/// P*_B: the member of the e-flat family on B whose η matches the true
/// distribution on B. `true_probs` is aligned with `space` and must sum to one;
/// zeros are allowed as long as the projection stays in the interior.
FitResult m_projection(const SampleSpace& space, std::span<const double> true_probs,
                       const ParameterDomain& b, const FitConfig& cfg = {});

/// η*(s) = Σ_{x ⊇ s} p*(x) for each s ∈ B.
std::vector<double> expectation_targets(const SampleSpace& space,
                                        std::span<const double> probs,
                                        const ParameterDomain& b);

/// |D_KL(P̂, Q) − D_KL(P̂, P̂_B) − D_KL(P̂_B, Q)| for Q on the same S and B as the MLE P̂_B.
double pythagorean_check(const EmpiricalDistribution& p_hat, const GibbsModel& p_mle,
                         const GibbsModel& q);

/// |B| / (2N)
double variance_lower_bound(std::size_t b_size, std::uint64_t n_samples);

} // namespace tbm
