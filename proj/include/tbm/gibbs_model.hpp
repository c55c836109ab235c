#pragma once

#include <tbm/miner.hpp>
#include <tbm/pattern.hpp>
#include <tbm/sample_space.hpp>

#include <span>
#include <vector>

namespace tbm {

/// A Gibbs distribution over a reduced sample space S with parameters θ on B:
///
///     log p(x) = Σ_{s ∈ B, s ⊆ x} θ(s) − ψ(θ),   ψ(θ) = log Σ_{x ∈ S} exp(−E(x; θ)).
///
/// Immutable once built. θ is stored aligned with domain().patterns().
class GibbsModel
{
public:
    /// Uniform model over S (θ ≡ 0).
    GibbsModel(SampleSpace space, ParameterDomain domain);
    GibbsModel(SampleSpace space, ParameterDomain domain, std::vector<double> theta);
    /// `incidence` must have been built for exactly this space and domain.
    GibbsModel(SampleSpace space, ParameterDomain domain, std::vector<double> theta,
               Incidence incidence);

    const SampleSpace& space() const noexcept { return space_; }
    const ParameterDomain& domain() const noexcept { return domain_; }
    const Incidence& incidence() const noexcept { return incidence_; }

    std::span<const double> theta() const noexcept { return theta_; }
    /// Throws std::out_of_range when s ∉ B.
    double theta(const Pattern& s) const;

    double log_partition() const noexcept { return psi_; }

    std::span<const double> probabilities() const noexcept { return probs_; }
    double probability(std::size_t outcome) const { return probs_[outcome]; }
    double log_probability(std::size_t outcome) const { return log_probs_[outcome]; }
    /// Throws DataError when x ∉ S.
    double probability(const Pattern& x) const;

    /// E(x; θ) = −Σ_{s ∈ B, s ⊆ x} θ(s). Throws DataError when x ∉ S.
    double energy(const Pattern& x) const;
    double energy(std::size_t outcome) const { return -weight_[outcome]; }

    /// η(x) = Σ_{s ∈ S, s ⊇ x} p(s), for any pattern x.
    double eta(const Pattern& x) const;
    /// η on every member of B, in domain order.
    std::vector<double> eta_domain() const;

    /// φ = Σ p log p (negative entropy).
    double phi() const;

    /// Same S and B, different θ.
    GibbsModel with_theta(std::vector<double> theta) const;

private:
    void compute();

    SampleSpace space_;
    ParameterDomain domain_;
    std::vector<double> theta_;
    Incidence incidence_;
    std::vector<double> weight_; // Σ_{s ⊆ x} θ(s) = −E(x)
    std::vector<double> log_probs_;
    std::vector<double> probs_;
    double psi_ = 0.0;
};

/// log Σ exp(v) with max shift.
double log_sum_exp(std::span<const double> v);

} // namespace tbm
