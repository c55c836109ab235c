#pragma once

// Shared gradient-ascent driver for exponential families whose sufficient
// statistics are ζ(s, ·), s ∈ B. A backend owns θ and the outcome weights
// Σ_{s ⊆ x} θ(s); the driver owns step selection, acceptance and the guard.
//
// Backend requirements:
//   std::size_t size() const;
//   const std::vector<Pattern>& parameters() const;
//   const std::vector<double>& theta() const;
//   void apply(std::span<const double> mu);     // θ += μ, weights updated
//   double log_partition();
//   void refresh(double psi, std::vector<double>& eta, Eigen::MatrixXd* fisher);
//   void remove(std::size_t i);                   // drops θ_i and its contribution
//   std::uint64_t evaluations() const;

#include <tbm/fit.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace tbm::detail {

template <class Backend>
double objective(const Backend& be, const std::vector<double>& targets, double psi)
{
    const auto& theta = be.theta();
    double s = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
        s += theta[i] * targets[i];
    return s - psi;
}

inline double max_gap(const std::vector<double>& targets, const std::vector<double>& eta)
{
    double g = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i)
        g = std::max(g, std::abs(targets[i] - eta[i]));
    return g;
}

template <class Backend>
FitReport run_moment_fit(Backend& be, std::vector<double> targets, const FitConfig& cfg)
{
    if (!(cfg.epsilon > 0.0) || !(cfg.tolerance > 0.0) || !(cfg.theta_max > 0.0) ||
        !(cfg.max_step > 0.0))
        throw std::invalid_argument("epsilon, tolerance, theta_max and max_step must be positive");
    if (targets.size() != be.size())
        throw std::invalid_argument("one target per parameter required");

    FitReport report;
    const bool initially_nonempty = be.size() > 0;

    // Targets on the boundary of [0, 1] force a zero probability somewhere in S.
    for (std::size_t i = be.size(); i-- > 0;)
    {
        if (divergence_guard(targets[i], be.theta()[i], be.theta()[i], cfg.theta_max) ==
            GuardDecision::remove)
        {
            report.removed_parameters.push_back(be.parameters()[i]);
            be.remove(i);
            targets.erase(targets.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    std::reverse(report.removed_parameters.begin(), report.removed_parameters.end());

    const auto use_newton = [&] {
        return cfg.step == StepRule::newton && be.size() <= cfg.newton_max_parameters;
    };

    std::vector<double> eta(be.size());
    Eigen::MatrixXd fisher;
    double psi = be.log_partition();
    be.refresh(psi, eta, use_newton() ? &fisher : nullptr);
    double ll = objective(be, targets, psi);
    if (cfg.record_trace)
        report.log_likelihood_trace.push_back(ll);

    double eps = cfg.epsilon;
    std::vector<double> previous_abs(be.size());
    for (std::size_t i = 0; i < be.size(); ++i)
        previous_abs[i] = std::abs(be.theta()[i]);

    std::vector<double> mu;
    Eigen::VectorXd grad;
    while (true)
    {
        const std::size_t n = be.size();
        report.final_gap = max_gap(targets, eta);

        grad.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            grad[static_cast<Eigen::Index>(i)] = targets[i] - eta[i];

        Eigen::VectorXd direction = grad;
        bool newton_step = false;
        if (n > 0 && use_newton())
        {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(fisher);
            Eigen::VectorXd solved = ldlt.solve(grad);
            if (ldlt.info() == Eigen::Success && solved.allFinite())
            {
                direction = solved;
                newton_step = true;
            }
        }

        // A target on the boundary of the moment space is matched to any
        // tolerance by ever larger |θ|; the Newton step stays large there.
        const double largest = n > 0 ? direction.cwiseAbs().maxCoeff() : 0.0;
        if (report.final_gap <= cfg.tolerance && (!newton_step || largest <= cfg.step_tolerance))
        {
            report.converged = true;
            break;
        }
        if (report.iterations >= cfg.max_iters || eps < 1e-15 * cfg.epsilon)
            break;

        ++report.iterations;
        const std::uint64_t sweep_start = be.evaluations();
        if (newton_step && largest > cfg.max_step)
            direction *= cfg.max_step / largest;

        mu.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            mu[i] = eps * direction[static_cast<Eigen::Index>(i)];

        be.apply(mu);
        const double trial_psi = be.log_partition();
        const double trial_ll = objective(be, targets, trial_psi);
        const double slack = 1e-12 * (1.0 + std::abs(ll));

        if (!(trial_ll >= ll - slack))
        {
            for (auto& m : mu)
                m = -m;
            be.apply(mu);
            psi = be.log_partition();
            eps *= 0.5;
            report.max_sweep_evaluations =
                std::max(report.max_sweep_evaluations, be.evaluations() - sweep_start);
            continue;
        }

        ++report.accepted;
        psi = trial_psi;
        ll = trial_ll;
        be.refresh(psi, eta, use_newton() ? &fisher : nullptr);
        if (cfg.step == StepRule::newton)
            eps = cfg.epsilon;

        // At most one removal per sweep: the most divergent parameter.
        std::size_t worst = n;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (divergence_guard(targets[i], be.theta()[i], previous_abs[i], cfg.theta_max) ==
                    GuardDecision::remove &&
                (worst == n || std::abs(be.theta()[i]) > std::abs(be.theta()[worst])))
                worst = i;
        }
        if (worst != n)
        {
            report.removed_parameters.push_back(be.parameters()[worst]);
            be.remove(worst);
            targets.erase(targets.begin() + static_cast<std::ptrdiff_t>(worst));
            eta.resize(be.size());
            psi = be.log_partition();
            be.refresh(psi, eta, use_newton() ? &fisher : nullptr);
            ll = objective(be, targets, psi);
        }
        if (cfg.record_trace)
            report.log_likelihood_trace.push_back(ll);

        previous_abs.resize(be.size());
        for (std::size_t i = 0; i < be.size(); ++i)
            previous_abs[i] = std::abs(be.theta()[i]);

        report.max_sweep_evaluations =
            std::max(report.max_sweep_evaluations, be.evaluations() - sweep_start);
    }

    report.all_removed = initially_nonempty && be.size() == 0;
    report.final_epsilon = eps;
    report.evaluations = be.evaluations();
    return report;
}

} // namespace tbm::detail
