#include "support.hpp"

#include <tbm/error.hpp>
#include <tbm/fit.hpp>
#include <tbm/metrics.hpp>
#include <tbm/miner.hpp>

#include <doctest.h>

using namespace tbm;
using doctest::Approx;

TEST_CASE("KL divergence examples")
{
    const auto d = testing::worked_example();
    const EmpiricalDistribution p_hat(d);
    CHECK(kl_divergence(p_hat, [&](const Pattern& x) { return p_hat.probability(x); }) == 0.0);

    const std::vector<double> fitted{0.15, 0.35, 0.15, 0.35};
    const std::vector<Pattern> order{Pattern{}, Pattern{1}, Pattern{2}, Pattern{1, 2}};
    auto p = [&](const Pattern& x) {
        return fitted[std::find(order.begin(), order.end(), x) - order.begin()];
    };
    const double expected = 0.2 * std::log(0.2 / 0.15) + 0.3 * std::log(0.3 / 0.35) +
                            0.1 * std::log(0.1 / 0.15) + 0.4 * std::log(0.4 / 0.35);
    CHECK(kl_divergence(p_hat, p) == Approx(expected).epsilon(1e-12));
    CHECK(kl_divergence(p_hat, p) == Approx(0.02416).epsilon(1e-3));

    const EmpiricalDistribution point(TransactionDataset({{Pattern{1}, 5}}, 2));
    CHECK(kl_divergence(point, [](const Pattern&) { return 0.25; }) == Approx(std::log(4.0)));
    CHECK_THROWS_AS(kl_divergence(point, [](const Pattern&) { return 0.0; }), DataError);

    const std::vector<double> a{0.5, 0.5, 0.0};
    const std::vector<double> b{0.25, 0.25, 0.5};
    CHECK(kl_divergence(a, b) == Approx(std::log(2.0)));
    CHECK_THROWS_AS(kl_divergence(b, a), DataError);
}

TEST_CASE("entropy examples")
{
    const std::vector<double> point{1.0, 0.0};
    CHECK(entropy(point) == 0.0);
    const std::vector<double> uniform(5, 0.2);
    CHECK(entropy(uniform) == Approx(std::log(5.0)));
    const EmpiricalDistribution p_hat(testing::worked_example());
    CHECK(entropy(p_hat) == Approx(1.2799).epsilon(1e-4));
}

TEST_CASE("proxy error")
{
    const auto d = testing::worked_example();
    const EmpiricalDistribution p_hat(d);
    CHECK(reconstruction_error_proxy([](const Pattern&) { return 3.0; }, d) ==
          Approx(std::log(4.0) - entropy(p_hat)));

    const auto r = fit(d, ParameterDomain({Pattern{1}, Pattern{2}}));
    const double proxy =
        reconstruction_error_proxy([&](const Pattern& x) { return r.model.energy(x); }, d);
    CHECK(proxy == Approx(kl_divergence(p_hat, r.model)).epsilon(1e-10));
    CHECK(proxy == Approx(0.02416).epsilon(1e-3));

    CHECK_THROWS_AS(reconstruction_error_proxy([](const Pattern&) { return INFINITY; }, d),
                    DataError);
}

TEST_CASE("evaluation ties KL to the likelihood")
{
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 10; ++rep)
    {
        const auto d = testing::random_dataset(rng, 6, 100, 0.4);
        const auto r = fit(d, mine_parameter_domain(d, 0.1, 2));
        const auto e = evaluate(r.model, d);
        CHECK(e.kl >= -1e-12);
        CHECK(std::abs(e.kl - (-e.log_likelihood / static_cast<double>(d.total()) - e.entropy)) <=
              1e-9);
        CHECK(e.n_eval_patterns == d.unique_count());
    }
}

TEST_CASE("nested domains on the same space")
{
    std::mt19937_64 rng(67);
    for (int rep = 0; rep < 10; ++rep)
    {
        const auto d = testing::random_dataset(rng, 6, 120, 0.4);
        const auto b1 = mine_parameter_domain(d, 0.05, 3);
        const auto b2 = mine_parameter_domain(d, 0.05, 1);
        const auto space = build_sample_space(b1, d);
        const EmpiricalDistribution p_hat(d);
        const auto large = fit_on_space(space, b1, d);
        const auto small = fit_on_space(space, b2, d);
        CHECK(kl_divergence(p_hat, large.model) <= kl_divergence(p_hat, small.model) + 1e-8);
    }
}
