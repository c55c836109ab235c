#include <tbm/compare.hpp>
#include <tbm/error.hpp>
#include <tbm/metrics.hpp>
#include <tbm/miner.hpp>

#include <chrono>

namespace tbm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

std::vector<MethodResult> compare_methods(const TransactionDataset& d, const CompareConfig& cfg)
{
    if (d.empty())
        throw DataError("empty dataset");
    std::vector<MethodResult> rows;

    auto start = Clock::now();
    const ParameterDomain b = mine_parameter_domain(d, cfg.sigma, cfg.k);
    const FitResult tbm_fit = fit(d, b, cfg.fit);
    MethodResult tbm_row;
    tbm_row.method = "tbm";
    tbm_row.wall_time = seconds_since(start);
    tbm_row.param_count = b.size();
    const GibbsModel& m = tbm_fit.model;
    tbm_row.proxy_error =
        reconstruction_error_proxy([&](const Pattern& x) { return m.energy(x); }, d);
    if (!tbm_fit.report.removed_parameters.empty())
        tbm_row.note = std::to_string(tbm_fit.report.removed_parameters.size()) +
                       " parameters removed by the divergence guard";
    rows.push_back(tbm_row);

    if (cfg.run_bm)
    {
        MethodResult bm_row;
        bm_row.method = "bm";
        bm_row.param_count = b.size();
        if (d.n_variables() > cfg.bm_max_variables)
        {
            bm_row.feasible = false;
            bm_row.note = "n = " + std::to_string(d.n_variables()) +
                          " exceeds the exact enumeration limit of " +
                          std::to_string(cfg.bm_max_variables) + " variables";
        }
        else
        {
            start = Clock::now();
            const FullBMResult bm = fit_full_bm(d, b, cfg.fit, cfg.bm_max_variables);
            bm_row.wall_time = seconds_since(start);
            const FullBMModel& bm_model = bm.model;
            bm_row.proxy_error = reconstruction_error_proxy(
                [&](const Pattern& x) { return bm_model.energy(x); }, d);
        }
        rows.push_back(bm_row);
    }

    if (cfg.run_rbm)
    {
        MethodResult rbm_row;
        rbm_row.method = "rbm";
        const std::size_t hidden =
            cfg.hidden ? *cfg.hidden : matched_hidden_units(b.size(), d.n_variables());
        start = Clock::now();
        const RBMModel rbm = fit_rbm_pcd1(d, hidden, cfg.rbm);
        rbm_row.wall_time = seconds_since(start);
        rbm_row.param_count = rbm.parameter_count();
        rbm_row.proxy_error = reconstruction_error_proxy(
            [&](const Pattern& x) { return rbm_free_energy(rbm, x); }, d);
        rows.push_back(rbm_row);
    }
    return rows;
}

} // namespace tbm
