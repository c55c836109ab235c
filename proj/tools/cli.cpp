#include <tbm/compare.hpp>
#include <tbm/error.hpp>
#include <tbm/experiments.hpp>
#include <tbm/fit.hpp>
#include <tbm/full_bm.hpp>
#include <tbm/metrics.hpp>
#include <tbm/miner.hpp>
#include <tbm/model_io.hpp>
#include <tbm/rbm.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

enum ExitCode
{
    kOk = 0,
    kUsage = 2,
    kData = 3,
    kAllRemoved = 4,
};

class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (path == "-")
            return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_)
            throw tbm::DataError("cannot open " + path + " for writing");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string number(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct InputArgs
{
    std::string path;
    bool keep_empty = false;

    void add(CLI::App* app)
    {
        app->add_option("--input,-i", path, "FIMI transaction file")->required();
        app->add_flag("--keep-empty", keep_empty, "Count blank lines as observations of the empty pattern");
    }
    tbm::TransactionDataset load() const
    {
        return tbm::read_fimi_file(path, tbm::ParseOptions{keep_empty});
    }
};

struct DomainArgs
{
    double sigma = 0.1;
    unsigned k = 2;
    std::size_t max_patterns = 10'000'000;

    void add(CLI::App* app)
    {
        app->add_option("--sigma", sigma, "Minimum support in [0, 1]")->check(CLI::Range(0.0, 1.0));
        app->add_option("--k", k, "Maximum pattern cardinality")->check(CLI::PositiveNumber);
        app->add_option("--max-patterns", max_patterns, "Abort mining past this many patterns");
    }
    tbm::ParameterDomain mine(const tbm::TransactionDataset& d) const
    {
        return tbm::mine_parameter_domain(d, sigma, k, {max_patterns});
    }
};

struct FitArgs
{
    tbm::FitConfig cfg;
    std::string step = "newton";
    std::uint64_t seed = 0;

    void add(CLI::App* app)
    {
        app->add_option("--epsilon", cfg.epsilon, "Initial learning rate")->check(CLI::PositiveNumber);
        app->add_option("--tol", cfg.tolerance, "Stop when max |eta_hat - eta| on B is below this")
            ->check(CLI::PositiveNumber);
        app->add_option("--max-iters", cfg.max_iters, "Maximum sweeps");
        app->add_option("--theta-max", cfg.theta_max, "Divergence threshold on |theta|")
            ->check(CLI::PositiveNumber);
        app->add_option("--step", step, "Update rule")->check(CLI::IsMember({"newton", "gradient"}));
        app->add_option("--seed", seed, "Accepted for uniformity; fitting is deterministic");
    }
    tbm::FitConfig config() const
    {
        auto c = cfg;
        c.step = step == "gradient" ? tbm::StepRule::gradient : tbm::StepRule::newton;
        return c;
    }
};

struct RBMArgs
{
    tbm::RBMConfig cfg;

    void add(CLI::App* app)
    {
        app->add_option("--lr", cfg.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
        app->add_option("--updates", cfg.updates, "Parameter updates");
        app->add_option("--chains", cfg.chains, "Persistent chains")->check(CLI::PositiveNumber);
        app->add_option("--seed", cfg.seed, "Random seed");
    }
};

int fit_status(const tbm::FitReport& r)
{
    if (r.all_removed)
    {
        std::cerr << "error: the divergence guard removed every parameter\n";
        return kAllRemoved;
    }
    if (!r.converged)
        std::cerr << "warning: stopped after " << r.iterations
                  << " sweeps with moment gap " << r.final_gap << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Transductive Boltzmann machines: mining, fitting, baselines and experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string out_path = "-";

    // mine
    auto* mine = app.add_subcommand("mine", "Mine the parameter domain B");
    InputArgs mine_in;
    DomainArgs mine_dom;
    mine_in.add(mine);
    mine_dom.add(mine);
    mine->add_option("--out,-o", out_path, "Output path, '-' for stdout");

    // fit-tbm
    auto* fit_tbm = app.add_subcommand("fit-tbm", "Fit a transductive Boltzmann machine");
    InputArgs tbm_in;
    DomainArgs tbm_dom;
    FitArgs tbm_fit;
    tbm_in.add(fit_tbm);
    tbm_dom.add(fit_tbm);
    tbm_fit.add(fit_tbm);
    fit_tbm->add_option("--out,-o", out_path, "Model JSON path, '-' for stdout");

    // fit-bm
    auto* fit_bm = app.add_subcommand("fit-bm", "Fit the exact fully visible Boltzmann machine");
    InputArgs bm_in;
    DomainArgs bm_dom;
    FitArgs bm_fit;
    std::size_t bm_max_vars = tbm::FullBMModel::kMaxVariables;
    bm_in.add(fit_bm);
    bm_dom.add(fit_bm);
    bm_fit.add(fit_bm);
    fit_bm->add_option("--max-variables", bm_max_vars, "Refuse datasets with more variables");
    fit_bm->add_option("--out,-o", out_path, "Model JSON path, '-' for stdout");

    // fit-rbm
    auto* fit_rbm = app.add_subcommand("fit-rbm", "Train an RBM with persistent CD-1");
    InputArgs rbm_in;
    RBMArgs rbm_args;
    std::size_t hidden = 0;
    std::size_t match_params = 0;
    rbm_in.add(fit_rbm);
    rbm_args.add(fit_rbm);
    auto* hidden_opt = fit_rbm->add_option("--hidden", hidden, "Hidden units")->check(CLI::PositiveNumber);
    auto* match_opt = fit_rbm->add_option("--match-params", match_params,
                                          "Choose hidden units to match this many TBM parameters");
    hidden_opt->excludes(match_opt);
    fit_rbm->add_option("--out,-o", out_path, "Model JSON path, '-' for stdout");

    // eval
    auto* eval = app.add_subcommand("eval", "Score a stored model on a dataset");
    std::string model_path;
    InputArgs eval_in;
    eval->add_option("--model,-m", model_path, "Model JSON")->required();
    eval_in.add(eval);
    eval->add_option("--out,-o", out_path, "Output path, '-' for stdout");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    tbm::SynthConfig synth_cfg;
    std::string truth_path;
    synth->add_option("--n-vars", synth_cfg.n_vars, "Number of variables");
    synth->add_option("--support-size", synth_cfg.support_size, "Distinct patterns in the support")
        ->check(CLI::PositiveNumber);
    synth->add_option("--n", synth_cfg.n_samples, "Number of transactions");
    synth->add_option("--seed", synth_cfg.seed, "Random seed");
    synth->add_option("--out,-o", out_path, "FIMI output path, '-' for stdout");
    synth->add_option("--truth", truth_path, "Write the ground-truth support as JSON");

    // biasvar
    auto* biasvar = app.add_subcommand("biasvar", "Bias-variance experiment on a random distribution");
    tbm::BiasVarianceConfig bv;
    double bv_sigma = -1.0;
    std::string summary_path;
    biasvar->add_option("--space-size", bv.space_size, "Random outcomes besides the empty pattern");
    biasvar->add_option("--n-vars", bv.n_vars, "Number of variables");
    biasvar->add_option("--sigma", bv_sigma, "Support threshold; tuned from a pilot sample when omitted")
        ->check(CLI::Range(0.0, 1.0));
    biasvar->add_option("--k", bv.k, "Maximum pattern cardinality")->check(CLI::PositiveNumber);
    biasvar->add_option("--n", bv.n_samples, "Sample size per trial")->check(CLI::PositiveNumber);
    biasvar->add_option("--trials", bv.trials, "Number of trials");
    biasvar->add_option("--seed", bv.seed, "Master seed");
    biasvar->add_option("--min-params", bv.min_params, "Lower end of the tuned |B| range");
    biasvar->add_option("--max-params", bv.max_params, "Upper end of the tuned |B| range");
    biasvar->add_option("--out,-o", out_path, "Per-trial CSV path, '-' for stdout");
    biasvar->add_option("--summary", summary_path, "Write the aggregate report as JSON");

    // compare
    auto* compare = app.add_subcommand("compare", "TBM vs exact BM vs RBM on one dataset");
    InputArgs cmp_in;
    DomainArgs cmp_dom;
    FitArgs cmp_fit;
    tbm::CompareConfig cmp;
    bool no_bm = false;
    bool no_rbm = false;
    std::size_t cmp_hidden = 0;
    std::string format = "json";
    cmp_in.add(compare);
    cmp_dom.add(compare);
    cmp_fit.add(compare);
    compare->add_option("--hidden", cmp_hidden, "RBM hidden units (default: matched to |B|)");
    compare->add_option("--lr", cmp.rbm.learning_rate, "RBM learning rate")->check(CLI::PositiveNumber);
    compare->add_option("--updates", cmp.rbm.updates, "RBM parameter updates");
    compare->add_option("--chains", cmp.rbm.chains, "RBM persistent chains")->check(CLI::PositiveNumber);
    compare->add_flag("--no-bm", no_bm, "Skip the exact BM");
    compare->add_flag("--no-rbm", no_rbm, "Skip the RBM");
    compare->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    compare->add_option("--out,-o", out_path, "Output path, '-' for stdout");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e, std::cerr, std::cerr);
        return kUsage;
    }

    try
    {
        if (*mine)
        {
            const auto d = mine_in.load();
            const auto b = mine_dom.mine(d);
            Output out(out_path);
            json header = {{"sigma", mine_dom.sigma}, {"k", mine_dom.k}, {"n", d.n_variables()},
                           {"N", d.total()}, {"B", b.size()}};
            out.stream() << header.dump() << "\n";
            for (const auto& p : b.lexicographic())
            {
                bool first = true;
                for (auto item : p)
                {
                    out.stream() << (first ? "" : " ") << item;
                    first = false;
                }
                out.stream() << "\n";
            }
            return kOk;
        }
        if (*fit_tbm)
        {
            const auto d = tbm_in.load();
            const auto b = tbm_dom.mine(d);
            const auto r = tbm::fit(d, b, tbm_fit.config());
            Output out(out_path);
            out.stream() << tbm::model_to_json(r.model, &r.report).dump(2) << "\n";
            return fit_status(r.report);
        }
        if (*fit_bm)
        {
            const auto d = bm_in.load();
            const auto b = bm_dom.mine(d);
            const auto r = tbm::fit_full_bm(d, b, bm_fit.config(), bm_max_vars);
            Output out(out_path);
            out.stream() << tbm::model_to_json(r.model, &r.report).dump(2) << "\n";
            return fit_status(r.report);
        }
        if (*fit_rbm)
        {
            const auto d = rbm_in.load();
            std::size_t n_hidden = hidden;
            if (*match_opt)
                n_hidden = tbm::matched_hidden_units(match_params, d.n_variables());
            if (n_hidden == 0)
            {
                std::cerr << "error: pass --hidden or --match-params\n";
                return kUsage;
            }
            const auto m = tbm::fit_rbm_pcd1(d, n_hidden, rbm_args.cfg);
            Output out(out_path);
            out.stream() << tbm::model_to_json(m).dump(2) << "\n";
            return kOk;
        }
        if (*eval)
        {
            std::ifstream in(model_path);
            if (!in)
                throw tbm::DataError("cannot open " + model_path);
            json j;
            try
            {
                j = json::parse(in);
            }
            catch (const json::exception& e)
            {
                throw tbm::DataError(model_path + ": " + e.what());
            }
            const auto model = tbm::model_from_json(j);
            const auto d = eval_in.load();
            const tbm::EmpiricalDistribution p_hat(d);
            json result = {{"kind", model.kind},
                           {"entropy", tbm::entropy(p_hat)},
                           {"proxy_error", tbm::reconstruction_error_proxy(
                                               [&](const tbm::Pattern& x) { return model.energy(x); }, d)},
                           {"n_eval_patterns", d.unique_count()}};
            if (model.tbm)
            {
                result["kl"] = tbm::kl_divergence(p_hat, *model.tbm);
                result["loglik"] = tbm::log_likelihood(*model.tbm, d);
            }
            else if (model.bm)
            {
                if (d.n_variables() > model.bm->n_variables())
                    throw tbm::DataError("dataset uses variables the model does not have");
                double ll = 0.0;
                for (const auto& [x, c] : d.entries())
                    ll += static_cast<double>(c) * model.bm->log_probability(x);
                result["loglik"] = ll;
                result["kl"] = -ll / static_cast<double>(d.total()) - tbm::entropy(p_hat);
            }
            else
            {
                // the RBM partition function is not computed
                result["kl"] = nullptr;
                result["loglik"] = nullptr;
            }
            Output out(out_path);
            out.stream() << result.dump(2) << "\n";
            return kOk;
        }
        if (*synth)
        {
            const auto r = tbm::synth_dataset(synth_cfg);
            Output out(out_path);
            tbm::write_fimi(out.stream(), r.dataset);
            if (!truth_path.empty())
            {
                json support = json::array();
                for (const auto& p : r.support)
                    support.push_back(tbm::pattern_to_json(p));
                json truth = {{"schema", tbm::kModelSchema},
                              {"n_vars", synth_cfg.n_vars},
                              {"support_size", synth_cfg.support_size},
                              {"N", synth_cfg.n_samples},
                              {"seed", synth_cfg.seed},
                              {"support", support}};
                Output t(truth_path);
                t.stream() << truth.dump(2) << "\n";
            }
            return kOk;
        }
        if (*biasvar)
        {
            if (bv_sigma >= 0.0)
                bv.sigma = bv_sigma;
            const auto r = tbm::bias_variance_experiment(bv);
            Output out(out_path);
            out.stream() << "trial,kl_true_to_fit,kl_proj_to_fit,bound\n";
            for (const auto& row : r.rows)
                out.stream() << row.trial << "," << number(row.kl_true_to_fit) << ","
                             << number(row.kl_proj_to_fit) << "," << number(r.lower_bound) << "\n";
            if (!summary_path.empty())
            {
                json s = {{"sigma", r.sigma},
                          {"B", r.domain_size},
                          {"sample_space_size", r.sample_space_size},
                          {"N", r.n_samples},
                          {"trials", r.trials},
                          {"bias", r.bias},
                          {"variance_mean", r.variance_mean},
                          {"variance_std", r.variance_std},
                          {"variance_stderr", r.variance_stderr},
                          {"kl_true_mean", r.kl_true_mean},
                          {"kl_true_stderr", r.kl_true_stderr},
                          {"lower_bound", r.lower_bound},
                          {"decomposition_gap", r.decomposition_gap}};
                Output so(summary_path);
                so.stream() << s.dump(2) << "\n";
            }
            return kOk;
        }
        if (*compare)
        {
            const auto d = cmp_in.load();
            cmp.sigma = cmp_dom.sigma;
            cmp.k = cmp_dom.k;
            cmp.fit = cmp_fit.config();
            cmp.run_bm = !no_bm;
            cmp.run_rbm = !no_rbm;
            cmp.rbm.seed = cmp_fit.seed;
            if (cmp_hidden > 0)
                cmp.hidden = cmp_hidden;
            const auto rows = tbm::compare_methods(d, cmp);
            Output out(out_path);
            if (format == "csv")
            {
                out.stream() << "method,feasible,param_count,proxy_error,wall_time,note\n";
                for (const auto& r : rows)
                    out.stream() << r.method << "," << (r.feasible ? "true" : "false") << ","
                                 << r.param_count << "," << (r.feasible ? number(r.proxy_error) : "")
                                 << "," << number(r.wall_time) << "," << csv_field(r.note) << "\n";
            }
            else
            {
                json arr = json::array();
                for (const auto& r : rows)
                {
                    json row = {{"method", r.method},
                                {"feasible", r.feasible},
                                {"param_count", r.param_count},
                                {"wall_time", r.wall_time},
                                {"note", r.note}};
                    row["proxy_error"] = r.feasible ? json(r.proxy_error) : json(nullptr);
                    arr.push_back(row);
                }
                json doc = {{"schema", tbm::kModelSchema},
                            {"sigma", cmp.sigma},
                            {"k", cmp.k},
                            {"n", d.n_variables()},
                            {"N", d.total()},
                            {"methods", arr}};
                out.stream() << doc.dump(2) << "\n";
            }
            return kOk;
        }
    }
    catch (const tbm::ParseError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    catch (const tbm::DataError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    catch (const tbm::LimitError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}
