#include <tbm/error.hpp>
#include <tbm/model_io.hpp>

namespace tbm {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name)
{
    auto it = j.find(name);
    if (it == j.end())
        throw DataError(std::string("model JSON is missing field '") + name + "'");
    return *it;
}

json parameters_json(const ParameterDomain& b, std::span<const double> theta)
{
    json params = json::array();
    for (std::size_t a = 0; a < b.size(); ++a)
        params.push_back({{"pattern", pattern_to_json(b[a])}, {"theta", theta[a]}});
    return params;
}

void read_parameters(const json& j, std::vector<Pattern>& patterns, std::vector<double>& theta)
{
    for (const auto& p : field(j, "parameters"))
    {
        patterns.push_back(pattern_from_json(field(p, "pattern")));
        theta.push_back(field(p, "theta").get<double>());
    }
}

// The domain constructor sorts canonically; realign θ to that order.
std::vector<double> aligned_theta(const ParameterDomain& b, const std::vector<Pattern>& patterns,
                                  const std::vector<double>& theta)
{
    if (b.size() != patterns.size())
        throw DataError("model JSON lists a parameter pattern twice or the empty pattern");
    std::vector<double> out(b.size());
    for (std::size_t a = 0; a < patterns.size(); ++a)
        out[*b.index_of(patterns[a])] = theta[a];
    return out;
}

json vector_json(const Eigen::VectorXd& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

} // namespace

json pattern_to_json(const Pattern& p)
{
    return json(std::vector<Item>(p.begin(), p.end()));
}

Pattern pattern_from_json(const json& j)
{
    if (!j.is_array())
        throw DataError("pattern must be an array of variable identifiers");
    return Pattern(j.get<std::vector<Item>>());
}

json report_to_json(const FitReport& r)
{
    json removed = json::array();
    for (const auto& p : r.removed_parameters)
        removed.push_back(pattern_to_json(p));
    return {{"iterations", r.iterations},
            {"accepted", r.accepted},
            {"final_gap", r.final_gap},
            {"converged", r.converged},
            {"all_removed", r.all_removed},
            {"removed_parameters", removed},
            {"evaluations", r.evaluations}};
}

json model_to_json(const GibbsModel& m, const FitReport* report)
{
    json space = json::array();
    for (const auto& x : m.space().outcomes())
        space.push_back(pattern_to_json(x));
    json j = {{"schema", kModelSchema},
              {"kind", "tbm"},
              {"sigma", m.domain().sigma()},
              {"k", m.domain().k()},
              {"log_partition", m.log_partition()},
              {"sample_space", space},
              {"parameters", parameters_json(m.domain(), m.theta())}};
    if (report)
        j["report"] = report_to_json(*report);
    return j;
}

json model_to_json(const FullBMModel& m, const FitReport* report)
{
    json j = {{"schema", kModelSchema},
              {"kind", "bm"},
              {"n_variables", m.n_variables()},
              {"log_partition", m.log_partition()},
              {"parameters", parameters_json(m.domain(), m.theta())}};
    if (report)
        j["report"] = report_to_json(*report);
    return j;
}

json model_to_json(const RBMModel& m)
{
    json weights = json::array();
    for (Eigen::Index i = 0; i < m.weights.rows(); ++i)
        weights.push_back(vector_json(m.weights.row(i).transpose()));
    return {{"schema", kModelSchema},
            {"kind", "rbm"},
            {"n_visible", m.n_visible()},
            {"n_hidden", m.n_hidden()},
            {"parameter_count", m.parameter_count()},
            {"visible_bias", vector_json(m.visible_bias)},
            {"hidden_bias", vector_json(m.hidden_bias)},
            {"weights", weights}};
}

double StoredModel::energy(const Pattern& x) const
{
    if (tbm)
        return tbm->energy(x);
    if (bm)
        return bm->energy(x);
    return rbm_free_energy(*rbm, x);
}

StoredModel model_from_json(const json& j)
{
    try
    {
        if (field(j, "schema").get<int>() != kModelSchema)
            throw DataError("unsupported model schema " + field(j, "schema").dump());
        StoredModel out;
        out.kind = field(j, "kind").get<std::string>();
        if (out.kind == "tbm" || out.kind == "bm")
        {
            std::vector<Pattern> patterns;
            std::vector<double> theta;
            read_parameters(j, patterns, theta);
            const double sigma = j.value("sigma", 0.0);
            const unsigned k = j.value("k", 0u);
            ParameterDomain b(patterns, sigma, k);
            auto th = aligned_theta(b, patterns, theta);
            if (out.kind == "tbm")
            {
                std::vector<Pattern> outcomes;
                for (const auto& x : field(j, "sample_space"))
                    outcomes.push_back(pattern_from_json(x));
                SampleSpace space(std::move(outcomes));
                for (const auto& s : b)
                    if (!space.contains(s))
                        throw DataError("parameter " + s.to_string() + " is outside the sample space");
                out.tbm.emplace(std::move(space), std::move(b), std::move(th));
            }
            else
            {
                out.bm.emplace(field(j, "n_variables").get<std::size_t>(), std::move(b),
                               std::move(th));
            }
        }
        else if (out.kind == "rbm")
        {
            const auto n = field(j, "n_visible").get<std::size_t>();
            const auto h = field(j, "n_hidden").get<std::size_t>();
            RBMModel m(n, h);
            const auto vb = field(j, "visible_bias").get<std::vector<double>>();
            const auto hb = field(j, "hidden_bias").get<std::vector<double>>();
            const auto w = field(j, "weights").get<std::vector<std::vector<double>>>();
            if (vb.size() != n || hb.size() != h || w.size() != n)
                throw DataError("RBM dimensions do not match n_visible / n_hidden");
            for (std::size_t i = 0; i < n; ++i)
            {
                m.visible_bias[static_cast<Eigen::Index>(i)] = vb[i];
                if (w[i].size() != h)
                    throw DataError("RBM weight row has the wrong length");
                for (std::size_t c = 0; c < h; ++c)
                    m.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = w[i][c];
            }
            for (std::size_t c = 0; c < h; ++c)
                m.hidden_bias[static_cast<Eigen::Index>(c)] = hb[c];
            out.rbm.emplace(std::move(m));
        }
        else
        {
            throw DataError("unknown model kind '" + out.kind + "'");
        }
        return out;
    }
    catch (const json::exception& e)
    {
        throw DataError(std::string("malformed model JSON: ") + e.what());
    }
}

} // namespace tbm
