#pragma once

#include <tbm/fit.hpp>
#include <tbm/full_bm.hpp>
#include <tbm/gibbs_model.hpp>
#include <tbm/rbm.hpp>

#include <json.hpp>

#include <optional>
#include <string>

namespace tbm {

inline constexpr int kModelSchema = 1;

nlohmann::json pattern_to_json(const Pattern& p);
Pattern pattern_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const FitReport& r);

nlohmann::json model_to_json(const GibbsModel& m, const FitReport* report = nullptr);
nlohmann::json model_to_json(const FullBMModel& m, const FitReport* report = nullptr);
nlohmann::json model_to_json(const RBMModel& m);

/// Any of the three model kinds, as read back from JSON.
struct StoredModel
{
    std::string kind; ///< "tbm", "bm" or "rbm"
    std::optional<GibbsModel> tbm;
    std::optional<FullBMModel> bm;
    std::optional<RBMModel> rbm;

    double energy(const Pattern& x) const;
};

/// Throws DataError on a missing field, unknown kind or unsupported schema.
StoredModel model_from_json(const nlohmann::json& j);

} // namespace tbm
