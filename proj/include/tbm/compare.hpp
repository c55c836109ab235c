#pragma once

#include <tbm/dataset.hpp>
#include <tbm/fit.hpp>
#include <tbm/full_bm.hpp>
#include <tbm/rbm.hpp>

#include <optional>
#include <string>
#include <vector>

namespace tbm {

struct CompareConfig
{
    double sigma = 0.1;
    unsigned k = 2;
    FitConfig fit;
    bool run_bm = true;
    bool run_rbm = true;
    /// Hidden units for the RBM; matched to |B| when absent.
    std::optional<std::size_t> hidden;
    RBMConfig rbm;
    std::size_t bm_max_variables = FullBMModel::kMaxVariables;
};

struct MethodResult
{
    std::string method; ///< "tbm", "bm" or "rbm"
    bool feasible = true;
    std::string note;
    std::size_t param_count = 0;
    double proxy_error = 0.0;
    double wall_time = 0.0; ///< seconds; TBM includes mining
};

/// TBM on (σ, k), the exact BM on the same B, and an RBM with a matched number
/// of parameters, each scored by the proxy-normalized reconstruction error.
std::vector<MethodResult> compare_methods(const TransactionDataset& d, const CompareConfig& cfg);

} // namespace tbm
