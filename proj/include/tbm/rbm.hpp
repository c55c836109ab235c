#pragma once

#include <tbm/dataset.hpp>
#include <tbm/pattern.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace tbm {

/// Binary-binary RBM. Visible unit i is variable i of the dataset universe.
struct RBMModel
{
    RBMModel(std::size_t n_visible, std::size_t n_hidden);

    std::size_t n_visible() const noexcept { return static_cast<std::size_t>(visible_bias.size()); }
    std::size_t n_hidden() const noexcept { return static_cast<std::size_t>(hidden_bias.size()); }
    /// n + n_H + n·n_H
    std::size_t parameter_count() const noexcept;

    Eigen::VectorXd visible_bias; // n
    Eigen::VectorXd hidden_bias;  // n_H
    Eigen::MatrixXd weights;      // n × n_H
};

/// n_H = max(1, ceil((|B| − n) / (n + 1))), so n + n_H + n·n_H tracks |B|.
std::size_t matched_hidden_units(std::size_t domain_size, std::size_t n_visible);

/// F(x) = −Σ_i b_i x_i − Σ_j log(1 + exp(c_j + Σ_i w_ij x_i)).
double rbm_free_energy(const RBMModel& m, const Pattern& x);

/// P(h_j = 1 | x) for every hidden unit.
Eigen::VectorXd hidden_activation(const RBMModel& m, const Pattern& x);

struct RBMConfig
{
    double learning_rate = 0.01;
    std::size_t updates = 10'000;
    std::size_t chains = 100;
    std::uint64_t seed = 0;
    double init_scale = 0.01; ///< std-dev of the initial weights; 0 gives all-zero parameters
};

/// Persistent CD-1 with full-batch positive statistics (over unique patterns,
/// weighted by multiplicity). Each update advances every fantasy chain by one
/// alternating Gibbs sweep v → h → v.
class PCDTrainer
{
public:
    PCDTrainer(const TransactionDataset& d, std::size_t n_hidden, const RBMConfig& cfg);

    void step();
    void train(std::size_t updates);

    const RBMModel& model() const noexcept { return model_; }
    /// chains × n, entries in {0, 1}.
    const Eigen::MatrixXd& chains() const noexcept { return chains_; }
    std::size_t updates_done() const noexcept { return updates_; }

private:
    RBMConfig cfg_;
    RBMModel model_;
    Eigen::MatrixXd data_;    // unique patterns × n
    Eigen::VectorXd weights_; // p̂ of each unique pattern
    Eigen::MatrixXd chains_;
    std::mt19937_64 rng_;
    std::size_t updates_ = 0;
};

RBMModel fit_rbm_pcd1(const TransactionDataset& d, std::size_t n_hidden, const RBMConfig& cfg = {});

} // namespace tbm
