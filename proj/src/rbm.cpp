#include <tbm/error.hpp>
#include <tbm/rbm.hpp>

#include <cmath>
#include <stdexcept>

namespace tbm {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z)
{
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::VectorXd dense(const Pattern& x, std::size_t n)
{
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Item i : x)
    {
        if (i >= n)
            throw DataError("variable " + std::to_string(i) + " outside " + std::to_string(n) +
                            " visible units");
        v[i] = 1.0;
    }
    return v;
}

void sample_bernoulli(Eigen::MatrixXd& probs, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Eigen::Index c = 0; c < probs.cols(); ++c)
        for (Eigen::Index r = 0; r < probs.rows(); ++r)
            probs(r, c) = u(rng) < probs(r, c) ? 1.0 : 0.0;
}

} // namespace

RBMModel::RBMModel(std::size_t n_visible, std::size_t n_hidden)
    : visible_bias(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_visible))),
      hidden_bias(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_hidden))),
      weights(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_visible),
                                    static_cast<Eigen::Index>(n_hidden)))
{
}

std::size_t RBMModel::parameter_count() const noexcept
{
    return n_visible() + n_hidden() + n_visible() * n_hidden();
}

std::size_t matched_hidden_units(std::size_t domain_size, std::size_t n_visible)
{
    if (domain_size <= n_visible)
        return 1;
    const std::size_t excess = domain_size - n_visible;
    return std::max<std::size_t>(1, (excess + n_visible) / (n_visible + 1));
}

double rbm_free_energy(const RBMModel& m, const Pattern& x)
{
    const Eigen::VectorXd v = dense(x, m.n_visible());
    const Eigen::VectorXd z = m.hidden_bias + m.weights.transpose() * v;
    double f = -m.visible_bias.dot(v);
    for (Eigen::Index j = 0; j < z.size(); ++j)
        f -= softplus(z[j]);
    return f;
}

Eigen::VectorXd hidden_activation(const RBMModel& m, const Pattern& x)
{
    const Eigen::VectorXd v = dense(x, m.n_visible());
    return sigmoid(m.hidden_bias + m.weights.transpose() * v);
}

PCDTrainer::PCDTrainer(const TransactionDataset& d, std::size_t n_hidden, const RBMConfig& cfg)
    : cfg_(cfg), model_(d.n_variables(), n_hidden), rng_(cfg.seed)
{
    if (n_hidden < 1)
        throw std::invalid_argument("an RBM needs at least one hidden unit");
    if (cfg.chains < 1)
        throw std::invalid_argument("at least one persistent chain is required");
    if (d.total() == 0)
        throw DataError("cannot fit an empty dataset");

    const auto n = static_cast<Eigen::Index>(d.n_variables());
    data_.setZero(static_cast<Eigen::Index>(d.unique_count()), n);
    weights_.resize(static_cast<Eigen::Index>(d.unique_count()));
    Eigen::Index row = 0;
    std::vector<double> probs;
    for (const auto& [x, count] : d.entries())
    {
        for (Item i : x)
            data_(row, i) = 1.0;
        weights_[row] = static_cast<double>(count) / static_cast<double>(d.total());
        probs.push_back(weights_[row]);
        ++row;
    }

    if (cfg.init_scale > 0.0)
    {
        std::normal_distribution<double> normal(0.0, cfg.init_scale);
        for (Eigen::Index j = 0; j < model_.weights.cols(); ++j)
            for (Eigen::Index i = 0; i < model_.weights.rows(); ++i)
                model_.weights(i, j) = normal(rng_);
    }

    // Chains start at training patterns drawn from p̂.
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    chains_.resize(static_cast<Eigen::Index>(cfg.chains), n);
    for (Eigen::Index c = 0; c < chains_.rows(); ++c)
        chains_.row(c) = data_.row(static_cast<Eigen::Index>(pick(rng_)));
}

void PCDTrainer::step()
{
    const auto& W = model_.weights;
    const auto& b = model_.visible_bias;
    const auto& c = model_.hidden_bias;

    // Positive phase, exact over the empirical distribution.
    Eigen::MatrixXd h_data = sigmoid((data_ * W).rowwise() + c.transpose());
    Eigen::MatrixXd pos_w = data_.transpose() * weights_.asDiagonal() * h_data;
    Eigen::VectorXd pos_b = data_.transpose() * weights_;
    Eigen::VectorXd pos_c = h_data.transpose() * weights_;

    // Negative phase: one alternating Gibbs sweep of every persistent chain.
    Eigen::MatrixXd h = sigmoid((chains_ * W).rowwise() + c.transpose());
    sample_bernoulli(h, rng_);
    Eigen::MatrixXd v = sigmoid((h * W.transpose()).rowwise() + b.transpose());
    sample_bernoulli(v, rng_);
    chains_ = std::move(v);
    Eigen::MatrixXd h_model = sigmoid((chains_ * W).rowwise() + c.transpose());

    const double m = static_cast<double>(chains_.rows());
    Eigen::MatrixXd neg_w = chains_.transpose() * h_model / m;
    Eigen::VectorXd neg_b = chains_.colwise().mean().transpose();
    Eigen::VectorXd neg_c = h_model.colwise().mean().transpose();

    const double lr = cfg_.learning_rate;
    model_.weights += lr * (pos_w - neg_w);
    model_.visible_bias += lr * (pos_b - neg_b);
    model_.hidden_bias += lr * (pos_c - neg_c);
    ++updates_;
}

void PCDTrainer::train(std::size_t updates)
{
    for (std::size_t i = 0; i < updates; ++i)
        step();
}

RBMModel fit_rbm_pcd1(const TransactionDataset& d, std::size_t n_hidden, const RBMConfig& cfg)
{
    PCDTrainer trainer(d, n_hidden, cfg);
    trainer.train(cfg.updates);
    return trainer.model();
}

} // namespace tbm
