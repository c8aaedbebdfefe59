#include "dpred/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpred/rng.hpp"
#include "dpred/shot_io.hpp"

namespace dpred {

Split split_corpus(std::vector<std::uint32_t> shot_ids, double train_fraction,
                   std::uint64_t seed) {
    if (shot_ids.size() < 2)
        throw std::invalid_argument("split_corpus: need at least 2 shots");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split_corpus: train_fraction must lie in (0, 1)");

    Rng rng(mix_seed(seed, 0x5117));
    rng.shuffle(shot_ids);

    const auto n_train = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(shot_ids.size())));
    Split split;
    split.train.assign(shot_ids.begin(), shot_ids.begin() + static_cast<long>(n_train));
    split.test.assign(shot_ids.begin() + static_cast<long>(n_train), shot_ids.end());
    return split;
}

double shot_loss(std::span<const double> y, std::span<const std::uint8_t> label,
                 double pos_weight) {
    if (y.size() != label.size())
        throw std::invalid_argument("shot_loss: y and label lengths differ");
    if (y.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double lab = static_cast<double>(label[t]);
        sum += -(pos_weight * lab * std::log(y[t]) + (1.0 - lab) * std::log(1.0 - y[t]));
    }
    return sum / static_cast<double>(y.size());
}

double pointwise_accuracy(std::span<const double> y, std::span<const std::uint8_t> label,
                          double threshold) {
    if (y.size() != label.size())
        throw std::invalid_argument("pointwise_accuracy: y and label lengths differ");
    if (y.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < y.size(); ++t)
        if ((y[t] > threshold) == (label[t] != 0)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

std::string TrainingLog::to_csv() const {
    std::string out = "epoch,train_loss,val_loss,train_acc,val_acc\n";
    for (const auto& e : epochs) {
        out += std::to_string(e.epoch);
        out += ',' + format_double(e.train_loss);
        out += ',' + format_double(e.val_loss);
        out += ',' + format_double(e.train_acc);
        out += ',' + format_double(e.val_acc);
        out += '\n';
    }
    return out;
}

namespace {

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// BCE evaluated from the head preactivation; identical to shot_loss up to
// rounding but defined even where y rounds to 0 or 1.
double stable_loss(const SeqCache& cache, std::span<const std::uint8_t> label,
                   double pos_weight) {
    if (cache.steps == 0) return 0.0;
    double sum = 0.0;
    for (long t = 0; t < cache.steps; ++t) {
        const double z = cache.z[static_cast<std::size_t>(t)];
        const double lab = static_cast<double>(label[static_cast<std::size_t>(t)]);
        sum += pos_weight * lab * softplus(-z) + (1.0 - lab) * softplus(z);
    }
    return sum / static_cast<double>(cache.steps);
}

double global_norm(const Weights<double>& grad) {
    double sq = 0.0;
    grad.for_each_block([&sq](const std::vector<double>& block) {
        for (double v : block) sq += v * v;
    });
    sq += grad.by * grad.by;
    return std::sqrt(sq);
}

void scale(Weights<double>& grad, double s) {
    grad.for_each_block([s](std::vector<double>& block) {
        for (double& v : block) v *= s;
    });
    grad.by *= s;
}

std::array<std::vector<double>*, 13> blocks(Weights<double>& x) {
    return {&x.wi, &x.wf, &x.wg, &x.wo, &x.ui, &x.uf, &x.ug,
            &x.uo, &x.bi, &x.bf, &x.bg, &x.bo, &x.wy};
}

std::array<const std::vector<double>*, 13> blocks(const Weights<double>& x) {
    return {&x.wi, &x.wf, &x.wg, &x.wo, &x.ui, &x.uf, &x.ug,
            &x.uo, &x.bi, &x.bf, &x.bg, &x.bo, &x.wy};
}

struct AdamState {
    Weights<double> m, v;
    long t = 0;

    explicit AdamState(int hidden) {
        m.resize(hidden);
        v.resize(hidden);
    }
};

void adam_update(Weights<double>& w, const Weights<double>& grad, AdamState& state,
                 const TrainConfig& cfg) {
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    auto update = [&](double& wv, double gv, double& mv, double& vv) {
        mv = cfg.beta1 * mv + (1.0 - cfg.beta1) * gv;
        vv = cfg.beta2 * vv + (1.0 - cfg.beta2) * gv * gv;
        wv -= cfg.learning_rate * (mv / bc1) / (std::sqrt(vv / bc2) + cfg.epsilon);
    };
    auto wb = blocks(w);
    auto mb = blocks(state.m);
    auto vb = blocks(state.v);
    auto gb = blocks(grad);
    for (std::size_t b = 0; b < wb.size(); ++b)
        for (std::size_t k = 0; k < wb[b]->size(); ++k)
            update((*wb[b])[k], (*gb[b])[k], (*mb[b])[k], (*vb[b])[k]);
    update(w.by, grad.by, state.m.by, state.v.by);
}

void sgd_update(Weights<double>& w, const Weights<double>& grad, Weights<double>& velocity,
                const TrainConfig& cfg) {
    auto wb = blocks(w);
    auto vb = blocks(velocity);
    auto gb = blocks(grad);
    for (std::size_t b = 0; b < wb.size(); ++b)
        for (std::size_t k = 0; k < wb[b]->size(); ++k) {
            double& vel = (*vb[b])[k];
            vel = cfg.momentum * vel + (*gb[b])[k];
            (*wb[b])[k] -= cfg.learning_rate * vel;
        }
    velocity.by = cfg.momentum * velocity.by + grad.by;
    w.by -= cfg.learning_rate * velocity.by;
}

} // namespace

TrainResult train(const std::vector<AlignedShot>& train_split, const NormStats& stats,
                  const TrainConfig& config) {
    if (train_split.empty()) throw std::invalid_argument("train: empty training split");
    if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (!(config.learning_rate >= 0.0))
        throw std::invalid_argument("train: learning_rate must be >= 0");
    for (const auto& shot : train_split)
        if (shot.label.size() != static_cast<std::size_t>(shot.steps))
            throw std::invalid_argument("train: shot " + std::to_string(shot.shot_id) +
                                        " has no label series");

    // Trailing 10% of the split order are the validation set.
    const auto n_val = static_cast<std::size_t>(
        std::lround(0.1 * static_cast<double>(train_split.size())));
    const std::size_t n_fit = train_split.size() - n_val;

    ModelParams params = init_params(config.hidden_dim, config.seed);
    params.norm_stats = stats;

    AdamState adam(config.hidden_dim);
    Weights<double> velocity;
    velocity.resize(config.hidden_dim);

    std::vector<std::size_t> order(n_fit);
    for (std::size_t i = 0; i < n_fit; ++i) order[i] = i;

    TrainResult result;
    result.params = params;
    double best_val = std::numeric_limits<double>::infinity();
    int stale_epochs = 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(config.seed, 0x100000ull + static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double train_loss_sum = 0.0;
        double train_acc_sum = 0.0;
        for (std::size_t idx : order) {
            const AlignedShot& shot = train_split[idx];
            SeqCache cache = forward_sequence(params, shot);
            const double loss = stable_loss(cache, shot.label, config.pos_weight);
            if (!std::isfinite(loss)) throw divergence_error(epoch, shot.shot_id);
            train_loss_sum += loss;
            train_acc_sum += pointwise_accuracy(cache.y, shot.label);

            Weights<double> grad = bptt(params, shot.label, cache, config.pos_weight);
            const double norm = global_norm(grad);
            if (config.grad_clip_norm > 0.0 && norm > config.grad_clip_norm)
                scale(grad, config.grad_clip_norm / norm);
            if (config.optimizer == Optimizer::AdaptiveMoments)
                adam_update(params.w, grad, adam, config);
            else
                sgd_update(params.w, grad, velocity, config);
        }

        EpochStats es;
        es.epoch = epoch;
        es.train_loss = train_loss_sum / static_cast<double>(n_fit);
        es.train_acc = train_acc_sum / static_cast<double>(n_fit);

        if (n_val > 0) {
            double val_loss_sum = 0.0;
            double val_acc_sum = 0.0;
            for (std::size_t i = n_fit; i < train_split.size(); ++i) {
                const AlignedShot& shot = train_split[i];
                SeqCache cache = forward_sequence(params, shot);
                const double loss = stable_loss(cache, shot.label, config.pos_weight);
                if (!std::isfinite(loss)) throw divergence_error(epoch, shot.shot_id);
                val_loss_sum += loss;
                val_acc_sum += pointwise_accuracy(cache.y, shot.label);
            }
            es.val_loss = val_loss_sum / static_cast<double>(n_val);
            es.val_acc = val_acc_sum / static_cast<double>(n_val);
        } else {
            es.val_loss = es.train_loss;
            es.val_acc = es.train_acc;
        }
        result.log.epochs.push_back(es);

        if (es.val_loss < best_val) {
            best_val = es.val_loss;
            result.params = params;
            result.log.best_epoch = epoch;
            stale_epochs = 0;
        } else if (++stale_epochs >= config.early_stop_patience) {
            break;
        }
    }
    return result;
}

} // namespace dpred
