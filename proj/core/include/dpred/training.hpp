#ifndef DPRED_TRAINING_HPP
#define DPRED_TRAINING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpred/lstm.hpp"

namespace dpred {

enum class Optimizer { SGDMomentum, AdaptiveMoments };

struct TrainConfig {
    int epochs = 200;
    double learning_rate = 1e-3;
    Optimizer optimizer = Optimizer::AdaptiveMoments;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double momentum = 0.9; ///< SGDMomentum only
    double grad_clip_norm = 5.0;
    double pos_weight = 1.0;
    std::uint64_t seed = 0;
    int early_stop_patience = 20; ///< epochs without validation improvement
    int hidden_dim = kDefaultHiddenDim;
};

/// Train/test shot-id partition. Defaults mirror an 83/36 split of 119.
struct Split {
    std::vector<std::uint32_t> train;
    std::vector<std::uint32_t> test;
};

inline constexpr double kDefaultTrainFraction = 83.0 / 119.0;

/// Seed-deterministic shuffled split; train gets round(fraction * N) shots.
Split split_corpus(std::vector<std::uint32_t> shot_ids,
                   double train_fraction = kDefaultTrainFraction, std::uint64_t seed = 0);

/// Mean weighted binary cross-entropy over the sequence:
/// -(pos_weight * label * ln y + (1 - label) * ln(1 - y)), averaged over t.
double shot_loss(std::span<const double> y, std::span<const std::uint8_t> label,
                 double pos_weight = 1.0);

/// Fraction of steps where (y > 0.5) matches the label.
double pointwise_accuracy(std::span<const double> y, std::span<const std::uint8_t> label,
                          double threshold = 0.5);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double train_acc = 0.0;
    double val_acc = 0.0;
};

struct TrainingLog {
    std::vector<EpochStats> epochs;
    int best_epoch = 0;

    /// CSV: epoch,train_loss,val_loss,train_acc,val_acc
    std::string to_csv() const;
};

struct TrainResult {
    ModelParams params;
    TrainingLog log;
};

/// The training loop raises this when the loss turns non-finite.
struct divergence_error : std::runtime_error {
    int epoch;
    std::uint32_t shot_id;
    divergence_error(int ep, std::uint32_t id)
        : std::runtime_error("training diverged (loss not finite) at epoch " +
                             std::to_string(ep) + ", shot " + std::to_string(id)),
          epoch(ep), shot_id(id) {}
};

/// Trains on the given labeled, normalized shots (the training split, in
/// split order: the trailing 10% are held out as the validation set).
/// Per-shot updates with global-norm gradient clipping; returns the
/// parameters of the best validation-loss epoch. `stats` were fitted on
/// the training split and travel inside the returned model.
TrainResult train(const std::vector<AlignedShot>& train_split, const NormStats& stats,
                  const TrainConfig& config);

} // namespace dpred

#endif
