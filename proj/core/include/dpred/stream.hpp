#ifndef DPRED_STREAM_HPP
#define DPRED_STREAM_HPP

#include <optional>
#include <span>
#include <vector>

#include "dpred/lstm.hpp"

namespace dpred {

inline constexpr double kDefaultAlarmThreshold = 0.5;

/// Per-step wall-clock samples around the stream_step call, microseconds.
/// Summaries skip the first 10 steps as warm-up.
struct LatencyStats {
    std::vector<double> samples_us;

    static constexpr std::size_t kWarmupSteps = 10;

    double p50_us() const { return percentile(0.50); }
    double p95_us() const { return percentile(0.95); }
    double max_us() const;
    double percentile(double q) const;
};

/// Live inference state for one shot: the cell, the step counter and the
/// latched alarm. Owned by exactly one consumer; weights are shared
/// read-only across engines.
template <class S>
struct StreamState {
    CellState<S> cell;
    StepScratch<S> scratch;
    std::array<S, kNumChannels> x{};
    long step_index = 0;
    std::optional<long> alarm_step;
    double threshold = kDefaultAlarmThreshold;

    explicit StreamState(int hidden = 0) : cell(hidden), scratch(hidden) {}
};

struct StepOutcome {
    double y = 0.0;
    bool alarm_now = false;
};

template <class S>
StreamState<S> stream_reset(const Weights<S>& weights, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("stream_reset: threshold must lie in (0, 1)");
    StreamState<S> state(weights.hidden);
    state.threshold = threshold;
    return state;
}

inline StreamState<double> stream_reset(const ModelParams& params,
                                        double threshold = kDefaultAlarmThreshold) {
    return stream_reset<double>(params.w, threshold);
}

/// Advances one step on an already-normalized input row. The alarm latches
/// at the first strict threshold crossing and never unsets.
template <class S>
StepOutcome stream_step_normalized(StreamState<S>& state, const Weights<S>& weights,
                                   std::span<const S> x_norm) {
    const double y = static_cast<double>(lstm_step<S>(weights, x_norm, state.cell, state.scratch));
    StepOutcome out;
    out.y = y;
    if (!state.alarm_step && y > state.threshold) {
        state.alarm_step = state.step_index;
        out.alarm_now = true;
    }
    ++state.step_index;
    return out;
}

/// Raw-input step: normalizes with the stats stored in the model, so a
/// deployment is one weight file plus this call. Throws on non-finite
/// input, leaving the state untouched.
template <class S>
StepOutcome stream_step(StreamState<S>& state, const Weights<S>& weights,
                        const NormStats& stats, std::span<const double> x_raw) {
    if (x_raw.size() != static_cast<std::size_t>(kNumChannels))
        throw std::invalid_argument("stream_step: input must have 10 entries");
    for (double v : x_raw)
        if (!std::isfinite(v)) throw std::invalid_argument("stream_step: non-finite input");
    for (int c = 0; c < kNumChannels; ++c)
        state.x[c] = static_cast<S>(normalize_value(x_raw[c], stats, c));
    return stream_step_normalized<S>(state, weights, {state.x.data(), state.x.size()});
}

inline StepOutcome stream_step(StreamState<double>& state, const ModelParams& params,
                               std::span<const double> x_raw) {
    return stream_step<double>(state, params.w, params.norm_stats, x_raw);
}

struct ReplayResult {
    std::optional<long> alarm_step;
    std::vector<double> y;
    LatencyStats latency;
};

/// Streams a raw shot: aligns the fast channels onto the 0.2 ms grid, then
/// feeds one raw row per tick through stream_step. Latency is measured
/// around the step call only.
ReplayResult replay_shot(const ModelParams& params, const RawShot& shot,
                         double threshold = kDefaultAlarmThreshold,
                         DecimationMethod method = DecimationMethod::WindowMax);

/// Streams an already-normalized aligned shot. The y series is bit-identical
/// to forward_sequence on the same shot.
ReplayResult replay_aligned(const ModelParams& params, const AlignedShot& shot,
                            double threshold = kDefaultAlarmThreshold);

/// Single-precision replay of an aligned (normalized) shot; the engine's
/// deployment mode. f32 vs f64 probabilities agree to ~1e-4 for trained
/// models, which stream_equivalence_gap measures.
ReplayResult replay_aligned_f32(const Weights<float>& weights, const AlignedShot& shot,
                                double threshold = kDefaultAlarmThreshold);

/// max |y_f32 - y_f64| over a corpus; the documented check that licenses
/// running the deployed engine in single precision.
double stream_equivalence_gap(const ModelParams& params,
                              const std::vector<AlignedShot>& corpus);

} // namespace dpred

#endif
