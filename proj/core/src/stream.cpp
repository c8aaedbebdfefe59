#include "dpred/stream.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace dpred {

double LatencyStats::percentile(double q) const {
    if (samples_us.empty()) throw std::invalid_argument("LatencyStats: no samples");
    std::vector<double> kept(samples_us.begin() +
                                 static_cast<long>(std::min(kWarmupSteps, samples_us.size() - 1)),
                             samples_us.end());
    std::sort(kept.begin(), kept.end());
    const double rank = q * static_cast<double>(kept.size() - 1);
    const auto lo = static_cast<std::size_t>(rank);
    const auto hi = std::min(lo + 1, kept.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return kept[lo] + (kept[hi] - kept[lo]) * frac;
}

double LatencyStats::max_us() const {
    if (samples_us.empty()) throw std::invalid_argument("LatencyStats: no samples");
    const auto first = std::min(kWarmupSteps, samples_us.size() - 1);
    return *std::max_element(samples_us.begin() + static_cast<long>(first), samples_us.end());
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::micro>(b - a).count();
}

template <class S, class StepFn>
ReplayResult replay_rows(int hidden, long steps, double threshold, StepFn&& step_row) {
    StreamState<S> state(hidden);
    state.threshold = threshold;
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("replay: threshold must lie in (0, 1)");

    ReplayResult result;
    result.y.resize(static_cast<std::size_t>(steps));
    result.latency.samples_us.reserve(static_cast<std::size_t>(steps));
    for (long t = 0; t < steps; ++t) {
        const auto start = Clock::now();
        const StepOutcome out = step_row(state, t);
        const auto stop = Clock::now();
        result.y[static_cast<std::size_t>(t)] = out.y;
        result.latency.samples_us.push_back(elapsed_us(start, stop));
    }
    result.alarm_step = state.alarm_step;
    return result;
}

} // namespace

ReplayResult replay_shot(const ModelParams& params, const RawShot& shot, double threshold,
                         DecimationMethod method) {
    const AlignedShot aligned = align_shot(shot, method);
    return replay_rows<double>(
        params.w.hidden, aligned.steps, threshold,
        [&](StreamState<double>& state, long t) {
            return stream_step<double>(state, params.w, params.norm_stats,
                                       {aligned.row(t), kNumChannels});
        });
}

ReplayResult replay_aligned(const ModelParams& params, const AlignedShot& shot,
                            double threshold) {
    return replay_rows<double>(
        params.w.hidden, shot.steps, threshold, [&](StreamState<double>& state, long t) {
            return stream_step_normalized<double>(state, params.w, {shot.row(t), kNumChannels});
        });
}

ReplayResult replay_aligned_f32(const Weights<float>& weights, const AlignedShot& shot,
                                double threshold) {
    return replay_rows<float>(
        weights.hidden, shot.steps, threshold, [&](StreamState<float>& state, long t) {
            const double* row = shot.row(t);
            for (int c = 0; c < kNumChannels; ++c) state.x[c] = static_cast<float>(row[c]);
            return stream_step_normalized<float>(state, weights,
                                                 {state.x.data(), state.x.size()});
        });
}

double stream_equivalence_gap(const ModelParams& params,
                              const std::vector<AlignedShot>& corpus) {
    const Weights<float> wf = cast_weights<float>(params.w);
    double gap = 0.0;
    for (const auto& shot : corpus) {
        const ReplayResult r64 = replay_aligned(params, shot);
        const ReplayResult r32 = replay_aligned_f32(wf, shot);
        for (long t = 0; t < shot.steps; ++t) {
            gap = std::max(gap, std::abs(r64.y[static_cast<std::size_t>(t)] -
                                         r32.y[static_cast<std::size_t>(t)]));
        }
    }
    return gap;
}

} // namespace dpred
