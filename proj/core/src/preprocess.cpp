#include "dpred/preprocess.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpred {

ChannelSeries decimate(const ChannelSeries& series, long factor, DecimationMethod method) {
    if (factor < 1) throw std::invalid_argument("decimate: factor must be >= 1");
    if (series.samples.empty()) throw std::invalid_argument("decimate: empty series");

    const long n = static_cast<long>(series.samples.size());
    const long out_len = (n + factor - 1) / factor;

    ChannelSeries out;
    out.channel = series.channel;
    out.dt_ms = series.dt_ms * static_cast<double>(factor);
    out.t0_ms = series.t0_ms;
    out.samples.resize(static_cast<std::size_t>(out_len));

    for (long k = 0; k < out_len; ++k) {
        const long lo = k * factor;
        const long hi = std::min(lo + factor, n);
        double acc = series.samples[static_cast<std::size_t>(lo)];
        switch (method) {
            case DecimationMethod::WindowMax:
                for (long i = lo + 1; i < hi; ++i)
                    acc = std::max(acc, series.samples[static_cast<std::size_t>(i)]);
                break;
            case DecimationMethod::WindowMin:
                for (long i = lo + 1; i < hi; ++i)
                    acc = std::min(acc, series.samples[static_cast<std::size_t>(i)]);
                break;
            case DecimationMethod::WindowAvg:
                for (long i = lo + 1; i < hi; ++i)
                    acc += series.samples[static_cast<std::size_t>(i)];
                acc /= static_cast<double>(hi - lo);
                break;
        }
        out.samples[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

AlignedShot align_shot(const RawShot& shot, DecimationMethod method) {
    auto report = validate_raw_shot(shot);
    if (!report.ok())
        throw std::invalid_argument("align_shot: shot " + std::to_string(shot.shot_id) +
                                    " is not admissible: " + report.violations.front().message);

    double t0_min = std::numeric_limits<double>::infinity();
    double t0_max = -std::numeric_limits<double>::infinity();
    for (const auto& cs : shot.channels) {
        t0_min = std::min(t0_min, cs.t0_ms);
        t0_max = std::max(t0_max, cs.t0_ms);
    }
    if (t0_max - t0_min > kSlowDtMs / 2.0)
        throw std::invalid_argument("align_shot: channel time origins differ by " +
                                    std::to_string(t0_max - t0_min) + " ms (> 0.1 ms)");

    std::array<std::vector<double>, kNumChannels> grids;
    long steps = std::numeric_limits<long>::max();
    for (const auto& cs : shot.channels) {
        const int idx = channel_index(cs.channel);
        if (is_fast_channel(cs.channel))
            grids[idx] = decimate(cs, kDecimationFactor, method).samples;
        else
            grids[idx] = cs.samples;
        steps = std::min(steps, static_cast<long>(grids[idx].size()));
    }

    AlignedShot out;
    out.shot_id = shot.shot_id;
    out.dt_ms = kSlowDtMs;
    out.steps = steps;
    out.values.resize(static_cast<std::size_t>(steps) * kNumChannels);
    for (long t = 0; t < steps; ++t)
        for (int c = 0; c < kNumChannels; ++c)
            out.values[static_cast<std::size_t>(t) * kNumChannels + c] =
                grids[c][static_cast<std::size_t>(t)];
    return out;
}

NormStats fit_norm(const std::vector<AlignedShot>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("fit_norm: empty corpus");

    NormStats stats;
    stats.min.fill(std::numeric_limits<double>::infinity());
    stats.max.fill(-std::numeric_limits<double>::infinity());
    for (const auto& shot : corpus) {
        for (long t = 0; t < shot.steps; ++t) {
            const double* row = shot.row(t);
            for (int c = 0; c < kNumChannels; ++c) {
                stats.min[c] = std::min(stats.min[c], row[c]);
                stats.max[c] = std::max(stats.max[c], row[c]);
            }
        }
    }
    return stats;
}

double normalize_value(double x, const NormStats& stats, int channel) {
    const double range = stats.max[channel] - stats.min[channel];
    if (range == 0.0) return 0.0;
    return (x - stats.min[channel]) / range;
}

void apply_norm(AlignedShot& shot, const NormStats& stats) {
    for (long t = 0; t < shot.steps; ++t)
        for (int c = 0; c < kNumChannels; ++c) {
            auto& v = shot.values[static_cast<std::size_t>(t) * kNumChannels + c];
            v = normalize_value(v, stats, c);
        }
}

ClipReport detect_clipping(const ChannelSeries& series, double flag_threshold) {
    if (series.samples.size() < 2)
        throw std::invalid_argument("detect_clipping: need at least 2 samples");

    ClipReport report;
    report.lo_rail = *std::min_element(series.samples.begin(), series.samples.end());
    report.hi_rail = *std::max_element(series.samples.begin(), series.samples.end());
    long at_rail = 0;
    for (double s : series.samples)
        if (s == report.lo_rail || s == report.hi_rail) ++at_rail;
    report.fraction =
        static_cast<double>(at_rail) / static_cast<double>(series.samples.size());
    report.flagged = report.fraction >= flag_threshold;
    return report;
}

} // namespace dpred
