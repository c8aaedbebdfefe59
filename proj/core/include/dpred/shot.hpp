#ifndef DPRED_SHOT_HPP
#define DPRED_SHOT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpred/channels.hpp"

namespace dpred {

/// One diagnostic trace at its native sampling rate.
struct ChannelSeries {
    ChannelId channel = ChannelId::Ip;
    double dt_ms = kSlowDtMs; ///< sampling interval, > 0
    double t0_ms = 0.0;       ///< time of the first sample
    std::vector<double> samples;
};

/// A shot as acquired: one series per channel, rates still mixed.
/// Channel presence and rates are checked by validate_raw_shot, not by the
/// constructor, so that ingestion can report every problem at once.
struct RawShot {
    std::uint32_t shot_id = 0;
    std::vector<ChannelSeries> channels;

    const ChannelSeries* find(ChannelId id) const {
        for (const auto& cs : channels)
            if (cs.channel == id) return &cs;
        return nullptr;
    }
};

/// All channels on the common 0.2 ms grid. `values` is row-major T x 10 in
/// ChannelId order. Values are raw after align_shot and in normalized units
/// after apply_norm; out-of-corpus inputs may fall outside [0, 1] and are
/// never clamped.
struct AlignedShot {
    std::uint32_t shot_id = 0;
    double dt_ms = kSlowDtMs;
    long steps = 0;
    std::vector<double> values;      ///< steps * kNumChannels, row-major
    std::vector<std::uint8_t> label; ///< 0 before disruption, 1 from it on
    std::optional<long> disruption_step;

    double at(long t, ChannelId c) const {
        return values[static_cast<std::size_t>(t) * kNumChannels + channel_index(c)];
    }
    double& at(long t, ChannelId c) {
        return values[static_cast<std::size_t>(t) * kNumChannels + channel_index(c)];
    }
    const double* row(long t) const {
        return values.data() + static_cast<std::size_t>(t) * kNumChannels;
    }
};

/// One admissibility finding. Validation never throws; it reports.
struct Violation {
    std::optional<ChannelId> channel;
    std::optional<long> sample_index;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks a raw shot against the ingestion contract: all ten channels present
/// exactly once, fast channels at 0.008 ms and the rest at 0.2 ms, non-empty
/// series, every sample finite. An empty report means the shot is admissible.
ValidationReport validate_raw_shot(const RawShot& shot);

} // namespace dpred

#endif
