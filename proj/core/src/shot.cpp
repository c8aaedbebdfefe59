#include "dpred/shot.hpp"

#include <cmath>

namespace dpred {

std::optional<ChannelId> channel_from_name(std::string_view name) {
    for (int i = 0; i < kNumChannels; ++i)
        if (kChannelNames[i] == name) return static_cast<ChannelId>(i);
    return std::nullopt;
}

ValidationReport validate_raw_shot(const RawShot& shot) {
    ValidationReport report;
    std::array<int, kNumChannels> count{};

    for (const auto& cs : shot.channels) {
        int idx = channel_index(cs.channel);
        ++count[idx];
        std::string name(channel_name(cs.channel));

        if (cs.samples.empty())
            report.violations.push_back({cs.channel, std::nullopt, "empty series on " + name});
        if (!(cs.dt_ms > 0.0)) {
            report.violations.push_back(
                {cs.channel, std::nullopt, "non-positive dt_ms on " + name});
        } else if (cs.dt_ms != expected_dt_ms(cs.channel)) {
            report.violations.push_back(
                {cs.channel, std::nullopt,
                 "wrong rate on " + name + ": dt_ms=" + std::to_string(cs.dt_ms) +
                     ", expected " + std::to_string(expected_dt_ms(cs.channel))});
        }
        if (!std::isfinite(cs.t0_ms))
            report.violations.push_back({cs.channel, std::nullopt, "non-finite t0_ms on " + name});
        for (std::size_t i = 0; i < cs.samples.size(); ++i) {
            if (!std::isfinite(cs.samples[i])) {
                report.violations.push_back({cs.channel, static_cast<long>(i),
                                             "non-finite sample on " + name + " at index " +
                                                 std::to_string(i)});
                break; // one finding per channel is enough to reject it
            }
        }
    }

    for (int i = 0; i < kNumChannels; ++i) {
        std::string name(kChannelNames[i]);
        if (count[i] == 0)
            report.violations.push_back(
                {static_cast<ChannelId>(i), std::nullopt, "missing channel " + name});
        else if (count[i] > 1)
            report.violations.push_back(
                {static_cast<ChannelId>(i), std::nullopt, "duplicate channel " + name});
    }
    return report;
}

} // namespace dpred
