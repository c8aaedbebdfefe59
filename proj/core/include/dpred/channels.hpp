#ifndef DPRED_CHANNELS_HPP
#define DPRED_CHANNELS_HPP

#include <array>
#include <optional>
#include <string_view>

namespace dpred {

/// The ten diagnostic channels, in canonical order. The enum value of a
/// channel is its column index everywhere: aligned matrices, the shot file
/// format, normalization statistics, and the model input vector.
enum class ChannelId : int {
    Ip = 0,
    Vloop,
    Bolo,
    Mirnov16,
    HXR,
    SXR,
    HAlpha,
    C3,
    Delta,
    O1,
};

inline constexpr int kNumChannels = 10;

inline constexpr std::array<ChannelId, kNumChannels> kAllChannels = {
    ChannelId::Ip,   ChannelId::Vloop, ChannelId::Bolo, ChannelId::Mirnov16,
    ChannelId::HXR,  ChannelId::SXR,   ChannelId::HAlpha, ChannelId::C3,
    ChannelId::Delta, ChannelId::O1,
};

inline constexpr std::array<std::string_view, kNumChannels> kChannelNames = {
    "Ip", "Vloop", "Bolo", "Mirnov16", "HXR", "SXR", "HAlpha", "C3", "Delta", "O1",
};

/// Common grid interval and the fast acquisition interval, in milliseconds.
inline constexpr double kSlowDtMs = 0.2;
inline constexpr double kFastDtMs = 0.008;

/// 0.2 / 0.008: fast channels carry this many samples per slow-grid step.
inline constexpr int kDecimationFactor = 25;

constexpr int channel_index(ChannelId id) { return static_cast<int>(id); }

constexpr std::string_view channel_name(ChannelId id) {
    return kChannelNames[static_cast<int>(id)];
}

/// HXR, SXR and Mirnov16 are acquired at 0.008 ms; everything else at 0.2 ms.
constexpr bool is_fast_channel(ChannelId id) {
    return id == ChannelId::HXR || id == ChannelId::SXR || id == ChannelId::Mirnov16;
}

constexpr double expected_dt_ms(ChannelId id) {
    return is_fast_channel(id) ? kFastDtMs : kSlowDtMs;
}

std::optional<ChannelId> channel_from_name(std::string_view name);

} // namespace dpred

#endif
