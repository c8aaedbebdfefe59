#ifndef DPRED_LABELING_HPP
#define DPRED_LABELING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dpred {

/// Location of the current quench on the 0.2 ms grid: the step with the
/// largest single-step fall of Ip.
struct DisruptionMark {
    long step = 0;              ///< in [1, T)
    double drop_magnitude = 0.0; ///< normalized Ip units per step, > 0
};

inline constexpr double kDefaultMinDrop = 0.05;

/// Largest single-step fall of the (normalized) plasma current. Ties break
/// to the earliest step. Falls below min_drop do not count, so a quiescent
/// shot comes back empty instead of picking up a noise maximum.
std::optional<DisruptionMark> find_disruption(std::span<const double> ip,
                                              double min_drop = kDefaultMinDrop);

/// 0 before the disruption step, 1 from it onward; all zeros without a mark.
std::vector<std::uint8_t> make_label(long steps, const std::optional<DisruptionMark>& mark);

} // namespace dpred

#endif
