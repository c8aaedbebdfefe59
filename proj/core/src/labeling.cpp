#include "dpred/labeling.hpp"

#include <stdexcept>

namespace dpred {

std::optional<DisruptionMark> find_disruption(std::span<const double> ip, double min_drop) {
    if (ip.size() < 2) throw std::invalid_argument("find_disruption: need at least 2 samples");
    if (min_drop < 0.0) throw std::invalid_argument("find_disruption: min_drop must be >= 0");

    long best_step = -1;
    double best_drop = 0.0;
    for (std::size_t t = 1; t < ip.size(); ++t) {
        const double drop = ip[t - 1] - ip[t];
        if (drop > best_drop) { // strict: ties keep the earliest step
            best_drop = drop;
            best_step = static_cast<long>(t);
        }
    }
    if (best_step < 0 || best_drop < min_drop) return std::nullopt;
    return DisruptionMark{best_step, best_drop};
}

std::vector<std::uint8_t> make_label(long steps, const std::optional<DisruptionMark>& mark) {
    if (steps < 0) throw std::invalid_argument("make_label: negative length");
    if (mark && mark->step >= steps)
        throw std::invalid_argument("make_label: disruption step " + std::to_string(mark->step) +
                                    " out of range for length " + std::to_string(steps));
    std::vector<std::uint8_t> label(static_cast<std::size_t>(steps), 0);
    if (mark)
        for (long t = mark->step; t < steps; ++t) label[static_cast<std::size_t>(t)] = 1;
    return label;
}

} // namespace dpred
