#ifndef DPRED_PREPROCESS_HPP
#define DPRED_PREPROCESS_HPP

#include <array>
#include <vector>

#include "dpred/shot.hpp"

namespace dpred {

/// Window statistic used when decimating a fast channel onto the slow grid.
/// Max is the default: most diagnostics oscillate across zero, so averaging
/// flattens them, and max tracks the envelope best.
enum class DecimationMethod { WindowMax, WindowMin, WindowAvg };

/// Per-channel min/max fitted over a training corpus on the aligned grid.
struct NormStats {
    std::array<double, kNumChannels> min{};
    std::array<double, kNumChannels> max{};

    bool constant(int channel) const { return max[channel] == min[channel]; }
};

struct ClipReport {
    double fraction = 0.0; ///< share of samples sitting on either rail
    double lo_rail = 0.0;
    double hi_rail = 0.0;
    bool flagged = false;
};

/// Reduces consecutive non-overlapping windows of `factor` samples to one
/// output sample each (max, min or mean). The output keeps t0 and has
/// dt_ms scaled by the factor; a short tail window is aggregated over the
/// samples it has. factor 1 is the identity.
ChannelSeries decimate(const ChannelSeries& series, long factor, DecimationMethod method);

/// All channels onto the common 0.2 ms grid: fast channels decimated by 25,
/// slow channels copied, everything truncated to the shortest common length.
/// The shot must be admissible (validate_raw_shot) and the channel time
/// origins must agree to within half a grid step.
AlignedShot align_shot(const RawShot& shot, DecimationMethod method = DecimationMethod::WindowMax);

/// Per-channel extrema over every sample of every shot in the corpus.
NormStats fit_norm(const std::vector<AlignedShot>& corpus);

/// x -> (x - min) / (max - min) per channel. Constant channels map to 0.
/// Out-of-range inputs land outside [0, 1] and are left there.
void apply_norm(AlignedShot& shot, const NormStats& stats);

double normalize_value(double x, const NormStats& stats, int channel);

/// Fraction of samples at the series' own extrema; instruments that clip
/// show a large fraction pinned to the rails.
ClipReport detect_clipping(const ChannelSeries& series, double flag_threshold = 0.05);

} // namespace dpred

#endif
