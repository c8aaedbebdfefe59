#ifndef DPRED_SYNTH_HPP
#define DPRED_SYNTH_HPP

#include <filesystem>
#include <optional>
#include <vector>

#include "dpred/shot.hpp"

namespace dpred {

/// Generator parameters. The waveforms are phenomenological, not physics:
/// what matters is that the labeler can recover the programmed quench, that
/// precursors build up 10-25 ms ahead of it so a trained model has
/// something to fire on, and that the fast channels carry the rate and
/// clipping artifacts preprocessing has to survive.
struct SynthConfig {
    std::uint64_t seed = 7;
    int n_shots = 119;
    double shot_duration_ms = 100.0;
    double quench_time_min_ms = 30.0; ///< quench time drawn U[min, max] per shot
    double quench_time_max_ms = 40.0;
    double quench_width_ms = 1.0;
    double ip_flat_top = 1.0;
    double precursor_lead_min_ms = 10.0; ///< precursor onset = quench - U[min, max]
    double precursor_lead_max_ms = 25.0;
    double mirnov_growth_rate = 0.4; ///< amplitude e-folding per ms from onset
    double clip_rail = 5.0;          ///< Mirnov16 instrument limit
    double disruptive_fraction = 1.0;
    /// Noise as a fraction of each channel's nominal scale. Ip runs quieter
    /// than the rest so the quench stays the only super-threshold fall.
    std::array<double, kNumChannels> noise_sigma = {0.005, 0.02, 0.02, 0.02, 0.02,
                                                    0.02,  0.02, 0.02, 0.02, 0.02};
};

struct SynthShot {
    RawShot raw;
    std::optional<long> quench_step; ///< ground truth on the 0.2 ms grid
};

void validate_config(const SynthConfig& config);

/// Deterministic in (config.seed, shot_index); shots are seeded
/// independently, so parallel generation equals serial.
SynthShot generate_shot(const SynthConfig& config, int shot_index);

std::vector<SynthShot> generate_corpus(const SynthConfig& config);

/// Writes shot_NNNN.shot files plus manifest.csv
/// (shot_id,quench_step,disruptive; quench_step -1 when non-disruptive).
void write_corpus(const std::vector<SynthShot>& corpus, const std::filesystem::path& dir);

std::string manifest_csv(const std::vector<SynthShot>& corpus);

} // namespace dpred

#endif
