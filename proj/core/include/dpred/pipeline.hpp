#ifndef DPRED_PIPELINE_HPP
#define DPRED_PIPELINE_HPP

#include <filesystem>
#include <vector>

#include "dpred/labeling.hpp"
#include "dpred/preprocess.hpp"
#include "dpred/shot.hpp"
#include "dpred/training.hpp"

namespace dpred {

/// Reads every *.shot file in a directory, ordered by shot_id.
std::vector<RawShot> load_corpus_dir(const std::filesystem::path& dir);

/// Aligns a raw corpus onto the 0.2 ms grid (no normalization, no labels).
std::vector<AlignedShot> align_corpus(const std::vector<RawShot>& shots,
                                      DecimationMethod method = DecimationMethod::WindowMax);

/// Normalizes in place and derives labels from the normalized Ip trace.
void normalize_and_label(std::vector<AlignedShot>& shots, const NormStats& stats,
                         double min_drop = kDefaultMinDrop);

/// The full preparation for one experiment: align everything, fit the
/// normalization on the training split only, then normalize and label the
/// whole corpus with those statistics.
struct PreparedCorpus {
    std::vector<AlignedShot> shots; ///< ordered like the input
    NormStats stats;
};

PreparedCorpus prepare_corpus(const std::vector<RawShot>& shots, const Split& split,
                              DecimationMethod method = DecimationMethod::WindowMax,
                              double min_drop = kDefaultMinDrop);

/// Shots of `corpus` whose ids are in `ids`, in id order.
std::vector<AlignedShot> select_shots(const std::vector<AlignedShot>& corpus,
                                      const std::vector<std::uint32_t>& ids);

} // namespace dpred

#endif
