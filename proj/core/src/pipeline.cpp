#include "dpred/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "dpred/shot_io.hpp"

namespace dpred {

std::vector<RawShot> load_corpus_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".shot")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<RawShot> shots;
    shots.reserve(files.size());
    for (const auto& f : files) shots.push_back(read_shot_file(f));
    std::sort(shots.begin(), shots.end(),
              [](const RawShot& a, const RawShot& b) { return a.shot_id < b.shot_id; });
    return shots;
}

std::vector<AlignedShot> align_corpus(const std::vector<RawShot>& shots,
                                      DecimationMethod method) {
    std::vector<AlignedShot> aligned;
    aligned.reserve(shots.size());
    for (const auto& shot : shots) aligned.push_back(align_shot(shot, method));
    return aligned;
}

void normalize_and_label(std::vector<AlignedShot>& shots, const NormStats& stats,
                         double min_drop) {
    for (auto& shot : shots) {
        apply_norm(shot, stats);
        std::vector<double> ip(static_cast<std::size_t>(shot.steps));
        for (long t = 0; t < shot.steps; ++t) ip[static_cast<std::size_t>(t)] = shot.at(t, ChannelId::Ip);
        const auto mark = find_disruption(ip, min_drop);
        shot.disruption_step = mark ? std::optional<long>(mark->step) : std::nullopt;
        shot.label = make_label(shot.steps, mark);
    }
}

PreparedCorpus prepare_corpus(const std::vector<RawShot>& shots, const Split& split,
                              DecimationMethod method, double min_drop) {
    PreparedCorpus prepared;
    prepared.shots = align_corpus(shots, method);

    std::set<std::uint32_t> train_ids(split.train.begin(), split.train.end());
    std::vector<AlignedShot> train_shots;
    for (const auto& shot : prepared.shots)
        if (train_ids.count(shot.shot_id)) train_shots.push_back(shot);
    if (train_shots.empty())
        throw std::invalid_argument("prepare_corpus: training split matches no shots");

    prepared.stats = fit_norm(train_shots);
    normalize_and_label(prepared.shots, prepared.stats, min_drop);
    return prepared;
}

std::vector<AlignedShot> select_shots(const std::vector<AlignedShot>& corpus,
                                      const std::vector<std::uint32_t>& ids) {
    std::map<std::uint32_t, const AlignedShot*> by_id;
    for (const auto& shot : corpus) by_id[shot.shot_id] = &shot;
    std::vector<AlignedShot> out;
    out.reserve(ids.size());
    for (auto id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw std::invalid_argument("select_shots: unknown shot id " + std::to_string(id));
        out.push_back(*it->second);
    }
    return out;
}

} // namespace dpred
