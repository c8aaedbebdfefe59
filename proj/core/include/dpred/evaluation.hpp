#ifndef DPRED_EVALUATION_HPP
#define DPRED_EVALUATION_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dpred/lstm.hpp"
#include "dpred/stream.hpp"
#include "dpred/training.hpp"

namespace dpred {

enum class AlarmClass { FalseAlarm, PrematureAlarm, MissedAlarm, TrueAlarm };

/// How "missed" is read. InsufficientLead (the default) counts any alarm
/// with less than 8 ms of lead — including one that never fires — as
/// missed, since mitigation needs 7-8 ms. Literal counts an alarm as
/// missed only once it is more than 8 ms late.
enum class Taxonomy { InsufficientLead, Literal };

std::string_view alarm_class_name(AlarmClass cls);

/// Buckets one shot's alarm by lead time (disruption minus alarm, positive
/// = early): > 40 ms false, (20, 40] premature, [8, 20] true at the default
/// taxonomy, the rest missed. Total: every input maps to exactly one class.
AlarmClass classify_alarm(std::optional<long> alarm_step, long disruption_step,
                          double dt_ms = kSlowDtMs, Taxonomy taxonomy = Taxonomy::InsufficientLead);

struct AlarmRecord {
    std::uint32_t shot_id = 0;
    std::optional<long> alarm_step;
    long disruption_step = 0;
    double lead_ms = 0.0;
    AlarmClass cls = AlarmClass::MissedAlarm;
};

struct SplitMetrics {
    std::array<long, 4> counts{}; ///< indexed by AlarmClass
    long shots = 0;
    double pointwise_accuracy = 0.0;

    long count(AlarmClass cls) const { return counts[static_cast<int>(cls)]; }
    double fraction(AlarmClass cls) const {
        return shots == 0 ? 0.0 : static_cast<double>(count(cls)) / static_cast<double>(shots);
    }
};

struct EvalReport {
    std::vector<AlarmRecord> records; ///< ordered by shot_id
    SplitMetrics train;
    SplitMetrics test;
};

/// Replays every shot of both splits through the stream engine, classifies
/// the latched alarms and aggregates per split. Shots must carry labels;
/// a shot without a disruption step is an error naming the shot.
/// Evaluation parallelizes across shots when jobs > 1; the aggregation is
/// a deterministic reduction ordered by shot_id.
EvalReport evaluate(const ModelParams& params, const Split& split,
                    const std::vector<AlignedShot>& corpus,
                    double threshold = kDefaultAlarmThreshold,
                    Taxonomy taxonomy = Taxonomy::InsufficientLead, int jobs = 1);

/// Text table in the shape of the usual performance summary.
std::string format_report(const EvalReport& report);

/// CSV: shot_id,alarm_step,disruption_step,lead_ms,class
std::string report_csv(const EvalReport& report);

} // namespace dpred

#endif
