#include "dpred/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

#include "dpred/shot_io.hpp"
#include "dpred/stream.hpp"

namespace dpred {

std::string_view alarm_class_name(AlarmClass cls) {
    switch (cls) {
        case AlarmClass::FalseAlarm: return "false";
        case AlarmClass::PrematureAlarm: return "premature";
        case AlarmClass::MissedAlarm: return "missed";
        case AlarmClass::TrueAlarm: return "true";
    }
    return "?";
}

AlarmClass classify_alarm(std::optional<long> alarm_step, long disruption_step, double dt_ms,
                          Taxonomy taxonomy) {
    if (!alarm_step)
        return AlarmClass::MissedAlarm; // an alarm that never fires cannot be true
    const double lead_ms = static_cast<double>(disruption_step - *alarm_step) * dt_ms;
    if (lead_ms > 40.0) return AlarmClass::FalseAlarm;
    if (lead_ms > 20.0) return AlarmClass::PrematureAlarm;
    if (taxonomy == Taxonomy::InsufficientLead)
        return lead_ms >= 8.0 ? AlarmClass::TrueAlarm : AlarmClass::MissedAlarm;
    return lead_ms > -8.0 ? AlarmClass::TrueAlarm : AlarmClass::MissedAlarm;
}

namespace {

AlarmRecord record_for(const ModelParams& params, const AlignedShot& shot, double threshold,
                       Taxonomy taxonomy, double* accuracy) {
    if (!shot.disruption_step)
        throw std::invalid_argument("evaluate: shot " + std::to_string(shot.shot_id) +
                                    " has no disruption label");
    const ReplayResult replay = replay_aligned(params, shot, threshold);
    AlarmRecord rec;
    rec.shot_id = shot.shot_id;
    rec.alarm_step = replay.alarm_step;
    rec.disruption_step = *shot.disruption_step;
    rec.lead_ms = replay.alarm_step
                      ? static_cast<double>(rec.disruption_step - *replay.alarm_step) * shot.dt_ms
                      : -std::numeric_limits<double>::infinity();
    rec.cls = classify_alarm(replay.alarm_step, rec.disruption_step, shot.dt_ms, taxonomy);
    *accuracy = pointwise_accuracy(replay.y, shot.label, threshold);
    return rec;
}

} // namespace

EvalReport evaluate(const ModelParams& params, const Split& split,
                    const std::vector<AlignedShot>& corpus, double threshold,
                    Taxonomy taxonomy, int jobs) {
    std::map<std::uint32_t, const AlignedShot*> by_id;
    for (const auto& shot : corpus) by_id[shot.shot_id] = &shot;

    struct Task {
        const AlignedShot* shot;
        bool in_train;
    };
    std::vector<Task> tasks;
    for (auto id : split.train) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw std::invalid_argument("evaluate: split names unknown shot " + std::to_string(id));
        tasks.push_back({it->second, true});
    }
    for (auto id : split.test) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw std::invalid_argument("evaluate: split names unknown shot " + std::to_string(id));
        tasks.push_back({it->second, false});
    }
    std::sort(tasks.begin(), tasks.end(),
              [](const Task& a, const Task& b) { return a.shot->shot_id < b.shot->shot_id; });

    std::vector<AlarmRecord> records(tasks.size());
    std::vector<double> accuracies(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                records[i] =
                    record_for(params, *tasks[i].shot, threshold, taxonomy, &accuracies[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const int workers = std::max(1, jobs);
    if (workers == 1 || tasks.size() < 2) {
        run_range(0, tasks.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (tasks.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t lo = static_cast<std::size_t>(w) * chunk;
            if (lo >= tasks.size()) break;
            pool.emplace_back(run_range, lo, std::min(lo + chunk, tasks.size()));
        }
        for (auto& th : pool) th.join();
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    EvalReport report;
    report.records = std::move(records);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        SplitMetrics& m = tasks[i].in_train ? report.train : report.test;
        ++m.counts[static_cast<int>(report.records[i].cls)];
        ++m.shots;
        m.pointwise_accuracy += accuracies[i];
    }
    if (report.train.shots > 0)
        report.train.pointwise_accuracy /= static_cast<double>(report.train.shots);
    if (report.test.shots > 0)
        report.test.pointwise_accuracy /= static_cast<double>(report.test.shots);
    return report;
}

std::string format_report(const EvalReport& report) {
    auto line = [](std::string_view name, const SplitMetrics& train, const SplitMetrics& test,
                   AlarmClass cls) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-16s %3ld/%-3ld (%5.1f%%)   %3ld/%-3ld (%5.1f%%)\n",
                      std::string(name).c_str(), train.count(cls), train.shots,
                      100.0 * train.fraction(cls), test.count(cls), test.shots,
                      100.0 * test.fraction(cls));
        return std::string(buf);
    };
    std::string out;
    out += "                 Training set       Testing set\n";
    out += line("False alarm", report.train, report.test, AlarmClass::FalseAlarm);
    out += line("Premature alarm", report.train, report.test, AlarmClass::PrematureAlarm);
    out += line("Missed alarm", report.train, report.test, AlarmClass::MissedAlarm);
    out += line("True alarm", report.train, report.test, AlarmClass::TrueAlarm);
    char acc[120];
    std::snprintf(acc, sizeof acc, "Pointwise acc    %.4f             %.4f\n",
                  report.train.pointwise_accuracy, report.test.pointwise_accuracy);
    out += acc;
    return out;
}

std::string report_csv(const EvalReport& report) {
    std::string out = "shot_id,alarm_step,disruption_step,lead_ms,class\n";
    for (const auto& rec : report.records) {
        out += std::to_string(rec.shot_id);
        out += ',';
        out += rec.alarm_step ? std::to_string(*rec.alarm_step) : std::string("none");
        out += ',' + std::to_string(rec.disruption_step);
        out += ',';
        out += rec.alarm_step ? format_double(rec.lead_ms) : std::string("none");
        out += ',';
        out += alarm_class_name(rec.cls);
        out += '\n';
    }
    return out;
}

} // namespace dpred
