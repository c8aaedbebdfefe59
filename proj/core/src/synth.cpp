#include "dpred/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dpred/rng.hpp"
#include "dpred/shot_io.hpp"

namespace dpred {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double ramp01(double x) { return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x); }

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double gauss_bump(double t, double center, double width) {
    const double u = (t - center) / width;
    return std::exp(-0.5 * u * u);
}

// Per-shot waveform recipe, fixed once the shot-level draws are made.
struct ShotPlan {
    bool disruptive = false;
    double tq = 0.0;       // quench time, ms
    double ps = 0.0;       // precursor onset, ms
    double sag_depth = 0.0;
    double mirnov_a0 = 0.0;
    double mirnov_freq = 0.0; // cycles per ms
    double phase = 0.0;
    double vloop_spike = 0.0;
    double bolo_spike = 0.0;
};

ShotPlan plan_shot(const SynthConfig& cfg, int index) {
    const std::uint64_t shot_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(index));
    Rng rng(mix_seed(shot_seed, 0));

    ShotPlan plan;
    // Bresenham spread of the disruptive share across indices.
    const double f = cfg.disruptive_fraction;
    plan.disruptive = std::llround((index + 1) * f) - std::llround(index * f) >= 1;

    plan.tq = rng.uniform(cfg.quench_time_min_ms, cfg.quench_time_max_ms);
    plan.ps = plan.tq - rng.uniform(cfg.precursor_lead_min_ms, cfg.precursor_lead_max_ms);
    plan.sag_depth = 0.25 + 0.05 * rng.uniform(-1.0, 1.0);
    plan.mirnov_a0 = 0.3 * (1.0 + 0.15 * rng.uniform(-1.0, 1.0));
    plan.mirnov_freq = rng.uniform(10.0, 15.0); // 10-15 kHz
    plan.phase = rng.uniform(0.0, kTwoPi);
    plan.vloop_spike = 2.5 + 0.5 * rng.uniform(-1.0, 1.0);
    plan.bolo_spike = 1.2 + 0.3 * rng.uniform(-1.0, 1.0);
    return plan;
}

// Pre-quench sag of the plasma current: the soft degradation phase before
// the fast collapse. Linear over the 12 ms leading into the quench.
double ip_sag(const ShotPlan& p, double t) {
    if (!p.disruptive) return 1.0;
    return 1.0 - p.sag_depth * ramp01((t - (p.tq - 12.0)) / 12.0);
}

double quench_factor(const ShotPlan& p, double quench_width, double t) {
    if (!p.disruptive) return 1.0;
    return logistic((p.tq - t) / (quench_width / 6.0));
}

// 0 -> 1 between the precursor onset and the quench.
double pregrow(const ShotPlan& p, double t) {
    if (!p.disruptive) return 0.0;
    return ramp01((t - p.ps) / (p.tq - p.ps));
}

// 0 -> 1 over the `span` ms leading into the quench.
double quench_locked_ramp(const ShotPlan& p, double span, double t) {
    if (!p.disruptive) return 0.0;
    return ramp01((t - (p.tq - span)) / span);
}

} // namespace

void validate_config(const SynthConfig& cfg) {
    auto bad = [](const std::string& what) {
        throw std::invalid_argument("synth: " + what);
    };
    if (cfg.n_shots < 1) bad("n_shots must be >= 1");
    if (!(cfg.shot_duration_ms > 0.0)) bad("shot_duration_ms must be positive");
    if (!(cfg.quench_width_ms > 0.0)) bad("quench_width_ms must be positive");
    if (!(cfg.ip_flat_top > 0.0)) bad("ip_flat_top must be positive");
    if (!(cfg.quench_time_min_ms > 0.0) || cfg.quench_time_max_ms < cfg.quench_time_min_ms)
        bad("quench time window is inverted or non-positive");
    if (cfg.quench_time_max_ms + 3.0 * cfg.quench_width_ms >= cfg.shot_duration_ms)
        bad("quench must complete within the shot: quench_time + 3*quench_width < duration");
    if (!(cfg.precursor_lead_min_ms > 0.0) ||
        cfg.precursor_lead_max_ms < cfg.precursor_lead_min_ms)
        bad("precursor lead window is inverted or non-positive");
    if (!(cfg.mirnov_growth_rate > 0.0)) bad("mirnov_growth_rate must be positive");
    if (!(cfg.clip_rail > 0.0)) bad("clip_rail must be positive");
    if (cfg.disruptive_fraction < 0.0 || cfg.disruptive_fraction > 1.0)
        bad("disruptive_fraction must lie in [0, 1]");
    for (double s : cfg.noise_sigma)
        if (s < 0.0) bad("noise_sigma must be >= 0");
}

SynthShot generate_shot(const SynthConfig& cfg, int shot_index) {
    validate_config(cfg);
    if (shot_index < 0) throw std::invalid_argument("synth: negative shot index");

    const ShotPlan plan = plan_shot(cfg, shot_index);
    const std::uint64_t shot_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(shot_index));

    const long n_slow = std::llround(cfg.shot_duration_ms / kSlowDtMs);
    const long n_fast = n_slow * kDecimationFactor;

    SynthShot out;
    out.raw.shot_id = static_cast<std::uint32_t>(shot_index);
    if (plan.disruptive) out.quench_step = std::llround(plan.tq / kSlowDtMs);

    // Nominal scale per channel; noise_sigma is a fraction of this.
    const std::array<double, kNumChannels> scale = {
        cfg.ip_flat_top, 1.0, 1.0, cfg.clip_rail, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

    auto channel_rng = [&](ChannelId id) {
        return Rng(mix_seed(shot_seed, 100 + static_cast<std::uint64_t>(channel_index(id))));
    };
    auto make_series = [&](ChannelId id) {
        ChannelSeries cs;
        cs.channel = id;
        cs.dt_ms = expected_dt_ms(id);
        cs.t0_ms = 0.0;
        cs.samples.resize(static_cast<std::size_t>(is_fast_channel(id) ? n_fast : n_slow));
        return cs;
    };

    for (ChannelId id : kAllChannels) {
        ChannelSeries cs = make_series(id);
        Rng rng = channel_rng(id);
        const double sigma = cfg.noise_sigma[channel_index(id)] * scale[channel_index(id)];

        const long n = static_cast<long>(cs.samples.size());
        for (long k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) * cs.dt_ms;
            double v = 0.0;
            switch (id) {
                case ChannelId::Ip:
                    v = cfg.ip_flat_top * ramp01(t / 10.0) * ip_sag(plan, t) *
                        quench_factor(plan, cfg.quench_width_ms, t);
                    break;
                case ChannelId::Vloop:
                    v = 1.0 + 0.3 * pregrow(plan, t);
                    if (plan.disruptive) v += plan.vloop_spike * gauss_bump(t, plan.tq, 0.7);
                    break;
                case ChannelId::Bolo:
                    v = 0.8 + 0.3 * pregrow(plan, t) - 0.5 * (1.0 - quench_factor(plan, cfg.quench_width_ms, t));
                    if (plan.disruptive) v += plan.bolo_spike * gauss_bump(t, plan.tq, 1.0);
                    break;
                case ChannelId::Mirnov16: {
                    double amp = plan.mirnov_a0;
                    if (plan.disruptive) {
                        const double grown = std::min(t, plan.tq) - plan.ps;
                        if (grown > 0.0) amp *= std::exp(cfg.mirnov_growth_rate * grown);
                        if (t > plan.tq) amp *= std::exp(-(t - plan.tq) / 1.5);
                    }
                    v = amp * std::sin(kTwoPi * plan.mirnov_freq * t + plan.phase);
                    break;
                }
                case ChannelId::HXR: {
                    // bursty positive noise whose rate climbs into the quench
                    const double ramp = quench_locked_ramp(plan, 15.0, t) *
                                        quench_factor(plan, cfg.quench_width_ms, t);
                    const double p_burst = 0.02 + 0.25 * ramp;
                    v = std::abs(rng.normal(0.0, 0.05));
                    if (rng.uniform() < p_burst)
                        v += -(0.5 + 1.5 * ramp) * std::log1p(-rng.uniform());
                    if (plan.disruptive) v += 2.0 * gauss_bump(t, plan.tq, 0.3);
                    break;
                }
                case ChannelId::SXR: {
                    const double ramp = quench_locked_ramp(plan, 15.0, t) *
                                        quench_factor(plan, cfg.quench_width_ms, t);
                    v = 0.5 * ramp01(t / 10.0) * (1.0 + 0.4 * pregrow(plan, t)) *
                        quench_factor(plan, cfg.quench_width_ms, t);
                    if (rng.uniform() < 0.01 + 0.15 * ramp)
                        v += -(0.3 + 0.8 * ramp) * std::log1p(-rng.uniform());
                    break;
                }
                case ChannelId::HAlpha:
                    v = 0.7 + 0.25 * quench_locked_ramp(plan, 18.0, t);
                    if (plan.disruptive) v += 0.8 * gauss_bump(t, plan.tq, 0.8);
                    break;
                case ChannelId::C3:
                    v = 0.5 + 0.2 * pregrow(plan, t);
                    if (plan.disruptive) v += 0.5 * gauss_bump(t, plan.tq, 1.2);
                    break;
                case ChannelId::Delta:
                    v = 0.4 - 0.15 * quench_locked_ramp(plan, 14.0, t);
                    break;
                case ChannelId::O1:
                    v = 0.6 + 0.18 * quench_locked_ramp(plan, 16.0, t);
                    if (plan.disruptive) v += 0.4 * gauss_bump(t, plan.tq, 1.2);
                    break;
            }
            if (sigma > 0.0) v += rng.normal(0.0, sigma);
            if (id == ChannelId::Mirnov16) {
                if (v > cfg.clip_rail) v = cfg.clip_rail;
                if (v < -cfg.clip_rail) v = -cfg.clip_rail;
            }
            cs.samples[static_cast<std::size_t>(k)] = v;
        }
        out.raw.channels.push_back(std::move(cs));
    }
    return out;
}

std::vector<SynthShot> generate_corpus(const SynthConfig& cfg) {
    validate_config(cfg);
    std::vector<SynthShot> corpus;
    corpus.reserve(static_cast<std::size_t>(cfg.n_shots));
    for (int i = 0; i < cfg.n_shots; ++i) corpus.push_back(generate_shot(cfg, i));
    return corpus;
}

std::string manifest_csv(const std::vector<SynthShot>& corpus) {
    std::string out = "shot_id,quench_step,disruptive\n";
    for (const auto& s : corpus) {
        out += std::to_string(s.raw.shot_id);
        out += ',' + std::to_string(s.quench_step ? *s.quench_step : -1);
        out += ',' + std::to_string(s.quench_step ? 1 : 0);
        out += '\n';
    }
    return out;
}

void write_corpus(const std::vector<SynthShot>& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& s : corpus) {
        char name[32];
        std::snprintf(name, sizeof name, "shot_%04u.shot", s.raw.shot_id);
        write_shot_file(s.raw, dir / name);
    }
    std::ofstream manifest(dir / "manifest.csv", std::ios::binary);
    if (!manifest) throw std::runtime_error("cannot write manifest in " + dir.string());
    manifest << manifest_csv(corpus);
}

} // namespace dpred
