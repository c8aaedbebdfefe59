#include "dpred/lstm.hpp"

#include "dpred/rng.hpp"

namespace dpred {

ModelParams init_params(int hidden_dim, std::uint64_t seed) {
    if (hidden_dim < 1) throw std::invalid_argument("init_params: hidden_dim must be >= 1");

    ModelParams params;
    params.w.resize(hidden_dim);
    params.init_seed = seed;

    Rng rng(seed);
    auto fill_uniform = [&rng](std::vector<double>& block, double fan_in, double fan_out) {
        const double r = std::sqrt(6.0 / (fan_in + fan_out));
        for (auto& v : block) v = rng.uniform(-r, r);
    };

    const double in = Weights<double>::input;
    const double h = hidden_dim;
    fill_uniform(params.w.wi, in, h);
    fill_uniform(params.w.wf, in, h);
    fill_uniform(params.w.wg, in, h);
    fill_uniform(params.w.wo, in, h);
    fill_uniform(params.w.ui, h, h);
    fill_uniform(params.w.uf, h, h);
    fill_uniform(params.w.ug, h, h);
    fill_uniform(params.w.uo, h, h);
    fill_uniform(params.w.wy, h, 1.0);
    std::fill(params.w.bf.begin(), params.w.bf.end(), 1.0);
    return params;
}

SeqCache forward_sequence(const ModelParams& params, const AlignedShot& shot) {
    const int H = params.w.hidden;
    const long T = shot.steps;

    SeqCache cache;
    cache.hidden = H;
    cache.steps = T;
    const auto th = static_cast<std::size_t>(T) * H;
    cache.x.resize(static_cast<std::size_t>(T) * kNumChannels);
    cache.i.resize(th); cache.f.resize(th); cache.g.resize(th); cache.o.resize(th);
    cache.c.resize(th); cache.h.resize(th);
    cache.z.resize(static_cast<std::size_t>(T));
    cache.y.resize(static_cast<std::size_t>(T));

    CellState<double> state(H);
    StepScratch<double> scratch(H);
    for (long t = 0; t < T; ++t) {
        const double* row = shot.row(t);
        std::copy(row, row + kNumChannels,
                  cache.x.begin() + static_cast<std::size_t>(t) * kNumChannels);
        const double y =
            lstm_step<double>(params.w, {row, static_cast<std::size_t>(kNumChannels)},
                              state, scratch);
        auto off = static_cast<std::size_t>(t) * H;
        std::copy(scratch.i.begin(), scratch.i.end(), cache.i.begin() + off);
        std::copy(scratch.f.begin(), scratch.f.end(), cache.f.begin() + off);
        std::copy(scratch.g.begin(), scratch.g.end(), cache.g.begin() + off);
        std::copy(scratch.o.begin(), scratch.o.end(), cache.o.begin() + off);
        std::copy(state.c.begin(), state.c.end(), cache.c.begin() + off);
        std::copy(state.h.begin(), state.h.end(), cache.h.begin() + off);
        double z = params.w.by;
        for (int r = 0; r < H; ++r) z += params.w.wy[r] * state.h[r];
        cache.z[static_cast<std::size_t>(t)] = z;
        cache.y[static_cast<std::size_t>(t)] = y;
    }
    return cache;
}

Weights<double> bptt(const ModelParams& params, std::span<const std::uint8_t> label,
                     const SeqCache& cache, double pos_weight) {
    const int H = params.w.hidden;
    const long T = cache.steps;
    if (cache.hidden != H)
        throw std::invalid_argument("bptt: cache hidden size does not match params");
    if (static_cast<long>(label.size()) != T)
        throw std::invalid_argument("bptt: label length does not match cache");

    Weights<double> grad;
    grad.resize(H);
    if (T == 0) return grad;

    const double inv_t = 1.0 / static_cast<double>(T);
    std::vector<double> dh(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dc(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dai(static_cast<std::size_t>(H));
    std::vector<double> daf(static_cast<std::size_t>(H));
    std::vector<double> dag(static_cast<std::size_t>(H));
    std::vector<double> dao(static_cast<std::size_t>(H));

    for (long t = T - 1; t >= 0; --t) {
        const auto off = static_cast<std::size_t>(t) * H;
        const double* i = cache.i.data() + off;
        const double* f = cache.f.data() + off;
        const double* g = cache.g.data() + off;
        const double* o = cache.o.data() + off;
        const double* c = cache.c.data() + off;
        const double* h = cache.h.data() + off;
        const double* x = cache.x.data() + static_cast<std::size_t>(t) * kNumChannels;
        const double* h_prev = t > 0 ? cache.h.data() + off - H : nullptr;
        const double* c_prev = t > 0 ? cache.c.data() + off - H : nullptr;

        // d(mean BCE)/dz, in the saturation-safe form sig(z) - target terms
        const double y = cache.y[static_cast<std::size_t>(t)];
        const double lab = static_cast<double>(label[static_cast<std::size_t>(t)]);
        const double dz = inv_t * (-pos_weight * lab * (1.0 - y) + (1.0 - lab) * y);

        grad.by += dz;
        for (int r = 0; r < H; ++r) {
            grad.wy[r] += dz * h[r];
            dh[r] += dz * params.w.wy[r];
        }

        for (int r = 0; r < H; ++r) {
            const double tc = std::tanh(c[r]);
            const double d_o = dh[r] * tc;
            dao[r] = d_o * o[r] * (1.0 - o[r]);
            const double dcr = dc[r] + dh[r] * o[r] * (1.0 - tc * tc);
            const double cp = c_prev ? c_prev[r] : 0.0;
            dai[r] = dcr * g[r] * i[r] * (1.0 - i[r]);
            daf[r] = dcr * cp * f[r] * (1.0 - f[r]);
            dag[r] = dcr * i[r] * (1.0 - g[r] * g[r]);
            dc[r] = dcr * f[r]; // flows to step t-1
        }

        for (int r = 0; r < H; ++r) {
            const auto wrow = static_cast<std::size_t>(r) * kNumChannels;
            for (int j = 0; j < kNumChannels; ++j) {
                grad.wi[wrow + j] += dai[r] * x[j];
                grad.wf[wrow + j] += daf[r] * x[j];
                grad.wg[wrow + j] += dag[r] * x[j];
                grad.wo[wrow + j] += dao[r] * x[j];
            }
            grad.bi[r] += dai[r];
            grad.bf[r] += daf[r];
            grad.bg[r] += dag[r];
            grad.bo[r] += dao[r];
            if (h_prev) {
                const auto urow = static_cast<std::size_t>(r) * H;
                for (int k = 0; k < H; ++k) {
                    grad.ui[urow + k] += dai[r] * h_prev[k];
                    grad.uf[urow + k] += daf[r] * h_prev[k];
                    grad.ug[urow + k] += dag[r] * h_prev[k];
                    grad.uo[urow + k] += dao[r] * h_prev[k];
                }
            }
        }

        // dh for step t-1: U^T times the gate deltas
        std::fill(dh.begin(), dh.end(), 0.0);
        if (t > 0) {
            for (int r = 0; r < H; ++r) {
                const auto urow = static_cast<std::size_t>(r) * H;
                const double ai = dai[r], af = daf[r], ag = dag[r], ao = dao[r];
                for (int k = 0; k < H; ++k) {
                    dh[k] += params.w.ui[urow + k] * ai + params.w.uf[urow + k] * af +
                             params.w.ug[urow + k] * ag + params.w.uo[urow + k] * ao;
                }
            }
        }
    }
    return grad;
}

} // namespace dpred
