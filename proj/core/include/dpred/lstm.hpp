#ifndef DPRED_LSTM_HPP
#define DPRED_LSTM_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dpred/channels.hpp"
#include "dpred/preprocess.hpp"
#include "dpred/shot.hpp"

namespace dpred {

/// Gate and head weights for a single LSTM layer with one sigmoid output
/// unit. Matrices are row-major. The scalar type is a parameter so the
/// stream engine can run the identical recurrence in single precision.
template <class S>
struct Weights {
    int hidden = 0;
    static constexpr int input = kNumChannels;

    std::vector<S> wi, wf, wg, wo; ///< hidden x input
    std::vector<S> ui, uf, ug, uo; ///< hidden x hidden
    std::vector<S> bi, bf, bg, bo; ///< hidden
    std::vector<S> wy;             ///< hidden
    S by = S(0);

    void resize(int hidden_dim) {
        hidden = hidden_dim;
        const auto hi = static_cast<std::size_t>(hidden_dim) * input;
        const auto hh = static_cast<std::size_t>(hidden_dim) * hidden_dim;
        const auto h = static_cast<std::size_t>(hidden_dim);
        wi.assign(hi, S(0)); wf.assign(hi, S(0)); wg.assign(hi, S(0)); wo.assign(hi, S(0));
        ui.assign(hh, S(0)); uf.assign(hh, S(0)); ug.assign(hh, S(0)); uo.assign(hh, S(0));
        bi.assign(h, S(0)); bf.assign(h, S(0)); bg.assign(h, S(0)); bo.assign(h, S(0));
        wy.assign(h, S(0));
        by = S(0);
    }

    /// Applies fn to every parameter block in serialization order.
    template <class Fn>
    void for_each_block(Fn&& fn) {
        fn(wi); fn(wf); fn(wg); fn(wo);
        fn(ui); fn(uf); fn(ug); fn(uo);
        fn(bi); fn(bf); fn(bg); fn(bo);
        fn(wy);
    }
    template <class Fn>
    void for_each_block(Fn&& fn) const {
        fn(wi); fn(wf); fn(wg); fn(wo);
        fn(ui); fn(uf); fn(ug); fn(uo);
        fn(bi); fn(bf); fn(bg); fn(bo);
        fn(wy);
    }
};

template <class S>
Weights<S> cast_weights(const Weights<double>& w) {
    Weights<S> out;
    out.resize(w.hidden);
    auto copy = [](const std::vector<double>& src, std::vector<S>& dst) {
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<S>(src[i]);
    };
    copy(w.wi, out.wi); copy(w.wf, out.wf); copy(w.wg, out.wg); copy(w.wo, out.wo);
    copy(w.ui, out.ui); copy(w.uf, out.uf); copy(w.ug, out.ug); copy(w.uo, out.uo);
    copy(w.bi, out.bi); copy(w.bf, out.bf); copy(w.bg, out.bg); copy(w.bo, out.bo);
    copy(w.wy, out.wy);
    out.by = static_cast<S>(w.by);
    return out;
}

/// Everything a deployment needs in one object: weights, the normalization
/// fitted on the training split, and the seed the weights were grown from.
struct ModelParams {
    Weights<double> w;
    NormStats norm_stats{{}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}};
    std::uint64_t init_seed = 0;

    int hidden_dim() const { return w.hidden; }
};

template <class S>
struct CellState {
    std::vector<S> h, c;

    explicit CellState(int hidden = 0)
        : h(static_cast<std::size_t>(hidden), S(0)), c(static_cast<std::size_t>(hidden), S(0)) {}

    void reset() {
        std::fill(h.begin(), h.end(), S(0));
        std::fill(c.begin(), c.end(), S(0));
    }
};

/// Reusable per-step gate buffers; owning them outside the step keeps the
/// hot path free of allocation.
template <class S>
struct StepScratch {
    std::vector<S> i, f, g, o;

    explicit StepScratch(int hidden = 0) { resize(hidden); }
    void resize(int hidden) {
        i.assign(static_cast<std::size_t>(hidden), S(0));
        f.assign(static_cast<std::size_t>(hidden), S(0));
        g.assign(static_cast<std::size_t>(hidden), S(0));
        o.assign(static_cast<std::size_t>(hidden), S(0));
    }
};

template <class S>
inline S sigmoid(S x) {
    return S(1) / (S(1) + std::exp(-x));
}

namespace detail {

template <class S>
inline void gate_preactivations(const Weights<S>& w, const S* x, const S* h,
                                StepScratch<S>& sc) {
    const int H = w.hidden;
    constexpr int I = Weights<S>::input;
    for (int r = 0; r < H; ++r) {
        const S* wi = w.wi.data() + static_cast<std::size_t>(r) * I;
        const S* wf = w.wf.data() + static_cast<std::size_t>(r) * I;
        const S* wg = w.wg.data() + static_cast<std::size_t>(r) * I;
        const S* wo = w.wo.data() + static_cast<std::size_t>(r) * I;
        S ai = w.bi[r], af = w.bf[r], ag = w.bg[r], ao = w.bo[r];
        for (int j = 0; j < I; ++j) {
            const S xj = x[j];
            ai += wi[j] * xj;
            af += wf[j] * xj;
            ag += wg[j] * xj;
            ao += wo[j] * xj;
        }
        const S* ui = w.ui.data() + static_cast<std::size_t>(r) * H;
        const S* uf = w.uf.data() + static_cast<std::size_t>(r) * H;
        const S* ug = w.ug.data() + static_cast<std::size_t>(r) * H;
        const S* uo = w.uo.data() + static_cast<std::size_t>(r) * H;
        for (int k = 0; k < H; ++k) {
            const S hk = h[k];
            ai += ui[k] * hk;
            af += uf[k] * hk;
            ag += ug[k] * hk;
            ao += uo[k] * hk;
        }
        sc.i[r] = ai;
        sc.f[r] = af;
        sc.g[r] = ag;
        sc.o[r] = ao;
    }
}

} // namespace detail

/// One recurrence step. Gates: i = sig(Wi x + Ui h + bi), f, o likewise,
/// g = tanh(.); c' = f.c + i.g; h' = o.tanh(c'); y = sig(wy.h' + by).
/// Updates the state in place, leaves the activated gates in the scratch,
/// and returns y, the disruption probability for this step. Throws on
/// non-finite input without touching the state.
template <class S>
S lstm_step(const Weights<S>& w, std::span<const S> x, CellState<S>& state,
            StepScratch<S>& scratch) {
    if (x.size() != static_cast<std::size_t>(Weights<S>::input))
        throw std::invalid_argument("lstm_step: input must have 10 entries");
    for (S v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("lstm_step: non-finite input");

    detail::gate_preactivations(w, x.data(), state.h.data(), scratch);

    const int H = w.hidden;
    S z = w.by;
    for (int r = 0; r < H; ++r) {
        const S i = sigmoid(scratch.i[r]);
        const S f = sigmoid(scratch.f[r]);
        const S g = std::tanh(scratch.g[r]);
        const S o = sigmoid(scratch.o[r]);
        const S c = f * state.c[r] + i * g;
        const S h = o * std::tanh(c);
        scratch.i[r] = i;
        scratch.f[r] = f;
        scratch.g[r] = g;
        scratch.o[r] = o;
        state.c[r] = c;
        state.h[r] = h;
        z += w.wy[r] * h;
    }
    return sigmoid(z);
}

/// Activations of a whole forward pass, kept for backpropagation.
struct SeqCache {
    int hidden = 0;
    long steps = 0;
    std::vector<double> x;          ///< T x 10
    std::vector<double> i, f, g, o; ///< T x hidden, post-activation
    std::vector<double> c, h;       ///< T x hidden
    std::vector<double> z;          ///< T, output preactivation
    std::vector<double> y;          ///< T
};

/// Runs the shot from a zero state (state is reset between shots) and
/// returns per-step probabilities plus the cache bptt needs.
SeqCache forward_sequence(const ModelParams& params, const AlignedShot& shot);

/// Exact reverse-mode gradient of the mean weighted binary cross-entropy
/// over the whole sequence, no truncation.
Weights<double> bptt(const ModelParams& params, std::span<const std::uint8_t> label,
                     const SeqCache& cache, double pos_weight = 1.0);

/// Glorot-uniform weights, forget-gate bias 1, everything else 0.
/// Bit-identical for identical (hidden_dim, seed).
ModelParams init_params(int hidden_dim, std::uint64_t seed);

inline constexpr int kDefaultHiddenDim = 32;

} // namespace dpred

#endif
