#include "ttrnn/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "ttrnn/error.hpp"

namespace ttrnn {

std::size_t class_index(int label) {
    switch (label) {
        case +1: return 0;
        case 0: return 1;
        case -1: return 2;
        default: throw Error(ErrorKind::InvalidLabel, "label must be +1, 0 or -1, got " +
                                                          std::to_string(label));
    }
}

int label_of_class(std::size_t index) {
    constexpr int labels[kNumClasses] = {+1, 0, -1};
    if (index >= kNumClasses) throw Error(ErrorKind::InvalidLabel, "class index out of range");
    return labels[index];
}

void TTLinearLayer::validate() const {
    if (bias.shape() != Shape(out_dims())) {
        throw Error(ErrorKind::ShapeMismatch, "bias shape " + bias.shape().to_string() +
                                                  " does not match output dims " +
                                                  Shape(out_dims()).to_string());
    }
}

namespace {

// One core of the sequential contraction. The stage tensor is viewed as
// (A, R_{n-1} * I_n, rest) and the core as (R_{n-1} * I_n, J_n, R_n); the result is
// (A * J_n, R_n, rest) so that finished output indices accumulate Little-Endian.
struct CoreStep {
    std::size_t a, ri, j, r2, rest;
};

CoreStep core_step(const DenseTensor& core, std::size_t a, std::size_t rest) {
    const auto& s = core.shape();
    return {a, s[0] * s[1], s[2], s[3], rest};
}

using ConstMat = Eigen::Map<const Eigen::MatrixXd>;
using Mat = Eigen::Map<Eigen::MatrixXd>;
using Strides = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
using ConstStrided = Eigen::Map<const Eigen::MatrixXd, 0, Strides>;
using Strided = Eigen::Map<Eigen::MatrixXd, 0, Strides>;

// For each fixed q the stage slab is an (a, ri) matrix and the output slab an
// (a, j*r2) matrix. When the leading extent a is short, the same product is issued
// once per a-row instead, as a strided (ri, rest) x (j*r2, ri)^T product.
bool per_row(const CoreStep& st) { return st.a < st.rest; }

void apply_core(const CoreStep& st, std::span<const double> g, std::span<const double> in,
                std::span<double> out) {
    const std::size_t jr = st.j * st.r2;
    const ConstMat gm(g.data(), st.ri, jr);
    if (per_row(st)) {
        for (std::size_t k = 0; k < st.a; ++k) {
            const ConstStrided x(in.data() + k, st.ri, st.rest, Strides(st.a * st.ri, st.a));
            Strided y(out.data() + k, jr, st.rest, Strides(st.a * jr, st.a));
            y.noalias() = gm.transpose() * x;
        }
    } else {
        for (std::size_t q = 0; q < st.rest; ++q) {
            const ConstMat x(in.data() + st.a * st.ri * q, st.a, st.ri);
            Mat y(out.data() + st.a * jr * q, st.a, jr);
            y.noalias() = x * gm;
        }
    }
}

// Accumulates dG and, when d_in is non-empty, overwrites it with dL/d(stage).
void apply_core_backward(const CoreStep& st, std::span<const double> g, std::span<const double> in,
                         std::span<const double> d_out, std::span<double> dg,
                         std::span<double> d_in) {
    const std::size_t jr = st.j * st.r2;
    const ConstMat gm(g.data(), st.ri, jr);
    Mat dgm(dg.data(), st.ri, jr);
    if (per_row(st)) {
        for (std::size_t k = 0; k < st.a; ++k) {
            const ConstStrided x(in.data() + k, st.ri, st.rest, Strides(st.a * st.ri, st.a));
            const ConstStrided dy(d_out.data() + k, jr, st.rest, Strides(st.a * jr, st.a));
            dgm.noalias() += x * dy.transpose();
            if (!d_in.empty()) {
                Strided dx(d_in.data() + k, st.ri, st.rest, Strides(st.a * st.ri, st.a));
                dx.noalias() = gm * dy;
            }
        }
    } else {
        for (std::size_t q = 0; q < st.rest; ++q) {
            const ConstMat x(in.data() + st.a * st.ri * q, st.a, st.ri);
            const ConstMat dy(d_out.data() + st.a * jr * q, st.a, jr);
            dgm.noalias() += x.transpose() * dy;
            if (!d_in.empty()) {
                Mat dx(d_in.data() + st.a * st.ri * q, st.a, st.ri);
                dx.noalias() = dy * gm.transpose();
            }
        }
    }
}

void check_vector(std::span<const double> v, std::size_t n, const char* what) {
    if (v.size() != n) {
        throw Error(ErrorKind::ShapeMismatch, std::string(what) + " has length " +
                                                  std::to_string(v.size()) + ", expected " +
                                                  std::to_string(n));
    }
}

Probabilities softmax_head(const TTRNNModel& model, std::span<const double> h) {
    const std::size_t m = model.hidden_size();
    std::array<double, kNumClasses> z{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        double s = model.head_bias[c];
        for (std::size_t k = 0; k < m; ++k) s += model.head_weights[c + kNumClasses * k] * h[k];
        z[c] = s;
    }
    const double zmax = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        total += v;
    }
    Probabilities p{};
    for (std::size_t c = 0; c < kNumClasses; ++c) p[c] = z[c] / total;
    return p;
}

}  // namespace

DenseTensor tt_linear_forward(const TTLinearLayer& layer, const DenseTensor& x,
                              TTLinearCache* cache) {
    const auto in_dims = layer.in_dims();
    if (x.shape() != Shape(in_dims)) {
        throw Error(ErrorKind::ShapeMismatch, "input shape " + x.shape().to_string() +
                                                  " does not match layer input dims " +
                                                  Shape(in_dims).to_string());
    }
    const auto& cores = layer.weights.cores();
    if (cache) cache->stages.clear();

    std::vector<double> stage(x.data().begin(), x.data().end());
    std::vector<double> next;
    std::size_t a = 1;
    std::size_t rest = x.size();
    for (const auto& core : cores) {
        rest /= core.shape()[1];
        const CoreStep st = core_step(core, a, rest);
        next.resize(st.a * st.j * st.r2 * st.rest);
        apply_core(st, core.data(), stage, next);
        if (cache) cache->stages.push_back(std::move(stage));
        stage.swap(next);
        a *= st.j;
    }

    DenseTensor y(layer.bias.shape(), std::move(stage));
    y += layer.bias;
    return y;
}

void tt_linear_backward(const TTLinearLayer& layer, const TTLinearCache& cache,
                        std::span<const double> grad_out, std::vector<DenseTensor>& core_grads) {
    const auto& cores = layer.weights.cores();
    if (cache.stages.size() != cores.size() || core_grads.size() != cores.size()) {
        throw Error(ErrorKind::CacheMismatch, "TT cache does not match the layer");
    }
    check_vector(grad_out, layer.weights.out_size(), "output gradient");

    // Recompute the stage geometry front to back.
    std::vector<CoreStep> steps;
    std::size_t a = 1;
    std::size_t rest = layer.weights.in_size();
    for (const auto& core : cores) {
        rest /= core.shape()[1];
        steps.push_back(core_step(core, a, rest));
        a *= core.shape()[2];
    }

    std::vector<double> d_out(grad_out.begin(), grad_out.end());
    std::vector<double> d_in;
    for (std::size_t n = cores.size(); n-- > 0;) {
        const CoreStep& st = steps[n];
        const auto& in = cache.stages[n];
        if (in.size() != st.a * st.ri * st.rest) {
            throw Error(ErrorKind::CacheMismatch, "TT stage size does not match core geometry");
        }
        const bool need_input_grad = n > 0;
        d_in.resize(need_input_grad ? in.size() : 0);
        apply_core_backward(st, cores[n].data(), in, d_out, core_grads[n].data(), d_in);
        if (need_input_grad) d_out.swap(d_in);
    }
}

std::size_t ModelDims::input_size() const noexcept {
    return std::accumulate(input_dims.begin(), input_dims.end(), std::size_t{1},
                           std::multiplies<>());
}

std::size_t ModelDims::hidden_size() const noexcept {
    return std::accumulate(hidden_dims.begin(), hidden_dims.end(), std::size_t{1},
                           std::multiplies<>());
}

void ModelDims::validate() const {
    if (input_dims.empty() || input_dims.size() != hidden_dims.size()) {
        throw Error(ErrorKind::InvalidConfig,
                    "input and hidden dims must be non-empty lists of equal length");
    }
    if (ranks.size() != input_dims.size() + 1 || ranks.front() != 1 || ranks.back() != 1) {
        throw Error(ErrorKind::InvalidConfig, "ranks must be (1, R_1, ..., R_{N-1}, 1)");
    }
    auto positive = [](const std::vector<std::size_t>& v) {
        return std::all_of(v.begin(), v.end(), [](std::size_t x) { return x > 0; });
    };
    if (!positive(input_dims) || !positive(hidden_dims) || !positive(ranks)) {
        throw Error(ErrorKind::InvalidConfig, "dims and ranks must be positive");
    }
}

ModelDims TTRNNModel::dims() const {
    return {input_layer.in_dims(), input_layer.out_dims(), input_layer.weights.ranks()};
}

std::size_t TTRNNModel::parameter_count() const noexcept {
    return input_layer.weights.parameter_count() + input_layer.bias.size() + feedback.size() +
           head_weights.size() + head_bias.size();
}

void TTRNNModel::validate() const {
    input_layer.validate();
    const std::size_t m = hidden_size();
    if (feedback.shape() != Shape{m, m}) {
        throw Error(ErrorKind::ShapeMismatch, "feedback must be M x M");
    }
    if (head_weights.shape() != Shape{kNumClasses, m} || head_bias.shape() != Shape{kNumClasses}) {
        throw Error(ErrorKind::ShapeMismatch, "head must map M -> 3");
    }
}

std::vector<double> ttrnn_cell_forward(const TTRNNModel& model, const DenseTensor& x_t,
                                       std::span<const double> h_prev) {
    const std::size_t m = model.hidden_size();
    check_vector(h_prev, m, "previous hidden state");
    const DenseTensor y = tt_linear_forward(model.input_layer, x_t);
    std::vector<double> h(y.data().begin(), y.data().end());
    for (std::size_t c = 0; c < m; ++c) {
        const double hc = h_prev[c];
        if (hc == 0.0) continue;
        const double* col = model.feedback.data().data() + m * c;
        for (std::size_t r = 0; r < m; ++r) h[r] += col[r] * hc;
    }
    for (double& v : h) v = std::tanh(v);
    return h;
}

ForwardResult forward_sequence(const TTRNNModel& model, std::span<const DenseTensor> xs) {
    if (xs.empty()) throw Error(ErrorKind::EmptySequence, "input sequence is empty");
    const std::size_t m = model.hidden_size();
    ForwardResult out;
    out.cache.hidden.reserve(xs.size() + 1);
    out.cache.hidden.emplace_back(m, 0.0);
    out.cache.tt.resize(xs.size());
    for (std::size_t t = 0; t < xs.size(); ++t) {
        const DenseTensor y = tt_linear_forward(model.input_layer, xs[t], &out.cache.tt[t]);
        std::vector<double> h(y.data().begin(), y.data().end());
        const auto& h_prev = out.cache.hidden.back();
        for (std::size_t c = 0; c < m; ++c) {
            const double hc = h_prev[c];
            if (hc == 0.0) continue;
            const double* col = model.feedback.data().data() + m * c;
            for (std::size_t r = 0; r < m; ++r) h[r] += col[r] * hc;
        }
        for (double& v : h) v = std::tanh(v);
        out.cache.hidden.push_back(std::move(h));
    }
    out.probs = softmax_head(model, out.cache.hidden.back());
    return out;
}

Probabilities predict(const TTRNNModel& model, std::span<const DenseTensor> xs) {
    if (xs.empty()) throw Error(ErrorKind::EmptySequence, "input sequence is empty");
    std::vector<double> h(model.hidden_size(), 0.0);
    for (const auto& x : xs) h = ttrnn_cell_forward(model, x, h);
    return softmax_head(model, h);
}

double cross_entropy_loss(const Probabilities& probs, int label) {
    return -std::log(probs[class_index(label)]);
}

Gradients Gradients::zeros_like(const TTRNNModel& model) {
    Gradients g;
    for (const auto& core : model.input_layer.weights.cores()) g.cores.emplace_back(core.shape());
    g.bias = DenseTensor(model.input_layer.bias.shape());
    g.feedback = DenseTensor(model.feedback.shape());
    g.head_weights = DenseTensor(model.head_weights.shape());
    g.head_bias = DenseTensor(model.head_bias.shape());
    return g;
}

Gradients backward(const TTRNNModel& model, std::span<const Sample> batch,
                   std::span<const ForwardResult> results) {
    if (batch.size() != results.size()) {
        throw Error(ErrorKind::CacheMismatch, "one forward result per sample is required");
    }
    if (batch.empty()) throw Error(ErrorKind::EmptyDataset, "empty batch");
    const std::size_t m = model.hidden_size();
    const std::size_t n_cores = model.input_layer.weights.num_cores();
    Gradients g = Gradients::zeros_like(model);
    const double scale = 1.0 / static_cast<double>(batch.size());

    std::vector<double> dh(m), da(m), dh_prev(m);
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const auto& cache = results[b].cache;
        const std::size_t steps = batch[b].steps.size();
        if (cache.hidden.size() != steps + 1 || cache.tt.size() != steps) {
            throw Error(ErrorKind::CacheMismatch, "cache length does not match sample length");
        }
        for (const auto& h : cache.hidden) {
            if (h.size() != m) throw Error(ErrorKind::CacheMismatch, "hidden size mismatch");
        }
        for (const auto& tt : cache.tt) {
            if (tt.stages.size() != n_cores) {
                throw Error(ErrorKind::CacheMismatch, "TT cache depth mismatch");
            }
        }

        // Softmax + cross-entropy: dL/dz = p - onehot.
        const std::size_t target = class_index(batch[b].label);
        std::array<double, kNumClasses> dz{};
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            dz[c] = scale * (results[b].probs[c] - (c == target ? 1.0 : 0.0));
        }
        const auto& h_last = cache.hidden.back();
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            g.head_bias[c] += dz[c];
            for (std::size_t k = 0; k < m; ++k) {
                g.head_weights[c + kNumClasses * k] += dz[c] * h_last[k];
                dh[k] += model.head_weights[c + kNumClasses * k] * dz[c];
            }
        }

        for (std::size_t t = steps; t-- > 0;) {
            const auto& h = cache.hidden[t + 1];
            const auto& h_prev = cache.hidden[t];
            for (std::size_t k = 0; k < m; ++k) da[k] = dh[k] * (1.0 - h[k] * h[k]);
            for (std::size_t k = 0; k < m; ++k) g.bias[k] += da[k];
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            for (std::size_t c = 0; c < m; ++c) {
                double* gcol = &g.feedback[m * c];
                const double* wcol = model.feedback.data().data() + m * c;
                const double hc = h_prev[c];
                double acc = 0.0;
                for (std::size_t r = 0; r < m; ++r) {
                    gcol[r] += da[r] * hc;
                    acc += wcol[r] * da[r];
                }
                dh_prev[c] = acc;
            }
            tt_linear_backward(model.input_layer, cache.tt[t], da, g.cores);
            dh.swap(dh_prev);
        }
    }
    return g;
}

TTRNNModel sgd_step(TTRNNModel model, const Gradients& grads, double lr) {
    auto& cores = model.input_layer.weights.mutable_cores();
    if (grads.cores.size() != cores.size()) {
        throw Error(ErrorKind::ShapeMismatch, "gradient has a different number of cores");
    }
    auto update = [lr](DenseTensor& p, const DenseTensor& dp) {
        if (p.shape() != dp.shape()) {
            throw Error(ErrorKind::ShapeMismatch, "gradient shape " + dp.shape().to_string() +
                                                      " does not match parameter " +
                                                      p.shape().to_string());
        }
        auto pv = p.data();
        const auto gv = dp.data();
        for (std::size_t i = 0; i < pv.size(); ++i) pv[i] -= lr * gv[i];
    };
    for (std::size_t n = 0; n < cores.size(); ++n) update(cores[n], grads.cores[n]);
    update(model.input_layer.bias, grads.bias);
    update(model.feedback, grads.feedback);
    update(model.head_weights, grads.head_weights);
    update(model.head_bias, grads.head_bias);
    return model;
}

}  // namespace ttrnn
