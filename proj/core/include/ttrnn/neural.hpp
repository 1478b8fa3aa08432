#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ttrnn/interpret.hpp"
#include "ttrnn/random.hpp"
#include "ttrnn/tensor.hpp"
#include "ttrnn/tt_format.hpp"

namespace ttrnn {

inline constexpr std::size_t kNumClasses = 3;
using Probabilities = std::array<double, kNumClasses>;

/// Label {+1, 0, -1} to class index {0, 1, 2}. Throws InvalidLabel.
std::size_t class_index(int label);
int label_of_class(std::size_t index);

/// y = W x + b with W held as an MPO. The bias has the output tensor shape.
struct TTLinearLayer {
    TTMatrix weights;
    DenseTensor bias;

    std::vector<std::size_t> in_dims() const { return weights.in_dims(); }
    std::vector<std::size_t> out_dims() const { return weights.out_dims(); }
    /// Throws ShapeMismatch if the bias does not match the output dims.
    void validate() const;

    friend bool operator==(const TTLinearLayer&, const TTLinearLayer&) = default;
};

/// Partial contractions of one TT-layer application: stages[n] is the input to core n.
struct TTLinearCache {
    std::vector<std::vector<double>> stages;
};

/// Contracts x core by core; the dense M x P matrix is never formed.
DenseTensor tt_linear_forward(const TTLinearLayer& layer, const DenseTensor& x,
                              TTLinearCache* cache = nullptr);

/// Accumulates dL/dG_n for every core into `core_grads`, given dL/dy.
void tt_linear_backward(const TTLinearLayer& layer, const TTLinearCache& cache,
                        std::span<const double> grad_out, std::vector<DenseTensor>& core_grads);

struct ModelDims {
    std::vector<std::size_t> input_dims;   // I_1..I_N
    std::vector<std::size_t> hidden_dims;  // J_1..J_N
    std::vector<std::size_t> ranks;        // R_0..R_N

    std::size_t input_size() const noexcept;
    std::size_t hidden_size() const noexcept;
    /// Throws InvalidConfig when the lists are inconsistent.
    void validate() const;
};

/// Recurrent layer h_t = tanh(W_hh h_{t-1} + W_xh x_t + b) with W_xh in TT format and
/// W_hh dense, followed by a dense 3-way softmax head.
struct TTRNNModel {
    TTLinearLayer input_layer;
    DenseTensor feedback;      // (M, M)
    DenseTensor head_weights;  // (3, M)
    DenseTensor head_bias;     // (3)

    ModelDims dims() const;
    std::size_t hidden_size() const noexcept { return input_layer.weights.out_size(); }
    std::size_t input_size() const noexcept { return input_layer.weights.in_size(); }
    std::size_t parameter_count() const noexcept;
    void validate() const;

    friend bool operator==(const TTRNNModel&, const TTRNNModel&) = default;
};

/// Gaussian TT cores with std (R_{n-1} I_n)^{-1/2}, W_hh and head with std M^{-1/2},
/// zero biases. Throws InvalidConfig.
TTRNNModel init_model(const ModelDims& dims, Rng& rng);
/// Same, drawing from the "init" stream of `seed`.
TTRNNModel init_model(const ModelDims& dims, std::uint64_t seed);
/// All parameters zero.
TTRNNModel zero_model(const ModelDims& dims);

std::vector<double> ttrnn_cell_forward(const TTRNNModel& model, const DenseTensor& x_t,
                                       std::span<const double> h_prev);

struct SequenceCache {
    std::vector<TTLinearCache> tt;         // one per step
    std::vector<std::vector<double>> hidden;  // h_0..h_T
};

struct ForwardResult {
    Probabilities probs{};
    SequenceCache cache;
};

/// Runs the recurrence from h_0 = 0 and applies the softmax head to h_T.
ForwardResult forward_sequence(const TTRNNModel& model, std::span<const DenseTensor> xs);
/// forward_sequence without retaining the cache.
Probabilities predict(const TTRNNModel& model, std::span<const DenseTensor> xs);

double cross_entropy_loss(const Probabilities& probs, int label);

/// One training example: a window of consecutive input tensors (non-owning) and the
/// label of its last step.
struct Sample {
    std::span<const DenseTensor> steps;
    int label = 0;
};

struct Gradients {
    std::vector<DenseTensor> cores;
    DenseTensor bias;
    DenseTensor feedback;
    DenseTensor head_weights;
    DenseTensor head_bias;

    static Gradients zeros_like(const TTRNNModel& model);
};

/// Gradient of the batch-mean cross-entropy by backpropagation through time.
/// `results[k]` must come from forward_sequence on `batch[k]` (CacheMismatch otherwise).
Gradients backward(const TTRNNModel& model, std::span<const Sample> batch,
                   std::span<const ForwardResult> results);

/// p <- p - lr * dL/dp for every parameter.
TTRNNModel sgd_step(TTRNNModel model, const Gradients& grads, double lr);

double mean_loss(const TTRNNModel& model, std::span<const Sample> data);

struct TrainConfig {
    double learning_rate = 1e-5;
    std::size_t epochs = 20;
    std::size_t batch_size = 66;
    std::size_t seq_len = 10;
    std::vector<std::size_t> ranks{6};
    std::uint64_t seed = 0;

    /// Throws InvalidConfig.
    void validate() const;
};

struct TrainResult {
    TTRNNModel model;
    /// TT cores after each epoch (epochs 1..E).
    std::vector<CoreSnapshot> snapshots;
    CoreChangeLog core_changes;
    double initial_loss = 0.0;
    /// Mean training loss over the full dataset after each epoch.
    std::vector<double> epoch_loss;
};

/// Mini-batch SGD with a per-epoch shuffle drawn from the "shuffle" stream of config.seed.
TrainResult train(TTRNNModel model, std::span<const Sample> dataset, const TrainConfig& config);

}  // namespace ttrnn
