#include <algorithm>
#include <cmath>
#include <numeric>

#include "ttrnn/error.hpp"
#include "ttrnn/neural.hpp"

namespace ttrnn {

namespace {

DenseTensor gaussian(Shape shape, double stddev, Rng& rng) {
    std::normal_distribution<double> dist(0.0, stddev);
    DenseTensor t(std::move(shape));
    for (double& v : t.data()) v = dist(rng);
    return t;
}

}  // namespace

TTRNNModel init_model(const ModelDims& dims, Rng& rng) {
    dims.validate();
    const std::size_t n = dims.input_dims.size();
    const std::size_t m = dims.hidden_size();
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < n; ++k) {
        const double stddev =
            1.0 / std::sqrt(static_cast<double>(dims.ranks[k] * dims.input_dims[k]));
        cores.push_back(gaussian(
            Shape{dims.ranks[k], dims.input_dims[k], dims.hidden_dims[k], dims.ranks[k + 1]},
            stddev, rng));
    }
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    TTRNNModel model;
    model.input_layer.weights = TTMatrix(std::move(cores));
    model.input_layer.bias = DenseTensor(Shape(dims.hidden_dims));
    model.feedback = gaussian(Shape{m, m}, inv_sqrt_m, rng);
    model.head_weights = gaussian(Shape{kNumClasses, m}, inv_sqrt_m, rng);
    model.head_bias = DenseTensor(Shape{kNumClasses});
    return model;
}

TTRNNModel init_model(const ModelDims& dims, std::uint64_t seed) {
    Rng rng = make_stream(seed, "init");
    return init_model(dims, rng);
}

TTRNNModel zero_model(const ModelDims& dims) {
    dims.validate();
    const std::size_t m = dims.hidden_size();
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < dims.input_dims.size(); ++k) {
        cores.emplace_back(
            Shape{dims.ranks[k], dims.input_dims[k], dims.hidden_dims[k], dims.ranks[k + 1]});
    }
    TTRNNModel model;
    model.input_layer.weights = TTMatrix(std::move(cores));
    model.input_layer.bias = DenseTensor(Shape(dims.hidden_dims));
    model.feedback = DenseTensor(Shape{m, m});
    model.head_weights = DenseTensor(Shape{kNumClasses, m});
    model.head_bias = DenseTensor(Shape{kNumClasses});
    return model;
}

double mean_loss(const TTRNNModel& model, std::span<const Sample> data) {
    if (data.empty()) throw Error(ErrorKind::EmptyDataset, "no samples");
    double total = 0.0;
    for (const auto& s : data) total += cross_entropy_loss(predict(model, s.steps), s.label);
    return total / static_cast<double>(data.size());
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw Error(ErrorKind::InvalidConfig, "learning_rate must be positive");
    }
    if (epochs == 0 || batch_size == 0 || seq_len == 0) {
        throw Error(ErrorKind::InvalidConfig, "epochs, batch_size and seq_len must be positive");
    }
    if (ranks.empty() || std::any_of(ranks.begin(), ranks.end(), [](auto r) { return r == 0; })) {
        throw Error(ErrorKind::InvalidConfig, "ranks must be positive");
    }
}

TrainResult train(TTRNNModel model, std::span<const Sample> dataset, const TrainConfig& config) {
    config.validate();
    if (dataset.empty()) throw Error(ErrorKind::EmptyDataset, "training set is empty");
    model.validate();

    Rng rng = make_stream(config.seed, "shuffle");
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    result.initial_loss = mean_loss(model, dataset);

    std::vector<Sample> batch;
    std::vector<ForwardResult> forward;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            batch.clear();
            forward.clear();
            for (std::size_t k = start; k < stop; ++k) {
                batch.push_back(dataset[order[k]]);
                forward.push_back(forward_sequence(model, batch.back().steps));
            }
            const Gradients grads = backward(model, batch, forward);
            model = sgd_step(std::move(model), grads, config.learning_rate);
        }
        result.snapshots.push_back(model.input_layer.weights.cores());
        result.epoch_loss.push_back(mean_loss(model, dataset));
    }

    if (result.snapshots.size() >= 2) {
        result.core_changes = core_change(result.snapshots);
    } else {
        for (const auto& core : model.input_layer.weights.cores()) {
            result.core_changes.core_shapes.push_back(core.shape());
            result.core_changes.values.emplace_back();
        }
    }
    result.model = std::move(model);
    return result;
}

}  // namespace ttrnn
