#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "ttrnn/checkpoint.hpp"
#include "ttrnn/error.hpp"
#include "ttrnn/neural.hpp"

using namespace ttrnn;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no ttrnn::Error thrown";
    return ErrorKind::IOFailure;
}

const std::vector<std::size_t> kIn{2, 2, 2};
const std::vector<std::size_t> kOut{2, 2, 2};
const std::vector<std::size_t> kRanks{1, 2, 2, 1};

std::vector<DenseTensor> random_inputs(Rng& rng, std::size_t n, const std::vector<std::size_t>& dims) {
    std::vector<DenseTensor> xs;
    for (std::size_t k = 0; k < n; ++k) xs.push_back(oracle::random_tensor(Shape(dims), rng));
    return xs;
}

ModelDims small_dims() { return ModelDims{kIn, kOut, kRanks}; }

}  // namespace

TEST(Labels, ClassIndexRoundTrip) {
    for (int label : {+1, 0, -1}) EXPECT_EQ(label_of_class(class_index(label)), label);
    EXPECT_EQ(class_index(+1), 0u);
    EXPECT_EQ(class_index(-1), 2u);
    EXPECT_EQ(kind_of([] { (void)class_index(2); }), ErrorKind::InvalidLabel);
}

TEST(TTLinear, IdentityCorePassesInputThrough) {
    DenseTensor core(Shape{1, 3, 3, 1});
    for (std::size_t k = 0; k < 3; ++k) core.at({0, k, k, 0}) = 1.0;
    const TTLinearLayer layer{TTMatrix({core}), DenseTensor(Shape{3})};
    const DenseTensor x(Shape{3}, {0.25, -1.5, 4.0});
    EXPECT_EQ(tt_linear_forward(layer, x), x);
}

TEST(TTLinear, ZeroInputGivesBias) {
    Rng rng = make_stream(21, "test");
    const auto layer = oracle::random_layer(rng, kIn, kOut, kRanks);
    EXPECT_EQ(tt_linear_forward(layer, DenseTensor(Shape(kIn))), layer.bias);
}

TEST(TTLinear, MatchesDenseReconstruction) {
    Rng rng = make_stream(22, "test");
    for (int trial = 0; trial < 25; ++trial) {
        const auto in = oracle::random_dims(rng, 3, 3);
        const auto out = oracle::random_dims(rng, 3, 3);
        const auto inner = oracle::random_dims(rng, 2, 3);
        const auto layer = oracle::random_layer(rng, in, out, {1, inner[0], inner[1], 1});
        const DenseTensor x = oracle::random_tensor(Shape(in), rng);
        const DenseTensor y = tt_linear_forward(layer, x);

        // Library dense path and brute-force matrix must both agree with the TT path.
        const DenseTensor w = mpo_to_matrix(layer.weights);
        const DenseTensor dense = matmul(w, reshape(x, Shape{x.size(), 1}));
        const auto wb = oracle::mpo_matrix(layer.weights);
        std::vector<double> brute(y.size());
        for (std::size_t r = 0; r < y.size(); ++r) {
            brute[r] = layer.bias[r];
            for (std::size_t c = 0; c < x.size(); ++c) brute[r] += wb[r + y.size() * c] * x[c];
        }
        std::vector<double> lib(dense.data().begin(), dense.data().end());
        for (std::size_t r = 0; r < y.size(); ++r) lib[r] += layer.bias[r];
        EXPECT_LT(oracle::relative_error(y.data(), brute), 1e-10);
        EXPECT_LT(oracle::relative_error(y.data(), lib), 1e-10);
    }
}

TEST(TTLinear, ShapeMismatch) {
    Rng rng = make_stream(23, "test");
    const auto layer = oracle::random_layer(rng, kIn, kOut, kRanks);
    EXPECT_EQ(kind_of([&] { (void)tt_linear_forward(layer, DenseTensor(Shape{8})); }),
              ErrorKind::ShapeMismatch);
}

TEST(Cell, ZeroModelGivesZeroState) {
    const TTRNNModel model = zero_model(small_dims());
    Rng rng = make_stream(24, "test");
    const DenseTensor x = oracle::random_tensor(Shape(kIn), rng);
    const std::vector<double> h_prev(8, 0.3);
    for (double v : ttrnn_cell_forward(model, x, h_prev)) EXPECT_EQ(v, 0.0);
}

TEST(Cell, ZeroInputGivesTanhBias) {
    TTRNNModel model = zero_model(small_dims());
    for (std::size_t k = 0; k < 8; ++k) model.input_layer.bias[k] = 0.1 * static_cast<double>(k) - 0.3;
    const auto h = ttrnn_cell_forward(model, DenseTensor(Shape(kIn)), std::vector<double>(8, 0.0));
    for (std::size_t k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(h[k], std::tanh(model.input_layer.bias[k]));
}

TEST(Cell, MatchesDenseCell) {
    Rng rng = make_stream(25, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    const oracle::DenseRnn dense(model);
    std::vector<double> h(8);
    for (double& v : h) v = std::uniform_real_distribution<double>(-1, 1)(rng);
    const DenseTensor x = oracle::random_tensor(Shape(kIn), rng);
    EXPECT_LT(oracle::max_abs_diff(ttrnn_cell_forward(model, x, h), dense.cell(x, h)), 1e-10);
}

TEST(Forward, MatchesDenseRnnAndSumsToOne) {
    Rng rng = make_stream(26, "test");
    for (int trial = 0; trial < 10; ++trial) {
        const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
        const auto xs = random_inputs(rng, 4, kIn);
        const Probabilities p = predict(model, xs);
        const Probabilities q = oracle::DenseRnn(model).forward(xs);
        EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
        for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(p[c], q[c], 1e-10);
    }
}

TEST(Forward, ZeroModelIsUniform) {
    Rng rng = make_stream(27, "test");
    const auto xs = random_inputs(rng, 3, kIn);
    for (double v : predict(zero_model(small_dims()), xs)) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Forward, SingleStepComposesCellAndHead) {
    Rng rng = make_stream(28, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    const auto xs = random_inputs(rng, 1, kIn);
    const auto h = ttrnn_cell_forward(model, xs[0], std::vector<double>(8, 0.0));
    std::array<double, 3> z{};
    for (std::size_t c = 0; c < 3; ++c) {
        z[c] = model.head_bias[c];
        for (std::size_t k = 0; k < 8; ++k) z[c] += model.head_weights.at({c, k}) * h[k];
    }
    const double total = std::exp(z[0]) + std::exp(z[1]) + std::exp(z[2]);
    const Probabilities p = predict(model, xs);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(p[c], std::exp(z[c]) / total, 1e-14);
}

TEST(Forward, EmptySequence) {
    EXPECT_EQ(kind_of([] { (void)predict(zero_model(small_dims()), std::span<const DenseTensor>{}); }),
              ErrorKind::EmptySequence);
}

TEST(CrossEntropy, Values) {
    const Probabilities uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
    for (int label : {+1, 0, -1}) EXPECT_NEAR(cross_entropy_loss(uniform, label), std::log(3.0), 1e-15);
    const double eps = 1e-6;
    EXPECT_NEAR(cross_entropy_loss({eps / 2, 1 - eps, eps / 2}, 0), eps, 1e-11);
}

TEST(CrossEntropy, MeanLossEqualsMeanOfSamples) {
    Rng rng = make_stream(29, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    const auto xs = random_inputs(rng, 12, kIn);
    std::vector<Sample> data;
    const int labels[] = {1, 0, -1};
    for (std::size_t k = 0; k + 3 <= xs.size(); ++k)
        data.push_back({std::span<const DenseTensor>(xs.data() + k, 3), labels[k % 3]});
    double sum = 0.0;
    for (const auto& s : data) {
        const auto p = oracle::DenseRnn(model).forward(s.steps);
        sum += -std::log(p[class_index(s.label)]);
    }
    EXPECT_NEAR(mean_loss(model, data), sum / static_cast<double>(data.size()), 1e-12);
}

TEST(Backward, MatchesFiniteDifferences) {
    Rng rng = make_stream(30, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks, 0.7);
    const auto xs = random_inputs(rng, 5, kIn);
    const std::vector<Sample> batch{{std::span<const DenseTensor>(xs.data(), 3), +1},
                                    {std::span<const DenseTensor>(xs.data() + 2, 3), -1}};
    const auto res = oracle::gradient_check(model, batch, 1e-5, 1e-4, 1e-8);
    EXPECT_EQ(res.failed, 0u) << "worst relative error " << res.worst_relative;
    EXPECT_GT(res.checked, model.parameter_count() / 2);
}

TEST(Backward, DuplicateSampleDoublesItsContribution) {
    Rng rng = make_stream(31, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    const auto xs = random_inputs(rng, 3, kIn);
    const Sample s{xs, +1};
    const std::vector<Sample> one{s}, two{s, s};
    std::vector<ForwardResult> r1{forward_sequence(model, xs)};
    std::vector<ForwardResult> r2{r1[0], r1[0]};
    const Gradients g1 = backward(model, one, r1);
    const Gradients g2 = backward(model, two, r2);
    // Sum over the batch doubles, the 1/B mean halves it back.
    EXPECT_LT(oracle::max_abs_diff(g1.feedback.data(), g2.feedback.data()), 1e-15);
    EXPECT_LT(oracle::max_abs_diff(g1.cores[1].data(), g2.cores[1].data()), 1e-15);
}

TEST(Backward, ConfidentCorrectPredictionHasNoHeadGradient) {
    Rng rng = make_stream(32, "test");
    TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    model.head_weights *= 0.0;
    model.head_bias = DenseTensor(Shape{3}, {60.0, 0.0, 0.0});
    const auto xs = random_inputs(rng, 3, kIn);
    const std::vector<Sample> batch{{xs, +1}};
    const std::vector<ForwardResult> res{forward_sequence(model, xs)};
    const Gradients g = backward(model, batch, res);
    for (double v : g.head_bias.data()) EXPECT_LT(std::abs(v), 1e-20);
    for (double v : g.head_weights.data()) EXPECT_LT(std::abs(v), 1e-20);
}

TEST(Backward, CacheMismatch) {
    Rng rng = make_stream(33, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    const auto xs = random_inputs(rng, 3, kIn);
    const std::vector<Sample> batch{{xs, +1}, {xs, 0}};
    const std::vector<ForwardResult> res{forward_sequence(model, xs)};
    EXPECT_EQ(kind_of([&] { (void)backward(model, batch, res); }), ErrorKind::CacheMismatch);
}

TEST(Sgd, ZeroLearningRateIsIdentity) {
    Rng rng = make_stream(34, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    Gradients g = Gradients::zeros_like(model);
    g.feedback[3] = 123.0;
    EXPECT_EQ(sgd_step(model, g, 0.0), model);
}

TEST(Sgd, SingleParameterUpdate) {
    Rng rng = make_stream(35, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    Gradients g = Gradients::zeros_like(model);
    g.head_bias[1] = 2.5;
    const TTRNNModel next = sgd_step(model, g, 0.1);
    EXPECT_EQ(next.head_bias[1], model.head_bias[1] - 0.1 * 2.5);
    EXPECT_EQ(next.head_bias[0], model.head_bias[0]);
    EXPECT_EQ(next.input_layer.weights, model.input_layer.weights);
}

TEST(Sgd, SmallStepDecreasesLoss) {
    Rng rng = make_stream(36, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    const auto xs = random_inputs(rng, 3, kIn);
    const std::vector<Sample> batch{{xs, -1}};
    const std::vector<ForwardResult> res{forward_sequence(model, xs)};
    const TTRNNModel next = sgd_step(model, backward(model, batch, res), 1e-3);
    EXPECT_LT(mean_loss(next, batch), mean_loss(model, batch));
}

TEST(Init, DeterministicAndValid) {
    const ModelDims dims{{2, 2, 5, 6, 4}, {4, 4, 4, 4, 4}, {1, 6, 6, 6, 6, 1}};
    const TTRNNModel a = init_model(dims, 7);
    const TTRNNModel b = init_model(dims, 7);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, init_model(dims, 8));
    EXPECT_NO_THROW(a.validate());
    EXPECT_EQ(a.input_layer.weights.parameter_count(), 2016u);
    EXPECT_EQ(a.dims().ranks, dims.ranks);
    for (double v : a.input_layer.bias.data()) EXPECT_EQ(v, 0.0);
}

TEST(Init, PreActivationScaleIsSane) {
    const ModelDims dims{{2, 2, 5, 6, 4}, {4, 4, 4, 4, 4}, {1, 6, 6, 6, 6, 1}};
    Rng rng = make_stream(37, "test");
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const TTRNNModel model = init_model(dims, seed);
        // z-scored features: unit variance per entry.
        const DenseTensor x = oracle::random_tensor(Shape(dims.input_dims), rng);
        const DenseTensor y = tt_linear_forward(model.input_layer, x);
        for (double v : y.data()) {
            sum += v;
            sum_sq += v * v;
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    const double sd = std::sqrt(sum_sq / static_cast<double>(count) - mean * mean);
    EXPECT_GE(sd, 0.1);
    EXPECT_LE(sd, 10.0);
}

TEST(Init, RejectsInconsistentDims) {
    const ModelDims bad{{2, 2}, {2, 2, 2}, {1, 2, 1}};
    EXPECT_EQ(kind_of([&] { (void)init_model(bad, 0); }), ErrorKind::InvalidConfig);
}

namespace {

// Labels set by the sign of one input entry on the last step.
struct SeparableSet {
    std::vector<DenseTensor> xs;
    std::vector<Sample> samples;
    SeparableSet(std::size_t n, std::uint64_t seed) {
        Rng rng = make_stream(seed, "data");
        xs = random_inputs(rng, n + 2, kIn);
        for (std::size_t k = 0; k < n; ++k) {
            const std::span<const DenseTensor> w(xs.data() + k, 3);
            samples.push_back({w, w.back()[0] > 0 ? +1 : -1});
        }
    }
};

}  // namespace

TEST(Train, DeterministicForFixedSeed) {
    const SeparableSet data(10, 1);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 2;
    cfg.batch_size = 4;
    cfg.seq_len = 3;
    cfg.seed = 5;
    const TTRNNModel start = init_model(small_dims(), 5);
    const TrainResult a = train(start, data.samples, cfg);
    const TrainResult b = train(start, data.samples, cfg);
    EXPECT_EQ(a.model, b.model);
    EXPECT_EQ(a.epoch_loss, b.epoch_loss);
}

TEST(Train, SeparableLossDecreasesAndLogIsComplete) {
    const SeparableSet data(60, 2);
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.epochs = 6;
    cfg.batch_size = 10;
    cfg.seq_len = 3;
    const TrainResult r = train(init_model(small_dims(), 0), data.samples, cfg);
    ASSERT_EQ(r.epoch_loss.size(), 6u);
    EXPECT_LT(r.epoch_loss[0], r.initial_loss);
    for (std::size_t e = 1; e < 5; ++e) EXPECT_LT(r.epoch_loss[e], r.epoch_loss[e - 1]);
    EXPECT_EQ(r.snapshots.size(), 6u);
    EXPECT_EQ(r.core_changes.num_cores(), 3u);
    EXPECT_EQ(r.core_changes.num_epochs(), 5u);
}

TEST(Train, DefaultDimsGiveFiveCoreLog) {
    Rng rng = make_stream(38, "data");
    const std::vector<std::size_t> in{2, 2, 5, 1, 1}, out{2, 1, 1, 1, 2};
    const auto xs = random_inputs(rng, 12, in);
    std::vector<Sample> data;
    for (std::size_t k = 0; k + 2 <= xs.size(); ++k) data.push_back({std::span(xs.data() + k, 2), k % 2 ? 1 : -1});
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.epochs = 4;
    cfg.batch_size = 3;
    cfg.seq_len = 2;
    const TrainResult r = train(init_model(ModelDims{in, out, {1, 2, 2, 2, 2, 1}}, 1), data, cfg);
    EXPECT_EQ(r.core_changes.num_cores(), 5u);
    EXPECT_EQ(r.core_changes.num_entries(), 5u * 3u);
    EXPECT_EQ(r.core_changes.first_epoch, 2u);
}

TEST(Train, RejectsEmptyDatasetAndBadConfig) {
    TrainConfig cfg;
    EXPECT_EQ(kind_of([&] { (void)train(zero_model(small_dims()), {}, cfg); }), ErrorKind::EmptyDataset);
    cfg.batch_size = 0;
    EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::InvalidConfig);
}

TEST(Checkpoint, RoundTripIsBitExact) {
    Rng rng = make_stream(39, "test");
    const TTRNNModel model = oracle::random_model(rng, kIn, kOut, kRanks);
    std::stringstream ss;
    write_checkpoint(ss, model, CheckpointMeta{42, 7});
    const Checkpoint back = read_checkpoint(ss);
    EXPECT_EQ(back.model, model);
    EXPECT_EQ(back.meta.seed, 42u);
    EXPECT_EQ(back.meta.epoch, 7u);

    std::stringstream again;
    write_checkpoint(again, back.model, back.meta);
    std::stringstream first;
    write_checkpoint(first, model, CheckpointMeta{42, 7});
    EXPECT_EQ(again.str(), first.str());
}

TEST(Checkpoint, RejectsGarbage) {
    std::stringstream ss("not a checkpoint\n");
    EXPECT_EQ(kind_of([&] { (void)read_checkpoint(ss); }), ErrorKind::ParseError);
}
