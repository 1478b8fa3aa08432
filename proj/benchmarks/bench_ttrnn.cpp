#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ttrnn/neural.hpp"
#include "ttrnn/tensor.hpp"
#include "ttrnn/tt_format.hpp"

using namespace ttrnn;

namespace {

DenseTensor gaussian(const Shape& shape, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseTensor t(shape);
    for (double& v : t.data()) v = normal(rng);
    return t;
}

const ModelDims kDefaultDims{{2, 2, 5, 6, 4}, {4, 4, 4, 4, 4}, {1, 6, 6, 6, 6, 1}};

}  // namespace

static void BM_Contract(benchmark::State& state) {
    Rng rng = make_stream(1, "bench");
    const auto n = static_cast<std::size_t>(state.range(0));
    const DenseTensor a = gaussian(Shape{n, n, n}, rng);
    const DenseTensor b = gaussian(Shape{n, n}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(contract(a, 2, b, 1));
}
BENCHMARK(BM_Contract)->Arg(8)->Arg(16)->Arg(32);

static void BM_TTLinearForward(benchmark::State& state) {
    const TTRNNModel model = init_model(kDefaultDims, 2);
    Rng rng = make_stream(2, "bench");
    const DenseTensor x = gaussian(Shape{2, 2, 5, 6, 4}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(tt_linear_forward(model.input_layer, x));
}
BENCHMARK(BM_TTLinearForward);

// The same map through the materialized 1024 x 480 matrix.
static void BM_DenseForward(benchmark::State& state) {
    const TTRNNModel model = init_model(kDefaultDims, 2);
    const DenseTensor w = mpo_to_matrix(model.input_layer.weights);
    Rng rng = make_stream(2, "bench");
    const DenseTensor x = gaussian(Shape{480}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(contract(w, 2, x, 1));
}
BENCHMARK(BM_DenseForward);

static void BM_TTSvd(benchmark::State& state) {
    Rng rng = make_stream(3, "bench");
    const DenseTensor t = gaussian(Shape{6, 6, 6, 6, 6}, rng);
    const std::vector<std::size_t> ranks{1, 6, 6, 6, 6, 1};
    for (auto _ : state) benchmark::DoNotOptimize(tt_svd(t, ranks));
}
BENCHMARK(BM_TTSvd);

static void BM_ForwardBackward(benchmark::State& state) {
    const TTRNNModel model = init_model(kDefaultDims, 4);
    Rng rng = make_stream(4, "bench");
    std::vector<DenseTensor> steps;
    for (int t = 0; t < 10; ++t) steps.push_back(gaussian(Shape{2, 2, 5, 6, 4}, rng));
    const std::vector<Sample> batch{Sample{steps, 1}};
    for (auto _ : state) {
        std::vector<ForwardResult> results{forward_sequence(model, steps)};
        benchmark::DoNotOptimize(backward(model, batch, results));
    }
}
BENCHMARK(BM_ForwardBackward);
BENCHMARK_MAIN();
