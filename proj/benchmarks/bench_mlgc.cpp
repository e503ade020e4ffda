// Microbenchmarks for the numerical hot spots: symmetric eigensolves, the
// Karcher flow, the spectral loss with its gradient, k-means, and k-NN graph
// construction.  Sizes are chosen so a full sweep stays under a minute.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <benchmark/benchmark.h>

#include "mlgc/aggregate.hpp"
#include "mlgc/cluster.hpp"
#include "mlgc/embed.hpp"
#include "mlgc/graph.hpp"
#include "mlgc/spd.hpp"

namespace {

Eigen::MatrixXd random_gaussian(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = normal(rng);
  }
  return m;
}

mlgc::SpdMatrix random_spd(int dim, std::uint64_t seed) {
  const Eigen::MatrixXd g = random_gaussian(dim, dim, seed);
  return mlgc::SpdMatrix(g * g.transpose() +
                         0.1 * Eigen::MatrixXd::Identity(dim, dim));
}

void BM_SymEig(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const mlgc::SpdMatrix a = random_spd(dim, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlgc::sym_eig(a.matrix()));
  }
}
BENCHMARK(BM_SymEig)->Arg(64)->Arg(256)->Arg(512);

void BM_GeometricMean(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::vector<mlgc::SpdMatrix> mats;
  for (std::uint64_t s = 0; s < 4; ++s) {
    mats.push_back(random_spd(dim, s + 10));
  }
  mlgc::AggregationConfig config;
  config.max_iterations = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlgc::geometric_mean(mats, config));
  }
}
BENCHMARK(BM_GeometricMean)->Arg(64)->Arg(256);

void BM_SpectralLossGrad(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = 8, k = 5;
  const Eigen::MatrixXd x = random_gaussian(n, m, 2);
  const Eigen::MatrixXd lap = mlgc::laplacian(
      mlgc::knn_layer(random_gaussian(n, 2, 3), 10));
  const mlgc::SpdMatrix shifted =
      mlgc::shifted_laplacian(lap, mlgc::default_shift(lap));
  mlgc::EmbedderModel model(mlgc::EmbedderModel::default_layer_sizes(m, k), 7);
  for (auto _ : state) {
    const Eigen::MatrixXd y = mlgc::forward(model, x);
    const mlgc::LossValue loss = mlgc::spectral_loss(y, shifted);
    const Eigen::VectorXd grad = mlgc::backprop(
        model, x, mlgc::loss_jacobian(y, shifted, loss.cholesky_factor));
    benchmark::DoNotOptimize(grad);
  }
}
BENCHMARK(BM_SpectralLossGrad)->Arg(200)->Arg(1000);

void BM_Kmeans(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd points = random_gaussian(n, 5, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlgc::kmeans(points, 5, 10, 0));
  }
}
BENCHMARK(BM_Kmeans)->Arg(500)->Arg(2000);

void BM_KnnLayer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd points = random_gaussian(n, 2, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlgc::knn_layer(points, 20));
  }
}
BENCHMARK(BM_KnnLayer)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
