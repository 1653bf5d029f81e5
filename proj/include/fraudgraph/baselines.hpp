#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fraudgraph/graph.hpp"
#include "fraudgraph/split.hpp"

namespace fraudgraph {

// Dense row-major matrix.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> Row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
};

// User feature columns as stored.
DesignMatrix TabularFeatures(const GraphData& graph);

// Tabular columns, then log1p(device-share neighbours), log1p(ip-share
// neighbours), then the mean of each tabular column over the union of
// projected neighbours (zeros for isolated users).
DesignMatrix GraphAggregateFeatures(const GraphData& graph);

struct TrainOptions {
  double learning_rate = 0.5;
  int epochs = 400;
  double l2 = 1e-3;
};

// Logistic loss with per-sample weights:
//   L = sum_i w_i * bce(sigmoid(x_i . beta + b), y_i) / sum_i w_i
//       + l2 / 2 * |beta|^2
struct WeightedDataset {
  DesignMatrix x;
  std::vector<std::uint8_t> y;
  std::vector<double> w;
};

double LogisticLoss(const WeightedDataset& data, std::span<const double> beta,
                    double bias, double l2);
// Writes dL/dbeta into |grad_beta| (resized) and returns dL/dbias.
double LogisticGradient(const WeightedDataset& data,
                        std::span<const double> beta, double bias, double l2,
                        std::vector<double>& grad_beta);

enum class ModelKind { kTabular, kGraphAggregate };

struct LinearModel {
  ModelKind kind = ModelKind::kTabular;
  std::vector<std::string> user_features;  // stored user columns at training
  std::vector<double> mean;   // standardization, train partition only
  std::vector<double> scale;  // 0 marks a constant column
  std::vector<double> weights;
  double bias = 0.0;
  TrainOptions options;
};

double Sigmoid(double z);

// Full-batch gradient descent from zero weights on standardized train-user
// features, with inverse-frequency class weights n / (2 n_class). Throws
// ValidationError when the train partition lacks a class.
LinearModel FitLogistic(const DesignMatrix& x,
                        std::span<const std::uint8_t> labels,
                        std::span<const NodeId> train_rows,
                        const TrainOptions& options = {});

LinearModel TrainTabular(const GraphData& graph,
                         const SplitAssignment& assignment,
                         const TrainOptions& options = {});
LinearModel TrainGraphAggregate(const GraphData& graph,
                                const SplitAssignment& assignment,
                                const TrainOptions& options = {});

// Scores in [0, 1] for |user_ids|. Throws ValidationError when the graph's
// user columns differ from the model's.
std::vector<double> Predict(const LinearModel& model, const GraphData& graph,
                            std::span<const NodeId> user_ids);
// Scores for every user, indexed by id.
std::vector<double> PredictAll(const LinearModel& model,
                               const GraphData& graph);

}  // namespace fraudgraph
