#include "fraudgraph/baselines.hpp"

#include <cmath>
#include <numeric>

#include "fraudgraph/errors.hpp"

namespace fraudgraph {

DesignMatrix TabularFeatures(const GraphData& graph) {
  const NodeTable& users = graph.table(NodeType::kUser);
  DesignMatrix m;
  m.rows = users.size();
  m.cols = users.width();
  m.values = users.features();
  return m;
}

DesignMatrix GraphAggregateFeatures(const GraphData& graph) {
  const DesignMatrix base = TabularFeatures(graph);
  const ProjectedUserGraph projected = ProjectUserGraph(graph);
  const auto device_adj = projected.Adjacency(ShareChannel::kDevice);
  const auto ip_adj = projected.Adjacency(ShareChannel::kIp);
  const auto union_adj = projected.UnionAdjacency();
  DesignMatrix m;
  m.rows = base.rows;
  m.cols = 2 * base.cols + 2;
  m.values.assign(m.rows * m.cols, 0.0);
  for (std::size_t u = 0; u < m.rows; ++u) {
    double* row = m.values.data() + u * m.cols;
    const auto own = base.Row(u);
    std::copy(own.begin(), own.end(), row);
    row[base.cols] = std::log1p(static_cast<double>(device_adj[u].size()));
    row[base.cols + 1] = std::log1p(static_cast<double>(ip_adj[u].size()));
    const auto& nbrs = union_adj[u];
    if (nbrs.empty()) continue;
    double* mean = row + base.cols + 2;
    for (NodeId v : nbrs) {
      const auto f = base.Row(v);
      for (std::size_t c = 0; c < base.cols; ++c) mean[c] += f[c];
    }
    for (std::size_t c = 0; c < base.cols; ++c) {
      mean[c] /= static_cast<double>(nbrs.size());
    }
  }
  return m;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double LogisticLoss(const WeightedDataset& data, std::span<const double> beta,
                    double bias, double l2) {
  double total = 0.0, weight_sum = 0.0;
  for (std::size_t i = 0; i < data.x.rows; ++i) {
    const double z = Dot(data.x.Row(i), beta) + bias;
    // log(1 + exp(z)) - y z, computed stably.
    const double softplus =
        z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    total += data.w[i] * (softplus - (data.y[i] ? z : 0.0));
    weight_sum += data.w[i];
  }
  return total / weight_sum + 0.5 * l2 * Dot(beta, beta);
}

double LogisticGradient(const WeightedDataset& data,
                        std::span<const double> beta, double bias, double l2,
                        std::vector<double>& grad_beta) {
  grad_beta.assign(beta.size(), 0.0);
  double grad_bias = 0.0, weight_sum = 0.0;
  for (std::size_t i = 0; i < data.x.rows; ++i) {
    const auto row = data.x.Row(i);
    const double r =
        data.w[i] * (Sigmoid(Dot(row, beta) + bias) - (data.y[i] ? 1.0 : 0.0));
    for (std::size_t c = 0; c < beta.size(); ++c) grad_beta[c] += r * row[c];
    grad_bias += r;
    weight_sum += data.w[i];
  }
  for (std::size_t c = 0; c < beta.size(); ++c) {
    grad_beta[c] = grad_beta[c] / weight_sum + l2 * beta[c];
  }
  return grad_bias / weight_sum;
}

LinearModel FitLogistic(const DesignMatrix& x,
                        std::span<const std::uint8_t> labels,
                        std::span<const NodeId> train_rows,
                        const TrainOptions& options) {
  std::size_t n_pos = 0;
  for (NodeId r : train_rows) n_pos += labels[r] ? 1 : 0;
  const std::size_t n = train_rows.size();
  if (n_pos == 0 || n_pos == n) {
    throw ValidationError("training data has a single class");
  }
  LinearModel model;
  model.options = options;
  model.mean.assign(x.cols, 0.0);
  model.scale.assign(x.cols, 0.0);
  for (NodeId r : train_rows) {
    const auto row = x.Row(r);
    for (std::size_t c = 0; c < x.cols; ++c) model.mean[c] += row[c];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);
  for (NodeId r : train_rows) {
    const auto row = x.Row(r);
    for (std::size_t c = 0; c < x.cols; ++c) {
      const double d = row[c] - model.mean[c];
      model.scale[c] += d * d;
    }
  }
  for (double& s : model.scale) s = std::sqrt(s / static_cast<double>(n));

  WeightedDataset data;
  data.x.rows = n;
  data.x.cols = x.cols;
  data.x.values.resize(n * x.cols);
  const double w_pos = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
  const double w_neg =
      static_cast<double>(n) / (2.0 * static_cast<double>(n - n_pos));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.Row(train_rows[i]);
    for (std::size_t c = 0; c < x.cols; ++c) {
      data.x.values[i * x.cols + c] =
          model.scale[c] > 0 ? (row[c] - model.mean[c]) / model.scale[c] : 0.0;
    }
    const bool pos = labels[train_rows[i]] != 0;
    data.y.push_back(pos ? 1 : 0);
    data.w.push_back(pos ? w_pos : w_neg);
  }

  model.weights.assign(x.cols, 0.0);
  std::vector<double> grad;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double grad_bias =
        LogisticGradient(data, model.weights, model.bias, options.l2, grad);
    for (std::size_t c = 0; c < x.cols; ++c) {
      model.weights[c] -= options.learning_rate * grad[c];
    }
    model.bias -= options.learning_rate * grad_bias;
  }
  return model;
}

namespace {

std::vector<std::uint8_t> UserLabels(const GraphData& graph) {
  return graph.table(NodeType::kUser).labels();
}

LinearModel Train(const GraphData& graph, const SplitAssignment& assignment,
                  const TrainOptions& options, ModelKind kind) {
  if (assignment.user_partition.size() != graph.table(NodeType::kUser).size()) {
    throw ValidationError("split does not cover the graph's users");
  }
  const DesignMatrix x = kind == ModelKind::kTabular
                             ? TabularFeatures(graph)
                             : GraphAggregateFeatures(graph);
  const auto train = assignment.Users(Partition::kTrain);
  LinearModel model = FitLogistic(x, UserLabels(graph), train, options);
  model.kind = kind;
  model.user_features = graph.table(NodeType::kUser).feature_names();
  return model;
}

}  // namespace

LinearModel TrainTabular(const GraphData& graph,
                         const SplitAssignment& assignment,
                         const TrainOptions& options) {
  return Train(graph, assignment, options, ModelKind::kTabular);
}

LinearModel TrainGraphAggregate(const GraphData& graph,
                                const SplitAssignment& assignment,
                                const TrainOptions& options) {
  return Train(graph, assignment, options, ModelKind::kGraphAggregate);
}

std::vector<double> Predict(const LinearModel& model, const GraphData& graph,
                            std::span<const NodeId> user_ids) {
  const NodeTable& users = graph.table(NodeType::kUser);
  if (users.feature_names() != model.user_features) {
    throw ValidationError("model expects " +
                          std::to_string(model.user_features.size()) +
                          " user features, graph has " +
                          std::to_string(users.width()));
  }
  const DesignMatrix x = model.kind == ModelKind::kTabular
                             ? TabularFeatures(graph)
                             : GraphAggregateFeatures(graph);
  std::vector<double> out;
  out.reserve(user_ids.size());
  for (NodeId u : user_ids) {
    const auto row = x.Row(u);
    double z = model.bias;
    for (std::size_t c = 0; c < x.cols; ++c) {
      if (model.scale[c] > 0) {
        z += model.weights[c] * (row[c] - model.mean[c]) / model.scale[c];
      }
    }
    out.push_back(Sigmoid(z));
  }
  return out;
}

std::vector<double> PredictAll(const LinearModel& model,
                               const GraphData& graph) {
  std::vector<NodeId> ids(graph.table(NodeType::kUser).size());
  std::iota(ids.begin(), ids.end(), NodeId{0});
  return Predict(model, graph, ids);
}

}  // namespace fraudgraph
