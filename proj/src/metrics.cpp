#include "fraudgraph/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "fraudgraph/errors.hpp"

namespace fraudgraph {

namespace {

void CheckSizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": " + std::to_string(a) +
                          " scores vs " + std::to_string(b) + " labels");
  }
}

// Indices sorted by descending score, ties by ascending index.
std::vector<std::size_t> RankOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

double F1(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) /
         static_cast<double>(2 * tp + fp + fn);
}

}  // namespace

double AucRoc(std::span<const double> scores,
              std::span<const std::uint8_t> labels) {
  CheckSizes(scores.size(), labels.size(), "auc");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Rank-sum with midranks for ties.
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        pos_rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw ValidationError("auc needs both classes");
  }
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) /
         (np * static_cast<double>(n_neg));
}

double AveragePrecision(std::span<const double> scores,
                        std::span<const std::uint8_t> labels) {
  CheckSizes(scores.size(), labels.size(), "average precision");
  const auto order = RankOrder(scores);
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  if (hits == 0) throw ValidationError("average precision needs a positive");
  return sum / static_cast<double>(hits);
}

double MacroF1(std::span<const std::uint8_t> predicted,
               std::span<const std::uint8_t> labels) {
  CheckSizes(predicted.size(), labels.size(), "macro f1");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predicted[i] && labels[i]) ++tp;
    else if (predicted[i]) ++fp;
    else if (labels[i]) ++fn;
    else ++tn;
  }
  return 0.5 * (F1(tp, fp, fn) + F1(tn, fn, fp));
}

ThresholdF1 MacroF1AtValThreshold(std::span<const double> val_scores,
                                  std::span<const std::uint8_t> val_labels,
                                  std::span<const double> test_scores,
                                  std::span<const std::uint8_t> test_labels) {
  CheckSizes(val_scores.size(), val_labels.size(), "val");
  CheckSizes(test_scores.size(), test_labels.size(), "test");
  if (val_scores.empty() || test_scores.empty()) {
    throw ValidationError("threshold selection needs val and test scores");
  }
  const std::size_t n_pos = static_cast<std::size_t>(
      std::count_if(val_labels.begin(), val_labels.end(),
                    [](std::uint8_t l) { return l != 0; }));
  if (n_pos == 0 || n_pos == val_labels.size()) {
    throw ValidationError("validation set has a single class");
  }

  auto predict = [](std::span<const double> s, double t) {
    std::vector<std::uint8_t> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] >= t ? 1 : 0;
    return out;
  };

  ThresholdF1 out;
  const bool constant = std::all_of(val_scores.begin(), val_scores.end(),
                                    [&](double s) { return s == val_scores[0]; });
  if (constant) {
    const double t_all = val_scores[0];
    const double t_none = std::numeric_limits<double>::infinity();
    const double f_all = MacroF1(predict(val_scores, t_all), val_labels);
    const double f_none = MacroF1(predict(val_scores, t_none), val_labels);
    out.threshold = f_all >= f_none ? t_all : t_none;
    out.macro_f1 = MacroF1(predict(test_scores, out.threshold), test_labels);
    return out;
  }

  // Sweep thresholds from high to low; at each distinct score t the
  // predicted positives are exactly the scores >= t.
  const auto order = RankOrder(val_scores);
  std::size_t tp = 0, fp = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = val_scores[order[i]];
    std::size_t j = i;
    while (j < order.size() && val_scores[order[j]] == t) {
      if (val_labels[order[j]]) ++tp; else ++fp;
      ++j;
    }
    const double f1 = F1(tp, fp, n_pos - tp);
    if (f1 >= best) {  // later t is lower: ties move to the lower threshold
      best = f1;
      out.threshold = t;
    }
    i = j;
  }
  out.macro_f1 = MacroF1(predict(test_scores, out.threshold), test_labels);
  return out;
}

WilsonInterval Wilson(std::size_t successes, std::size_t trials,
                      double confidence) {
  if (trials == 0) throw ConfigError("wilson interval needs trials >= 1");
  if (successes > trials) throw ConfigError("successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("confidence must be in (0, 1)");
  }
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

bool RingRecovered(std::span<const double> member_scores, double threshold) {
  if (member_scores.empty()) return false;
  std::size_t above = 0;
  for (double s : member_scores) above += s > threshold ? 1 : 0;
  // above / n >= 0.8 in exact integer arithmetic.
  return 5 * above >= 4 * member_scores.size();
}

std::vector<RecoveryRow> RingRecovery(std::span<const double> user_scores,
                                      const std::vector<RingRecord>& rings,
                                      const SplitAssignment& assignment,
                                      Partition partition, double threshold,
                                      double confidence) {
  std::vector<RecoveryRow> rows;
  for (RingType type : kAllRingTypes) {
    RecoveryRow row;
    row.type = type;
    for (const RingRecord& ring : rings) {
      if (ring.type != type ||
          assignment.ring_partition.at(static_cast<std::size_t>(ring.ring_id)) !=
              partition) {
        continue;
      }
      std::vector<double> member_scores;
      for (NodeId u : ring.member_user_ids) {
        if (u >= user_scores.size() || std::isnan(user_scores[u])) {
          throw ValidationError("ring " + std::to_string(ring.ring_id) +
                                " member user " + std::to_string(u) +
                                " has no score");
        }
        member_scores.push_back(user_scores[u]);
      }
      ++row.total;
      if (RingRecovered(member_scores, threshold)) ++row.recovered;
    }
    if (row.total > 0) {
      row.fraction =
          static_cast<double>(row.recovered) / static_cast<double>(row.total);
      row.interval = Wilson(row.recovered, row.total, confidence);
    } else {
      row.interval = {0.0, 1.0};
    }
    rows.push_back(row);
  }
  return rows;
}

MetricsReport Evaluate(const GraphData& graph,
                       const std::vector<RingRecord>& rings,
                       const SplitAssignment& assignment,
                       std::span<const double> user_scores) {
  const NodeTable& users = graph.table(NodeType::kUser);
  if (user_scores.size() != users.size() ||
      assignment.user_partition.size() != users.size()) {
    throw ValidationError("scores/split do not cover the graph's users");
  }
  std::vector<double> val_s, test_s;
  std::vector<std::uint8_t> val_l, test_l;
  for (NodeId u = 0; u < users.size(); ++u) {
    const Partition p = assignment.user_partition[u];
    if (p == Partition::kTrain) continue;
    if (std::isnan(user_scores[u])) {
      throw ValidationError("missing score for " +
                            std::string(PartitionName(p)) + " user " +
                            std::to_string(u));
    }
    (p == Partition::kVal ? val_s : test_s).push_back(user_scores[u]);
    (p == Partition::kVal ? val_l : test_l).push_back(users.label(u));
  }
  MetricsReport report;
  report.n_test = test_s.size();
  report.n_test_fraud = static_cast<std::size_t>(
      std::count(test_l.begin(), test_l.end(), std::uint8_t{1}));
  report.auc_roc = AucRoc(test_s, test_l);
  report.average_precision = AveragePrecision(test_s, test_l);
  const ThresholdF1 f1 = MacroF1AtValThreshold(val_s, val_l, test_s, test_l);
  report.macro_f1 = f1.macro_f1;
  report.threshold = f1.threshold;
  report.recovery = RingRecovery(user_scores, rings, assignment);
  return report;
}

std::vector<double> ReadScoreFile(const std::string& path,
                                  std::size_t n_users) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score file " + path);
  std::vector<double> scores(n_users, std::numeric_limits<double>::quiet_NaN());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    auto bad = [&](const std::string& why) {
      return ValidationError(path + ":" + std::to_string(line_no) + ": " + why);
    };
    if (tab == std::string::npos) throw bad("expected user_id<TAB>score");
    std::uint64_t id = 0;
    double score = 0.0;
    const char* first = line.data();
    auto r1 = std::from_chars(first, first + tab, id);
    if (r1.ec != std::errc() || r1.ptr != first + tab) throw bad("bad user id");
    auto r2 = std::from_chars(first + tab + 1, first + line.size(), score);
    if (r2.ec != std::errc() || r2.ptr != first + line.size()) {
      throw bad("bad score");
    }
    if (id >= n_users) throw bad("user id out of range");
    if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
      throw bad("score outside [0, 1]");
    }
    if (!std::isnan(scores[id])) throw bad("duplicate user id");
    scores[id] = score;
  }
  return scores;
}

void WriteScoreFile(const std::string& path, std::span<const NodeId> user_ids,
                    std::span<const double> scores) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write score file " + path);
  char buf[64];
  for (std::size_t i = 0; i < user_ids.size(); ++i) {
    auto r = std::to_chars(buf, buf + sizeof buf, scores[i]);
    out << user_ids[i] << '\t' << std::string_view(buf, r.ptr - buf) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

std::string MetricsText(const MetricsReport& r) {
  char buf[200];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "test users %zu (fraud %zu)\nauc_roc            %.4f\n"
                "average_precision  %.4f\nmacro_f1           %.4f\n"
                "threshold          %.4f\n",
                r.n_test, r.n_test_fraud, r.auc_roc, r.average_precision,
                r.macro_f1, r.threshold);
  out += buf;
  out += "ring_type     recovered  total  fraction  wilson90\n";
  for (const auto& row : r.recovery) {
    std::snprintf(buf, sizeof buf, "%-12s %10zu %6zu %9.3f  [%.3f, %.3f]\n",
                  std::string(RingTypeName(row.type)).c_str(), row.recovered,
                  row.total, row.fraction, row.interval.lower,
                  row.interval.upper);
    out += buf;
  }
  return out;
}

std::string MetricsCsv(const MetricsReport& r) {
  char buf[200];
  std::string out = "metric,ring_type,value,total,lower,upper\n";
  auto scalar = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "%s,,%.10g,,,\n", name, v);
    out += buf;
  };
  scalar("auc_roc", r.auc_roc);
  scalar("average_precision", r.average_precision);
  scalar("macro_f1", r.macro_f1);
  scalar("threshold", r.threshold);
  for (const auto& row : r.recovery) {
    std::snprintf(buf, sizeof buf, "ring_recovery,%s,%zu,%zu,%.10g,%.10g\n",
                  std::string(RingTypeName(row.type)).c_str(), row.recovered,
                  row.total, row.interval.lower, row.interval.upper);
    out += buf;
  }
  return out;
}

}  // namespace fraudgraph
