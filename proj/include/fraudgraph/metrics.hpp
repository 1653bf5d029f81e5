#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fraudgraph/graph.hpp"
#include "fraudgraph/rings.hpp"
#include "fraudgraph/split.hpp"

namespace fraudgraph {

// P(score_pos > score_neg) + P(tie) / 2. Throws ValidationError unless both
// classes are present.
double AucRoc(std::span<const double> scores,
              std::span<const std::uint8_t> labels);

// Mean of precision@k over the ranks k of positives, ranking by descending
// score with ties broken by ascending index. Throws ValidationError without
// positives.
double AveragePrecision(std::span<const double> scores,
                        std::span<const std::uint8_t> labels);

// Mean of the positive-class and negative-class F1 of |predicted| vs
// |labels|. A class with no true and no predicted members scores F1 = 1.
double MacroF1(std::span<const std::uint8_t> predicted,
               std::span<const std::uint8_t> labels);

struct ThresholdF1 {
  double macro_f1 = 0.0;
  double threshold = 0.5;  // predict positive iff score >= threshold
};

// Picks the threshold among the distinct validation scores that maximizes
// positive-class F1 on validation (ties to the lower threshold), then reports
// test macro-F1. When every validation score is equal there is no usable
// cut: the fallback labels everything positive or everything negative,
// whichever gives the better validation macro-F1 (threshold is then the
// score, or +inf for all-negative). Throws ValidationError on a
// single-class validation set or empty inputs.
ThresholdF1 MacroF1AtValThreshold(std::span<const double> val_scores,
                                  std::span<const std::uint8_t> val_labels,
                                  std::span<const double> test_scores,
                                  std::span<const std::uint8_t> test_labels);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

// Wilson score interval for a binomial proportion at |confidence| (two-sided).
// Throws ConfigError when trials == 0, successes > trials, or confidence is
// outside (0, 1).
WilsonInterval Wilson(std::size_t successes, std::size_t trials,
                      double confidence = 0.90);

inline constexpr double kRecoveryScoreThreshold = 0.5;
inline constexpr double kRecoveryMemberFraction = 0.8;

// True iff at least 80% of |member_scores| are strictly above 0.5.
bool RingRecovered(std::span<const double> member_scores,
                   double threshold = kRecoveryScoreThreshold);

struct RecoveryRow {
  RingType type = RingType::kNone;
  std::size_t recovered = 0;
  std::size_t total = 0;
  double fraction = 0.0;
  WilsonInterval interval;
};

// Per ring type over the rings assigned to |partition|. |user_scores| is
// indexed by user id; NaN marks an unscored user, which is an error for any
// member of a counted ring (ValidationError naming the user).
std::vector<RecoveryRow> RingRecovery(std::span<const double> user_scores,
                                      const std::vector<RingRecord>& rings,
                                      const SplitAssignment& assignment,
                                      Partition partition = Partition::kTest,
                                      double threshold = kRecoveryScoreThreshold,
                                      double confidence = 0.90);

struct MetricsReport {
  std::size_t n_test = 0;
  std::size_t n_test_fraud = 0;
  double auc_roc = 0.0;
  double average_precision = 0.0;
  double macro_f1 = 0.0;
  double threshold = 0.5;
  std::vector<RecoveryRow> recovery;
};

// Task 1 on test users (threshold tuned on val) plus Task 2 on test rings.
// Every val and test user must be scored.
MetricsReport Evaluate(const GraphData& graph,
                       const std::vector<RingRecord>& rings,
                       const SplitAssignment& assignment,
                       std::span<const double> user_scores);

// Score files: one "user_id<TAB>score" row per scored user, no header.
// Returns a vector over |n_users| ids with NaN for absent users. Throws
// IoError on unreadable files and ValidationError on malformed rows,
// out-of-range or duplicate ids, and non-finite or out-of-[0,1] scores.
std::vector<double> ReadScoreFile(const std::string& path, std::size_t n_users);
void WriteScoreFile(const std::string& path, std::span<const NodeId> user_ids,
                    std::span<const double> scores);

std::string MetricsText(const MetricsReport& report);
std::string MetricsCsv(const MetricsReport& report);

}  // namespace fraudgraph
