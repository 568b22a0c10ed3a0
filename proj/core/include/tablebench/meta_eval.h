// Copyright 2026 The tablebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TABLEBENCH_META_EVAL_H_
#define TABLEBENCH_META_EVAL_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tablebench/score_record.h"

namespace tablebench {

struct Rating {
  std::string pair_id;
  std::string annotator_id;
  double score = 0.0;
  std::string timestamp;
};

nlohmann::json to_json(const Rating& r);
Rating rating_from_json(const nlohmann::json& j);

// pair id -> annotator id -> score, on the 0-10 interval scale.
class RatingSet {
 public:
  // Later ratings for the same (pair, annotator) replace earlier ones.
  // Throws std::out_of_range for scores outside [0, 10].
  void add(const std::string& pair_id, const std::string& annotator_id, double score);

  const std::map<std::string, std::map<std::string, double>>& by_pair() const { return by_pair_; }
  std::vector<std::string> annotators() const;
  std::size_t size() const;
  bool empty() const { return by_pair_.empty(); }

  // Mean human score per pair.
  std::map<std::string, double> means() const;

 private:
  std::map<std::string, std::map<std::string, double>> by_pair_;
};

// JSONL of {pair_id, annotator_id, score, timestamp}; malformed lines throw IoError.
RatingSet load_ratings_jsonl(const std::filesystem::path& path);

// Correlations return nullopt when either input has zero variance.
// Mismatched lengths or fewer than two points throw std::invalid_argument.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);
// Tau-b over all pairs.
std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y);

// 1-based ranks, ties receive the mean of the ranks they span.
std::vector<double> mid_ranks(std::span<const double> x);

// Interval alpha from the coincidence matrix; units with a single rating are
// not pairable and drop out. Throws DegenerateInput with fewer than two
// pairable units.
double krippendorff_alpha_interval(const RatingSet& ratings);

// Mean over annotators of pearson(annotator, mean of the others), computed on
// pairs rated by every annotator. Folds with zero variance are skipped.
double annotator_ceiling(const RatingSet& ratings);

struct AgreementReport {
  double alpha = 0.0;
  std::optional<double> mean_pairwise_pearson;
  double mean_abs_difference = 0.0;
  std::optional<double> leave_one_out_pearson;
  std::size_t n_pairs = 0;
  std::size_t n_annotators = 0;
};

AgreementReport agreement(const RatingSet& ratings);

struct CorrelationReport {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> kendall;
  std::size_t n = 0;
};

enum class MetricSelector {
  kTeds,
  kGritsTop,
  kGritsCon,
  kGritsAvg,
  kScoreIndex,
  kScoreContent,
  kScoreAvg,
  kJudge,
};

std::string_view metric_name(MetricSelector m);
std::optional<MetricSelector> metric_from_name(std::string_view name);
// Factor mapping the metric's theoretical range onto 0-10.
double default_scale(MetricSelector m);
std::optional<double> select_metric(const ScoreRecord& r, MetricSelector m);

// Joins records to ratings on ScoreRecord::pair_id(), averages the human
// ratings per pair and correlates them with the rescaled metric. Records
// without a value for the metric are skipped. Throws JoinEmpty when nothing
// joins and DegenerateInput when fewer than two pairs remain.
CorrelationReport metric_vs_human(std::span<const ScoreRecord> records, const RatingSet& ratings,
                                  MetricSelector metric, double scale);

}  // namespace tablebench

#endif  // TABLEBENCH_META_EVAL_H_
