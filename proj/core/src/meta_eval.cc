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

#include "tablebench/meta_eval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tablebench/errors.h"

namespace tablebench {

nlohmann::json to_json(const Rating& r) {
  return {{"pair_id", r.pair_id},
          {"annotator_id", r.annotator_id},
          {"score", r.score},
          {"timestamp", r.timestamp}};
}

Rating rating_from_json(const nlohmann::json& j) {
  Rating r;
  r.pair_id = j.at("pair_id").get<std::string>();
  r.annotator_id = j.at("annotator_id").get<std::string>();
  r.score = j.at("score").get<double>();
  r.timestamp = j.value("timestamp", "");
  return r;
}

void RatingSet::add(const std::string& pair_id, const std::string& annotator_id, double score) {
  if (!(score >= 0.0 && score <= 10.0)) {
    throw std::out_of_range("rating outside 0-10: " + std::to_string(score));
  }
  by_pair_[pair_id][annotator_id] = score;
}

std::vector<std::string> RatingSet::annotators() const {
  std::set<std::string> ids;
  for (const auto& [pair, scores] : by_pair_) {
    for (const auto& [annotator, score] : scores) ids.insert(annotator);
  }
  return {ids.begin(), ids.end()};
}

std::size_t RatingSet::size() const {
  std::size_t n = 0;
  for (const auto& [pair, scores] : by_pair_) n += scores.size();
  return n;
}

std::map<std::string, double> RatingSet::means() const {
  std::map<std::string, double> out;
  for (const auto& [pair, scores] : by_pair_) {
    if (scores.empty()) continue;
    double sum = 0.0;
    for (const auto& [annotator, score] : scores) sum += score;
    out[pair] = sum / static_cast<double>(scores.size());
  }
  return out;
}

RatingSet load_ratings_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings file " + path.string());
  RatingSet set;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Rating r = rating_from_json(nlohmann::json::parse(line));
      set.add(r.pair_id, r.annotator_id, r.score);
    } catch (const std::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return set;
}

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation inputs differ in length");
  if (x.size() < 2) throw std::invalid_argument("correlation needs at least two points");
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const auto n = static_cast<long double>(x.size());
  long double mx = 0.0L;
  long double my = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0.0L;
  long double sxx = 0.0L;
  long double syy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0L || syy == 0.0L) return std::nullopt;
  const long double r = sxy / std::sqrt(sxx * syy);
  return static_cast<double>(std::clamp(r, -1.0L, 1.0L));
}

std::vector<double> mid_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const std::vector<double> rx = mid_ranks(x);
  const std::vector<double> ry = mid_ranks(y);
  return pearson(rx, ry);
}

std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  long long concordant = 0;
  long long discordant = 0;
  long long ties_x = 0;  // tied in x only
  long long ties_y = 0;  // tied in y only
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = sign(x[i] - x[j]);
      const int sy = sign(y[i] - y[j]);
      if (sx == 0 && sy == 0) continue;
      if (sx == 0) {
        ++ties_x;
      } else if (sy == 0) {
        ++ties_y;
      } else if (sx == sy) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long double denom_x = static_cast<long double>(concordant + discordant + ties_y);
  const long double denom_y = static_cast<long double>(concordant + discordant + ties_x);
  if (denom_x == 0.0L || denom_y == 0.0L) return std::nullopt;
  const long double tau = static_cast<long double>(concordant - discordant) / std::sqrt(denom_x * denom_y);
  return static_cast<double>(std::clamp(tau, -1.0L, 1.0L));
}

double krippendorff_alpha_interval(const RatingSet& ratings) {
  // Coincidence matrix over distinct values.
  std::vector<double> values;
  for (const auto& [pair, scores] : ratings.by_pair()) {
    if (scores.size() < 2) continue;
    for (const auto& [annotator, score] : scores) values.push_back(score);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t v = values.size();
  const auto index_of = [&](double s) {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), s) - values.begin());
  };

  std::vector<long double> coincidence(v * v, 0.0L);
  std::size_t pairable_units = 0;
  for (const auto& [pair, scores] : ratings.by_pair()) {
    const std::size_t m = scores.size();
    if (m < 2) continue;
    ++pairable_units;
    std::vector<std::size_t> idx;
    for (const auto& [annotator, score] : scores) idx.push_back(index_of(score));
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        coincidence[idx[a] * v + idx[b]] += 1.0L / static_cast<long double>(m - 1);
      }
    }
  }
  if (pairable_units < 2) {
    throw DegenerateInput("krippendorff alpha needs at least two units rated more than once");
  }

  std::vector<long double> marginal(v, 0.0L);
  long double n = 0.0L;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) marginal[c] += coincidence[c * v + k];
    n += marginal[c];
  }
  long double observed = 0.0L;
  long double expected = 0.0L;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) {
      const long double d = values[c] - values[k];
      observed += coincidence[c * v + k] * d * d;
      expected += marginal[c] * marginal[k] * d * d;
    }
  }
  observed /= n;
  expected /= n * (n - 1.0L);
  if (observed == 0.0L) return 1.0;
  return static_cast<double>(1.0L - observed / expected);
}

namespace {

// Pairs rated by every annotator, as one score vector per annotator.
std::vector<std::vector<double>> full_coverage_matrix(const RatingSet& ratings,
                                                      const std::vector<std::string>& annotators) {
  std::vector<std::vector<double>> cols(annotators.size());
  for (const auto& [pair, scores] : ratings.by_pair()) {
    if (scores.size() != annotators.size()) continue;
    for (std::size_t a = 0; a < annotators.size(); ++a) cols[a].push_back(scores.at(annotators[a]));
  }
  return cols;
}

}  // namespace

double annotator_ceiling(const RatingSet& ratings) {
  const std::vector<std::string> annotators = ratings.annotators();
  if (annotators.size() < 3) throw DegenerateInput("leave-one-out needs at least three annotators");
  const auto cols = full_coverage_matrix(ratings, annotators);
  const std::size_t n = cols.front().size();
  if (n < 2) throw DegenerateInput("fewer than two pairs rated by every annotator");

  double sum = 0.0;
  int folds = 0;
  for (std::size_t a = 0; a < annotators.size(); ++a) {
    std::vector<double> others(n, 0.0);
    for (std::size_t b = 0; b < annotators.size(); ++b) {
      if (b == a) continue;
      for (std::size_t i = 0; i < n; ++i) others[i] += cols[b][i];
    }
    for (double& o : others) o /= static_cast<double>(annotators.size() - 1);
    if (auto r = pearson(cols[a], others)) {
      sum += *r;
      ++folds;
    }
  }
  if (folds == 0) throw DegenerateInput("every leave-one-out fold has zero variance");
  return sum / folds;
}

AgreementReport agreement(const RatingSet& ratings) {
  AgreementReport report;
  const std::vector<std::string> annotators = ratings.annotators();
  report.n_annotators = annotators.size();
  report.n_pairs = ratings.by_pair().size();
  report.alpha = krippendorff_alpha_interval(ratings);

  double pearson_sum = 0.0;
  int pearson_count = 0;
  double abs_sum = 0.0;
  std::size_t abs_count = 0;
  for (std::size_t a = 0; a < annotators.size(); ++a) {
    for (std::size_t b = a + 1; b < annotators.size(); ++b) {
      std::vector<double> xa;
      std::vector<double> xb;
      for (const auto& [pair, scores] : ratings.by_pair()) {
        auto ia = scores.find(annotators[a]);
        auto ib = scores.find(annotators[b]);
        if (ia == scores.end() || ib == scores.end()) continue;
        xa.push_back(ia->second);
        xb.push_back(ib->second);
        abs_sum += std::abs(ia->second - ib->second);
        ++abs_count;
      }
      if (xa.size() < 2) continue;
      if (auto r = pearson(xa, xb)) {
        pearson_sum += *r;
        ++pearson_count;
      }
    }
  }
  if (pearson_count > 0) report.mean_pairwise_pearson = pearson_sum / pearson_count;
  report.mean_abs_difference = abs_count > 0 ? abs_sum / static_cast<double>(abs_count) : 0.0;
  try {
    report.leave_one_out_pearson = annotator_ceiling(ratings);
  } catch (const DegenerateInput&) {
    report.leave_one_out_pearson.reset();
  }
  return report;
}

std::string_view metric_name(MetricSelector m) {
  switch (m) {
    case MetricSelector::kTeds:
      return "teds";
    case MetricSelector::kGritsTop:
      return "grits_top";
    case MetricSelector::kGritsCon:
      return "grits_con";
    case MetricSelector::kGritsAvg:
      return "grits_avg";
    case MetricSelector::kScoreIndex:
      return "score_index";
    case MetricSelector::kScoreContent:
      return "score_content";
    case MetricSelector::kScoreAvg:
      return "score_avg";
    case MetricSelector::kJudge:
      return "judge";
  }
  return "judge";
}

std::optional<MetricSelector> metric_from_name(std::string_view name) {
  for (MetricSelector m :
       {MetricSelector::kTeds, MetricSelector::kGritsTop, MetricSelector::kGritsCon,
        MetricSelector::kGritsAvg, MetricSelector::kScoreIndex, MetricSelector::kScoreContent,
        MetricSelector::kScoreAvg, MetricSelector::kJudge}) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

double default_scale(MetricSelector m) { return m == MetricSelector::kJudge ? 1.0 : 10.0; }

std::optional<double> select_metric(const ScoreRecord& r, MetricSelector m) {
  switch (m) {
    case MetricSelector::kTeds:
      if (r.miss) return 0.0;
      return r.teds;
    case MetricSelector::kGritsTop:
      return r.grits_top;
    case MetricSelector::kGritsCon:
      return r.grits_con;
    case MetricSelector::kGritsAvg:
      return r.grits_avg;
    case MetricSelector::kScoreIndex:
      return r.score_index;
    case MetricSelector::kScoreContent:
      return r.score_content;
    case MetricSelector::kScoreAvg:
      return r.score_avg;
    case MetricSelector::kJudge:
      if (!r.judge) return std::nullopt;
      return static_cast<double>(*r.judge);
  }
  return std::nullopt;
}

CorrelationReport metric_vs_human(std::span<const ScoreRecord> records, const RatingSet& ratings,
                                  MetricSelector metric, double scale) {
  const std::map<std::string, double> human = ratings.means();
  // Keyed by pair id so the result does not depend on record order.
  std::map<std::string, std::pair<double, double>> joined;
  bool any_id = false;
  for (const ScoreRecord& r : records) {
    auto it = human.find(r.pair_id());
    if (it == human.end()) continue;
    any_id = true;
    if (auto value = select_metric(r, metric)) joined[r.pair_id()] = {*value * scale, it->second};
  }
  if (!any_id) throw JoinEmpty("no score record shares a pair id with the ratings");
  if (joined.size() < 2) throw DegenerateInput("fewer than two joined pairs carry the metric");

  std::vector<double> m;
  std::vector<double> h;
  for (const auto& [id, values] : joined) {
    m.push_back(values.first);
    h.push_back(values.second);
  }
  CorrelationReport report;
  report.n = joined.size();
  report.pearson = pearson(m, h);
  report.spearman = spearman(m, h);
  report.kendall = kendall_tau(m, h);
  return report;
}

}  // namespace tablebench
