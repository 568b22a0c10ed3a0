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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tablebench/errors.h"
#include "tablebench/meta_eval.h"
#include "test_util.h"

namespace tablebench {
namespace {

constexpr double kTol = 1e-9;

TEST(Pearson, Examples) {
  const std::vector<double> x = {1, 2, 3, 5};
  const std::vector<double> y = {2, 2, 4, 5};
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  EXPECT_NEAR(*pearson(x, x), 1.0, kTol);
  EXPECT_NEAR(*pearson(x, neg), -1.0, kTol);
  // Sxy = 7.25, Sxx = 8.75, Syy = 6.75 from the deviations by hand.
  EXPECT_NEAR(*pearson(x, y), 7.25 / std::sqrt(8.75 * 6.75), kTol);
  EXPECT_NEAR(*pearson(x, y), tbtest::direct_pearson(x, y), kTol);
}

TEST(Pearson, DegenerateIsAbsent) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> c = {4, 4, 4};
  EXPECT_FALSE(pearson(x, c).has_value());
  EXPECT_FALSE(spearman(c, x).has_value());
  EXPECT_FALSE(kendall_tau(x, c).has_value());
  const std::vector<double> one = {1};
  EXPECT_THROW(pearson(one, one), std::invalid_argument);
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Spearman, Examples) {
  EXPECT_NEAR(*spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 5, 7, 100}), 1.0, kTol);
  EXPECT_NEAR(*spearman(std::vector<double>{1, 2, 3}, std::vector<double>{9, 4, 1}), -1.0, kTol);
  const std::vector<double> x = {1, 1, 2};
  const std::vector<double> y = {3, 5, 4};
  EXPECT_EQ(mid_ranks(x), (std::vector<double>{1.5, 1.5, 3}));
  EXPECT_EQ(mid_ranks(x), tbtest::counting_mid_ranks(x));
  EXPECT_NEAR(*spearman(x, y), 0.0, kTol);
}

TEST(Kendall, Examples) {
  EXPECT_NEAR(*kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}), 1.0, kTol);
  EXPECT_NEAR(*kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{6, 5, 4}), -1.0, kTol);
  // 5 concordant pairs, 0 discordant, one tie in x: 5 / sqrt(5 * 6).
  const std::vector<double> x = {1, 2, 2, 3};
  const std::vector<double> y = {1, 3, 2, 4};
  EXPECT_NEAR(*kendall_tau(x, y), 5.0 / std::sqrt(30.0), kTol);
  EXPECT_NEAR(*kendall_tau(x, y), tbtest::pair_count_kendall_tau_b(x, y), kTol);
}

TEST(StatsProperty, OraclesOnSmallFixtures) {
  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 2000; ++iter) {
    const int n = 2 + iter % 7;
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = std::uniform_int_distribution<int>(0, 4)(rng);
      y[i] = std::uniform_int_distribution<int>(0, 10)(rng) / 2.0;
    }
    const auto p = pearson(x, y);
    const auto s = spearman(x, y);
    const auto k = kendall_tau(x, y);
    const double dp = tbtest::direct_pearson(x, y);
    ASSERT_EQ(p.has_value(), !std::isnan(dp));
    if (!p) continue;
    ASSERT_NEAR(*p, dp, kTol);
    ASSERT_EQ(mid_ranks(x), tbtest::counting_mid_ranks(x));
    ASSERT_NEAR(*s, tbtest::direct_pearson(tbtest::counting_mid_ranks(x), tbtest::counting_mid_ranks(y)), kTol);
    ASSERT_NEAR(*k, tbtest::pair_count_kendall_tau_b(x, y), kTol);
    for (double v : {*p, *s, *k}) {
      ASSERT_GE(v, -1.0 - kTol);
      ASSERT_LE(v, 1.0 + kTol);
    }
  }
}

TEST(StatsProperty, KendallWithoutTiesIsPairCount) {
  std::mt19937_64 rng(42);
  for (int n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> x(n);
      std::vector<double> y(n);
      for (int i = 0; i < n; ++i) x[i] = y[i] = i;
      std::shuffle(y.begin(), y.end(), rng);
      int concordant = 0;
      int discordant = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) ((x[i] - x[j]) * (y[i] - y[j]) > 0 ? concordant : discordant)++;
      }
      ASSERT_NEAR(*kendall_tau(x, y), (concordant - discordant) / (n * (n - 1) / 2.0), kTol);
    }
  }
}

TEST(StatsProperty, TransformInvariance) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> dist;
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> x(8);
    std::vector<double> y(8);
    for (int i = 0; i < 8; ++i) {
      x[i] = dist(rng);
      y[i] = x[i] + dist(rng);
    }
    std::vector<double> affine(8);
    std::vector<double> monotone(8);
    for (int i = 0; i < 8; ++i) {
      affine[i] = 3.5 * x[i] - 2.0;
      monotone[i] = std::exp(x[i]);
    }
    ASSERT_NEAR(*pearson(affine, y), *pearson(x, y), kTol);
    ASSERT_NEAR(*spearman(monotone, y), *spearman(x, y), kTol);
    ASSERT_NEAR(*kendall_tau(monotone, y), *kendall_tau(x, y), kTol);
  }
}

TEST(Krippendorff, Examples) {
  RatingSet unanimous;
  for (const char* pair : {"p1", "p2", "p3"}) {
    for (const char* who : {"a", "b", "c"}) unanimous.add(pair, who, std::string(pair) == "p2" ? 3 : 7);
  }
  EXPECT_DOUBLE_EQ(krippendorff_alpha_interval(unanimous), 1.0);

  // Coincidences o(1,2) = o(2,1) = 2, n = 4: Do = 1, De = 8/12, alpha = -0.5.
  RatingSet swap;
  swap.add("u1", "a", 1);
  swap.add("u1", "b", 2);
  swap.add("u2", "a", 2);
  swap.add("u2", "b", 1);
  EXPECT_NEAR(krippendorff_alpha_interval(swap), -0.5, kTol);
  EXPECT_NEAR(tbtest::pairwise_alpha_interval(swap), -0.5, kTol);

  RatingSet single;
  single.add("u1", "a", 4);
  single.add("u1", "b", 6);
  single.add("u2", "a", 5);
  EXPECT_THROW(krippendorff_alpha_interval(single), DegenerateInput);
}

TEST(KrippendorffProperty, MatchesPairwiseFormulation) {
  std::mt19937_64 rng(44);
  for (int iter = 0; iter < 500; ++iter) {
    RatingSet r;
    const int units = 2 + iter % 6;
    const int coders = 2 + iter % 3;
    for (int u = 0; u < units; ++u) {
      for (int c = 0; c < coders; ++c) {
        if (c >= 2 && std::bernoulli_distribution(0.3)(rng)) continue;
        r.add("u" + std::to_string(u), "c" + std::to_string(c),
              std::uniform_int_distribution<int>(0, 10)(rng));
      }
    }
    const double expected = tbtest::pairwise_alpha_interval(r);
    if (std::isnan(expected)) continue;
    ASSERT_NEAR(krippendorff_alpha_interval(r), expected, kTol);
    ASSERT_LE(krippendorff_alpha_interval(r), 1.0 + kTol);
  }
}

TEST(KrippendorffProperty, OneIffUnanimous) {
  std::mt19937_64 rng(45);
  for (int iter = 0; iter < 300; ++iter) {
    RatingSet r;
    bool unanimous = true;
    for (int u = 0; u < 4; ++u) {
      const int base = std::uniform_int_distribution<int>(0, 10)(rng);
      for (int c = 0; c < 3; ++c) {
        int v = base;
        if (iter % 2 == 1 && u == iter % 4 && c == 1) {
          v = (base + 1) % 11;
          unanimous = false;
        }
        r.add("u" + std::to_string(u), "c" + std::to_string(c), v);
      }
    }
    ASSERT_EQ(krippendorff_alpha_interval(r) == 1.0, unanimous);
  }
}

TEST(Ceiling, Examples) {
  RatingSet same;
  for (int p = 0; p < 4; ++p) {
    for (const char* who : {"a", "b", "c"}) same.add("p" + std::to_string(p), who, p * 2);
  }
  EXPECT_NEAR(annotator_ceiling(same), 1.0, kTol);

  // Fold for "c" (constant) is skipped; the other two folds each correlate
  // with a mean that includes the constant rater.
  RatingSet constant;
  const std::vector<double> a = {1, 4, 6, 9};
  const std::vector<double> b = {2, 3, 7, 8};
  for (int p = 0; p < 4; ++p) {
    const std::string id = "p" + std::to_string(p);
    constant.add(id, "a", a[p]);
    constant.add(id, "b", b[p]);
    constant.add(id, "c", 5);
  }
  std::vector<double> mean_bc(4);
  std::vector<double> mean_ac(4);
  for (int p = 0; p < 4; ++p) {
    mean_bc[p] = (b[p] + 5) / 2;
    mean_ac[p] = (a[p] + 5) / 2;
  }
  const double want = (tbtest::direct_pearson(a, mean_bc) + tbtest::direct_pearson(b, mean_ac)) / 2;
  EXPECT_NEAR(annotator_ceiling(constant), want, kTol);

  RatingSet three;
  const std::vector<std::vector<double>> s = {{1, 2, 3, 8}, {2, 2, 5, 7}, {3, 1, 4, 9}};
  for (int who = 0; who < 3; ++who) {
    for (int p = 0; p < 4; ++p) three.add("p" + std::to_string(p), "r" + std::to_string(who), s[who][p]);
  }
  double manual = 0;
  for (int who = 0; who < 3; ++who) {
    std::vector<double> others(4);
    for (int p = 0; p < 4; ++p) others[p] = (s[(who + 1) % 3][p] + s[(who + 2) % 3][p]) / 2;
    manual += tbtest::direct_pearson(s[who], others);
  }
  EXPECT_NEAR(annotator_ceiling(three), manual / 3, kTol);
}

ScoreRecord record(const std::string& table, double teds_value) {
  ScoreRecord r;
  r.parser_id = "p";
  r.page_id = "page";
  r.gt_table_id = table;
  r.teds = teds_value;
  r.grits_con = teds_value;
  return r;
}

TEST(MetricVsHuman, IdentityAndJoin) {
  std::vector<ScoreRecord> records = {record("t1", 0.2), record("t2", 0.5), record("t3", 0.9)};
  RatingSet ratings;
  ratings.add("p/page/t1", "a", 2);
  ratings.add("p/page/t2", "a", 4);
  ratings.add("p/page/t2", "b", 6);
  ratings.add("p/page/t3", "a", 9);
  const CorrelationReport rep = metric_vs_human(records, ratings, MetricSelector::kTeds, 10);
  EXPECT_EQ(rep.n, 3u);
  EXPECT_NEAR(*rep.pearson, 1.0, kTol);
  EXPECT_NEAR(*rep.spearman, 1.0, kTol);
  EXPECT_NEAR(*rep.kendall, 1.0, kTol);

  std::reverse(records.begin(), records.end());
  const CorrelationReport again = metric_vs_human(records, ratings, MetricSelector::kTeds, 10);
  EXPECT_EQ(*again.pearson, *rep.pearson);

  RatingSet other;
  other.add("x/y/z", "a", 1);
  other.add("x/y/w", "a", 2);
  EXPECT_THROW(metric_vs_human(records, other, MetricSelector::kTeds, 10), JoinEmpty);
}

TEST(MetricVsHuman, SelectorsAndScale) {
  EXPECT_EQ(default_scale(MetricSelector::kTeds), 10.0);
  EXPECT_EQ(default_scale(MetricSelector::kJudge), 1.0);
  for (auto m : {MetricSelector::kTeds, MetricSelector::kGritsTop, MetricSelector::kGritsCon,
                 MetricSelector::kGritsAvg, MetricSelector::kScoreIndex, MetricSelector::kScoreContent,
                 MetricSelector::kScoreAvg, MetricSelector::kJudge}) {
    EXPECT_EQ(metric_from_name(metric_name(m)), m);
  }
  ScoreRecord r;
  EXPECT_FALSE(select_metric(r, MetricSelector::kJudge).has_value());
  EXPECT_FALSE(select_metric(r, MetricSelector::kTeds).has_value());
  r.judge = 7;
  EXPECT_EQ(select_metric(r, MetricSelector::kJudge), 7.0);
}

TEST(Ratings, JsonlRoundTripAndRange) {
  tbtest::TempDir dir;
  const auto path = dir.path() / "ratings.jsonl";
  tbtest::write_file(path,
                     "{\"pair_id\":\"a\",\"annotator_id\":\"x\",\"score\":3,\"timestamp\":\"t\"}\n"
                     "\n"
                     "{\"pair_id\":\"a\",\"annotator_id\":\"x\",\"score\":5,\"timestamp\":\"t\"}\n"
                     "{\"pair_id\":\"a\",\"annotator_id\":\"y\",\"score\":9,\"timestamp\":\"t\"}\n");
  const RatingSet r = load_ratings_jsonl(path);
  EXPECT_EQ(r.size(), 2u);
  EXPECT_EQ(r.by_pair().at("a").at("x"), 5.0);
  EXPECT_EQ(r.means().at("a"), 7.0);
  RatingSet bad;
  EXPECT_THROW(bad.add("a", "x", 11), std::out_of_range);
  tbtest::write_file(path, "not json\n");
  EXPECT_THROW(load_ratings_jsonl(path), IoError);
}

TEST(Agreement, Report) {
  RatingSet r;
  const std::vector<std::vector<double>> s = {{1, 5, 9, 3}, {2, 5, 8, 3}, {1, 6, 9, 4}};
  for (int who = 0; who < 3; ++who) {
    for (int p = 0; p < 4; ++p) r.add("p" + std::to_string(p), "r" + std::to_string(who), s[who][p]);
  }
  const AgreementReport rep = agreement(r);
  EXPECT_EQ(rep.n_annotators, 3u);
  EXPECT_EQ(rep.n_pairs, 4u);
  EXPECT_NEAR(rep.alpha, tbtest::pairwise_alpha_interval(r), kTol);
  // |diffs| over the 3 annotator pairs x 4 items: 2 + 2 + 4 = 8 over 12.
  EXPECT_NEAR(rep.mean_abs_difference, 8.0 / 12.0, kTol);
  ASSERT_TRUE(rep.leave_one_out_pearson.has_value());
  EXPECT_LE(*rep.leave_one_out_pearson, 1.0);
}

}  // namespace
}  // namespace tablebench
