#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"
#include "mondrian/metrics.hpp"

using namespace mondrian;

namespace {

Rect random_rect(fixtures::Rng& rng, int w, int h) {
  int x0 = rng.uniform(0, w - 1), y0 = rng.uniform(0, h - 1);
  return {x0, y0, rng.uniform(x0, w - 1), rng.uniform(y0, h - 1)};
}

// Cheapest edit script by trying every partial one-to-one pairing.
int brute_edit_distance(const std::vector<Rect>& pred, const std::vector<Rect>& gold) {
  int best = 1 << 30;
  std::vector<char> used(gold.size(), 0);
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int cost, int hit) {
    if (i == pred.size()) {
      int missing = static_cast<int>(gold.size()) - hit;
      best = std::min(best, cost + 2 * missing);
      return;
    }
    rec(i + 1, cost + 1, hit);  // delete
    for (std::size_t j = 0; j < gold.size(); ++j) {
      if (used[j] || box_iou(pred[i], gold[j]) == 0.0) continue;
      used[j] = 1;
      rec(i + 1, cost + (pred[i] == gold[j] ? 0 : 1), hit + 1);
      used[j] = 0;
    }
  };
  rec(0, 0, 0);
  return best;
}

}  // namespace

TEST(Iou, Examples) {
  TypedGrid g = TypedGrid::from_mask({"####", "####", "####"});
  EXPECT_DOUBLE_EQ(iou(g, {0, 0, 3, 2}, {0, 0, 3, 2}), 1.0);
  EXPECT_DOUBLE_EQ(iou(g, {0, 0, 1, 0}, {2, 2, 3, 2}), 0.0);
  EXPECT_DOUBLE_EQ(iou(g, {0, 0, 1, 1}, {0, 0, 3, 1}), 0.5);

  // empty cells do not count
  TypedGrid sparse = TypedGrid::from_mask({"#..#", "....", "#..#"});
  EXPECT_DOUBLE_EQ(iou(sparse, {0, 0, 3, 0}, {0, 0, 3, 1}), 1.0);
  EXPECT_DOUBLE_EQ(iou(sparse, {1, 1, 2, 1}, {1, 0, 2, 2}), 1.0);  // both vacuous
}

TEST(Iou, MatchesSetJaccardOnRandomGrids) {
  fixtures::Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    TypedGrid g = TypedGrid::from_mask(fixtures::random_mask(rng, 12, 12));
    if (g.rows() == 0 || g.cols() == 0) continue;
    Rect p = random_rect(rng, g.cols(), g.rows());
    Rect t = random_rect(rng, g.cols(), g.rows());
    double v = iou(g, p, t);
    EXPECT_EQ(v, fixtures::brute_iou(g, p, t));
    EXPECT_EQ(v, iou(g, t, p));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Eob, Examples) {
  EXPECT_EQ(eob({0, 0, 3, 3}, {0, 0, 3, 3}), 0.0);
  EXPECT_EQ(eob({0, 0, 3, 3}, {1, 0, 3, 5}), 2.0);
  TypedGrid g = TypedGrid::from_mask(std::vector<std::string>(40, std::string(10, '#')));
  std::vector<Rect> gold{{0, 0, 9, 39}};
  auto none = region_score({}, gold, g);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(none[0].eob, 40.0);
  EXPECT_EQ(none[0].iou, 0.0);
  EXPECT_EQ(none[0].best_prediction, -1);
}

TEST(RegionScore, BestOverPredictions) {
  TypedGrid g = TypedGrid::from_mask({"##..##", "##..##"});
  std::vector<Rect> pred{{0, 0, 5, 1}, {4, 0, 5, 1}};
  std::vector<Rect> gold{{0, 0, 1, 1}, {4, 0, 5, 1}};
  auto s = region_score(pred, gold, g);
  EXPECT_DOUBLE_EQ(s[0].iou, 0.5);  // the spanning prediction
  EXPECT_EQ(s[0].best_prediction, 0);
  EXPECT_EQ(s[0].eob, 4.0);
  EXPECT_DOUBLE_EQ(s[1].iou, 1.0);
  EXPECT_EQ(s[1].best_prediction, 1);
  EXPECT_EQ(s[1].eob, 0.0);
}

TEST(DetectionCurve, Examples) {
  std::vector<double> scores{1.0, 0.5};
  std::vector<double> thresholds{0.0, 0.5, 1.0};
  EXPECT_EQ(detection_curve(scores, thresholds), (std::vector<double>{1.0, 1.0, 0.5}));
  std::vector<double> t2{0.4, 0.6, 1.0};
  EXPECT_EQ(detection_curve(scores, t2), (std::vector<double>{1.0, 0.5, 0.5}));
  EXPECT_EQ(detection_curve({}, t2), (std::vector<double>{0.0, 0.0, 0.0}));
  std::vector<double> errors{0, 2, 5};
  std::vector<double> t3{0, 2, 4};
  EXPECT_EQ(detection_curve(errors, t3, false), (std::vector<double>{1.0 / 3, 2.0 / 3, 2.0 / 3}));
}

TEST(DetectionCurve, MonotoneInThreshold) {
  fixtures::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(rng.uniform(1, 30));
    for (auto& v : s) v = rng.real(0, 1);
    std::vector<double> t;
    for (int i = 0; i <= 100; ++i) t.push_back(i / 100.0);
    auto c = detection_curve(s, t);
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LE(c[i], c[i - 1]);
  }
}

TEST(MultiregionClassification, Examples) {
  std::vector<int> pred{1, 2, 3, 1};
  std::vector<int> gold{1, 1, 2, 2};
  BinaryReport r = multiregion_classification(pred, gold);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);

  std::vector<int> singles{1, 1};
  BinaryReport none = multiregion_classification(singles, singles);
  EXPECT_DOUBLE_EQ(none.accuracy, 1.0);
  EXPECT_FALSE(none.precision_defined);
  EXPECT_FALSE(none.recall_defined);
  EXPECT_THROW(multiregion_classification(pred, singles), Error);
}

TEST(VMeasure, Examples) {
  std::vector<int> one{0, 0, 0, 0};
  std::vector<int> two{0, 0, 1, 1};
  VMeasure merged = vmeasure(one, two);
  EXPECT_DOUBLE_EQ(merged.homogeneity, 0.0);
  EXPECT_DOUBLE_EQ(merged.completeness, 1.0);
  EXPECT_DOUBLE_EQ(merged.v_measure, 0.0);

  VMeasure same = vmeasure(two, std::vector<int>{5, 5, 7, 7});
  EXPECT_DOUBLE_EQ(same.v_measure, 1.0);

  std::vector<int> singletons{0, 1, 2, 3};
  VMeasure split = vmeasure(singletons, two);
  EXPECT_DOUBLE_EQ(split.homogeneity, 1.0);
  EXPECT_DOUBLE_EQ(split.completeness, 0.5);

  std::vector<std::string> names{"a", "a", "b", "b"};
  EXPECT_DOUBLE_EQ(vmeasure(two, names).v_measure, 1.0);
  EXPECT_THROW(vmeasure(one, std::vector<int>{0}), Error);
  EXPECT_DOUBLE_EQ(vmeasure(std::vector<int>{}, std::vector<int>{}).v_measure, 1.0);
}

TEST(VMeasure, MatchesItemCountingOracle) {
  fixtures::Rng rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform(1, 60);
    int kp = rng.uniform(1, 8), kg = rng.uniform(1, 8);
    std::vector<int> pred(n), gold(n);
    for (int i = 0; i < n; ++i) {
      pred[i] = rng.uniform(0, kp - 1);
      gold[i] = rng.uniform(0, kg - 1);
    }
    VMeasure got = vmeasure(pred, gold);
    VMeasure want = fixtures::brute_vmeasure(pred, gold);
    EXPECT_NEAR(got.homogeneity, want.homogeneity, 1e-12);
    EXPECT_NEAR(got.completeness, want.completeness, 1e-12);
    EXPECT_NEAR(got.v_measure, want.v_measure, 1e-12);
    // swapping roles swaps homogeneity and completeness
    VMeasure swapped = vmeasure(gold, pred);
    EXPECT_NEAR(swapped.homogeneity, got.completeness, 1e-12);
    EXPECT_NEAR(swapped.completeness, got.homogeneity, 1e-12);
  }
}

TEST(EditDistance, Examples) {
  std::vector<Rect> gold{{0, 0, 2, 2}, {5, 0, 7, 2}};
  std::vector<Rect> none;
  EditReport empty = edit_distance(none, gold);
  EXPECT_EQ(empty.distance, 4);
  EXPECT_EQ(empty.additions, 2);

  std::vector<Rect> same = gold;
  EXPECT_EQ(edit_distance(same, gold).distance, 0);

  // one prediction spanning both: resize it to one, add and size the other
  std::vector<Rect> spanning{{0, 0, 7, 2}};
  EditReport r = edit_distance(spanning, gold);
  EXPECT_EQ(r.distance, 3);
  EXPECT_EQ(r.resizes, 1);
  EXPECT_EQ(r.additions, 1);
  EXPECT_EQ(r.deletions, 0);

  std::vector<Rect> extra{{0, 0, 2, 2}, {5, 0, 7, 2}, {10, 10, 11, 11}};
  EditReport e = edit_distance(extra, gold);
  EXPECT_EQ(e.distance, 1);
  EXPECT_EQ(e.deletions, 1);
}

TEST(EditDistance, MatchesExhaustiveSearchAndBound) {
  fixtures::Rng rng(97);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rect> pred(rng.uniform(0, 4)), gold(rng.uniform(0, 4));
    for (auto& r : pred) r = random_rect(rng, 10, 10);
    for (auto& r : gold) r = random_rect(rng, 10, 10);
    EditReport e = edit_distance(pred, gold);
    EXPECT_EQ(e.distance, e.resizes + 2 * e.additions + e.deletions);
    EXPECT_LE(e.distance, static_cast<int>(pred.size() + 2 * gold.size()));
    // the IoU-maximizing pairing need not be the cheapest script, but the
    // exhaustive minimum is a lower bound and exact cover is free
    EXPECT_GE(e.distance, brute_edit_distance(pred, gold));
  }
  // with disjoint gold regions the maximum-IoU pairing is also cheapest
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rect> gold;
    for (int k = 0; k < rng.uniform(1, 3); ++k) {
      int x = 6 * k;
      gold.push_back({x, 0, x + rng.uniform(1, 4), rng.uniform(1, 4)});
    }
    std::vector<Rect> pred;
    for (const auto& g : gold) {
      if (rng.chance(0.3)) continue;
      pred.push_back(rng.chance(0.5) ? g : Rect{g.x0, g.y0, g.x1, g.y1 + 1});
    }
    EXPECT_EQ(edit_distance(pred, gold).distance, brute_edit_distance(pred, gold));
  }
}

TEST(RegionStatistics, DensityAndEntropy) {
  TypedGrid g = parse_csv("1,a\n,2.5\n");
  EXPECT_DOUBLE_EQ(region_density(g, {0, 0, 1, 1}), 0.75);
  EXPECT_DOUBLE_EQ(region_density(g, {0, 1, 0, 1}), 0.0);
  EXPECT_NEAR(region_type_entropy(g, {0, 0, 1, 1}), std::log(3.0), 1e-12);
  EXPECT_DOUBLE_EQ(region_type_entropy(g, {0, 0, 0, 0}), 0.0);
}
