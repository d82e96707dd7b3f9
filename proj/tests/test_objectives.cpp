#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "polyak/bounds.hpp"
#include "polyak/objectives.hpp"
#include "polyak/rng.hpp"
#include "test_support.hpp"

using namespace polyak;
using polyak::testing::diag_quadratic;
using polyak::testing::norm_objective;

TEST(Objectives, EvaluateQuadratic) {
  const auto q = diag_quadratic({1.0, 4.0});
  EXPECT_DOUBLE_EQ(evaluate(q, Point{1.0, 1.0}), 2.5);
}

TEST(Objectives, EvaluateScaledNorm) {
  EXPECT_EQ(evaluate(norm_objective(1.0, 2), Point{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(norm_objective(2.0, 2), Point{3.0, 4.0}), 10.0);
}

TEST(Objectives, DimensionMismatchNamesBothSizes) {
  const auto q = diag_quadratic({1.0, 4.0});
  try {
    evaluate(q, Point{1.0, 2.0, 3.0});
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_EQ(e.expected(), 2u);
    EXPECT_EQ(e.actual(), 3u);
    EXPECT_NE(std::string(e.what()).find("expected 2"), std::string::npos);
  }
  EXPECT_THROW(gradient(q, Point{1.0}), DimensionError);
  EXPECT_THROW(distance_to_opt(q, Point{1.0}), DimensionError);
}

TEST(Objectives, GradientExamples) {
  const auto q = diag_quadratic({1.0, 4.0});
  EXPECT_EQ(gradient(q, Point{1.0, 1.0}), (Point{1.0, 4.0}));
  for (double G : {0.5, 1.0, 7.0}) EXPECT_EQ(gradient(norm_objective(G, 3), Point(3, 0.0)), Point(3, 0.0));

  ObjectiveParams p;
  p.strong_convexity = 2.0;
  p.l1_weight = 1.0;
  const auto l1 = make_objective(ObjectiveKind::strongly_convex_plus_l1, 1, p, {0.0});
  EXPECT_DOUBLE_EQ(gradient(l1, Point{3.0})[0], 7.0);
  EXPECT_DOUBLE_EQ(gradient(l1, Point{-3.0})[0], -7.0);
  EXPECT_EQ(gradient(l1, Point{0.0})[0], 0.0);
}

TEST(Objectives, Suboptimality) {
  EXPECT_DOUBLE_EQ(suboptimality(diag_quadratic({1.0, 4.0}), Point{1.0, 1.0}), 2.5);
  EXPECT_DOUBLE_EQ(suboptimality(diag_quadratic({1.0}), Point{2.0}), 2.0);
  const auto shifted = diag_quadratic({1.0, 4.0}, {0.5, -1.0}, 3.0);
  EXPECT_EQ(suboptimality(shifted, shifted.x_star), 0.0);
}

TEST(Objectives, SuboptimalityRejectsBadMetadata) {
  auto q = diag_quadratic({1.0});
  q.f_star = 1.0;  // above the true minimum 0
  EXPECT_THROW(
      {
        try {
          suboptimality(q, Point{0.0});
        } catch (const InvalidArgument& e) {
          EXPECT_NE(std::string(e.what()).find("invalid f_star metadata"), std::string::npos);
          throw;
        }
      },
      InvalidArgument);
  // Round-off within the clamp threshold reads as zero.
  q.f_star = 1e-13;
  EXPECT_EQ(suboptimality(q, Point{0.0}), 0.0);
}

TEST(Objectives, DistanceToOpt) {
  EXPECT_DOUBLE_EQ(distance_to_opt(diag_quadratic({1.0, 1.0}), Point{3.0, 4.0}), 5.0);
  const auto q = diag_quadratic({1.0, 1.0});
  EXPECT_EQ(distance_to_opt(q, q.x_star), 0.0);
  EXPECT_DOUBLE_EQ(distance_to_opt(diag_quadratic({1.0}, {-1.0}), Point{2.0}), 3.0);
}

TEST(Objectives, FiniteDifferenceCheck) {
  const auto q = diag_quadratic({1.0, 4.0});
  EXPECT_LE(check_gradient_fd(q, Point{1.0, 1.0}, 1e-5), 1e-6);
  EXPECT_LE(check_gradient_fd(q, q.x_star, 1e-5), 1e-6);
  EXPECT_LE(check_gradient_fd(norm_objective(1.0, 2), Point{3.0, 4.0}, 1e-6), 1e-4);
}

TEST(Objectives, FiniteDifferenceRejectsKinks) {
  EXPECT_THROW(check_gradient_fd(norm_objective(1.0, 2), Point{0.0, 0.0}, 1e-6), InvalidArgument);
  ObjectiveParams p;
  p.strong_convexity = 1.0;
  p.l1_weight = 0.5;
  const auto l1 = make_objective(ObjectiveKind::strongly_convex_plus_l1, 2, p, {});
  EXPECT_THROW(check_gradient_fd(l1, Point{1.0, 5e-6}, 1e-6), InvalidArgument);
  EXPECT_LE(check_gradient_fd(l1, Point{1.0, -2.0}, 1e-6), 1e-4);
}

TEST(Objectives, MakeObjectiveMetadata) {
  const auto q = diag_quadratic({1.0, 10.0});
  EXPECT_EQ(q.alpha, 1.0);
  EXPECT_EQ(q.beta, 10.0);
  EXPECT_EQ(q.f_star, 0.0);
  EXPECT_FALSE(q.lipschitz_G.has_value());

  const auto n = norm_objective(5.0, 3, 2.5);
  EXPECT_EQ(n.lipschitz_G, 5.0);
  EXPECT_EQ(n.f_star, 2.5);
  EXPECT_EQ(n.alpha, 0.0);
  EXPECT_FALSE(n.beta.has_value());

  ObjectiveParams p;
  p.eigenvalues = {0.0, 0.0, 4.0};
  const auto s = make_objective(ObjectiveKind::singular_quadratic, 3, p, {});
  EXPECT_EQ(s.alpha, 0.0);
  EXPECT_EQ(s.beta, 4.0);

  ObjectiveParams l;
  l.strong_convexity = 3.0;
  l.l1_weight = 1.0;
  const auto l1 = make_objective(ObjectiveKind::strongly_convex_plus_l1, 2, l, {});
  EXPECT_EQ(l1.alpha, 3.0);
  EXPECT_FALSE(l1.beta.has_value());
}

TEST(Objectives, MakeObjectiveErrors) {
  ObjectiveParams p;
  p.eigenvalues = {1.0, -1.0};
  EXPECT_THROW(make_objective(ObjectiveKind::quadratic, 2, p, {}), InvalidArgument);
  p.eigenvalues = {};
  EXPECT_THROW(make_objective(ObjectiveKind::quadratic, 0, p, {}), InvalidArgument);
  p.eigenvalues = {0.0, 1.0};
  EXPECT_THROW(make_objective(ObjectiveKind::quadratic, 2, p, {}), InvalidArgument);
  p.eigenvalues = {0.0, 0.0};
  EXPECT_THROW(make_objective(ObjectiveKind::singular_quadratic, 2, p, {}), InvalidArgument);
  p.eigenvalues = {1.0};
  EXPECT_THROW(make_objective(ObjectiveKind::quadratic, 2, p, {}), DimensionError);
}

TEST(Objectives, BindStartProjectsOntoOptimalSet) {
  ObjectiveParams p;
  p.eigenvalues = {0.0, 2.0, 0.0};
  const auto s = make_objective(ObjectiveKind::singular_quadratic, 3, p, {1.0, 1.0, 1.0});
  const auto bound = bind_start(s, Point{5.0, 3.0, -2.0});
  EXPECT_EQ(bound.x_star, (Point{5.0, 1.0, -2.0}));
  EXPECT_DOUBLE_EQ(distance_to_opt(bound, Point{5.0, 3.0, -2.0}), 2.0);
  EXPECT_EQ(suboptimality(bound, bound.x_star), 0.0);
}

// Property checks over every suite objective at seeded random points.
TEST(ObjectiveProperties, ValueAndGradientAtOptimum) {
  for (const auto& obj : polyak::testing::suite_objectives()) {
    SCOPED_TRACE(std::string(to_string(obj.kind)));
    EXPECT_NEAR(evaluate(obj, obj.x_star), obj.f_star, 1e-12);
    EXPECT_EQ(squared_norm(gradient(obj, obj.x_star)), 0.0);
  }
}

TEST(ObjectiveProperties, ElementaryInequalitiesHold) {
  Rng rng(7);
  for (const auto& obj : polyak::testing::suite_objectives()) {
    SCOPED_TRACE(std::string(to_string(obj.kind)));
    const auto samples = sample_ball(rng, obj.x_star, 3.0, 1000);
    const auto audit = check_elementary_properties(obj, samples);
    EXPECT_TRUE(audit.passed()) << audit.violations.size() << " violations, first: "
                                << (audit.violations.empty() ? "" : audit.violations[0].check);
  }
}

TEST(ObjectiveProperties, FiniteDifferencesAgreeAwayFromKinks) {
  Rng rng(11);
  for (const auto& obj : polyak::testing::suite_objectives()) {
    SCOPED_TRACE(std::string(to_string(obj.kind)));
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      const Point x = rng.in_ball(obj.x_star, 2.0);
      try {
        EXPECT_LE(check_gradient_fd(obj, x, 1e-6), 1e-5);
        ++checked;
      } catch (const InvalidArgument&) {
        // sampled too close to a kink
      }
    }
    EXPECT_GT(checked, 150);
  }
}

// The chain (1/(4β²))‖∇f‖² ≤ d² ≤ (1/(4α²))‖∇f‖² fails on its upper side:
// on f = ½x², ‖∇f‖² = x² = d², so d² ≤ d²/4 is false for any x ≠ 0.
TEST(ObjectiveProperties, QuarterConstantUpperChainIsFalse) {
  const auto q = diag_quadratic({1.0});
  const Point x{2.0};
  const double g2 = squared_norm(gradient(q, x));
  const double d2 = std::pow(distance_to_opt(q, x), 2);
  EXPECT_GT(d2, g2 / (4.0 * q.alpha * q.alpha));
  EXPECT_LE(d2, g2 / (q.alpha * q.alpha));
}

TEST(ObjectiveProperties, ScaledAndTranslatedMetadata) {
  const auto q = diag_quadratic({1.0, 4.0}, {1.0, 2.0}, 3.0);
  const auto s = scaled(q, 2.0);
  EXPECT_EQ(s.alpha, 2.0);
  EXPECT_EQ(s.beta, 8.0);
  EXPECT_EQ(s.f_star, 6.0);
  const Point x{0.3, -0.7};
  EXPECT_DOUBLE_EQ(evaluate(s, x), 2.0 * evaluate(q, x));

  const Point shift{10.0, -4.0};
  const auto t = translated(q, shift);
  EXPECT_DOUBLE_EQ(evaluate(t, Point{x[0] + shift[0], x[1] + shift[1]}), evaluate(q, x));
}
