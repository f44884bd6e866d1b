#include <gtest/gtest.h>

#include <vector>

#include "generators.hpp"
#include "infinikit/bridge.hpp"

namespace {

using infinikit::ErrorKind;
using infinikit::Rational;
using infinikit::Scalar;
using namespace infinikit::bridge;
using infinikit::hyperseq::eventually_equal;
using infinikit::hyperseq::Truth;

const RateSeq inv_n = RateSeq::monomial(Scalar(1), -1);
const RateSeq inv_n2 = RateSeq::monomial(Scalar(1), -2);

OperatorTrunc quarter() {
  const double d[] = {1, 0.5, 1.0 / 3, 0.25};
  return infinikit::opcalc::diag_embed(d);
}

TEST(OperatorToInfinitesimal, DiagonalRoundTrip) {
  const RateSeq eps = operator_to_infinitesimal(quarter(), inv_n);
  EXPECT_EQ(eps.body(), inv_n);
  for (infinikit::hyperseq::Index n = 1; n <= 4; ++n) EXPECT_EQ(eps(n), 1.0 / static_cast<double>(n));
  EXPECT_EQ(eventually_equal(eps, inv_n), Truth::yes);
}

TEST(OperatorToInfinitesimal, ConjugatedInput) {
  const OperatorTrunc c = infinikit::opcalc::conjugate(quarter(), infinikit::opcalc::random_orthogonal(4, 12));
  const RateSeq a = operator_to_infinitesimal(c, inv_n);
  const RateSeq b = operator_to_infinitesimal(quarter(), inv_n);
  EXPECT_EQ(eventually_equal(a, b), Truth::yes);
  for (infinikit::hyperseq::Index n = 1; n <= 4; ++n) EXPECT_NEAR(a(n), b(n), 1e-8);
}

TEST(OperatorToInfinitesimal, NotCompact) {
  try {
    operator_to_infinitesimal(quarter(), RateSeq::constant(Scalar(1)));
    FAIL();
  } catch (const infinikit::Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_compact);
  }
}

TEST(RunBridge, HarmonicTail) {
  const std::vector<Predicate> preds{Predicate::greater_than(10), Predicate::evens()};
  const BridgeReport r = run_bridge(quarter(), inv_n, preds);
  EXPECT_EQ(r.robinson.body(), inv_n);
  EXPECT_EQ(r.H.body(), RateSeq::index());
  EXPECT_EQ(r.H_int.body(), RateSeq::index().with_integer_values(true));
  ASSERT_EQ(r.queries.size(), 2U);
  EXPECT_EQ(r.queries[0].verdict, FilterVerdict::in_filter);
  EXPECT_EQ(r.queries[1].verdict, FilterVerdict::undecided);
  EXPECT_EQ(r.enclosure.lower, Rational(1, 2));
  EXPECT_EQ(r.enclosure.upper, 1);
  EXPECT_FALSE(r.exhibitability_note.empty());
  for (infinikit::hyperseq::Index n = 1; n <= 4; ++n) EXPECT_EQ(r.H_int(n), static_cast<double>(n));
}

TEST(RunBridge, SquareTailDecidesSquares) {
  const std::vector<Predicate> preds{Predicate::evens(), Predicate::squares(), Predicate::greater_than(10)};
  const BridgeReport n1 = run_bridge(quarter(), inv_n, preds);
  const BridgeReport n2 = run_bridge(quarter(), inv_n2, preds);
  EXPECT_EQ(n2.H_int.body(), RateSeq::monomial(Scalar(1), 2).with_integer_values(true));
  EXPECT_EQ(n1.queries[1].verdict, FilterVerdict::undecided);
  EXPECT_EQ(n2.queries[1].verdict, FilterVerdict::in_filter);
  EXPECT_EQ(n2.queries[0].verdict, FilterVerdict::undecided);
  EXPECT_EQ(n2.queries[2].verdict, FilterVerdict::in_filter);
}

TEST(RunBridge, Errors) {
  auto stage_of = [](auto f) {
    try {
      f();
    } catch (const StageError& e) {
      return e.stage() + "/" + std::string(infinikit::token(e.kind()));
    }
    return std::string("none");
  };
  EXPECT_EQ(stage_of([] { run_bridge(quarter(), inv_n, {}); }), "input/precondition");
  const std::vector<Predicate> preds{Predicate::evens()};
  EXPECT_EQ(stage_of([&] { run_bridge(quarter(), RateSeq::index(), preds); }), "infinitesimal/not-compact");
  const RateSeq fast = RateSeq::monomial(Scalar(1), Rational(-3, 2));
  EXPECT_EQ(stage_of([&] { run_bridge(quarter(), fast, preds); }), "filter:evens/certification-failure");
}

TEST(RunBridge, StagesMarkCanonicalAndChoiceDependent) {
  const std::vector<Predicate> preds{Predicate::greater_than(3), Predicate::evens()};
  const BridgeReport r = run_bridge(quarter(), inv_n, preds);
  ASSERT_GE(r.stages.size(), 6U);
  EXPECT_TRUE(r.stages[0].canonical);
  EXPECT_TRUE(r.stages[3].canonical);
  EXPECT_EQ(r.stages[5].name, "filter:evens");
  EXPECT_FALSE(r.stages[5].canonical);
  EXPECT_FALSE(r.stages.back().canonical);
}

TEST(BridgeProperties, RandomCompactModels) {
  infinikit::testing::Gen gen(53);
  const Rational alphas[] = {Rational(1, 2), 1, 2, 3};
  for (int trial = 0; trial < 12; ++trial) {
    const auto k = gen.integer(1, 9);
    const Rational alpha = alphas[gen.integer(0, 3)];
    const RateSeq tail = RateSeq::monomial(Scalar(Rational(1, k)), -alpha);
    const auto n = static_cast<std::size_t>(gen.integer(1, 16));
    const OperatorTrunc t = infinikit::opcalc::diag_embed(tail, n);
    const OperatorTrunc q = infinikit::opcalc::random_orthogonal(n, static_cast<std::uint64_t>(trial));
    const std::vector<Predicate> preds{Predicate::evens(), Predicate::squares(), Predicate::greater_than(10)};
    const BridgeReport a = run_bridge(t, tail, preds, {.horizon = 100000});
    const BridgeReport b = run_bridge(infinikit::opcalc::conjugate(t, q), tail, preds, {.horizon = 100000});
    ASSERT_EQ(eventually_equal(a.robinson * a.H, RateSeq::constant(Scalar(1))), Truth::yes);
    ASSERT_EQ(eventually_equal(a.robinson, b.robinson), Truth::yes);
    for (std::size_t i = 0; i < preds.size(); ++i) ASSERT_EQ(a.queries[i].verdict, b.queries[i].verdict);
    ASSERT_EQ(a.enclosure.width(), Rational(1, infinikit::Integer(1) << a.enclosure.decided_bits));
    ASSERT_GT(a.enclosure.width(), 0);
  }
}

}  // namespace
