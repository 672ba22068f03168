#include <chrono>

#include <gtest/gtest.h>

#include "dembudget/oracle.hpp"
#include "dembudget/sba.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace dembudget;

namespace {

struct ThreeItems {
  Proposal p = Proposal::unit({{"a", 1}, {"b", 2}, {"c", 4}});
  Profile profile{p, {makeLinearOrder(p, {"a", "b", "c"}), makeLinearOrder(p, {"c", "a", "b"})}};
};

struct Cyclic {
  Proposal p = Proposal::unit({{"b1", 1}, {"b2", 1}, {"b3", 1}});
  Profile profile{p,
                  {makeLinearOrder(p, {"b1", "b2", "b3"}), makeLinearOrder(p, {"b2", "b3", "b1"}),
                   makeLinearOrder(p, {"b3", "b1", "b2"})}};
};

std::vector<std::string> ids(const Proposal& p, const std::vector<VertexKey>& component) {
  std::vector<std::string> out;
  for (const auto& key : component) out.push_back(p.item(key.item).id);
  return out;
}

bool inSmith(const Proposal& p, const Profile& profile, BudgetLimit limit, const Budget& b) {
  const auto bg = budgetsGraph(p, profile, limit);
  for (std::size_t i : smithBudgets(bg)) {
    if (bg.budgets[i] == b) return true;
  }
  return false;
}

}  // namespace

namespace dembudget {
void PrintTo(BallotKind kind, std::ostream* os) { *os << toString(kind); }
void PrintTo(Check check, std::ostream* os) { *os << toString(check); }
}  // namespace dembudget

TEST(Sba, ThreeItemsRankingAndBudget) {
  ThreeItems ex;
  const auto ranked = ranking(ex.p, ex.profile);
  ASSERT_EQ(ranked.components.size(), 2u);
  EXPECT_EQ(ids(ex.p, ranked.components[0]), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(ids(ex.p, ranked.components[1]), (std::vector<std::string>{"b"}));
  const auto start = std::chrono::steady_clock::now();
  const Budget b = sba(ex.p, ex.profile, BudgetLimit(3), Budget::ofItems(ex.p, {"a"}));
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(b, Budget::ofItems(ex.p, {"a", "b"}));
  EXPECT_LT(elapsed, std::chrono::milliseconds(10));
}

TEST(Sba, CyclicProfileIsOneComponent) {
  Cyclic ex;
  const auto ranked = ranking(ex.p, ex.profile);
  ASSERT_EQ(ranked.components.size(), 1u);
  EXPECT_EQ(ranked.components[0].size(), 3u);
}

TEST(Sba, CyclicProfileFollowsPreviousBudget) {
  Cyclic ex;
  for (const std::string id : {"b1", "b2", "b3"}) {
    EXPECT_EQ(sba(ex.p, ex.profile, BudgetLimit(1), Budget::ofItems(ex.p, {id})), Budget::ofItems(ex.p, {id}));
  }
  const Budget fresh = sba(ex.p, ex.profile, BudgetLimit(1), Budget::none(ex.p));
  EXPECT_EQ(cost(ex.p, fresh), 1);
  EXPECT_TRUE(inSmith(ex.p, ex.profile, BudgetLimit(1), fresh));
}

TEST(Sba, WholeComponentTakenWhenItFits) {
  ThreeItems ex;
  EXPECT_EQ(sba(ex.p, ex.profile, BudgetLimit(7), Budget::none(ex.p)), Budget::all(ex.p));
  EXPECT_EQ(sba(ex.p, ex.profile, BudgetLimit(0), Budget::none(ex.p)), Budget::none(ex.p));
}

TEST(Sba, PreviousItemWinsEqualCostSwap) {
  const auto p = Proposal::unit({{"x", 2}, {"y", 2}});
  const Profile tie(p, {makeLinearOrder(p, {"x", "y"}), makeLinearOrder(p, {"y", "x"})});
  EXPECT_EQ(sba(p, tie, BudgetLimit(3), Budget::ofItems(p, {"y"})), Budget::ofItems(p, {"y"}));
  EXPECT_EQ(sba(p, tie, BudgetLimit(3), Budget::ofItems(p, {"x"})), Budget::ofItems(p, {"x"}));

  const auto ranked = ranking(p, tie);
  ASSERT_EQ(ranked.components.size(), 1u);
  const auto order = pruningOrder(p, ranked.components[0], Budget::ofItems(p, {"y"}), TieBreak::kCostAscending);
  EXPECT_EQ(order.front().item, 1u);
}

TEST(Sba, TieBreakPolicies) {
  const auto p = Proposal::unit({{"x", 2}, {"y", 1}});
  const Profile tie(p, {makeLinearOrder(p, {"x", "y"}), makeLinearOrder(p, {"y", "x"})});
  EXPECT_EQ(sba(p, tie, BudgetLimit(2), Budget::none(p), {TieBreak::kCostAscending, false}),
            Budget::ofItems(p, {"y"}));
  EXPECT_EQ(sba(p, tie, BudgetLimit(2), Budget::none(p), {TieBreak::kDeclarationOrder, false}),
            Budget::ofItems(p, {"x"}));
  EXPECT_EQ(parseTieBreak("cost"), TieBreak::kCostAscending);
  EXPECT_EQ(parseTieBreak("index"), TieBreak::kDeclarationOrder);
  EXPECT_FALSE(parseTieBreak("random").has_value());
}

TEST(Sba, ExactKnapsackFindsCloserMaximalSubset) {
  const auto p = Proposal::unit({{"a", 3}, {"b", 2}, {"c", 1}});
  const Profile tie(p, {});
  const Budget previous = Budget::ofItems(p, {"a", "b"});
  const Budget greedy = sba(p, tie, BudgetLimit(4), previous);
  const Budget exact = sba(p, tie, BudgetLimit(4), previous, {TieBreak::kCostAscending, true});
  EXPECT_EQ(greedy, Budget::ofItems(p, {"b", "c"}));
  EXPECT_EQ(exact, Budget::ofItems(p, {"a", "c"}));
  EXPECT_LT(symdiffCost(p, exact, previous), symdiffCost(p, greedy, previous));
}

TEST(Sba, ExactKnapsackIsClosestMaximalSubset) {
  testgen::Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(rng, 1, 6));
    const auto p = testgen::unitProposal(rng, n, 1, 5);
    const Profile none(p, {});
    const Budget previous = testgen::randomSubset(rng, p);
    const BudgetLimit limit(testgen::uniform(rng, 0, 12));
    const Budget b = sba(p, none, limit, previous, {TieBreak::kCostAscending, true});
    Money best = -1;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      std::vector<Count> counts(n);
      for (std::size_t i = 0; i < n; ++i) counts[i] = (mask >> i) & 1U;
      const Budget candidate = Budget::ofCounts(p, counts);
      if (!isFeasible(p, candidate, limit) || !isExhaustive(p, candidate, limit)) continue;
      const Money d = symdiffCost(p, candidate, previous);
      if (best < 0 || d < best) best = d;
    }
    ASSERT_EQ(symdiffCost(p, b, previous), best) << "trial " << trial;
  }
}

TEST(Sba, RejectsRankingThatMissesItems) {
  ThreeItems ex;
  RankedPartition partial;
  partial.components.push_back({{0, 1, 1}});
  EXPECT_THROW(pruning(ex.p, partial, BudgetLimit(3), Budget::none(ex.p)), ValidationError);
}

TEST(Sba, RejectsWrongMode) {
  const auto q = Proposal::quantitative(std::vector<Proposal::QuantItem>{{"s", {1, 2}}});
  EXPECT_THROW(sba(q, Profile(q, {}), BudgetLimit(1), Budget::none(q)), ValidationError);
  ThreeItems ex;
  EXPECT_THROW(esba(ex.p, ex.profile, BudgetLimit(1), Budget::none(ex.p)), ValidationError);
}

TEST(Sba, Deterministic) {
  testgen::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testgen::unitInstance(rng, 6, 4, 10, 7);
    const Budget a = sba(inst.proposal, inst.profile, inst.limit, inst.previous);
    const Budget b = sba(inst.proposal, inst.profile, inst.limit, inst.previous);
    ASSERT_EQ(a, b);
  }
}

TEST(Sba, MatchesUnitExpansionReference) {
  testgen::Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const auto kind = static_cast<BallotKind>(trial % 3);
    const auto inst = testgen::unitInstance(rng, 6, 4, 10, 7, kind);
    for (auto policy : {TieBreak::kCostAscending, TieBreak::kDeclarationOrder}) {
      ASSERT_EQ(sba(inst.proposal, inst.profile, inst.limit, inst.previous, {policy, false}),
                ref::unitExpansionBudget(inst.proposal, inst.profile, inst.limit, inst.previous, policy))
          << "trial " << trial;
    }
  }
}

// Items pricier than the limit would otherwise sit on majority paths that no
// feasible budget can follow: x2 links x3 to x1 here.
TEST(Sba, UnaffordableItemsAreRankedLast) {
  const auto p = Proposal::unit({{"x1", 1}, {"x2", 3}, {"x3", 1}, {"x4", 4}, {"x5", 1}});
  const Profile profile(p, {makeLinearOrder(p, {"x3", "x2", "x1", "x5", "x4"}),
                            makeLinearOrder(p, {"x4", "x5", "x1", "x3", "x2"}),
                            makeLinearOrder(p, {"x2", "x5", "x1", "x3", "x4"})});
  const BudgetLimit limit(2);
  const Budget previous = Budget::ofItems(p, {"x3", "x4", "x5"});
  const auto plain = ranking(p, profile);
  EXPECT_EQ(ids(p, plain.components[0]), (std::vector<std::string>{"x1", "x2", "x3", "x5"}));
  // Pruning the plain ranking keeps x3 and x5, which {x1, x5} beats.
  const Budget from_plain = pruning(p, plain, limit, previous);
  EXPECT_EQ(from_plain, Budget::ofItems(p, {"x3", "x5"}));
  EXPECT_EQ(verifyBudget(p, profile, limit, from_plain).condorcet, Check::kFail);

  const auto ranked = ranking(p, profile, limit);
  ASSERT_EQ(ranked.components.size(), 4u);
  EXPECT_EQ(ids(p, ranked.components[0]), (std::vector<std::string>{"x5"}));
  EXPECT_EQ(ids(p, ranked.components[3]), (std::vector<std::string>{"x2", "x4"}));
  const Budget b = sba(p, profile, limit, previous);
  EXPECT_EQ(b, Budget::ofItems(p, {"x1", "x5"}));
  EXPECT_EQ(verifyBudget(p, profile, limit, b).condorcet, Check::kPass);
}

TEST(Sba, UnaffordableCopiesSplitOffVertex) {
  const auto p = Proposal::quantitative(std::vector<Proposal::QuantItem>{{"s", {2, 4, 6, 8}}, {"t", {1}}});
  const Profile profile(p, {makeOrderedPartition(p, std::vector<std::vector<std::pair<std::string, Count>>>{
                                                        {{"s", 4}}, {{"t", 1}}})});
  const auto ranked = ranking(p, profile, BudgetLimit(5));
  ASSERT_EQ(ranked.components.size(), 3u);
  EXPECT_EQ(ranked.components[0], (std::vector<VertexKey>{{0, 1, 2}}));
  EXPECT_EQ(ranked.components[2], (std::vector<VertexKey>{{0, 3, 4}}));
}

// Smith membership and Condorcet consistency for complete orders, with and
// without ties.
class SbaSmith : public ::testing::TestWithParam<BallotKind> {};

TEST_P(SbaSmith, OutputIsSmithBudget) {
  testgen::Rng rng(1000 + static_cast<int>(GetParam()));
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = testgen::unitInstance(rng, 5, 4, 8, 7, GetParam());
    for (bool exact : {false, true}) {
      const Budget b = sba(inst.proposal, inst.profile, inst.limit, inst.previous, {TieBreak::kCostAscending, exact});
      const auto report = verifyBudget(inst.proposal, inst.profile, inst.limit, b);
      ASSERT_EQ(report.feasible, Check::kPass);
      ASSERT_EQ(report.exhaustive, Check::kPass);
      ASSERT_EQ(report.smith_member, Check::kPass) << "trial " << trial;
      ASSERT_NE(report.condorcet, Check::kFail) << "trial " << trial;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(CompleteOrders, SbaSmith,
                         ::testing::Values(BallotKind::kLinear, BallotKind::kPartition),
                         [](const auto& info) { return std::string(toString(info.param)); });

// With incomparable pairs a set can win a majority that no single item wins:
// no pair is ordered by 3 of 5 voters, yet v2, v4 and v5 each rank some item
// of {x1, x3, x4} above x2.
TEST(Sba, PartialOrdersCanMissCondorcetWinner) {
  const auto p = Proposal::unit({{"x1", 1}, {"x2", 4}, {"x3", 2}, {"x4", 1}});
  const Profile profile(p, {makePartialOrder(p, {{"x4", "x1"}, {"x1", "x3"}}), makePartialOrder(p, {{"x3", "x2"}}),
                            makePartialOrder(p, {{"x2", "x4"}}), makePartialOrder(p, {{"x4", "x2"}}),
                            makePartialOrder(p, {{"x3", "x2"}, {"x1", "x2"}})});
  const BudgetLimit limit(4);
  EXPECT_EQ(buildMajorityGraph(p, profile).graph.arcCount(), 0u);
  const Budget b = sba(p, profile, limit, Budget::ofItems(p, {"x2"}));
  EXPECT_EQ(b, Budget::ofItems(p, {"x2"}));
  const auto bg = budgetsGraph(p, profile, limit);
  const auto winner = condorcetWinner(bg);
  ASSERT_TRUE(winner.has_value());
  EXPECT_EQ(bg.budgets[*winner], Budget::ofItems(p, {"x1", "x3", "x4"}));
  EXPECT_EQ(verifyBudget(p, profile, limit, b).smith_member, Check::kFail);
}
