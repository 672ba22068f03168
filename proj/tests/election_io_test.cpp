#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dembudget/election_io.hpp"

using namespace dembudget;

namespace {

std::string readData(const std::string& name) {
  std::ifstream in(std::string(DEMBUDGET_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parseError(const std::string& text) {
  try {
    parseElection(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ElectionIo, ThreeItemFileRunsToExpectedBudget) {
  const auto e = parseElection(readData("abc.json"));
  EXPECT_EQ(e.voters, (std::vector<std::string>{"v1", "v2"}));
  const Budget b = computeBudget(e.proposal, e.profile, e.limit, e.previous, {e.tie_break, false});
  EXPECT_EQ(emitBudget(e.proposal, b), "{\n  \"budget\": [\n    \"a\",\n    \"b\"\n  ],\n  \"cost\": 3\n}\n");
}

TEST(ElectionIo, SubmarineCostTable) {
  const auto e = parseElection(readData("submarine.json"));
  EXPECT_FALSE(e.proposal.isUnit());
  EXPECT_EQ(e.proposal.item(e.proposal.indexOf("s")).cost(5), 29);
  EXPECT_EQ(e.proposal.quantity(e.proposal.indexOf("b")), 3);
}

TEST(ElectionIo, RoundTripIsStable) {
  for (const char* name : {"abc.json", "cyclic.json", "cyclic_prev.json", "submarine.json", "sections.json", "partial.json"}) {
    const auto once = parseElection(readData(name));
    const std::string emitted = dumpCanonical(toJson(once));
    const auto twice = parseElection(emitted);
    EXPECT_EQ(dumpCanonical(toJson(twice)), emitted) << name;
    EXPECT_EQ(twice.proposal, once.proposal) << name;
    EXPECT_EQ(twice.previous, once.previous) << name;
    EXPECT_EQ(twice.voters, once.voters) << name;
  }
}

TEST(ElectionIo, ConsolidatedBallotsRoundTrip) {
  const std::string text = R"({
    "sections": [{"id": "A", "items": [{"id": "a1", "cost": 1}, {"id": "a2", "cost": 1}]},
                 {"id": "B", "items": [{"id": "b", "cost": 1}]}],
    "limit": 2,
    "consolidatedBallots": [{"components": [[{"id": "B", "quantity": 1}], [{"id": "A", "quantity": 2}]]}]
  })";
  const auto e = parseElection(text);
  ASSERT_EQ(e.consolidated_ballots.size(), 1u);
  EXPECT_EQ(e.consolidated_voters, (std::vector<std::string>{"c1"}));
  const auto run = runHierarchy(e, {});
  EXPECT_EQ(run.consolidation.consolidated.counts(), (std::vector<Count>{1, 1}));
  EXPECT_FALSE(run.direct.has_value());
  const std::string emitted = dumpCanonical(toJson(e));
  EXPECT_EQ(dumpCanonical(toJson(parseElection(emitted))), emitted);
}

TEST(ElectionIo, SectionsHierarchy) {
  const auto e = parseElection(readData("sections.json"));
  ASSERT_TRUE(e.hierarchical());
  const auto run = runHierarchy(e, {});
  const Json out = hierarchyToJson(e, run);
  EXPECT_EQ(out["consolidated"]["budget"], Json({"a1", "b"}));
  EXPECT_EQ(out["direct"]["budget"], Json({"a1", "a2"}));
}

TEST(ElectionIo, ErrorsNameThePath) {
  EXPECT_NE(parseError(readData("empty_items.json")).find("$.items"), std::string::npos);
  EXPECT_NE(parseError(readData("malformed.json")).find("$.ballots[1].order"), std::string::npos);
  EXPECT_NE(parseError("{").find("invalid JSON"), std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": "x"}], "limit": 1})").find("$.items[0].cost"),
            std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": 1}], "limit": -1})").find("$.limit"), std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": 1}], "limit": 1, "colour": 2})").find("$.colour"),
            std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": 1}, {"id": "a", "cost": 2}], "limit": 1})").find("$.items"),
            std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": 1}], "limit": 1,
                           "ballots": [{"voter": "x", "type": "linear", "order": ["a"]},
                                       {"voter": "x", "type": "linear", "order": ["a"]}]})")
                .find("$.ballots[1].voter"),
            std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": 1}], "limit": 1,
                           "ballots": [{"type": "ranked", "order": ["a"]}]})")
                .find("$.ballots[0].type"),
            std::string::npos);
  EXPECT_NE(parseError(R"({"mode": "quantitative", "items": [{"id": "a", "cumCost": [1, 2]}], "limit": 1,
                           "ballots": [{"type": "partition", "components": [[{"id": "a", "quantity": 1}]]}]})")
                .find("$.ballots[0].components"),
            std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": 1}], "limit": 1, "previous": ["q"]})").find("$.previous"),
            std::string::npos);
  EXPECT_NE(parseError(R"({"items": [{"id": "a", "cost": 1}], "limit": 1, "tieBreak": "coin"})").find("$.tieBreak"),
            std::string::npos);
}

TEST(ElectionIo, QuantitativePreviousIsCountMap) {
  const auto e = parseElection(R"({"mode": "quantitative", "items": [{"id": "s", "cumCost": [1, 2, 3]}],
                                   "limit": 3, "previous": {"s": 2}})");
  EXPECT_EQ(e.previous.count(0), 2);
  EXPECT_EQ(toJson(e)["previous"], Json({{"s", 2}}));
}

TEST(ElectionIo, RankingAndReportJson) {
  const auto e = parseElection(readData("cyclic.json"));
  const Json ranked = rankingToJson(e.proposal, ranking(e.proposal, e.profile));
  EXPECT_EQ(ranked, Json::parse(R"([["b1", "b2", "b3"]])"));
  const auto report = verify(e.proposal, e.profile, e.limit, e.previous);
  const Json j = reportToJson(e.proposal, report);
  EXPECT_EQ(j["checks"]["smithMember"], "PASS");
  EXPECT_EQ(j["checks"]["condorcetWinner"], "VACUOUS");
  EXPECT_TRUE(j["condorcetWinner"].is_null());
  EXPECT_EQ(j["ok"], true);
}
