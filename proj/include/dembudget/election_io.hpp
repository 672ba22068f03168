#pragma once

// JSON interchange for elections and results. All money values are integers
// in the election's minor unit. Output objects use sorted keys so identical
// inputs serialize byte-identically.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dembudget/hierarchy.hpp"
#include "dembudget/model.hpp"
#include "dembudget/oracle.hpp"
#include "dembudget/sba.hpp"

namespace dembudget {

using Json = nlohmann::json;

/// Ballot over derived section items, kept by id until the sections are
/// ranked and the derived proposal exists.
using RawPartition = std::vector<std::vector<std::pair<std::string, Count>>>;

struct SectionSpec {
  std::string id;
  Proposal proposal;
  std::vector<std::string> voters;
  std::optional<Profile> profile;  // own ballots; otherwise restrictions of the main ballots
};

struct ElectionFile {
  Proposal proposal;
  std::vector<std::string> voters;  // parallel to profile
  Profile profile;
  BudgetLimit limit{0};
  Budget previous;
  TieBreak tie_break = TieBreak::kCostAscending;
  std::vector<SectionSpec> sections;
  std::vector<std::string> consolidated_voters;
  std::vector<RawPartition> consolidated_ballots;

  bool hierarchical() const { return !sections.empty(); }
};

/// Parses and validates; errors name the offending JSON path.
ElectionFile parseElection(std::string_view text);
ElectionFile electionFromJson(const Json& doc);
Json toJson(const ElectionFile& election);

/// The election's fields without ballots, for creating an election remotely.
ElectionFile parseElectionSkeleton(const Json& doc);

Ballot ballotFromJson(const Proposal& proposal, const Json& node, const std::string& path);
Json ballotToJson(const Proposal& proposal, const Ballot& ballot);

Json budgetToJson(const Proposal& proposal, const Budget& budget);
/// {"budget": ..., "cost": ...} serialized canonically.
std::string emitBudget(const Proposal& proposal, const Budget& budget);

Json rankingToJson(const Proposal& proposal, const RankedPartition& ranked);
Json reportToJson(const Proposal& proposal, const VerificationReport& report);
Json sectionRankingToJson(const SectionRanking& ranking);

/// Hierarchical run over an election with sections: section rankings, the
/// consolidated budget, and the direct (non-hierarchical) budget for
/// comparison when full ballots are present.
struct HierarchyRun {
  std::vector<SectionRanking> rankings;
  DerivedProposal derived;
  Profile consolidated_profile;
  Consolidation consolidation;
  std::optional<Budget> direct;
};

std::vector<SectionRanking> rankSections(const ElectionFile& election);
HierarchyRun runHierarchy(const ElectionFile& election, const PruningOptions& options);
Json hierarchyToJson(const ElectionFile& election, const HierarchyRun& run);
Json whatIfToJson(const std::vector<SectionRanking>& rankings, const std::vector<Budget>& budgets);

/// Canonical text form used for every command output.
std::string dumpCanonical(const Json& value);

}  // namespace dembudget
