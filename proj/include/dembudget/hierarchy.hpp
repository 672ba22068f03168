#pragma once

// Two-phase hierarchical budgeting. Each section is ranked on its own, without
// a limit; the linearized section rankings become quantitative "derived" items
// whose k-th copy stands for the k-th item of the section, and a consolidated
// election over those items decides how far down each section gets funded.
//
// A consolidated proposal can itself be a section of a higher level: ranking
// and linearization work on either proposal mode.

#include <map>
#include <string>
#include <vector>

#include "dembudget/model.hpp"
#include "dembudget/sba.hpp"

namespace dembudget {

struct Section {
  std::string id;
  Proposal proposal;
  Profile profile;
};

struct SectionRanking {
  std::string section_id;
  Proposal proposal;
  RankedPartition ranked;
  /// One entry per copy, best first; a linear extension of `ranked`.
  std::vector<ItemIndex> linearized;
};

struct DerivedProposal {
  /// Quantitative; item i is section i of the rankings it was derived from
  /// (empty sections are skipped) and carries the section id.
  Proposal proposal;
  /// Index into the rankings for each derived item.
  std::vector<std::size_t> section_of;
};

struct Consolidation {
  Budget consolidated;                 // over the derived proposal
  std::vector<Budget> section_budgets;  // one per ranking, over its own proposal
  std::vector<Money> section_limits;    // spend allotted to each section
};

/// Ranks the section's own ballots; inside a component copies are linearized
/// in the tie-break policy's order.
SectionRanking sectionRank(const Section& section, TieBreak policy = TieBreak::kCostAscending);

/// Budget made of the first `k` linearized copies of a section.
Budget expandPrefix(const SectionRanking& ranking, Count k);

DerivedProposal deriveProposal(const std::vector<SectionRanking>& rankings);

/// Converts each section's previous spend into a derived quantity: the
/// longest linearized prefix that costs no more than that spend.
Budget derivePrevious(const std::vector<SectionRanking>& rankings, const DerivedProposal& derived,
                      const std::vector<Budget>& previous_by_section);

/// Runs quantitative SBA on the derived proposal and maps each selected
/// quantity back to its section's prefix.
Consolidation consolidate(const std::vector<SectionRanking>& rankings,
                          const DerivedProposal& derived, const Profile& consolidated_profile,
                          BudgetLimit limit, const Budget& previous,
                          const PruningOptions& options = {});

/// Prunes every section ranking by its own limit. Sections missing from
/// `limits` get 0; unknown section ids are rejected.
std::vector<Budget> whatIfLimits(const std::vector<SectionRanking>& rankings,
                                 const std::map<std::string, Money>& limits,
                                 const std::vector<Budget>& previous_by_section = {},
                                 const PruningOptions& options = {});

/// Restricts a ballot over a combined proposal to the items of one section.
Ballot restrictBallot(const Proposal& combined, const Ballot& ballot, const Proposal& section);

/// Expresses a combined-proposal ballot over derived items: within each
/// component, every item of section s contributes one more copy of s. Linear
/// ballots yield singleton components. Partial orders are rejected.
OrderedPartition projectBallot(const Proposal& combined, const Ballot& ballot,
                               const std::vector<SectionRanking>& rankings,
                               const DerivedProposal& derived);

}  // namespace dembudget
