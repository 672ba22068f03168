#include "dembudget/hierarchy.hpp"

#include <algorithm>

namespace dembudget {

SectionRanking sectionRank(const Section& section, TieBreak policy) {
  SectionRanking result{section.id, section.proposal, ranking(section.proposal, section.profile), {}};
  const Budget nothing = Budget::none(section.proposal);
  for (const auto& component : result.ranked.components) {
    for (const auto& key : pruningOrder(section.proposal, component, nothing, policy)) {
      result.linearized.insert(result.linearized.end(), static_cast<std::size_t>(key.copies()),
                               key.item);
    }
  }
  return result;
}

Budget expandPrefix(const SectionRanking& ranking, Count k) {
  if (k < 0 || static_cast<std::size_t>(k) > ranking.linearized.size()) {
    throw ValidationError("prefix length " + std::to_string(k) + " outside section '" +
                          ranking.section_id + "'");
  }
  Budget budget = Budget::none(ranking.proposal);
  for (Count j = 0; j < k; ++j) budget.add(ranking.linearized[static_cast<std::size_t>(j)], 1);
  return budget;
}

DerivedProposal deriveProposal(const std::vector<SectionRanking>& rankings) {
  std::vector<Item> items;
  std::vector<std::size_t> section_of;
  for (std::size_t s = 0; s < rankings.size(); ++s) {
    const auto& r = rankings[s];
    if (r.linearized.empty()) continue;
    std::vector<Money> cumulative;
    cumulative.reserve(r.linearized.size());
    std::vector<Count> held(r.proposal.size(), 0);
    Money running = 0;
    for (ItemIndex i : r.linearized) {
      running += r.proposal.item(i).cost.marginal(held[i]++);
      cumulative.push_back(running);
    }
    if (!std::is_sorted(cumulative.begin(), cumulative.end()) && r.proposal.isUnit()) {
      throw ContractViolation("prefix costs of a unit section must be non-decreasing");
    }
    items.push_back({r.section_id, CostFunction::fromTable(cumulative)});
    section_of.push_back(s);
  }
  return {Proposal::quantitative(std::move(items), /*allow_empty=*/true), std::move(section_of)};
}

Budget derivePrevious(const std::vector<SectionRanking>& rankings, const DerivedProposal& derived,
                      const std::vector<Budget>& previous_by_section) {
  Budget previous = Budget::none(derived.proposal);
  if (previous_by_section.empty()) return previous;
  if (previous_by_section.size() != rankings.size()) {
    throw ValidationError("need one previous budget per section");
  }
  for (ItemIndex j = 0; j < derived.proposal.size(); ++j) {
    const std::size_t s = derived.section_of[j];
    const Money spend = cost(rankings[s].proposal, previous_by_section[s]);
    const auto& f = derived.proposal.item(j).cost;
    Count k = f.quantity();
    while (k > 0 && f(k) > spend) --k;
    previous.set(j, k);
  }
  return previous;
}

Consolidation consolidate(const std::vector<SectionRanking>& rankings,
                          const DerivedProposal& derived, const Profile& consolidated_profile,
                          BudgetLimit limit, const Budget& previous,
                          const PruningOptions& options) {
  Consolidation result;
  result.consolidated = esba(derived.proposal, consolidated_profile, limit, previous, options);
  for (const auto& r : rankings) {
    result.section_budgets.push_back(Budget::none(r.proposal));
  }
  for (ItemIndex j = 0; j < derived.proposal.size(); ++j) {
    const std::size_t s = derived.section_of[j];
    result.section_budgets[s] = expandPrefix(rankings[s], result.consolidated.count(j));
  }
  for (std::size_t s = 0; s < rankings.size(); ++s) {
    result.section_limits.push_back(cost(rankings[s].proposal, result.section_budgets[s]));
  }
  return result;
}

std::vector<Budget> whatIfLimits(const std::vector<SectionRanking>& rankings,
                                 const std::map<std::string, Money>& limits,
                                 const std::vector<Budget>& previous_by_section,
                                 const PruningOptions& options) {
  for (const auto& [id, value] : limits) {
    const bool known = std::any_of(rankings.begin(), rankings.end(),
                                   [&](const SectionRanking& r) { return r.section_id == id; });
    if (!known) throw ValidationError("unknown section '" + id + "'");
  }
  if (!previous_by_section.empty() && previous_by_section.size() != rankings.size()) {
    throw ValidationError("need one previous budget per section");
  }
  std::vector<Budget> budgets;
  budgets.reserve(rankings.size());
  for (std::size_t s = 0; s < rankings.size(); ++s) {
    const auto& r = rankings[s];
    const auto it = limits.find(r.section_id);
    const BudgetLimit limit(it == limits.end() ? 0 : it->second);
    const Budget previous =
        previous_by_section.empty() ? Budget::none(r.proposal) : previous_by_section[s];
    budgets.push_back(pruning(r.proposal, r.ranked, limit, previous, options));
  }
  return budgets;
}

Ballot restrictBallot(const Proposal& combined, const Ballot& ballot, const Proposal& section) {
  std::vector<std::optional<ItemIndex>> local(combined.size());
  for (ItemIndex i = 0; i < combined.size(); ++i) local[i] = section.find(combined.item(i).id);

  if (const auto* linear = std::get_if<LinearOrder>(&ballot)) {
    LinearOrder out;
    for (ItemIndex i : linear->items) {
      if (local[i]) out.items.push_back(*local[i]);
    }
    return out;
  }
  if (const auto* partition = std::get_if<OrderedPartition>(&ballot)) {
    OrderedPartition out;
    for (const auto& component : partition->components) {
      std::vector<Share> kept;
      for (const auto& share : component) {
        if (local[share.item]) kept.push_back({*local[share.item], share.count});
      }
      if (!kept.empty()) out.components.push_back(std::move(kept));
    }
    return out;
  }
  const auto& partial = std::get<PartialOrder>(ballot);
  std::vector<std::pair<ItemIndex, ItemIndex>> edges;
  for (ItemIndex a = 0; a < combined.size(); ++a) {
    for (ItemIndex b = 0; b < combined.size(); ++b) {
      if (local[a] && local[b] && partial.precedes(a, b)) edges.emplace_back(*local[a], *local[b]);
    }
  }
  return PartialOrder(section.size(), std::move(edges));
}

OrderedPartition projectBallot(const Proposal& combined, const Ballot& ballot,
                               const std::vector<SectionRanking>& rankings,
                               const DerivedProposal& derived) {
  std::vector<std::optional<ItemIndex>> derived_of(combined.size());
  for (ItemIndex i = 0; i < combined.size(); ++i) {
    for (ItemIndex j = 0; j < derived.proposal.size() && !derived_of[i]; ++j) {
      if (rankings[derived.section_of[j]].proposal.find(combined.item(i).id)) derived_of[i] = j;
    }
    if (!derived_of[i]) {
      throw ValidationError("item '" + combined.item(i).id + "' belongs to no ranked section");
    }
  }
  auto component_of = [&](const std::vector<Share>& shares) {
    std::map<ItemIndex, Count> merged;
    for (const auto& share : shares) merged[*derived_of[share.item]] += share.count;
    std::vector<Share> out;
    for (const auto& [j, k] : merged) out.push_back({j, k});
    return out;
  };
  OrderedPartition projected;
  if (const auto* linear = std::get_if<LinearOrder>(&ballot)) {
    for (ItemIndex i : linear->items) projected.components.push_back(component_of({{i, 1}}));
  } else if (const auto* partition = std::get_if<OrderedPartition>(&ballot)) {
    for (const auto& component : partition->components) {
      if (!component.empty()) projected.components.push_back(component_of(component));
    }
  } else {
    throw ValidationError("partial-order ballots cannot be projected onto sections");
  }
  validateBallot(derived.proposal, projected);
  return projected;
}

}  // namespace dembudget
