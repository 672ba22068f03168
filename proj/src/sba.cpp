#include "dembudget/sba.hpp"

#include <algorithm>
#include <tuple>

namespace dembudget {

std::size_t RankedPartition::vertexCount() const {
  std::size_t n = 0;
  for (const auto& component : components) n += component.size();
  return n;
}

std::optional<TieBreak> parseTieBreak(const std::string& name) {
  if (name == "cost") return TieBreak::kCostAscending;
  if (name == "index") return TieBreak::kDeclarationOrder;
  return std::nullopt;
}

const char* toString(TieBreak policy) {
  switch (policy) {
    case TieBreak::kCostAscending: return "cost";
    case TieBreak::kDeclarationOrder: return "index";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Ranking

RankedPartition rankGraph(const MajorityGraph& graph) {
  const Digraph& g = graph.graph;
  const auto sccs = stronglyConnectedComponents(g);
  std::vector<std::size_t> scc_of(g.vertexCount());
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    for (std::size_t v : sccs[c]) scc_of[v] = c;
  }
  // Removing whole SCCs leaves the other SCCs intact, so each round's
  // Schwartz set is the union of SCCs with no remaining predecessor.
  std::vector<std::vector<bool>> dag(sccs.size(), std::vector<bool>(sccs.size(), false));
  std::vector<std::size_t> indegree(sccs.size(), 0);
  for (const auto& [u, w] : g.arcs()) {
    const std::size_t cu = scc_of[u], cw = scc_of[w];
    if (cu != cw && !dag[cu][cw]) {
      dag[cu][cw] = true;
      ++indegree[cw];
    }
  }
  RankedPartition ranked;
  std::vector<std::size_t> round;
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    if (indegree[c] == 0) round.push_back(c);
  }
  while (!round.empty()) {
    auto& layer = ranked.components.emplace_back();
    std::vector<std::size_t> next;
    for (std::size_t c : round) {
      for (std::size_t v : sccs[c]) layer.push_back(graph.vertices[v]);
      for (std::size_t d = 0; d < sccs.size(); ++d) {
        if (dag[c][d] && --indegree[d] == 0) next.push_back(d);
      }
    }
    std::sort(layer.begin(), layer.end());
    round = std::move(next);
  }
  return ranked;
}

RankedPartition ranking(const Proposal& proposal, const Profile& profile) {
  return rankGraph(buildMajorityGraph(proposal, profile));
}

RankedPartition ranking(const Proposal& proposal, const Profile& profile, BudgetLimit limit) {
  std::vector<VertexKey> affordable, rest;
  for (const auto& key : majorityVertices(proposal, profile)) {
    const Count fits = proposal.item(key.item).cost.affordableCopies(0, key.last, limit.value());
    if (fits >= key.last) {
      affordable.push_back(key);
    } else if (fits < key.first) {
      rest.push_back(key);
    } else {
      affordable.push_back({key.item, key.first, fits});
      rest.push_back({key.item, fits + 1, key.last});
    }
  }
  RankedPartition ranked = rankGraph(buildMajorityGraph(proposal, profile, std::move(affordable)));
  if (!rest.empty()) ranked.components.push_back(std::move(rest));
  return ranked;
}

// ---------------------------------------------------------------------------
// Pruning

namespace {

void requireCoversProposal(const Proposal& proposal, const RankedPartition& ranked) {
  std::vector<std::vector<std::pair<Count, Count>>> ranges(proposal.size());
  for (const auto& component : ranked.components) {
    for (const auto& key : component) {
      if (key.item >= proposal.size() || key.first < 1 || key.last < key.first) {
        throw ValidationError("ranking contains an invalid vertex");
      }
      ranges[key.item].emplace_back(key.first, key.last);
    }
  }
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    std::sort(ranges[i].begin(), ranges[i].end());
    Count expected = 1;
    for (const auto& [first, last] : ranges[i]) {
      if (first != expected) {
        throw ValidationError("ranking does not partition the copies of '" +
                              proposal.item(i).id + "'");
      }
      expected = last + 1;
    }
    if (expected != proposal.quantity(i) + 1) {
      throw ValidationError("ranking does not cover every copy of '" + proposal.item(i).id + "'");
    }
  }
}

// Unit mode: among all maximal subsets of `order` fitting in `room`, the one
// with the cheapest symmetric difference to the previous budget; remaining
// ties prefer including items earlier in `order`.
std::vector<ItemIndex> exactSubset(const Proposal& proposal, const std::vector<VertexKey>& order,
                                   const Budget& previous, Money room) {
  const std::size_t n = order.size();
  std::vector<Money> price(n);
  std::vector<bool> was_funded(n);
  for (std::size_t j = 0; j < n; ++j) {
    price[j] = proposal.item(order[j].item).cost(1);
    was_funded[j] = previous.contains(order[j].item);
  }
  const std::uint32_t full = (std::uint32_t{1} << n);
  std::vector<Money> subset_cost(full, 0);
  std::optional<std::uint32_t> best;
  Money best_distance = 0;
  // Earlier positions in `order` take precedence in the final tie-break.
  auto prefer = [&](std::uint32_t a, std::uint32_t b) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool in_a = (a >> j) & 1U, in_b = (b >> j) & 1U;
      if (in_a != in_b) return in_a;
    }
    return false;
  };
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (mask != 0) {
      const std::uint32_t low = mask & (~mask + 1);
      subset_cost[mask] = subset_cost[mask ^ low] + price[static_cast<std::size_t>(__builtin_ctz(low))];
    }
    const Money spent = subset_cost[mask];
    if (spent > room) continue;
    bool maximal = true;
    Money distance = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool in = (mask >> j) & 1U;
      if (!in && spent + price[j] <= room) {
        maximal = false;
        break;
      }
      if (in != was_funded[j]) distance += price[j];
    }
    if (!maximal) continue;
    if (!best || distance < best_distance || (distance == best_distance && prefer(mask, *best))) {
      best = mask;
      best_distance = distance;
    }
  }
  std::vector<ItemIndex> chosen;
  for (std::size_t j = 0; j < n; ++j) {
    if ((*best >> j) & 1U) chosen.push_back(order[j].item);
  }
  return chosen;
}

void checkOutcome(const Proposal& proposal, const Budget& budget, BudgetLimit limit) {
  if (!isFeasible(proposal, budget, limit)) throw ContractViolation("pruning produced an infeasible budget");
  if (!isExhaustive(proposal, budget, limit)) {
    throw ContractViolation("pruning produced a non-exhaustive budget");
  }
}

}  // namespace

std::vector<VertexKey> pruningOrder(const Proposal& proposal,
                                    const std::vector<VertexKey>& component,
                                    const Budget& previous, TieBreak policy) {
  struct Candidate {
    bool fresh;
    VertexKey key;
  };
  std::vector<Candidate> candidates;
  for (const auto& key : component) {
    const Count funded_before = previous.count(key.item);
    if (key.first <= funded_before) {
      candidates.push_back({false, {key.item, key.first, std::min(key.last, funded_before)}});
    }
    if (key.last > funded_before) {
      candidates.push_back({true, {key.item, std::max(key.first, funded_before + 1), key.last}});
    }
  }
  auto rank = [&](const Candidate& c) {
    const Item& item = proposal.item(c.key.item);
    const Money price = policy == TieBreak::kCostAscending ? item.cost(1) : 0;
    const std::string_view id = policy == TieBreak::kCostAscending ? std::string_view(item.id)
                                                                    : std::string_view();
    return std::make_tuple(c.fresh, price, id, c.key.item, c.key.first);
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Candidate& a, const Candidate& b) { return rank(a) < rank(b); });
  std::vector<VertexKey> order;
  order.reserve(candidates.size());
  for (const auto& c : candidates) order.push_back(c.key);
  return order;
}

Budget pruning(const Proposal& proposal, const RankedPartition& ranked, BudgetLimit limit,
               const Budget& previous, const PruningOptions& options) {
  if (previous.size() != proposal.size()) {
    throw ValidationError("previous budget does not match the proposal");
  }
  requireCoversProposal(proposal, ranked);
  Budget budget = Budget::none(proposal);
  Money spent = 0;
  for (const auto& component : ranked.components) {
    const auto order = pruningOrder(proposal, component, previous, options.tie_break);
    if (options.exact_knapsack && proposal.isUnit() && component.size() <= kExactKnapsackMaxItems) {
      for (ItemIndex i : exactSubset(proposal, order, previous, limit.value() - spent)) {
        budget.set(i, 1);
        spent += proposal.item(i).cost(1);
      }
      continue;
    }
    for (const auto& key : order) {
      const auto& f = proposal.item(key.item).cost;
      const Count have = budget.count(key.item);
      const Count added = f.affordableCopies(have, key.copies(), limit.value() - spent);
      if (added == 0) continue;
      spent += f(have + added) - f(have);
      budget.add(key.item, added);
    }
  }
  checkOutcome(proposal, budget, limit);
  return budget;
}

Budget sba(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
           const Budget& previous, const PruningOptions& options) {
  if (!proposal.isUnit()) throw ValidationError("sba expects a unit-mode proposal; use esba");
  return pruning(proposal, ranking(proposal, profile, limit), limit, previous, options);
}

Budget esba(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
            const Budget& previous, const PruningOptions& options) {
  if (proposal.isUnit()) throw ValidationError("esba expects a quantitative proposal; use sba");
  return pruning(proposal, ranking(proposal, profile, limit), limit, previous, options);
}

Budget computeBudget(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
                     const Budget& previous, const PruningOptions& options) {
  return proposal.isUnit() ? sba(proposal, profile, limit, previous, options)
                           : esba(proposal, profile, limit, previous, options);
}

}  // namespace dembudget
