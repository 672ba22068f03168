#pragma once

// Independent reference implementations used only by tests. None of these
// call into the majority-graph or pruning code they are checked against.

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "dembudget/model.hpp"
#include "dembudget/sba.hpp"

namespace dembudget::ref {

using Matrix = std::vector<std::vector<bool>>;

inline Matrix transitiveClosure(Matrix reach) {
  const std::size_t n = reach.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

/// Smith set by subset enumeration: the smallest non-empty X such that every
/// member has an arc to every non-member.
inline std::vector<std::size_t> smithBySubsets(const Matrix& arc) {
  const std::size_t n = arc.size();
  std::vector<std::size_t> best;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    bool dominant = true;
    for (std::size_t x = 0; x < n && dominant; ++x) {
      if (!((mask >> x) & 1U)) continue;
      for (std::size_t y = 0; y < n && dominant; ++y) {
        if (!((mask >> y) & 1U) && !arc[x][y]) dominant = false;
      }
    }
    if (!dominant) continue;
    std::vector<std::size_t> members;
    for (std::size_t x = 0; x < n; ++x) {
      if ((mask >> x) & 1U) members.push_back(x);
    }
    if (best.empty() || members.size() < best.size()) best = members;
  }
  return best;
}

/// Schwartz set by subset enumeration: union of the inclusion-minimal
/// non-empty sets that receive no arc from outside.
inline std::vector<std::size_t> schwartzBySubsets(const Matrix& arc) {
  const std::size_t n = arc.size();
  std::vector<std::uint32_t> undominated;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    bool closed = true;
    for (std::size_t y = 0; y < n && closed; ++y) {
      if ((mask >> y) & 1U) continue;
      for (std::size_t x = 0; x < n && closed; ++x) {
        if (((mask >> x) & 1U) && arc[y][x]) closed = false;
      }
    }
    if (closed) undominated.push_back(mask);
  }
  std::uint32_t all = 0;
  for (std::uint32_t m : undominated) {
    const bool minimal = std::none_of(undominated.begin(), undominated.end(), [&](std::uint32_t o) {
      return o != m && (o & m) == o;
    });
    if (minimal) all |= m;
  }
  std::vector<std::size_t> members;
  for (std::size_t x = 0; x < n; ++x) {
    if ((all >> x) & 1U) members.push_back(x);
  }
  return members;
}

/// Smith set of the budgets graph by subset enumeration over at most 16
/// feasible budgets: smallest X whose members each dominate every non-member.
inline std::vector<std::size_t> smithBudgetsBySubsets(const Proposal& proposal, const Profile& profile,
                                                      const std::vector<Budget>& budgets) {
  const std::size_t n = budgets.size();
  Matrix arc(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::size_t prefer = 0;
      for (const auto& ballot : profile.ballots()) {
        if (prefers(proposal, ballot, budgets[i], budgets[j])) ++prefer;
      }
      arc[i][j] = 2 * prefer > profile.size();
    }
  }
  return smithBySubsets(arc);
}

struct Copy {
  ItemIndex item;
  Count k;  // 1-based copy number
};

/// Pseudo-polynomial reference for the quantitative algorithm: one vertex per
/// copy, tiers read off each ballot, Schwartz layers via transitive closure,
/// then copy-by-copy greedy pruning in the documented tie-break order.
/// Copies unaffordable on their own are left out of the graph.
/// Unit proposals go through the same path with one copy per item.
inline Budget unitExpansionBudget(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
                                  const Budget& previous, TieBreak policy) {
  std::vector<Copy> copies;
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    for (Count k = 1; k <= proposal.quantity(i); ++k) copies.push_back({i, k});
  }
  const std::size_t n = copies.size();
  auto copyIndex = [&](ItemIndex item, Count k) {
    for (std::size_t c = 0; c < n; ++c) {
      if (copies[c].item == item && copies[c].k == k) return c;
    }
    return n;
  };

  // Per voter and copy: component index; lower is better. Partial orders
  // only compare pairs in the closure, so keep a relation per voter.
  std::vector<Matrix> above;
  for (const auto& ballot : profile.ballots()) {
    Matrix rel(n, std::vector<bool>(n, false));
    if (const auto* linear = std::get_if<LinearOrder>(&ballot)) {
      std::vector<std::size_t> tier(n);
      for (std::size_t r = 0; r < linear->items.size(); ++r) tier[copyIndex(linear->items[r], 1)] = r;
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t w = 0; w < n; ++w) rel[u][w] = tier[u] < tier[w];
    } else if (const auto* partition = std::get_if<OrderedPartition>(&ballot)) {
      std::vector<std::size_t> tier(n);
      std::vector<Count> seen(proposal.size(), 0);
      for (std::size_t c = 0; c < partition->components.size(); ++c) {
        for (const auto& share : partition->components[c]) {
          for (Count t = 0; t < share.count; ++t) tier[copyIndex(share.item, ++seen[share.item])] = c;
        }
      }
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t w = 0; w < n; ++w) rel[u][w] = tier[u] < tier[w];
    } else {
      const auto& partial = std::get<PartialOrder>(ballot);
      Matrix direct(n, std::vector<bool>(n, false));
      for (const auto& [a, b] : partial.edges()) direct[copyIndex(a, 1)][copyIndex(b, 1)] = true;
      rel = transitiveClosure(direct);
    }
    above.push_back(std::move(rel));
  }
  Matrix arc(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t w = 0; w < n; ++w) {
      std::size_t count = 0;
      for (const auto& rel : above) count += rel[u][w] ? 1 : 0;
      arc[u][w] = 2 * count > profile.size();
    }
  }

  // Layers: the Schwartz set of what remains, via reachability.
  std::vector<std::vector<std::size_t>> layers;
  // A copy costing more than the limit on its own never enters a budget and
  // stays out of the layers.
  std::vector<bool> removed(n, false);
  std::size_t left = n;
  for (std::size_t c = 0; c < n; ++c) {
    if (proposal.item(copies[c].item).cost(copies[c].k) > limit.value()) {
      removed[c] = true;
      --left;
    }
  }
  while (left > 0) {
    Matrix sub(n, std::vector<bool>(n, false));
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t w = 0; w < n; ++w) sub[u][w] = !removed[u] && !removed[w] && arc[u][w];
    const Matrix reach = transitiveClosure(sub);
    std::vector<std::size_t> layer;
    for (std::size_t v = 0; v < n; ++v) {
      if (removed[v]) continue;
      bool top = true;
      for (std::size_t u = 0; u < n && top; ++u) {
        if (!removed[u] && u != v && reach[u][v] && !reach[v][u]) top = false;
      }
      if (top) layer.push_back(v);
    }
    for (std::size_t v : layer) removed[v] = true;
    left -= layer.size();
    layers.push_back(std::move(layer));
  }

  Budget budget = Budget::none(proposal);
  Money spent = 0;
  for (auto layer : layers) {
    auto key = [&](std::size_t c) {
      const Item& item = proposal.item(copies[c].item);
      const bool fresh = copies[c].k > previous.count(copies[c].item);
      const bool by_cost = policy == TieBreak::kCostAscending;
      return std::make_tuple(fresh, by_cost ? item.cost(1) : 0, by_cost ? item.id : std::string(),
                             copies[c].item, copies[c].k);
    };
    std::sort(layer.begin(), layer.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t c : layer) {
      const auto& f = proposal.item(copies[c].item).cost;
      const Count have = budget.count(copies[c].item);
      const Money extra = f(have + 1) - f(have);
      if (spent + extra <= limit.value()) {
        spent += extra;
        budget.add(copies[c].item, 1);
      }
    }
  }
  return budget;
}

}  // namespace dembudget::ref
