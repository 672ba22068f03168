#pragma once

// Random instance generators for property tests. Everything is driven by an
// explicit mt19937_64 so failures replay from the printed seed.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dembudget/model.hpp"

namespace dembudget::testgen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline bool coin(Rng& rng) { return uniform(rng, 0, 1) == 1; }

inline std::string itemName(std::size_t i) { return "x" + std::to_string(i + 1); }

inline Proposal unitProposal(Rng& rng, std::size_t n, int min_cost, int max_cost) {
  std::vector<Proposal::UnitItem> items;
  for (std::size_t i = 0; i < n; ++i) items.push_back({itemName(i), uniform(rng, min_cost, max_cost)});
  return Proposal::unit(items);
}

inline std::vector<ItemIndex> permutation(Rng& rng, std::size_t n) {
  std::vector<ItemIndex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

inline LinearOrder linearBallot(Rng& rng, std::size_t n) { return {permutation(rng, n)}; }

inline OrderedPartition unitPartitionBallot(Rng& rng, std::size_t n) {
  OrderedPartition ballot;
  const auto order = permutation(rng, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == 0 || coin(rng)) ballot.components.emplace_back();
    ballot.components.back().push_back({order[j], 1});
  }
  return ballot;
}

inline PartialOrder partialBallot(Rng& rng, std::size_t n) {
  const auto order = permutation(rng, n);
  std::vector<std::pair<ItemIndex, ItemIndex>> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (uniform(rng, 0, 2) == 0) edges.emplace_back(order[a], order[b]);
    }
  }
  return PartialOrder(n, std::move(edges));
}

inline Budget randomSubset(Rng& rng, const Proposal& proposal) {
  Budget b = Budget::none(proposal);
  for (ItemIndex i = 0; i < proposal.size(); ++i) b.set(i, uniform(rng, 0, static_cast<int>(proposal.quantity(i))));
  return b;
}

struct Instance {
  Proposal proposal;
  Profile profile;
  BudgetLimit limit{0};
  Budget previous;
};

/// Unit-mode instance: 1..max_items items with costs in [1, max_cost],
/// limit in [0, max_limit], 1..max_voters ballots of `kind`, random previous.
inline Instance unitInstance(Rng& rng, std::size_t max_items, int max_cost, int max_limit,
                             int max_voters, BallotKind kind = BallotKind::kLinear) {
  const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(max_items)));
  Proposal proposal = unitProposal(rng, n, 1, max_cost);
  const int voters = uniform(rng, 1, max_voters);
  std::vector<Ballot> ballots;
  for (int v = 0; v < voters; ++v) {
    switch (kind) {
      case BallotKind::kLinear: ballots.emplace_back(linearBallot(rng, n)); break;
      case BallotKind::kPartition: ballots.emplace_back(unitPartitionBallot(rng, n)); break;
      case BallotKind::kPartial: ballots.emplace_back(partialBallot(rng, n)); break;
    }
  }
  Profile profile(proposal, std::move(ballots));
  Budget previous = randomSubset(rng, proposal);
  return {proposal, profile, BudgetLimit(uniform(rng, 0, max_limit)), previous};
}

/// Cumulative cost table of q copies with arbitrary non-negative marginals,
/// so discounts (falling marginals) and free copies both occur.
inline std::vector<Money> cumulativeTable(Rng& rng, Count q) {
  std::vector<Money> cum;
  Money running = 0;
  for (Count k = 0; k < q; ++k) {
    running += uniform(rng, 0, 4);
    cum.push_back(running);
  }
  return cum;
}

/// Ordered partition over copies: each item's quantity is cut into pieces
/// and the pieces are scattered over up to `components` classes.
inline OrderedPartition quantPartitionBallot(Rng& rng, const Proposal& proposal, int components) {
  OrderedPartition ballot;
  ballot.components.resize(static_cast<std::size_t>(components));
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    Count left = proposal.quantity(i);
    while (left > 0) {
      const Count piece = uniform(rng, 1, static_cast<int>(left));
      auto& component = ballot.components[static_cast<std::size_t>(uniform(rng, 0, components - 1))];
      const auto same = std::find_if(component.begin(), component.end(),
                                     [&](const Share& s) { return s.item == i; });
      if (same != component.end()) {
        same->count += piece;
      } else {
        component.push_back({i, piece});
      }
      left -= piece;
    }
  }
  return ballot;
}

inline Instance quantInstance(Rng& rng, std::size_t max_items, int max_quantity, int max_voters,
                              bool discounts = true) {
  const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(max_items)));
  std::vector<Proposal::QuantItem> items;
  Money total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Count q = uniform(rng, 1, max_quantity);
    std::vector<Money> cum;
    if (discounts) {
      cum = cumulativeTable(rng, q);
    } else {
      const Money unit = uniform(rng, 1, 4);
      for (Count k = 1; k <= q; ++k) cum.push_back(unit * k);
    }
    total += cum.back();
    items.push_back({itemName(i), cum});
  }
  Proposal proposal = Proposal::quantitative(items);
  const int voters = uniform(rng, 1, max_voters);
  std::vector<Ballot> ballots;
  for (int v = 0; v < voters; ++v) ballots.emplace_back(quantPartitionBallot(rng, proposal, uniform(rng, 1, 4)));
  Profile profile(proposal, std::move(ballots));
  Budget previous = randomSubset(rng, proposal);
  return {proposal, profile, BudgetLimit(uniform(rng, 0, static_cast<int>(total))), previous};
}

}  // namespace dembudget::testgen
