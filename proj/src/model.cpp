#include "dembudget/model.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace dembudget {

namespace {

constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

void requireSameSize(const Proposal& proposal, const Budget& budget) {
  if (budget.size() != proposal.size()) {
    std::ostringstream os;
    os << "budget covers " << budget.size() << " items but the proposal has "
       << proposal.size();
    throw ValidationError(os.str());
  }
}

// max(empty) = min(empty) = infinity
bool maxBelowMin(const std::vector<std::size_t>& lhs, const std::vector<std::size_t>& rhs) {
  const std::size_t max_lhs = lhs.empty() ? kInfinity : *std::max_element(lhs.begin(), lhs.end());
  const std::size_t min_rhs = rhs.empty() ? kInfinity : *std::min_element(rhs.begin(), rhs.end());
  return max_lhs < min_rhs;
}

void checkMoney(Money value, const std::string& what) {
  if (value < 0 || value > kMaxMoney) {
    throw ValidationError(what + " must be within [0, 2^50], got " + std::to_string(value));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CostFunction

CostFunction CostFunction::fromTable(std::span<const Money> cumulative) {
  CostFunction f;
  Money previous = 0;
  Count k = 0;
  for (Money value : cumulative) {
    ++k;
    checkMoney(value, "cost of " + std::to_string(k) + " copies");
    const Money marginal = value - previous;
    if (marginal < 0) {
      throw ValidationError("cost of " + std::to_string(k) + " copies is below the cost of " +
                            std::to_string(k - 1));
    }
    if (!f.runs_.empty() && f.runs_.back().marginal == marginal) {
      f.runs_.back().end = k;
      f.runs_.back().cum_at_end = value;
    } else {
      f.runs_.push_back({k, value, marginal});
    }
    previous = value;
  }
  return f;
}

CostFunction CostFunction::linear(Count quantity, Money unit_cost) {
  if (quantity < 1) throw ValidationError("quantity must be positive");
  checkMoney(unit_cost, "unit cost");
  if (unit_cost != 0 && quantity > kMaxMoney / unit_cost) {
    throw ValidationError("total cost of " + std::to_string(quantity) + " copies overflows");
  }
  CostFunction f;
  f.runs_.push_back({quantity, unit_cost * quantity, unit_cost});
  return f;
}

Money CostFunction::operator()(Count k) const {
  if (k == 0) return 0;
  if (k < 0 || k > quantity()) {
    throw ContractViolation("copy count " + std::to_string(k) + " outside [0, " +
                            std::to_string(quantity()) + "]");
  }
  const auto it = std::lower_bound(runs_.begin(), runs_.end(), k,
                                   [](const Run& run, Count value) { return run.end < value; });
  return it->cum_at_end - it->marginal * (it->end - k);
}

Count CostFunction::affordableCopies(Count have, Count max_add, Money room) const {
  if (max_add <= 0) return 0;
  const Money threshold = (*this)(have) + room;
  const Count hi = have + max_add;
  Count run_start = 0;
  for (const Run& run : runs_) {
    const Count lo = std::max(run_start + 1, have + 1);
    const Count top = std::min(run.end, hi);
    run_start = run.end;
    if (lo > top) continue;
    auto at = [&](Count p) { return run.cum_at_end - run.marginal * (run.end - p); };
    if (at(lo) > threshold) return lo - have - 1;
    // A run with zero marginal never rises past its first value.
    if (run.marginal > 0 && at(top) > threshold) {
      Count ok = lo, bad = top;
      while (bad - ok > 1) {
        const Count mid = ok + (bad - ok) / 2;
        (at(mid) > threshold ? bad : ok) = mid;
      }
      return bad - have - 1;
    }
    if (run.end >= hi) break;
  }
  return max_add;
}

std::vector<Money> CostFunction::table() const {
  std::vector<Money> out;
  out.reserve(static_cast<std::size_t>(quantity()));
  for (Count k = 1; k <= quantity(); ++k) out.push_back((*this)(k));
  return out;
}

// ---------------------------------------------------------------------------
// Proposal

Proposal::Proposal(Mode mode, std::vector<Item> items, bool allow_empty)
    : mode_(mode), items_(std::move(items)) {
  if (items_.empty() && !allow_empty) throw ValidationError("proposal has no items");
  for (ItemIndex i = 0; i < items_.size(); ++i) {
    const Item& item = items_[i];
    if (item.id.empty()) throw ValidationError("item id must be non-empty");
    if (item.quantity() < 1) throw ValidationError("item '" + item.id + "' has no copies");
    if (mode_ == Mode::kUnit && item.quantity() != 1) {
      throw ValidationError("unit-mode item '" + item.id + "' must have quantity 1");
    }
    if (!index_.emplace(item.id, i).second) {
      throw ValidationError("duplicate item id '" + item.id + "'");
    }
  }
}

Proposal Proposal::unit(const std::vector<UnitItem>& items, bool allow_empty) {
  std::vector<Item> converted;
  converted.reserve(items.size());
  for (const auto& item : items) {
    const Money single[] = {item.cost};
    converted.push_back({item.id, CostFunction::fromTable(single)});
  }
  return Proposal(Mode::kUnit, std::move(converted), allow_empty);
}

Proposal Proposal::quantitative(const std::vector<QuantItem>& items, bool allow_empty) {
  std::vector<Item> converted;
  converted.reserve(items.size());
  for (const auto& item : items) {
    converted.push_back({item.id, CostFunction::fromTable(item.cum_cost)});
  }
  return Proposal(Mode::kQuantitative, std::move(converted), allow_empty);
}

Proposal Proposal::quantitative(std::vector<Item> items, bool allow_empty) {
  return Proposal(Mode::kQuantitative, std::move(items), allow_empty);
}

std::optional<ItemIndex> Proposal::find(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ItemIndex Proposal::indexOf(const std::string& id) const {
  if (auto i = find(id)) return *i;
  throw ValidationError("unknown item id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Budget

Budget Budget::none(const Proposal& proposal) {
  return Budget(std::vector<Count>(proposal.size(), 0));
}

Budget Budget::all(const Proposal& proposal) {
  std::vector<Count> counts;
  counts.reserve(proposal.size());
  for (const auto& item : proposal.items()) counts.push_back(item.quantity());
  return Budget(std::move(counts));
}

Budget Budget::ofItems(const Proposal& proposal, const std::vector<std::string>& ids) {
  Budget budget = none(proposal);
  for (const auto& id : ids) budget.set(proposal.indexOf(id), 1);
  return budget;
}

Budget Budget::ofCounts(const Proposal& proposal, const std::map<std::string, Count>& counts) {
  Budget budget = none(proposal);
  for (const auto& [id, k] : counts) {
    const ItemIndex i = proposal.indexOf(id);
    if (k < 0 || k > proposal.quantity(i)) {
      throw ValidationError("selected quantity " + std::to_string(k) + " of '" + id +
                            "' outside [0, " + std::to_string(proposal.quantity(i)) + "]");
    }
    budget.set(i, k);
  }
  return budget;
}

Budget Budget::ofCounts(const Proposal& proposal, std::vector<Count> counts) {
  if (counts.size() != proposal.size()) throw ValidationError("budget size mismatch");
  for (ItemIndex i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0 || counts[i] > proposal.quantity(i)) {
      throw ValidationError("selected quantity of '" + proposal.item(i).id + "' out of range");
    }
  }
  return Budget(std::move(counts));
}

bool Budget::isEmpty() const {
  return std::all_of(counts_.begin(), counts_.end(), [](Count k) { return k == 0; });
}

std::vector<std::string> Budget::selectedIds(const Proposal& proposal) const {
  std::vector<std::string> ids;
  for (ItemIndex i = 0; i < counts_.size(); ++i) {
    if (counts_[i] > 0) ids.push_back(proposal.item(i).id);
  }
  return ids;
}

BudgetLimit::BudgetLimit(Money value) : value_(value) {
  if (value < 0) throw ValidationError("budget limit must be non-negative");
}

// ---------------------------------------------------------------------------
// Ballots

PartialOrder::PartialOrder(std::size_t item_count,
                           std::vector<std::pair<ItemIndex, ItemIndex>> edges)
    : item_count_(item_count),
      edges_(std::move(edges)),
      closure_(item_count * item_count, 0) {
  for (const auto& [a, b] : edges_) {
    if (a >= item_count_ || b >= item_count_) throw ValidationError("edge endpoint out of range");
    if (a == b) throw ValidationError("partial order has a self-loop");
    closure_[a * item_count_ + b] = 1;
  }
  const std::size_t n = item_count_;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!closure_[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (closure_[k * n + j]) closure_[i * n + j] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (closure_[i * n + i]) throw ValidationError("partial order contains a cycle");
  }
}

BallotKind kindOf(const Ballot& ballot) {
  return static_cast<BallotKind>(ballot.index());
}

const char* toString(BallotKind kind) {
  switch (kind) {
    case BallotKind::kLinear: return "linear";
    case BallotKind::kPartition: return "partition";
    case BallotKind::kPartial: return "partial";
  }
  return "?";
}

LinearOrder makeLinearOrder(const Proposal& proposal, const std::vector<std::string>& ids) {
  LinearOrder order;
  order.items.reserve(ids.size());
  for (const auto& id : ids) order.items.push_back(proposal.indexOf(id));
  validateBallot(proposal, order);
  return order;
}

OrderedPartition makeOrderedPartition(const Proposal& proposal,
                                      const std::vector<std::vector<std::string>>& components) {
  OrderedPartition partition;
  for (const auto& component : components) {
    auto& out = partition.components.emplace_back();
    for (const auto& id : component) out.push_back({proposal.indexOf(id), 1});
  }
  validateBallot(proposal, partition);
  return partition;
}

OrderedPartition makeOrderedPartition(
    const Proposal& proposal,
    const std::vector<std::vector<std::pair<std::string, Count>>>& components) {
  OrderedPartition partition;
  for (const auto& component : components) {
    std::map<ItemIndex, Count> merged;
    for (const auto& [id, k] : component) {
      if (k < 1) throw ValidationError("share of '" + id + "' must be positive");
      merged[proposal.indexOf(id)] += k;
    }
    auto& out = partition.components.emplace_back();
    for (const auto& [i, k] : merged) out.push_back({i, k});
  }
  validateBallot(proposal, partition);
  return partition;
}

PartialOrder makePartialOrder(const Proposal& proposal,
                              const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::pair<ItemIndex, ItemIndex>> indexed;
  indexed.reserve(edges.size());
  for (const auto& [a, b] : edges) indexed.emplace_back(proposal.indexOf(a), proposal.indexOf(b));
  PartialOrder order(proposal.size(), std::move(indexed));
  validateBallot(proposal, order);
  return order;
}

namespace {

struct BallotValidator {
  const Proposal& proposal;

  void operator()(const LinearOrder& order) const {
    if (!proposal.isUnit()) throw ValidationError("linear ballots require a unit-mode proposal");
    if (order.items.size() != proposal.size()) {
      throw ValidationError("linear ballot ranks " + std::to_string(order.items.size()) +
                            " items but the proposal has " + std::to_string(proposal.size()));
    }
    std::vector<bool> seen(proposal.size(), false);
    for (ItemIndex i : order.items) {
      if (i >= proposal.size()) throw ValidationError("ballot item out of range");
      if (seen[i]) throw ValidationError("item '" + proposal.item(i).id + "' ranked twice");
      seen[i] = true;
    }
  }

  void operator()(const OrderedPartition& partition) const {
    std::vector<Count> total(proposal.size(), 0);
    for (const auto& component : partition.components) {
      std::set<ItemIndex> in_component;
      for (const auto& share : component) {
        if (share.item >= proposal.size()) throw ValidationError("ballot item out of range");
        if (share.count < 1) throw ValidationError("ballot share must be positive");
        if (!in_component.insert(share.item).second) {
          throw ValidationError("item '" + proposal.item(share.item).id +
                                "' listed twice in one component");
        }
        total[share.item] += share.count;
      }
    }
    for (ItemIndex i = 0; i < proposal.size(); ++i) {
      if (total[i] != proposal.quantity(i)) {
        throw ValidationError("ballot ranks " + std::to_string(total[i]) + " copies of '" +
                              proposal.item(i).id + "' but the proposal has " +
                              std::to_string(proposal.quantity(i)));
      }
    }
  }

  void operator()(const PartialOrder& order) const {
    if (!proposal.isUnit()) throw ValidationError("partial-order ballots require a unit-mode proposal");
    if (order.itemCount() != proposal.size()) throw ValidationError("partial order size mismatch");
  }
};

}  // namespace

void validateBallot(const Proposal& proposal, const Ballot& ballot) {
  std::visit(BallotValidator{proposal}, ballot);
}

Profile::Profile(const Proposal& proposal, std::vector<Ballot> ballots)
    : ballots_(std::move(ballots)) {
  for (std::size_t i = 0; i < ballots_.size(); ++i) {
    validateBallot(proposal, ballots_[i]);
    if (kindOf(ballots_[i]) != kindOf(ballots_.front())) {
      throw ValidationError(std::string("profile mixes ") + toString(kindOf(ballots_.front())) +
                            " and " + toString(kindOf(ballots_[i])) + " ballots");
    }
  }
}

// ---------------------------------------------------------------------------
// Budget-level operations

Money cost(const Proposal& proposal, const Budget& budget) {
  requireSameSize(proposal, budget);
  Money total = 0;
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    if (budget.count(i) < 0 || budget.count(i) > proposal.quantity(i)) {
      throw ValidationError("selected quantity of '" + proposal.item(i).id + "' out of range");
    }
    total += proposal.item(i).cost(budget.count(i));
  }
  return total;
}

bool isFeasible(const Proposal& proposal, const Budget& budget, BudgetLimit limit) {
  return cost(proposal, budget) <= limit.value();
}

bool isExhaustive(const Proposal& proposal, const Budget& budget, BudgetLimit limit) {
  const Money total = cost(proposal, budget);
  if (total > limit.value()) throw ContractViolation("exhaustiveness of an infeasible budget");
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    const Count k = budget.count(i);
    if (k < proposal.quantity(i) && total + proposal.item(i).cost.marginal(k) <= limit.value()) {
      return false;
    }
  }
  return true;
}

Money symdiffCost(const Proposal& proposal, const Budget& a, const Budget& b) {
  requireSameSize(proposal, a);
  requireSameSize(proposal, b);
  Money total = 0;
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    const auto& f = proposal.item(i).cost;
    const Money hi = f(std::max(a.count(i), b.count(i)));
    const Money lo = f(std::min(a.count(i), b.count(i)));
    total += hi > lo ? hi - lo : lo - hi;
  }
  return total;
}

std::vector<std::size_t> positions(const LinearOrder& vote, const Budget& budget) {
  std::vector<std::size_t> out;
  for (std::size_t rank = 0; rank < vote.items.size(); ++rank) {
    if (budget.contains(vote.items[rank])) out.push_back(rank + 1);
  }
  return out;
}

bool prefersLinear(const LinearOrder& vote, const Budget& b, const Budget& b2) {
  std::vector<std::size_t> only_b, only_b2;
  for (std::size_t rank = 0; rank < vote.items.size(); ++rank) {
    const ItemIndex i = vote.items[rank];
    if (b.contains(i) && !b2.contains(i)) only_b.push_back(rank + 1);
    if (b2.contains(i) && !b.contains(i)) only_b2.push_back(rank + 1);
  }
  return maxBelowMin(only_b, only_b2);
}

bool prefersPartition(const OrderedPartition& vote, const Budget& b, const Budget& b2) {
  std::vector<std::size_t> only_b, only_b2;
  for (std::size_t c = 0; c < vote.components.size(); ++c) {
    for (const auto& share : vote.components[c]) {
      if (b.contains(share.item) && !b2.contains(share.item)) only_b.push_back(c + 1);
      if (b2.contains(share.item) && !b.contains(share.item)) only_b2.push_back(c + 1);
    }
  }
  return maxBelowMin(only_b, only_b2);
}

bool prefersPartial(const PartialOrder& vote, const Budget& b, const Budget& b2) {
  std::vector<ItemIndex> only_b, only_b2;
  for (ItemIndex i = 0; i < vote.itemCount(); ++i) {
    if (b.contains(i) && !b2.contains(i)) only_b.push_back(i);
    if (b2.contains(i) && !b.contains(i)) only_b2.push_back(i);
  }
  // Identical budgets: neither is preferred, as for the other ballot kinds.
  if (only_b.empty() && only_b2.empty()) return false;
  for (ItemIndex worse : only_b2) {
    const bool beaten = std::any_of(only_b.begin(), only_b.end(),
                                    [&](ItemIndex better) { return vote.precedes(better, worse); });
    if (!beaten) return false;
  }
  for (ItemIndex kept : only_b) {
    for (ItemIndex other : only_b2) {
      if (vote.precedes(other, kept)) return false;
    }
  }
  return true;
}

OrderedPartition remainder(const OrderedPartition& vote, const Budget& budget) {
  std::vector<Count> left = budget.counts();
  OrderedPartition out;
  out.components.reserve(vote.components.size());
  for (const auto& component : vote.components) {
    auto& rest = out.components.emplace_back();
    for (const auto& share : component) {
      if (share.item >= left.size()) throw ValidationError("ballot item outside the budget");
      const Count taken = std::min(share.count, left[share.item]);
      left[share.item] -= taken;
      if (share.count > taken) rest.push_back({share.item, share.count - taken});
    }
  }
  for (Count k : left) {
    if (k > 0) throw ValidationError("budget selects more copies than the ballot ranks");
  }
  return out;
}

std::vector<std::size_t> rankedDiffIndices(const OrderedPartition& vote, const Budget& b,
                                           const Budget& b2) {
  const OrderedPartition rem_b = remainder(vote, b);
  const OrderedPartition rem_b2 = remainder(vote, b2);
  std::vector<std::size_t> indices;
  for (std::size_t c = 0; c < vote.components.size(); ++c) {
    std::map<ItemIndex, Count> subtrahend;
    for (const auto& share : rem_b.components[c]) subtrahend[share.item] += share.count;
    const bool nonempty =
        std::any_of(rem_b2.components[c].begin(), rem_b2.components[c].end(),
                    [&](const Share& share) { return share.count > subtrahend[share.item]; });
    if (nonempty) indices.push_back(c + 1);
  }
  return indices;
}

bool prefersQuant(const OrderedPartition& vote, const Budget& b, const Budget& b2) {
  return maxBelowMin(rankedDiffIndices(vote, b, b2), rankedDiffIndices(vote, b2, b));
}

bool prefers(const Proposal& proposal, const Ballot& vote, const Budget& b, const Budget& b2) {
  requireSameSize(proposal, b);
  requireSameSize(proposal, b2);
  if (const auto* linear = std::get_if<LinearOrder>(&vote)) return prefersLinear(*linear, b, b2);
  if (const auto* partial = std::get_if<PartialOrder>(&vote)) return prefersPartial(*partial, b, b2);
  const auto& partition = std::get<OrderedPartition>(vote);
  return proposal.isUnit() ? prefersPartition(partition, b, b2) : prefersQuant(partition, b, b2);
}

std::size_t countPreferring(const Proposal& proposal, const Profile& profile, const Budget& b,
                            const Budget& b2) {
  std::size_t count = 0;
  for (const auto& ballot : profile.ballots()) {
    if (prefers(proposal, ballot, b, b2)) ++count;
  }
  return count;
}

bool dominates(const Proposal& proposal, const Profile& profile, const Budget& b,
               const Budget& b2) {
  return 2 * countPreferring(proposal, profile, b, b2) > profile.size();
}

bool weaklyDominates(const Proposal& proposal, const Profile& profile, const Budget& b,
                     const Budget& b2) {
  return !dominates(proposal, profile, b2, b);
}

}  // namespace dembudget
