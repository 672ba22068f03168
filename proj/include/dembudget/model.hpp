#pragma once

// Domain types for budget proposals, ballots and budgets, together with the
// voter-level preference predicates and profile-level dominance relation.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dembudget {

using Money = std::int64_t;
using Count = std::int64_t;
using ItemIndex = std::size_t;

// Upper bound for any single cumulative cost; keeps all sums inside int64.
inline constexpr Money kMaxMoney = Money{1} << 50;

/// Raised when input data violates a schema or referential constraint.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a caller breaks an operation's precondition, or when an
/// algorithm's postcondition check fails.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Cost of k copies of one item, for k in [0, quantity].
///
/// Stored as runs of equal marginal cost so that a linear price over 10^9
/// copies stays O(1) in size. Volume discounts may lower a marginal cost,
/// but never below zero: the cumulative table is non-decreasing.
class CostFunction {
 public:
  CostFunction() = default;

  /// `cumulative[k - 1]` is the cost of k copies.
  static CostFunction fromTable(std::span<const Money> cumulative);
  static CostFunction linear(Count quantity, Money unit_cost);

  Count quantity() const { return runs_.empty() ? 0 : runs_.back().end; }

  /// Cost of k copies; k == 0 costs nothing.
  Money operator()(Count k) const;
  Money marginal(Count k) const { return (*this)(k + 1) - (*this)(k); }

  /// Number of further copies a copy-by-copy greedy adds when `have` copies
  /// are already bought, at most `max_add` copies may be added, and `room`
  /// money is left: the largest m with F(have + t) - F(have) <= room for all
  /// t in [1, m].
  Count affordableCopies(Count have, Count max_add, Money room) const;

  std::vector<Money> table() const;

  friend bool operator==(const CostFunction&, const CostFunction&) = default;

 private:
  struct Run {
    Count end;         // copies (previous end, end] share one marginal cost
    Money cum_at_end;  // F(end)
    Money marginal;
    friend bool operator==(const Run&, const Run&) = default;
  };
  std::vector<Run> runs_;
};

struct Item {
  std::string id;
  CostFunction cost;

  Count quantity() const { return cost.quantity(); }
  friend bool operator==(const Item&, const Item&) = default;
};

enum class Mode { kUnit, kQuantitative };

/// The universe of budget items. Unit-mode items have quantity 1.
class Proposal {
 public:
  struct UnitItem {
    std::string id;
    Money cost;
  };
  struct QuantItem {
    std::string id;
    std::vector<Money> cum_cost;  // cum_cost[k - 1] = cost of k copies
  };

  /// Empty unit-mode proposal.
  Proposal() = default;

  static Proposal unit(const std::vector<UnitItem>& items, bool allow_empty = false);
  static Proposal quantitative(const std::vector<QuantItem>& items, bool allow_empty = false);
  static Proposal quantitative(std::vector<Item> items, bool allow_empty = false);

  Mode mode() const { return mode_; }
  bool isUnit() const { return mode_ == Mode::kUnit; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Item& item(ItemIndex i) const { return items_.at(i); }
  const std::vector<Item>& items() const { return items_; }
  Count quantity(ItemIndex i) const { return items_.at(i).quantity(); }

  std::optional<ItemIndex> find(const std::string& id) const;
  /// Throws ValidationError for an unknown id.
  ItemIndex indexOf(const std::string& id) const;

  friend bool operator==(const Proposal& a, const Proposal& b) {
    return a.mode_ == b.mode_ && a.items_ == b.items_;
  }

 private:
  Proposal(Mode mode, std::vector<Item> items, bool allow_empty);

  Mode mode_ = Mode::kUnit;
  std::vector<Item> items_;
  std::map<std::string, ItemIndex> index_;
};

/// A selection of copies from a proposal: counts[i] copies of item i.
class Budget {
 public:
  Budget() = default;

  static Budget none(const Proposal& proposal);
  static Budget all(const Proposal& proposal);
  static Budget ofItems(const Proposal& proposal, const std::vector<std::string>& ids);
  static Budget ofCounts(const Proposal& proposal, const std::map<std::string, Count>& counts);
  static Budget ofCounts(const Proposal& proposal, std::vector<Count> counts);

  std::size_t size() const { return counts_.size(); }
  Count count(ItemIndex i) const { return counts_.at(i); }
  bool contains(ItemIndex i) const { return counts_.at(i) > 0; }
  void set(ItemIndex i, Count k) { counts_.at(i) = k; }
  void add(ItemIndex i, Count k) { counts_.at(i) += k; }
  const std::vector<Count>& counts() const { return counts_; }
  bool isEmpty() const;

  /// Ids of items with at least one selected copy, in proposal order.
  std::vector<std::string> selectedIds(const Proposal& proposal) const;

  friend auto operator<=>(const Budget&, const Budget&) = default;
  friend bool operator==(const Budget&, const Budget&) = default;

 private:
  explicit Budget(std::vector<Count> counts) : counts_(std::move(counts)) {}
  std::vector<Count> counts_;
};

/// Non-negative budget limit.
class BudgetLimit {
 public:
  explicit BudgetLimit(Money value);
  Money value() const { return value_; }

 private:
  Money value_;
};

// ---------------------------------------------------------------------------
// Ballots

/// A strict ranking of every item, best first.
struct LinearOrder {
  std::vector<ItemIndex> items;
};

struct Share {
  ItemIndex item;
  Count count;
  friend bool operator==(const Share&, const Share&) = default;
};

/// A weak ranking: components best first, each a multiset of copies. In unit
/// mode every share has count 1. Empty components are permitted (remainders
/// produce them).
struct OrderedPartition {
  std::vector<std::vector<Share>> components;
  friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;
};

/// A strict partial order over items, given by precedence edges (better
/// item first). The transitive closure is computed once at construction.
class PartialOrder {
 public:
  PartialOrder(std::size_t item_count, std::vector<std::pair<ItemIndex, ItemIndex>> edges);

  std::size_t itemCount() const { return item_count_; }
  const std::vector<std::pair<ItemIndex, ItemIndex>>& edges() const { return edges_; }
  /// True iff `a` comes before `b` in the transitive closure.
  bool precedes(ItemIndex a, ItemIndex b) const { return closure_[a * item_count_ + b] != 0; }

 private:
  std::size_t item_count_;
  std::vector<std::pair<ItemIndex, ItemIndex>> edges_;
  std::vector<std::uint8_t> closure_;
};

using Ballot = std::variant<LinearOrder, OrderedPartition, PartialOrder>;

enum class BallotKind { kLinear, kPartition, kPartial };
BallotKind kindOf(const Ballot& ballot);
const char* toString(BallotKind kind);

LinearOrder makeLinearOrder(const Proposal& proposal, const std::vector<std::string>& ids);
/// Unit mode: each component is a set of item ids.
OrderedPartition makeOrderedPartition(const Proposal& proposal,
                                      const std::vector<std::vector<std::string>>& components);
/// Either mode: each component is a list of (id, copies) pairs. Per item the
/// copies must add up to the item's quantity.
OrderedPartition makeOrderedPartition(
    const Proposal& proposal,
    const std::vector<std::vector<std::pair<std::string, Count>>>& components);
PartialOrder makePartialOrder(const Proposal& proposal,
                              const std::vector<std::pair<std::string, std::string>>& edges);

/// Checks a ballot against a proposal; throws ValidationError on mismatch.
void validateBallot(const Proposal& proposal, const Ballot& ballot);

/// An ordered list of ballots of one kind over one proposal.
class Profile {
 public:
  Profile() = default;
  Profile(const Proposal& proposal, std::vector<Ballot> ballots);

  std::size_t size() const { return ballots_.size(); }
  bool empty() const { return ballots_.empty(); }
  const std::vector<Ballot>& ballots() const { return ballots_; }
  const Ballot& operator[](std::size_t i) const { return ballots_.at(i); }

 private:
  std::vector<Ballot> ballots_;
};

// ---------------------------------------------------------------------------
// Budget-level operations

Money cost(const Proposal& proposal, const Budget& budget);
bool isFeasible(const Proposal& proposal, const Budget& budget, BudgetLimit limit);
/// Throws ContractViolation if the budget is not feasible.
bool isExhaustive(const Proposal& proposal, const Budget& budget, BudgetLimit limit);
/// Cost of the symmetric difference; per item |F(max(k, k')) - F(min(k, k'))|.
Money symdiffCost(const Proposal& proposal, const Budget& a, const Budget& b);

/// 1-based ranks of the budgeted items in the ballot.
std::vector<std::size_t> positions(const LinearOrder& vote, const Budget& budget);

bool prefersLinear(const LinearOrder& vote, const Budget& b, const Budget& b2);
bool prefersPartition(const OrderedPartition& vote, const Budget& b, const Budget& b2);
bool prefersPartial(const PartialOrder& vote, const Budget& b, const Budget& b2);

/// Component-wise unbudgeted leftover of `budget` within the ballot; the
/// budget consumes copies from the best component downwards.
OrderedPartition remainder(const OrderedPartition& vote, const Budget& budget);
/// 1-based indices of components in which `b` budgets copies that `b2` does not.
std::vector<std::size_t> rankedDiffIndices(const OrderedPartition& vote, const Budget& b,
                                           const Budget& b2);
bool prefersQuant(const OrderedPartition& vote, const Budget& b, const Budget& b2);

/// Dispatches on the ballot kind and the proposal mode.
bool prefers(const Proposal& proposal, const Ballot& vote, const Budget& b, const Budget& b2);

std::size_t countPreferring(const Proposal& proposal, const Profile& profile, const Budget& b,
                            const Budget& b2);
/// Strictly more than half of the ballots prefer `b` over `b2`.
bool dominates(const Proposal& proposal, const Profile& profile, const Budget& b,
               const Budget& b2);
bool weaklyDominates(const Proposal& proposal, const Profile& profile, const Budget& b,
                     const Budget& b2);

}  // namespace dembudget
