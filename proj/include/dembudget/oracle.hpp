#pragma once

// Exponential brute-force reference: enumerate every feasible budget, build
// the dominance graph over them and read off Condorcet winners and the Smith
// set. Used to check the polynomial algorithm on desk-scale instances.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dembudget/majority_graph.hpp"
#include "dembudget/model.hpp"
#include "dembudget/sba.hpp"

namespace dembudget {

/// Raised when an instance exceeds the oracle's size guards.
class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleMaxUnitItems = 20;
inline constexpr std::uint64_t kOracleMaxCombinations = 1'000'000;

/// Every budget with cost <= limit, in mixed-radix counting order (first
/// item varies fastest).
std::vector<Budget> enumerateFeasible(const Proposal& proposal, BudgetLimit limit);

struct BudgetsGraph {
  std::vector<Budget> budgets;
  Digraph dominance;  // arc (i, j) iff budgets[i] dominates budgets[j]
};

BudgetsGraph budgetsGraph(const Proposal& proposal, const Profile& profile, BudgetLimit limit);

/// Index of the budget dominating every other one, if any.
std::optional<std::size_t> condorcetWinner(const BudgetsGraph& bg);

/// Budgets with a weak-domination path to every feasible budget, i.e. the
/// minimal set whose members each dominate every non-member. Sorted indices.
std::vector<std::size_t> smithBudgets(const BudgetsGraph& bg);

enum class Check { kPass, kFail, kVacuous };
const char* toString(Check check);

struct VerificationReport {
  Budget budget;
  Money budget_cost = 0;
  std::size_t feasible_budgets = 0;
  std::size_t smith_size = 0;
  std::optional<Budget> condorcet_winner;
  Check feasible = Check::kFail;
  Check exhaustive = Check::kFail;
  Check smith_member = Check::kFail;
  Check condorcet = Check::kVacuous;

  bool ok() const;
};

/// Checks an arbitrary budget against the brute-force reference.
VerificationReport verifyBudget(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
                                const Budget& budget);
/// Runs sba/esba and checks its output.
VerificationReport verify(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
                          const Budget& previous, const PruningOptions& options = {});

}  // namespace dembudget
