#include "dembudget/oracle.hpp"

#include <algorithm>

namespace dembudget {

namespace {

std::uint64_t requireDeskScale(const Proposal& proposal) {
  if (proposal.isUnit() && proposal.size() > kOracleMaxUnitItems) {
    throw OracleRefusal("oracle refuses proposals with more than " +
                        std::to_string(kOracleMaxUnitItems) + " items");
  }
  std::uint64_t combinations = 1;
  for (const auto& item : proposal.items()) {
    const auto radix = static_cast<std::uint64_t>(item.quantity()) + 1;
    if (combinations > kOracleMaxCombinations / radix) {
      throw OracleRefusal("oracle refuses more than " + std::to_string(kOracleMaxCombinations) +
                          " candidate budgets");
    }
    combinations *= radix;
  }
  return combinations;
}

}  // namespace

std::vector<Budget> enumerateFeasible(const Proposal& proposal, BudgetLimit limit) {
  const std::uint64_t combinations = requireDeskScale(proposal);
  std::vector<Budget> feasible;
  Budget current = Budget::none(proposal);
  for (std::uint64_t n = 0; n < combinations; ++n) {
    if (cost(proposal, current) <= limit.value()) feasible.push_back(current);
    for (ItemIndex i = 0; i < proposal.size(); ++i) {
      if (current.count(i) < proposal.quantity(i)) {
        current.add(i, 1);
        break;
      }
      current.set(i, 0);
    }
  }
  return feasible;
}

BudgetsGraph budgetsGraph(const Proposal& proposal, const Profile& profile, BudgetLimit limit) {
  BudgetsGraph bg{enumerateFeasible(proposal, limit), {}};
  const std::size_t n = bg.budgets.size();
  bg.dominance = Digraph(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dominates(proposal, profile, bg.budgets[i], bg.budgets[j])) {
        bg.dominance.addArc(i, j);
      }
    }
  }
  return bg;
}

std::optional<std::size_t> condorcetWinner(const BudgetsGraph& bg) {
  const std::size_t n = bg.budgets.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool beats_all = true;
    for (std::size_t j = 0; j < n && beats_all; ++j) {
      if (i != j && !bg.dominance.hasArc(i, j)) beats_all = false;
    }
    if (beats_all) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> smithBudgets(const BudgetsGraph& bg) {
  const std::size_t n = bg.budgets.size();
  // reach[i][j]: a weak-domination path leads from i to j.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = !bg.dominance.hasArc(j, i);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  std::vector<std::size_t> smith;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::all_of(reach[i].begin(), reach[i].end(), [](bool r) { return r; })) smith.push_back(i);
  }
  return smith;
}

const char* toString(Check check) {
  switch (check) {
    case Check::kPass: return "PASS";
    case Check::kFail: return "FAIL";
    case Check::kVacuous: return "VACUOUS";
  }
  return "?";
}

bool VerificationReport::ok() const {
  return feasible == Check::kPass && exhaustive == Check::kPass &&
         smith_member == Check::kPass && condorcet != Check::kFail;
}

VerificationReport verifyBudget(const Proposal& proposal, const Profile& profile,
                                BudgetLimit limit, const Budget& budget) {
  const BudgetsGraph bg = budgetsGraph(proposal, profile, limit);
  VerificationReport report;
  report.budget = budget;
  report.budget_cost = cost(proposal, budget);
  report.feasible_budgets = bg.budgets.size();
  const bool feasible = report.budget_cost <= limit.value();
  report.feasible = feasible ? Check::kPass : Check::kFail;
  report.exhaustive =
      feasible && isExhaustive(proposal, budget, limit) ? Check::kPass : Check::kFail;

  const auto smith = smithBudgets(bg);
  report.smith_size = smith.size();
  const bool in_smith = std::any_of(smith.begin(), smith.end(),
                                    [&](std::size_t i) { return bg.budgets[i] == budget; });
  report.smith_member = in_smith ? Check::kPass : Check::kFail;

  if (const auto winner = condorcetWinner(bg)) {
    report.condorcet_winner = bg.budgets[*winner];
    report.condorcet = bg.budgets[*winner] == budget ? Check::kPass : Check::kFail;
  }
  return report;
}

VerificationReport verify(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
                          const Budget& previous, const PruningOptions& options) {
  // Refuse before running the algorithm so the error is about the oracle.
  requireDeskScale(proposal);
  return verifyBudget(proposal, profile, limit,
                      computeBudget(proposal, profile, limit, previous, options));
}

}  // namespace dembudget
