#pragma once

// Smith-consistent budgeting: rank the majority graph by repeatedly peeling
// off its Schwartz set, then prune the ranking into a feasible, exhaustive
// budget that stays close to the previous budget.

#include <optional>
#include <string>
#include <vector>

#include "dembudget/majority_graph.hpp"
#include "dembudget/model.hpp"

namespace dembudget {

/// Ordered partition C_1 > ... > C_z of majority-graph vertices. Each
/// component is sorted.
struct RankedPartition {
  std::vector<std::vector<VertexKey>> components;

  std::size_t vertexCount() const;
  friend bool operator==(const RankedPartition&, const RankedPartition&) = default;
};

/// Secondary order among candidates during pruning. Copies that the previous
/// budget funded always come first; the policy orders the rest of each class.
enum class TieBreak {
  kCostAscending,     // cheaper first (price of one copy), then item id
  kDeclarationOrder,  // proposal order
};

std::optional<TieBreak> parseTieBreak(const std::string& name);
const char* toString(TieBreak policy);

struct PruningOptions {
  TieBreak tie_break = TieBreak::kCostAscending;
  /// Unit mode only: for components of at most kExactKnapsackMaxItems items,
  /// pick the maximal subset with the least symmetric-difference cost to the
  /// previous budget instead of the greedy choice.
  bool exact_knapsack = false;
};

inline constexpr std::size_t kExactKnapsackMaxItems = 20;

/// Layers of the strict majority graph: first its Schwartz set, then the
/// Schwartz set of what remains, and so on.
RankedPartition rankGraph(const MajorityGraph& graph);
RankedPartition ranking(const Proposal& proposal, const Profile& profile);
/// Ranking used for budgeting under `limit`: copies that cost more than the
/// limit on their own are left out of the majority graph and ranked last in a
/// class of their own. No feasible budget contains them.
RankedPartition ranking(const Proposal& proposal, const Profile& profile, BudgetLimit limit);

/// Per component, adds copies in tie-break order while the accumulated budget
/// stays within the limit. A vertex may be funded by a prefix of its copies.
Budget pruning(const Proposal& proposal, const RankedPartition& ranked, BudgetLimit limit,
               const Budget& previous, const PruningOptions& options = {});

/// Unit-mode SBA.
Budget sba(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
           const Budget& previous, const PruningOptions& options = {});
/// Quantitative SBA over split vertices.
Budget esba(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
            const Budget& previous, const PruningOptions& options = {});
/// sba or esba depending on the proposal mode.
Budget computeBudget(const Proposal& proposal, const Profile& profile, BudgetLimit limit,
                     const Budget& previous, const PruningOptions& options = {});

/// Candidate order inside one component: copy ranges split at the previous
/// budget's count, sorted by (not previously funded, policy key, first copy).
std::vector<VertexKey> pruningOrder(const Proposal& proposal, const std::vector<VertexKey>& component,
                                    const Budget& previous, TieBreak policy);

}  // namespace dembudget
