#include "dembudget/majority_graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

namespace dembudget {

void Digraph::addArc(std::size_t from, std::size_t to) {
  if (from == to) throw ContractViolation("self-arcs are not allowed");
  adjacency_[from * n_ + to] = 1;
}

std::size_t Digraph::arcCount() const {
  return static_cast<std::size_t>(std::count(adjacency_.begin(), adjacency_.end(), 1));
}

std::vector<std::pair<std::size_t, std::size_t>> Digraph::arcs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < n_; ++u) {
    for (std::size_t w = 0; w < n_; ++w) {
      if (hasArc(u, w)) out.emplace_back(u, w);
    }
  }
  return out;
}

Digraph Digraph::induced(const std::vector<std::size_t>& keep) const {
  Digraph sub(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if (i != j && hasArc(keep[i], keep[j])) sub.addArc(i, j);
    }
  }
  return sub;
}

// ---------------------------------------------------------------------------
// Split points

std::vector<Count> ballotSplitPoints(const OrderedPartition& vote, ItemIndex item) {
  std::vector<Count> points;
  Count running = 0;
  for (const auto& component : vote.components) {
    for (const auto& share : component) {
      if (share.item == item) {
        running += share.count;
        points.push_back(running);
      }
    }
  }
  return points;
}

SplitPoints splitPoints(const Proposal& proposal, const Profile& profile) {
  SplitPoints points(proposal.size());
  for (ItemIndex i = 0; i < proposal.size(); ++i) points[i].push_back(proposal.quantity(i));
  for (const auto& ballot : profile.ballots()) {
    const auto* partition = std::get_if<OrderedPartition>(&ballot);
    if (partition == nullptr) {
      throw ValidationError("quantitative proposals need ordered-partition ballots");
    }
    for (ItemIndex i = 0; i < proposal.size(); ++i) {
      const auto own = ballotSplitPoints(*partition, i);
      if (own.empty() || own.back() != proposal.quantity(i)) {
        throw ValidationError("ballot quantities of '" + proposal.item(i).id +
                              "' do not add up to its quantity");
      }
      points[i].insert(points[i].end(), own.begin(), own.end());
    }
  }
  for (auto& p : points) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  return points;
}

std::vector<VertexKey> majorityVertices(const Proposal& proposal, const Profile& profile) {
  std::vector<VertexKey> vertices;
  if (proposal.isUnit()) {
    for (ItemIndex i = 0; i < proposal.size(); ++i) vertices.push_back({i, 1, 1});
    return vertices;
  }
  const SplitPoints points = splitPoints(proposal, profile);
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    Count start = 1;
    for (Count boundary : points[i]) {
      vertices.push_back({i, start, boundary});
      start = boundary + 1;
    }
  }
  return vertices;
}

// ---------------------------------------------------------------------------
// Majority graph

namespace {

constexpr std::size_t kUnranked = static_cast<std::size_t>(-1);

// Tier (smaller is better) of each vertex in a ballot that is a weak order.
std::vector<std::size_t> tiers(const Ballot& ballot, const std::vector<VertexKey>& vertices,
                               std::size_t item_count) {
  std::vector<std::size_t> tier(vertices.size(), kUnranked);
  if (const auto* linear = std::get_if<LinearOrder>(&ballot)) {
    std::vector<std::size_t> rank(item_count);
    for (std::size_t r = 0; r < linear->items.size(); ++r) rank[linear->items[r]] = r;
    for (std::size_t v = 0; v < vertices.size(); ++v) tier[v] = rank[vertices[v].item];
    return tier;
  }
  const auto& partition = std::get<OrderedPartition>(ballot);
  // Per item: (cumulative end, component) for each share, in ballot order.
  std::vector<std::vector<std::pair<Count, std::size_t>>> ends(item_count);
  std::vector<Count> running(item_count, 0);
  for (std::size_t c = 0; c < partition.components.size(); ++c) {
    for (const auto& share : partition.components[c]) {
      running[share.item] += share.count;
      ends[share.item].emplace_back(running[share.item], c);
    }
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const VertexKey& key = vertices[v];
    const auto& list = ends[key.item];
    const auto it = std::lower_bound(
        list.begin(), list.end(), key.first,
        [](const std::pair<Count, std::size_t>& e, Count value) { return e.first < value; });
    if (it == list.end() || it->first < key.last) {
      throw ContractViolation("a ballot splits the copies of one majority-graph vertex");
    }
    tier[v] = it->second;
  }
  return tier;
}

}  // namespace

MajorityGraph buildMajorityGraph(const Proposal& proposal, const Profile& profile) {
  return buildMajorityGraph(proposal, profile, majorityVertices(proposal, profile));
}

MajorityGraph buildMajorityGraph(const Proposal& proposal, const Profile& profile,
                                 std::vector<VertexKey> vertices) {
  MajorityGraph result;
  result.vertices = std::move(vertices);
  const std::size_t n = result.vertices.size();
  std::vector<std::size_t> above(n * n, 0);
  for (const auto& ballot : profile.ballots()) {
    if (const auto* partial = std::get_if<PartialOrder>(&ballot)) {
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t w = 0; w < n; ++w) {
          if (partial->precedes(result.vertices[u].item, result.vertices[w].item)) {
            ++above[u * n + w];
          }
        }
      }
      continue;
    }
    const auto tier = tiers(ballot, result.vertices, proposal.size());
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t w = 0; w < n; ++w) {
        if (tier[u] < tier[w]) ++above[u * n + w];
      }
    }
  }
  result.graph = Digraph(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t w = 0; w < n; ++w) {
      if (2 * above[u * n + w] > profile.size()) result.graph.addArc(u, w);
    }
  }
  return result;
}

Digraph weakMajority(const Digraph& strict) {
  Digraph weak = strict;
  for (std::size_t u = 0; u < strict.vertexCount(); ++u) {
    for (std::size_t w = u + 1; w < strict.vertexCount(); ++w) {
      if (!strict.hasArc(u, w) && !strict.hasArc(w, u)) {
        weak.addArc(u, w);
        weak.addArc(w, u);
      }
    }
  }
  return weak;
}

MajorityGraph weakMajorityGraph(const MajorityGraph& strict) {
  return {strict.vertices, weakMajority(strict.graph)};
}

// ---------------------------------------------------------------------------
// Tournament solutions

std::vector<std::vector<std::size_t>> stronglyConnectedComponents(const Digraph& g) {
  const std::size_t n = g.vertexCount();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t next_index = 0;

  // Iterative Tarjan; each frame remembers the next neighbour to try.
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next == 0 && index[v] == kUnvisited) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      for (; next < n; ++next) {
        const std::size_t w = next;
        if (!g.hasArc(v, w)) continue;
        if (index[w] == kUnvisited) {
          ++next;
          frames.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const std::size_t done = v;
      if (low[done] == index[done]) {
        auto& scc = components.emplace_back();
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = components.size() - 1;
          scc.push_back(w);
        } while (w != done);
        std::sort(scc.begin(), scc.end());
      }
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }

  // Topological order of the condensation, smallest member first among ready.
  const std::size_t k = components.size();
  std::vector<std::size_t> indegree(k, 0);
  std::vector<std::vector<bool>> dag(k, std::vector<bool>(k, false));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t w = 0; w < n; ++w) {
      if (g.hasArc(u, w) && component[u] != component[w] && !dag[component[u]][component[w]]) {
        dag[component[u]][component[w]] = true;
        ++indegree[component[w]];
      }
    }
  }
  using Entry = std::pair<std::size_t, std::size_t>;  // (smallest member, component)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (std::size_t c = 0; c < k; ++c) {
    if (indegree[c] == 0) ready.emplace(components[c].front(), c);
  }
  std::vector<std::vector<std::size_t>> ordered;
  ordered.reserve(k);
  while (!ready.empty()) {
    const std::size_t c = ready.top().second;
    ready.pop();
    ordered.push_back(components[c]);
    for (std::size_t d = 0; d < k; ++d) {
      if (dag[c][d] && --indegree[d] == 0) ready.emplace(components[d].front(), d);
    }
  }
  return ordered;
}

std::vector<std::vector<std::size_t>> schwartzComponents(const Digraph& g) {
  std::vector<std::vector<std::size_t>> result;
  const auto sccs = stronglyConnectedComponents(g);
  std::vector<bool> inside(g.vertexCount(), false);
  for (const auto& scc : sccs) {
    for (std::size_t v : scc) inside[v] = true;
    bool entered = false;
    for (std::size_t u = 0; u < g.vertexCount() && !entered; ++u) {
      if (inside[u]) continue;
      for (std::size_t v : scc) {
        if (g.hasArc(u, v)) {
          entered = true;
          break;
        }
      }
    }
    for (std::size_t v : scc) inside[v] = false;
    if (!entered) result.push_back(scc);
  }
  return result;
}

std::vector<std::size_t> schwartzSet(const Digraph& g) {
  std::vector<std::size_t> set;
  for (const auto& component : schwartzComponents(g)) {
    set.insert(set.end(), component.begin(), component.end());
  }
  std::sort(set.begin(), set.end());
  return set;
}

std::vector<std::size_t> smithSet(const Digraph& g) {
  const std::size_t n = g.vertexCount();
  std::vector<std::size_t> best;
  // Closure of v under "y is not beaten by x": the smallest dominant set
  // containing v.
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<bool> inside(n, false);
    std::vector<std::size_t> members{v}, stack{v};
    inside[v] = true;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y) {
        if (!inside[y] && !g.hasArc(x, y)) {
          inside[y] = true;
          members.push_back(y);
          stack.push_back(y);
        }
      }
    }
    if (best.empty() || members.size() < best.size()) best = std::move(members);
  }
  std::sort(best.begin(), best.end());
  return best;
}

// ---------------------------------------------------------------------------

std::string vertexLabel(const Proposal& proposal, const VertexKey& key) {
  std::string label = proposal.item(key.item).id;
  if (!proposal.isUnit()) {
    label += "[" + std::to_string(key.first) + ".." + std::to_string(key.last) + "]";
  }
  return label;
}

std::string toEdgeList(const Proposal& proposal, const MajorityGraph& g) {
  std::ostringstream os;
  for (const auto& [u, w] : g.graph.arcs()) {
    os << vertexLabel(proposal, g.vertices[u]) << ' ' << vertexLabel(proposal, g.vertices[w])
       << '\n';
  }
  return os.str();
}

}  // namespace dembudget
