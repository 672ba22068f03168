#include "dembudget/election_io.hpp"

#include <algorithm>
#include <set>

namespace dembudget {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ValidationError(path + ": " + reason);
}

// Runs `body`, prefixing any ValidationError with the JSON path.
template <typename Body>
auto at(const std::string& path, Body&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("$", 0) == 0) throw;
    fail(path, what);
  }
}

const Json& member(const Json& object, const char* key, const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

void requireObject(const Json& node, const std::string& path) {
  if (!node.is_object()) fail(path, "expected an object");
}

void requireArray(const Json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array");
}

void allowOnly(const Json& object, std::initializer_list<const char*> keys, const std::string& path) {
  for (const auto& [key, value] : object.items()) {
    const bool known =
        std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
    if (!known) fail(path + "." + key, "unknown field");
  }
}

std::string asString(const Json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

std::int64_t asInteger(const Json& node, const std::string& path) {
  if (node.is_number_unsigned()) {
    if (node.get<std::uint64_t>() > static_cast<std::uint64_t>(kMaxMoney)) fail(path, "integer too large");
    return static_cast<std::int64_t>(node.get<std::uint64_t>());
  }
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<std::int64_t>();
}

std::string indexPath(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

Proposal parseItems(const Json& items, Mode mode, const std::string& path) {
  requireArray(items, path);
  if (items.empty()) fail(path, "proposal has no items");
  if (mode == Mode::kUnit) {
    std::vector<Proposal::UnitItem> parsed;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string p = indexPath(path, i);
      requireObject(items[i], p);
      allowOnly(items[i], {"id", "cost"}, p);
      const Money c = asInteger(member(items[i], "cost", p), p + ".cost");
      if (c < 0) fail(p + ".cost", "cost must be non-negative");
      parsed.push_back({asString(member(items[i], "id", p), p + ".id"), c});
    }
    return at(path, [&] { return Proposal::unit(parsed); });
  }
  std::vector<Proposal::QuantItem> parsed;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string p = indexPath(path, i);
    requireObject(items[i], p);
    allowOnly(items[i], {"id", "cumCost", "quantity"}, p);
    const Json& table = member(items[i], "cumCost", p);
    requireArray(table, p + ".cumCost");
    if (table.empty()) fail(p + ".cumCost", "needs at least one entry");
    std::vector<Money> cum;
    for (std::size_t k = 0; k < table.size(); ++k) {
      cum.push_back(asInteger(table[k], indexPath(p + ".cumCost", k)));
    }
    if (const auto q = items[i].find("quantity"); q != items[i].end()) {
      if (asInteger(*q, p + ".quantity") != static_cast<std::int64_t>(cum.size())) {
        fail(p + ".quantity", "must equal the length of cumCost");
      }
    }
    parsed.push_back({asString(member(items[i], "id", p), p + ".id"), std::move(cum)});
  }
  return at(path, [&] { return Proposal::quantitative(parsed); });
}

std::vector<std::pair<std::string, Count>> parseComponent(const Json& component,
                                                          const std::string& path) {
  requireArray(component, path);
  std::vector<std::pair<std::string, Count>> shares;
  for (std::size_t i = 0; i < component.size(); ++i) {
    const std::string p = indexPath(path, i);
    const Json& entry = component[i];
    if (entry.is_string()) {
      shares.emplace_back(entry.get<std::string>(), 1);
      continue;
    }
    requireObject(entry, p);
    allowOnly(entry, {"id", "quantity"}, p);
    shares.emplace_back(asString(member(entry, "id", p), p + ".id"),
                        asInteger(member(entry, "quantity", p), p + ".quantity"));
  }
  return shares;
}

RawPartition parseRawPartition(const Json& components, const std::string& path) {
  requireArray(components, path);
  RawPartition raw;
  for (std::size_t c = 0; c < components.size(); ++c) {
    raw.push_back(parseComponent(components[c], indexPath(path, c)));
  }
  return raw;
}

// Parses a ballot list; voter ids default to v1, v2, ...
std::pair<std::vector<std::string>, Profile> parseBallots(const Proposal& proposal,
                                                          const Json& ballots,
                                                          const std::string& path) {
  requireArray(ballots, path);
  std::vector<std::string> voters;
  std::vector<Ballot> parsed;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < ballots.size(); ++i) {
    const std::string p = indexPath(path, i);
    requireObject(ballots[i], p);
    std::string voter = "v" + std::to_string(i + 1);
    if (const auto v = ballots[i].find("voter"); v != ballots[i].end()) voter = asString(*v, p + ".voter");
    if (!seen.insert(voter).second) fail(p + ".voter", "duplicate voter '" + voter + "'");
    voters.push_back(voter);
    parsed.push_back(ballotFromJson(proposal, ballots[i], p));
  }
  return {std::move(voters), at(path, [&] { return Profile(proposal, std::move(parsed)); })};
}

Budget parsePrevious(const Proposal& proposal, const Json& node, const std::string& path) {
  if (proposal.isUnit()) {
    requireArray(node, path);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < node.size(); ++i) ids.push_back(asString(node[i], indexPath(path, i)));
    return at(path, [&] { return Budget::ofItems(proposal, ids); });
  }
  requireObject(node, path);
  std::map<std::string, Count> counts;
  for (const auto& [id, k] : node.items()) counts[id] = asInteger(k, path + "." + id);
  return at(path, [&] { return Budget::ofCounts(proposal, counts); });
}

Json itemsToJson(const Proposal& proposal) {
  Json items = Json::array();
  for (const auto& item : proposal.items()) {
    if (proposal.isUnit()) {
      items.push_back({{"id", item.id}, {"cost", item.cost(1)}});
    } else {
      items.push_back({{"id", item.id}, {"cumCost", item.cost.table()}});
    }
  }
  return items;
}

Json ballotsToJson(const Proposal& proposal, const std::vector<std::string>& voters,
                   const Profile& profile) {
  Json out = Json::array();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    Json ballot = ballotToJson(proposal, profile[i]);
    ballot["voter"] = voters.at(i);
    out.push_back(std::move(ballot));
  }
  return out;
}

Json shareToJson(const Proposal& proposal, const Share& share) {
  if (proposal.isUnit()) return proposal.item(share.item).id;
  return {{"id", proposal.item(share.item).id}, {"quantity", share.count}};
}

}  // namespace

Ballot ballotFromJson(const Proposal& proposal, const Json& node, const std::string& path) {
  requireObject(node, path);
  const std::string type = asString(member(node, "type", path), path + ".type");
  if (type == "linear") {
    allowOnly(node, {"voter", "type", "order"}, path);
    const Json& order = member(node, "order", path);
    requireArray(order, path + ".order");
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < order.size(); ++i) {
      ids.push_back(asString(order[i], indexPath(path + ".order", i)));
    }
    return at(path + ".order", [&] { return makeLinearOrder(proposal, ids); });
  }
  if (type == "partition") {
    allowOnly(node, {"voter", "type", "components"}, path);
    const RawPartition raw = parseRawPartition(member(node, "components", path), path + ".components");
    return at(path + ".components", [&] { return makeOrderedPartition(proposal, raw); });
  }
  if (type == "partial") {
    allowOnly(node, {"voter", "type", "edges"}, path);
    const Json& edges = member(node, "edges", path);
    requireArray(edges, path + ".edges");
    std::vector<std::pair<std::string, std::string>> parsed;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string p = indexPath(path + ".edges", i);
      if (!edges[i].is_array() || edges[i].size() != 2) fail(p, "expected [better, worse]");
      parsed.emplace_back(asString(edges[i][0], p + "[0]"), asString(edges[i][1], p + "[1]"));
    }
    return at(path + ".edges", [&] { return makePartialOrder(proposal, parsed); });
  }
  fail(path + ".type", "expected 'linear', 'partition' or 'partial', got '" + type + "'");
}

Json ballotToJson(const Proposal& proposal, const Ballot& ballot) {
  if (const auto* linear = std::get_if<LinearOrder>(&ballot)) {
    Json order = Json::array();
    for (ItemIndex i : linear->items) order.push_back(proposal.item(i).id);
    return {{"type", "linear"}, {"order", order}};
  }
  if (const auto* partition = std::get_if<OrderedPartition>(&ballot)) {
    Json components = Json::array();
    for (const auto& component : partition->components) {
      Json shares = Json::array();
      for (const auto& share : component) shares.push_back(shareToJson(proposal, share));
      components.push_back(std::move(shares));
    }
    return {{"type", "partition"}, {"components", components}};
  }
  Json edges = Json::array();
  for (const auto& [a, b] : std::get<PartialOrder>(ballot).edges()) {
    edges.push_back({proposal.item(a).id, proposal.item(b).id});
  }
  return {{"type", "partial"}, {"edges", edges}};
}

ElectionFile parseElectionSkeleton(const Json& doc) {
  requireObject(doc, "$");
  allowOnly(doc,
            {"mode", "items", "sections", "ballots", "limit", "previous", "tieBreak",
             "consolidatedBallots"},
            "$");
  Mode mode = Mode::kUnit;
  if (const auto m = doc.find("mode"); m != doc.end()) {
    const std::string name = asString(*m, "$.mode");
    if (name == "quantitative") {
      mode = Mode::kQuantitative;
    } else if (name != "unit") {
      fail("$.mode", "expected 'unit' or 'quantitative'");
    }
  }

  ElectionFile election{Proposal::unit({}, true), {}, {}, BudgetLimit(0), {}, {}, {}, {}, {}};
  if (const auto s = doc.find("sections"); s != doc.end()) {
    if (mode != Mode::kUnit) fail("$.mode", "sections require unit mode");
    if (doc.contains("items")) fail("$.items", "give items either at top level or per section");
    requireArray(*s, "$.sections");
    if (s->empty()) fail("$.sections", "needs at least one section");
    std::vector<Proposal::UnitItem> combined;
    std::set<std::string> section_ids;
    for (std::size_t i = 0; i < s->size(); ++i) {
      const std::string p = indexPath("$.sections", i);
      const Json& node = (*s)[i];
      requireObject(node, p);
      allowOnly(node, {"id", "items", "ballots"}, p);
      SectionSpec spec{asString(member(node, "id", p), p + ".id"),
                       parseItems(member(node, "items", p), Mode::kUnit, p + ".items"), {}, {}};
      if (!section_ids.insert(spec.id).second) fail(p + ".id", "duplicate section '" + spec.id + "'");
      for (const auto& item : spec.proposal.items()) combined.push_back({item.id, item.cost(1)});
      election.sections.push_back(std::move(spec));
    }
    election.proposal = at("$.sections", [&] { return Proposal::unit(combined); });
  } else {
    election.proposal = parseItems(member(doc, "items", "$"), mode, "$.items");
  }

  const Money limit = asInteger(member(doc, "limit", "$"), "$.limit");
  if (limit < 0) fail("$.limit", "budget limit must be non-negative");
  election.limit = BudgetLimit(limit);

  election.previous = Budget::none(election.proposal);
  if (const auto p = doc.find("previous"); p != doc.end()) {
    election.previous = parsePrevious(election.proposal, *p, "$.previous");
  }
  if (const auto t = doc.find("tieBreak"); t != doc.end()) {
    const auto policy = parseTieBreak(asString(*t, "$.tieBreak"));
    if (!policy) fail("$.tieBreak", "expected 'cost' or 'index'");
    election.tie_break = *policy;
  }
  return election;
}

ElectionFile electionFromJson(const Json& doc) {
  ElectionFile election = parseElectionSkeleton(doc);
  if (const auto b = doc.find("ballots"); b != doc.end()) {
    std::tie(election.voters, election.profile) = parseBallots(election.proposal, *b, "$.ballots");
  }
  for (std::size_t i = 0; i < election.sections.size(); ++i) {
    const Json& node = doc.at("sections")[i];
    if (const auto b = node.find("ballots"); b != node.end()) {
      auto& spec = election.sections[i];
      auto parsed = parseBallots(spec.proposal, *b, indexPath("$.sections", i) + ".ballots");
      spec.voters = std::move(parsed.first);
      spec.profile = std::move(parsed.second);
    }
  }
  if (const auto c = doc.find("consolidatedBallots"); c != doc.end()) {
    if (!election.hierarchical()) fail("$.consolidatedBallots", "only allowed with sections");
    requireArray(*c, "$.consolidatedBallots");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < c->size(); ++i) {
      const std::string p = indexPath("$.consolidatedBallots", i);
      const Json& node = (*c)[i];
      requireObject(node, p);
      allowOnly(node, {"voter", "components"}, p);
      std::string voter = "c" + std::to_string(i + 1);
      if (const auto v = node.find("voter"); v != node.end()) voter = asString(*v, p + ".voter");
      if (!seen.insert(voter).second) fail(p + ".voter", "duplicate voter '" + voter + "'");
      election.consolidated_voters.push_back(voter);
      election.consolidated_ballots.push_back(
          parseRawPartition(member(node, "components", p), p + ".components"));
      for (const auto& component : election.consolidated_ballots.back()) {
        for (const auto& [id, k] : component) {
          const bool known = std::any_of(election.sections.begin(), election.sections.end(),
                                         [&](const SectionSpec& s) { return s.id == id; });
          if (!known) fail(p + ".components", "unknown section '" + id + "'");
        }
      }
    }
  }
  return election;
}

ElectionFile parseElection(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail("$", std::string("invalid JSON: ") + e.what());
  }
  return electionFromJson(doc);
}

Json toJson(const ElectionFile& election) {
  Json doc;
  doc["mode"] = election.proposal.isUnit() ? "unit" : "quantitative";
  if (election.hierarchical()) {
    Json sections = Json::array();
    for (const auto& spec : election.sections) {
      Json node{{"id", spec.id}, {"items", itemsToJson(spec.proposal)}};
      if (spec.profile) node["ballots"] = ballotsToJson(spec.proposal, spec.voters, *spec.profile);
      sections.push_back(std::move(node));
    }
    doc["sections"] = std::move(sections);
  } else {
    doc["items"] = itemsToJson(election.proposal);
  }
  doc["ballots"] = ballotsToJson(election.proposal, election.voters, election.profile);
  doc["limit"] = election.limit.value();
  doc["previous"] = budgetToJson(election.proposal, election.previous);
  doc["tieBreak"] = toString(election.tie_break);
  if (!election.consolidated_ballots.empty()) {
    Json ballots = Json::array();
    for (std::size_t i = 0; i < election.consolidated_ballots.size(); ++i) {
      Json components = Json::array();
      for (const auto& component : election.consolidated_ballots[i]) {
        Json shares = Json::array();
        for (const auto& [id, k] : component) shares.push_back({{"id", id}, {"quantity", k}});
        components.push_back(std::move(shares));
      }
      ballots.push_back({{"voter", election.consolidated_voters[i]}, {"components", components}});
    }
    doc["consolidatedBallots"] = std::move(ballots);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Results

Json budgetToJson(const Proposal& proposal, const Budget& budget) {
  if (proposal.isUnit()) return budget.selectedIds(proposal);
  Json counts = Json::object();
  for (ItemIndex i = 0; i < proposal.size(); ++i) {
    if (budget.count(i) > 0) counts[proposal.item(i).id] = budget.count(i);
  }
  return counts;
}

std::string dumpCanonical(const Json& value) { return value.dump(2) + "\n"; }

std::string emitBudget(const Proposal& proposal, const Budget& budget) {
  return dumpCanonical({{"budget", budgetToJson(proposal, budget)}, {"cost", cost(proposal, budget)}});
}

Json rankingToJson(const Proposal& proposal, const RankedPartition& ranked) {
  Json components = Json::array();
  for (const auto& component : ranked.components) {
    Json vertices = Json::array();
    for (const auto& key : component) {
      if (proposal.isUnit()) {
        vertices.push_back(proposal.item(key.item).id);
      } else {
        vertices.push_back({{"id", proposal.item(key.item).id}, {"from", key.first}, {"to", key.last}});
      }
    }
    components.push_back(std::move(vertices));
  }
  return components;
}

Json reportToJson(const Proposal& proposal, const VerificationReport& report) {
  Json winner = nullptr;
  if (report.condorcet_winner) winner = budgetToJson(proposal, *report.condorcet_winner);
  return {{"budget", budgetToJson(proposal, report.budget)},
          {"cost", report.budget_cost},
          {"feasibleBudgets", report.feasible_budgets},
          {"smithSize", report.smith_size},
          {"condorcetWinner", winner},
          {"checks",
           {{"feasible", toString(report.feasible)},
            {"exhaustive", toString(report.exhaustive)},
            {"smithMember", toString(report.smith_member)},
            {"condorcetWinner", toString(report.condorcet)}}},
          {"ok", report.ok()}};
}

Json sectionRankingToJson(const SectionRanking& ranking) {
  Json linearized = Json::array();
  for (ItemIndex i : ranking.linearized) linearized.push_back(ranking.proposal.item(i).id);
  return {{"id", ranking.section_id},
          {"ranking", rankingToJson(ranking.proposal, ranking.ranked)},
          {"linearized", linearized}};
}

std::vector<SectionRanking> rankSections(const ElectionFile& election) {
  std::vector<SectionRanking> rankings;
  for (const auto& spec : election.sections) {
    Profile profile;
    if (spec.profile) {
      profile = *spec.profile;
    } else {
      std::vector<Ballot> restricted;
      for (const auto& ballot : election.profile.ballots()) {
        restricted.push_back(restrictBallot(election.proposal, ballot, spec.proposal));
      }
      profile = Profile(spec.proposal, std::move(restricted));
    }
    rankings.push_back(sectionRank({spec.id, spec.proposal, profile}, election.tie_break));
  }
  return rankings;
}

HierarchyRun runHierarchy(const ElectionFile& election, const PruningOptions& options) {
  if (!election.hierarchical()) throw ValidationError("$.sections: election has no sections");
  HierarchyRun run;
  run.rankings = rankSections(election);
  run.derived = deriveProposal(run.rankings);

  std::vector<Ballot> consolidated;
  if (!election.consolidated_ballots.empty()) {
    for (std::size_t i = 0; i < election.consolidated_ballots.size(); ++i) {
      const std::string path = "$.consolidatedBallots[" + std::to_string(i) + "]";
      consolidated.push_back(
          at(path, [&] { return makeOrderedPartition(run.derived.proposal, election.consolidated_ballots[i]); }));
    }
  } else {
    for (const auto& ballot : election.profile.ballots()) {
      consolidated.push_back(projectBallot(election.proposal, ballot, run.rankings, run.derived));
    }
  }
  run.consolidated_profile = Profile(run.derived.proposal, std::move(consolidated));

  std::vector<Budget> previous_by_section;
  for (const auto& r : run.rankings) {
    Budget prev = Budget::none(r.proposal);
    for (ItemIndex i = 0; i < r.proposal.size(); ++i) {
      if (election.previous.contains(election.proposal.indexOf(r.proposal.item(i).id))) prev.set(i, 1);
    }
    previous_by_section.push_back(std::move(prev));
  }
  const Budget previous = derivePrevious(run.rankings, run.derived, previous_by_section);
  PruningOptions consolidated_options = options;
  consolidated_options.tie_break = election.tie_break;
  run.consolidation = consolidate(run.rankings, run.derived, run.consolidated_profile,
                                  election.limit, previous, consolidated_options);
  if (!election.profile.empty()) {
    run.direct = sba(election.proposal, election.profile, election.limit, election.previous,
                     consolidated_options);
  }
  return run;
}

Json hierarchyToJson(const ElectionFile& election, const HierarchyRun& run) {
  Json sections = Json::array();
  Budget combined = Budget::none(election.proposal);
  for (std::size_t s = 0; s < run.rankings.size(); ++s) {
    const auto& r = run.rankings[s];
    Json node = sectionRankingToJson(r);
    node["budget"] = budgetToJson(r.proposal, run.consolidation.section_budgets[s]);
    node["limit"] = run.consolidation.section_limits[s];
    sections.push_back(std::move(node));
    for (ItemIndex i = 0; i < r.proposal.size(); ++i) {
      if (run.consolidation.section_budgets[s].contains(i)) {
        combined.set(election.proposal.indexOf(r.proposal.item(i).id), 1);
      }
    }
  }
  Json out{{"sections", sections},
           {"consolidated",
            {{"derived", budgetToJson(run.derived.proposal, run.consolidation.consolidated)},
             {"budget", budgetToJson(election.proposal, combined)},
             {"cost", cost(election.proposal, combined)}}},
           {"limit", election.limit.value()}};
  if (run.direct) {
    out["direct"] = {{"budget", budgetToJson(election.proposal, *run.direct)},
                     {"cost", cost(election.proposal, *run.direct)}};
  }
  return out;
}

Json whatIfToJson(const std::vector<SectionRanking>& rankings, const std::vector<Budget>& budgets) {
  Json sections = Json::array();
  for (std::size_t s = 0; s < rankings.size(); ++s) {
    sections.push_back({{"id", rankings[s].section_id},
                        {"budget", budgetToJson(rankings[s].proposal, budgets[s])},
                        {"cost", cost(rankings[s].proposal, budgets[s])}});
  }
  return {{"sections", sections}};
}

}  // namespace dembudget
