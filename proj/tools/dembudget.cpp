// Command-line front end: run an election file through ranking, budgeting,
// verification or hierarchical consolidation.
//
// Exit codes: 0 success, 1 invalid input, 2 oracle refusal.

#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "dembudget/election_io.hpp"

using namespace dembudget;

namespace {

std::string readInput(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

void writeOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ValidationError("cannot write '" + path + "'");
}

// "A=2,B=0" -> {A: 2, B: 0}
std::map<std::string, Money> parseLimits(const std::string& spec) {
  std::map<std::string, Money> limits;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--limits: expected id=amount, got '" + part + "'");
    const std::string value = part.substr(eq + 1);
    std::size_t used = 0;
    Money amount = 0;
    try {
      amount = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ValidationError("--limits: '" + value + "' is not an integer");
    if (amount < 0) throw ValidationError("--limits: limit for '" + part.substr(0, eq) + "' is negative");
    limits[part.substr(0, eq)] = amount;
  }
  return limits;
}

// Random unit election in the file format, for fuzzing the other commands.
Json sampleElection(std::uint64_t seed, int items, int voters) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Json doc{{"mode", "unit"}};
  std::vector<std::string> ids;
  for (int i = 0; i < items; ++i) {
    ids.push_back("i" + std::to_string(i + 1));
    doc["items"].push_back({{"id", ids.back()}, {"cost", uniform(1, 4)}});
  }
  doc["ballots"] = Json::array();
  for (int v = 0; v < voters; ++v) {
    std::shuffle(ids.begin(), ids.end(), rng);
    doc["ballots"].push_back({{"type", "linear"}, {"order", ids}});
  }
  doc["limit"] = uniform(0, 2 * items);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smith-consistent budgeting"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string output;
  std::string tiebreak;
  bool exact = false;
  std::uint64_t seed = 1;
  std::string limits_spec;
  int sample_items = 5;
  int sample_voters = 3;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-i,--input", input, "Election file (JSON), '-' for stdin");
    cmd->add_option("-o,--output", output, "Write the result here instead of stdout");
    cmd->add_option("--tiebreak", tiebreak, "Override the file's tie-break policy: cost or index")
        ->check(CLI::IsMember({"cost", "index"}));
    cmd->add_flag("--exact-knapsack", exact, "Exact prev-closest pruning for small unit components");
  };
  auto* rank = app.add_subcommand("rank", "Print the ranked partition");
  auto* budget = app.add_subcommand("budget", "Compute the budget");
  auto* verify = app.add_subcommand("verify", "Check the budget against the brute-force oracle");
  auto* hierarchy = app.add_subcommand("hierarchy", "Rank sections and consolidate");
  auto* whatif = app.add_subcommand("whatif", "Prune each section ranking under given limits");
  auto* graph = app.add_subcommand("graph", "Print the majority graph as an arc list");
  for (auto* cmd : {rank, budget, verify, hierarchy, whatif, graph}) add_common(cmd);
  whatif->add_option("--limits", limits_spec, "Section limits, e.g. A=2,B=0")->required();
  auto* sample = app.add_subcommand("sample", "Emit a random unit election");
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--items", sample_items)->check(CLI::Range(1, 20));
  sample->add_option("--voters", sample_voters)->check(CLI::Range(0, 1000));
  sample->add_option("-o,--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sample->parsed()) {
      writeOutput(output, dumpCanonical(sampleElection(seed, sample_items, sample_voters)));
      return 0;
    }
    ElectionFile election = parseElection(readInput(input));
    if (!tiebreak.empty()) election.tie_break = *parseTieBreak(tiebreak);
    const PruningOptions options{election.tie_break, exact};
    const Proposal& p = election.proposal;

    std::string text;
    if (rank->parsed()) {
      text = dumpCanonical({{"ranking", rankingToJson(p, ranking(p, election.profile))}});
    } else if (budget->parsed()) {
      text = emitBudget(p, computeBudget(p, election.profile, election.limit, election.previous, options));
    } else if (verify->parsed()) {
      const auto report = dembudget::verify(p, election.profile, election.limit, election.previous, options);
      text = dumpCanonical(reportToJson(p, report));
    } else if (hierarchy->parsed()) {
      text = dumpCanonical(hierarchyToJson(election, runHierarchy(election, options)));
    } else if (whatif->parsed()) {
      if (!election.hierarchical()) throw ValidationError("$.sections: election has no sections");
      const auto rankings = rankSections(election);
      std::vector<Budget> previous;
      for (const auto& r : rankings) {
        Budget prev = Budget::none(r.proposal);
        for (ItemIndex i = 0; i < r.proposal.size(); ++i) {
          if (election.previous.contains(p.indexOf(r.proposal.item(i).id))) prev.set(i, 1);
        }
        previous.push_back(std::move(prev));
      }
      text = dumpCanonical(
          whatIfToJson(rankings, whatIfLimits(rankings, parseLimits(limits_spec), previous, options)));
    } else if (graph->parsed()) {
      text = toEdgeList(p, buildMajorityGraph(p, election.profile));
    }
    writeOutput(output, text);
    return 0;
  } catch (const OracleRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
