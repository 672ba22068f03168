#include "dembudget/service.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <httplib.h>

namespace dembudget {

namespace {

Response error(int status, const std::string& message) { return {status, {{"error", message}}}; }

Response notFound(const std::string& id) { return error(404, "unknown election '" + id + "'"); }

bool validVoterId(const std::string& voter) {
  return !voter.empty() && voter.size() <= 128 &&
         std::all_of(voter.begin(), voter.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '-' || c == '_' || c == '.';
         });
}

template <typename Handler>
Response guarded(Handler&& handler) {
  try {
    return handler();
  } catch (const OracleRefusal& e) {
    return error(404, e.what());
  } catch (const ValidationError& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

std::optional<Json> parseBody(const std::string& body) {
  Json doc = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return std::nullopt;
  return doc;
}

}  // namespace

struct ElectionService::Election {
  mutable std::mutex mutex;
  ElectionFile base;
  std::map<std::string, Ballot> ballots;

  // Kind of the first stored ballot other than `voter`'s, if any.
  std::optional<BallotKind> otherKind(const std::string& voter) const {
    for (const auto& [v, ballot] : ballots) {
      if (v != voter) return kindOf(ballot);
    }
    return std::nullopt;
  }

  ElectionFile snapshot() const {
    std::lock_guard lock(mutex);
    ElectionFile election = base;
    std::vector<Ballot> profile;
    election.voters.clear();
    for (const auto& [voter, ballot] : ballots) {
      election.voters.push_back(voter);
      profile.push_back(ballot);
    }
    election.profile = Profile(election.proposal, std::move(profile));
    return election;
  }
};

ElectionService::ElectionService(std::optional<std::filesystem::path> data_dir)
    : data_dir_(std::move(data_dir)) {
  if (data_dir_) {
    std::filesystem::create_directories(*data_dir_);
    replay();
  }
}

ElectionService::~ElectionService() = default;

std::shared_ptr<ElectionService::Election> ElectionService::lookup(const std::string& id) const {
  std::shared_lock lock(registry_mutex_);
  const auto it = elections_.find(id);
  return it == elections_.end() ? nullptr : it->second;
}

std::shared_ptr<ElectionService::Election> ElectionService::load(const std::string& id,
                                                                 const Json& create_doc) {
  auto election = std::make_shared<Election>();
  election->base = electionFromJson(create_doc);
  for (std::size_t i = 0; i < election->base.voters.size(); ++i) {
    election->ballots.emplace(election->base.voters[i], election->base.profile[i]);
  }
  election->base.voters.clear();
  election->base.profile = Profile();
  elections_[id] = election;
  return election;
}

void ElectionService::append(const std::string& id, const Json& record) const {
  if (!data_dir_) return;
  std::ofstream out(*data_dir_ / (id + ".jsonl"), std::ios::app);
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot write election log for '" + id + "'");
}

void ElectionService::replay() {
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(*data_dir_)) {
    if (entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    const std::string id = path.stem().string();
    std::ifstream in(path);
    std::string line;
    std::shared_ptr<Election> election;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      if (line.empty()) continue;
      try {
        const Json record = Json::parse(line);
        if (record.at("type") == "create") {
          election = load(id, record.at("election"));
        } else if (record.at("type") == "ballot" && election) {
          const std::string voter = record.at("voter").get<std::string>();
          election->ballots.insert_or_assign(
              voter, ballotFromJson(election->base.proposal, record.at("ballot"), "$.ballot"));
        }
      } catch (const std::exception& e) {
        std::cerr << "skipping " << path.string() << ":" << n << ": " << e.what() << "\n";
      }
    }
    if (id.size() > 1 && id[0] == 'e' &&
        std::all_of(id.begin() + 1, id.end(), [](unsigned char c) { return std::isdigit(c); })) {
      next_id_ = std::max(next_id_, std::stoul(id.substr(1)) + 1);
    }
  }
}

Response ElectionService::createElection(const std::string& body) {
  const auto doc = parseBody(body);
  if (!doc) return error(400, "$: invalid JSON");
  if (doc->is_object() && doc->contains("limit") && (*doc)["limit"].is_number_integer() &&
      (*doc)["limit"].get<std::int64_t>() < 0) {
    return error(422, "$.limit: budget limit must be non-negative");
  }
  return guarded([&] {
    std::unique_lock lock(registry_mutex_);
    const std::string id = "e" + std::to_string(next_id_);
    load(id, *doc);
    ++next_id_;
    append(id, {{"type", "create"}, {"election", *doc}});
    return Response{201, {{"id", id}}};
  });
}

Response ElectionService::getElection(const std::string& id) const {
  const auto election = lookup(id);
  if (!election) return notFound(id);
  return guarded([&] { return Response{200, toJson(election->snapshot())}; });
}

Response ElectionService::putBallot(const std::string& id, const std::string& voter,
                                    const std::string& body) {
  const auto election = lookup(id);
  if (!election) return notFound(id);
  if (!validVoterId(voter)) return error(400, "invalid voter id '" + voter + "'");
  const auto doc = parseBody(body);
  if (!doc) return error(400, "$: invalid JSON");
  return guarded([&] {
    std::lock_guard lock(election->mutex);
    const Proposal& proposal = election->base.proposal;
    if (doc->is_object() && doc->contains("voter") && (*doc)["voter"] != voter) {
      return error(400, "$.voter: does not match the voter in the URL");
    }
    if (!proposal.isUnit() && doc->is_object() && doc->value("type", "") != "partition") {
      return error(409, "quantitative elections accept only partition ballots");
    }
    Ballot ballot = ballotFromJson(proposal, *doc, "$");
    if (const auto kind = election->otherKind(voter); kind && *kind != kindOf(ballot)) {
      return error(409, std::string("election holds ") + toString(*kind) + " ballots, got " +
                            toString(kindOf(ballot)));
    }
    const bool replaced = election->ballots.count(voter) > 0;
    append(id, {{"type", "ballot"}, {"voter", voter}, {"ballot", ballotToJson(proposal, ballot)}});
    election->ballots.insert_or_assign(voter, std::move(ballot));
    return Response{200, {{"voter", voter}, {"replaced", replaced}}};
  });
}

Response ElectionService::budget(const std::string& id) const {
  const auto election = lookup(id);
  if (!election) return notFound(id);
  return guarded([&] {
    const ElectionFile e = election->snapshot();
    const PruningOptions options{e.tie_break, false};
    const Budget b = computeBudget(e.proposal, e.profile, e.limit, e.previous, options);
    Json body{{"budget", budgetToJson(e.proposal, b)},
              {"cost", cost(e.proposal, b)},
              {"limit", e.limit.value()},
              {"ballots", e.profile.size()},
              {"ranking", rankingToJson(e.proposal, ranking(e.proposal, e.profile))}};
    if (e.hierarchical()) {
      try {
        body["hierarchy"] = hierarchyToJson(e, runHierarchy(e, options));
      } catch (const ValidationError& ex) {
        body["hierarchy"] = {{"error", ex.what()}};
      }
    }
    return Response{200, std::move(body)};
  });
}

Response ElectionService::sectionRankings(const std::string& id) const {
  const auto election = lookup(id);
  if (!election) return notFound(id);
  return guarded([&] {
    const ElectionFile e = election->snapshot();
    if (!e.hierarchical()) return error(409, "election has no sections");
    Json sections = Json::array();
    for (const auto& r : rankSections(e)) sections.push_back(sectionRankingToJson(r));
    return Response{200, {{"sections", sections}}};
  });
}

Response ElectionService::whatIf(const std::string& id, const std::string& body) const {
  const auto election = lookup(id);
  if (!election) return notFound(id);
  const auto doc = parseBody(body);
  if (!doc) return error(400, "$: invalid JSON");
  if (!doc->is_object() || !doc->contains("limits") || !(*doc)["limits"].is_object()) {
    return error(400, "$.limits: expected an object of section limits");
  }
  std::map<std::string, Money> limits;
  for (const auto& [section, value] : (*doc)["limits"].items()) {
    if (!value.is_number_integer()) return error(400, "$.limits." + section + ": expected an integer");
    if (value.get<std::int64_t>() < 0) {
      return error(422, "$.limits." + section + ": limit must be non-negative");
    }
    limits[section] = value.get<Money>();
  }
  return guarded([&] {
    const ElectionFile e = election->snapshot();
    if (!e.hierarchical()) return error(409, "election has no sections");
    const auto rankings = rankSections(e);
    std::vector<Budget> previous;
    for (const auto& r : rankings) {
      Budget prev = Budget::none(r.proposal);
      for (ItemIndex i = 0; i < r.proposal.size(); ++i) {
        if (e.previous.contains(e.proposal.indexOf(r.proposal.item(i).id))) prev.set(i, 1);
      }
      previous.push_back(std::move(prev));
    }
    const auto budgets = whatIfLimits(rankings, limits, previous, {e.tie_break, false});
    return Response{200, whatIfToJson(rankings, budgets)};
  });
}

Response ElectionService::verify(const std::string& id) const {
  const auto election = lookup(id);
  if (!election) return notFound(id);
  return guarded([&] {
    const ElectionFile e = election->snapshot();
    const auto report =
        dembudget::verify(e.proposal, e.profile, e.limit, e.previous, {e.tie_break, false});
    return Response{200, reportToJson(e.proposal, report)};
  });
}

void bindRoutes(httplib::Server& server, ElectionService& service) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(dumpCanonical(r.body), "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Post("/elections", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.createElection(req.body));
  });
  server.Get(R"(/elections/([^/]+))", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.getElection(req.matches[1]));
  });
  server.Put(R"(/elections/([^/]+)/ballots/([^/]+))",
             [&, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.putBallot(req.matches[1], req.matches[2], req.body));
             });
  server.Get(R"(/elections/([^/]+)/budget)",
             [&, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.budget(req.matches[1]));
             });
  server.Get(R"(/elections/([^/]+)/sections/rankings)",
             [&, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.sectionRankings(req.matches[1]));
             });
  server.Post(R"(/elections/([^/]+)/whatif)",
              [&, send](const httplib::Request& req, httplib::Response& res) {
                send(res, service.whatIf(req.matches[1], req.body));
              });
  server.Get(R"(/elections/([^/]+)/verify)",
             [&, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.verify(req.matches[1]));
             });
}

}  // namespace dembudget
