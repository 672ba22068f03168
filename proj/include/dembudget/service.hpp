#pragma once

// Election store behind the HTTP API. Handlers are plain member functions
// returning (status, JSON body) so they can be exercised without a socket;
// bindRoutes wires them into an httplib server.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "dembudget/election_io.hpp"

namespace httplib {
class Server;
}

namespace dembudget {

struct Response {
  int status = 200;
  Json body;
};

class ElectionService {
 public:
  /// With a data directory every mutation is appended to `<id>.jsonl` there,
  /// and existing logs are replayed on construction.
  explicit ElectionService(std::optional<std::filesystem::path> data_dir = std::nullopt);
  ~ElectionService();

  Response createElection(const std::string& body);
  Response getElection(const std::string& id) const;
  Response putBallot(const std::string& id, const std::string& voter, const std::string& body);
  Response budget(const std::string& id) const;
  Response sectionRankings(const std::string& id) const;
  Response whatIf(const std::string& id, const std::string& body) const;
  Response verify(const std::string& id) const;

 private:
  struct Election;

  std::shared_ptr<Election> lookup(const std::string& id) const;
  std::shared_ptr<Election> load(const std::string& id, const Json& create_doc);
  void append(const std::string& id, const Json& record) const;
  void replay();

  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Election>> elections_;
  std::size_t next_id_ = 1;
};

void bindRoutes(httplib::Server& server, ElectionService& service);

}  // namespace dembudget
