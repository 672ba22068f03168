// HTTP service for committee front ends. Port and data directory come from
// flags, falling back to DEMBUDGET_PORT / DEMBUDGET_DATA.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "dembudget/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Budgeting election service"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "dembudget-data";
  if (const char* env = std::getenv("DEMBUDGET_PORT")) port = std::atoi(env);
  if (const char* env = std::getenv("DEMBUDGET_DATA")) data_dir = env;
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Listen port")->check(CLI::Range(1, 65535));
  app.add_option("--data-dir", data_dir, "Directory for election logs");
  CLI11_PARSE(app, argc, argv);

  try {
    dembudget::ElectionService service(data_dir);
    httplib::Server server;
    dembudget::bindRoutes(server, service);
    std::cerr << "listening on " << host << ":" << port << ", data in " << data_dir << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "cannot listen on " << host << ":" << port << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
