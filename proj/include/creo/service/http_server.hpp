#pragma once

#include <memory>
#include <string>

#include "creo/service/service.hpp"

namespace creo::service {

// REST front end over a Service. Routes:
//   POST   /sessions                      GET /sessions/{id}
//   POST   /sessions/{id}/edits           GET /sessions/{id}/preview.png
//   GET    /sessions/{id}/stages/{s}.png  POST /sessions/{id}/locks
//   DELETE /sessions/{id}/locks/{lock}    POST /sessions/{id}/branches
//   POST   /sessions/{id}/revert          GET /sessions/{id}/export
//   POST   /sessions/import
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds without serving; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace creo::service
