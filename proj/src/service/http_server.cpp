#include "creo/service/http_server.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"

namespace creo::service {

using nlohmann::json;

namespace {

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body);
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  return j;
}

std::optional<std::string> query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

std::optional<EventId> query_event(const httplib::Request& req) {
  auto at = query(req, "at");
  if (!at) return std::nullopt;
  try {
    return static_cast<EventId>(std::stoull(*at));
  } catch (const std::exception&) {
    fail(ErrorCode::kInvalidArgument, "'at' must be an event id");
  }
}

std::optional<Mask> body_mask(const json& body) {
  if (!body.contains("mask") || body.at("mask").is_null()) return std::nullopt;
  return mask_from_json(body.at("mask"));
}

Raster body_image(const json& body) {
  const auto bytes = base64_decode(body.at("image_png").get<std::string>());
  Raster img = decode_png({reinterpret_cast<const char*>(bytes.data()), bytes.size()});
  if (img.channels() == 3) return img;
  Raster rgb(img.width(), img.height(), 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) rgb.data()[i * 3 + c] = img.data()[i];
  }
  return rgb;
}

json violation_json(const pipeline::ViolationReport& v) {
  return json{{"violated", v.violated},
              {"changed_fraction", v.changed_fraction},
              {"max_delta", v.max_delta},
              {"offending_pixels", v.offending_mask.count()}};
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_png(httplib::Response& res, const Raster& image) { res.set_content(encode_png(image), "image/png"); }

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, json{{"error", code}, {"message", message}}, status);
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& ex) {
      send_error(res, http_status_for(ex.code()), error_code_name(ex.code()), ex.what());
    } catch (const json::exception& ex) {
      send_error(res, 400, error_code_name(ErrorCode::kInvalidArgument), ex.what());
    } catch (const std::exception& ex) {
      send_error(res, 500, "Internal", ex.what());
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) { routes(); }

  void routes() {
    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      CreateSessionRequest r;
      r.mode = parse_entry_mode(body.value("mode", "prompt_first"));
      if (body.contains("prompt") && !body.at("prompt").is_null()) r.prompt = body.at("prompt").get<std::string>();
      if (body.contains("image_png")) r.image = body_image(body);
      r.n_viewpoints = body.value("n_viewpoints", gen::kDefaultViewpointCount);
      r.seed = body.value("seed", std::uint64_t{0});
      if (body.contains("canvas_size")) r.canvas_size = body.at("canvas_size").get<int>();
      const std::string id = service.create_session(r);
      send_json(res, service.summary(id), 201);
    }));

    server.Post("/sessions/import", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = service.import_session(req.body);
      send_json(res, service.summary(id), 201);
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, service.summary(req.matches[1]));
    }));

    server.Post(R"(/sessions/([^/]+)/edits)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const json body = parse_body(req);
      EditRequest r;
      r.branch = body.value("branch", std::string(kMainBranch));
      r.stage = parse_stage(body.at("stage").get<std::string>());
      r.tool = body.at("tool").get<std::string>();
      if (body.contains("payload")) r.payload = body.at("payload");
      r.mask = body_mask(body);
      if (body.contains("seed") && !body.at("seed").is_null()) r.seed = body.at("seed").get<std::uint64_t>();
      const EditResult out = service.submit_edit(id, r);
      send_json(res, json{{"event_id", out.event_id},
                          {"branch", out.branch},
                          {"violation", violation_json(out.violation)},
                          {"spillover", out.spillover},
                          {"preview", fmt::format("/sessions/{}/preview.png?at={}", id, out.event_id)}});
    }));

    server.Get(R"(/sessions/([^/]+)/preview\.png)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_png(res, service.preview(req.matches[1], query(req, "branch"), query_event(req)));
    }));

    server.Get(R"(/sessions/([^/]+)/stages/([A-Za-z]+)\.png)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const StageId stage = parse_stage(req.matches[2].str());
                 send_png(res, service.stage_image(req.matches[1], stage, query(req, "branch"), query_event(req)));
               }));

    server.Post(R"(/sessions/([^/]+)/locks)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const StageId stage = parse_stage(body.at("stage").get<std::string>());
      const EventId lock = service.add_lock(req.matches[1], body.value("branch", std::string(kMainBranch)), stage,
                                            body_mask(body));
      send_json(res, json{{"lock_id", lock}, {"event_id", lock}}, 201);
    }));

    server.Delete(R"(/sessions/([^/]+)/locks/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto lock_id = static_cast<std::uint64_t>(std::stoull(req.matches[2].str()));
      const EventId ev =
          service.remove_lock(req.matches[1], query(req, "branch").value_or(std::string(kMainBranch)), lock_id);
      send_json(res, json{{"event_id", ev}});
    }));

    server.Post(R"(/sessions/([^/]+)/branches)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const std::string name = body.at("name").get<std::string>();
      const EventId from = body.at("from_event").get<EventId>();
      service.create_branch(req.matches[1], from, name);
      send_json(res, json{{"name", name}, {"head", from}}, 201);
    }));

    server.Post(R"(/sessions/([^/]+)/revert)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const std::string branch = body.value("branch", std::string(kMainBranch));
      service.revert(req.matches[1], body.at("event_id").get<EventId>(), branch);
      send_json(res, json{{"branch", branch}, {"head", service.session(req.matches[1]).head(branch)}});
    }));

    server.Get(R"(/sessions/([^/]+)/export)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      res.set_header("Content-Disposition", fmt::format("attachment; filename=\"{}.creo.json\"", id));
      res.set_content(service.export_session(id), "application/json");
    }));
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) fail(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) fail(ErrorCode::kIo, fmt::format("cannot bind {}:{}", host, port));
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace creo::service
