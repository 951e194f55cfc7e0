#include <fmt/format.h>
#include <httplib.h>

#include <nlohmann/json.hpp>
#include <random>

#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"
#include "creo/gen/generators.hpp"

namespace creo::gen {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) fail(ErrorCode::kInvalidArgument, "backend url needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string fresh_idempotency_key() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  return fmt::format("{:016x}{:016x}", rng(), rng());
}

Raster to_channels(Raster r, int channels) {
  if (r.channels() == channels) return r;
  Raster out(r.width(), r.height(), channels);
  for (std::size_t i = 0; i < r.pixel_count(); ++i) {
    if (channels == 1) {
      const auto px = r.data().subspan(i * 3, 3);
      out.data()[i] = (px[0] + px[1] + px[2]) / 3.0f;
    } else {
      for (int c = 0; c < 3; ++c) out.data()[i * 3 + c] = r.data()[i];
    }
  }
  return out;
}

class Poster {
 public:
  explicit Poster(const RemoteConfig& config) : config_(config), endpoint_(split_url(config.url)) {}

  // One logical request; each attempt carries a new idempotency key. Any
  // transport, status or decode failure counts as a failed attempt.
  template <typename Decode>
  auto post(const httplib::MultipartFormDataItems& items, Decode&& decode) {
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      httplib::Client client(endpoint_.origin);
      client.set_connection_timeout(config_.timeout);
      client.set_read_timeout(config_.timeout);
      client.set_write_timeout(config_.timeout);
      const httplib::Headers headers = {{"Idempotency-Key", fresh_idempotency_key()}};
      auto res = client.Post(endpoint_.path, headers, items);
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = fmt::format("status {}", res->status);
        continue;
      }
      try {
        return decode(nlohmann::json::parse(res->body));
      } catch (const std::exception& ex) {
        last_error = std::string("bad response: ") + ex.what();
      }
    }
    fail(ErrorCode::kBackendUnavailable,
         fmt::format("remote backend failed after {} attempts ({})", config_.retries + 1, last_error));
  }

 private:
  const RemoteConfig& config_;
  Endpoint endpoint_;
};

httplib::MultipartFormData text_part(std::string name, std::string value) {
  return {std::move(name), std::move(value), "", "text/plain"};
}

httplib::MultipartFormData png_part(std::string name, std::string bytes) {
  std::string filename = name + ".png";
  return {std::move(name), std::move(bytes), std::move(filename), "image/png"};
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) { split_url(config_.url); }

std::vector<Raster> RemoteBackend::viewpoints(const std::string& prompt, int count, std::uint64_t seed, int width,
                                              int height) {
  const httplib::MultipartFormDataItems items = {
      text_part("kind", "viewpoints"),          text_part("prompt", prompt),
      text_part("count", std::to_string(count)), text_part("seed", std::to_string(seed)),
      text_part("width", std::to_string(width)), text_part("height", std::to_string(height)),
  };
  return Poster(config_).post(items, [](const nlohmann::json& j) {
    std::vector<Raster> out;
    for (const auto& c : j.at("candidates_png")) {
      const auto bytes = base64_decode(c.get<std::string>());
      out.push_back(to_channels(decode_png({reinterpret_cast<const char*>(bytes.data()), bytes.size()}), 1));
    }
    return out;
  });
}

Diff RemoteBackend::propose(const GenerationRequest& request, const Mask& effective) {
  const PromptBundle bundle = build_prompt(request);
  httplib::MultipartFormDataItems items = {
      text_part("kind", "stage_edit"),
      text_part("stage", std::string(stage_name(request.stage))),
      text_part("instruction", request.instruction),
      text_part("seed", std::to_string(request.seed)),
      text_part("system_text", bundle.system_text),
      text_part("stage_text", bundle.stage_text),
      text_part("lock_description", bundle.lock_description),
      png_part("mask", encode_mask_png(effective)),
  };
  for (const auto& [name, image] : bundle.reference_images) items.push_back(png_part(name, encode_png(image)));
  if (request.scribble) items.push_back(png_part("scribble", encode_mask_png(*request.scribble)));

  const int channels = request.stage == StageId::kColor || request.stage == StageId::kStyle ? 3 : 1;
  return Poster(config_).post(items, [&](const nlohmann::json& j) {
    const auto patch = base64_decode(j.at("patch_png").get<std::string>());
    const auto mask = base64_decode(j.at("mask_png").get<std::string>());
    Diff d;
    d.target_stage = request.stage;
    d.patch = to_channels(decode_png({reinterpret_cast<const char*>(patch.data()), patch.size()}), channels);
    d.mask = decode_mask_png({reinterpret_cast<const char*>(mask.data()), mask.size()});
    return d;
  });
}

}  // namespace creo::gen
