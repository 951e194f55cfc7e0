#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "creo/core/error.hpp"
#include "creo/core/event.hpp"
#include "creo/core/payload.hpp"
#include "creo/core/raster.hpp"
#include "creo/core/session.hpp"
#include "creo/gen/generators.hpp"

namespace creo::test {

inline std::filesystem::path fixture_path(const std::string& rel) {
  return std::filesystem::path(CREO_FIXTURE_DIR) / rel;
}

inline float uniform01(std::mt19937_64& rng) {
  return static_cast<float>(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

inline Raster random_raster(std::mt19937_64& rng, int w, int h, int ch) {
  Raster r(w, h, ch);
  for (auto& v : r.data()) v = uniform01(rng);
  return r;
}

inline Mask random_mask(std::mt19937_64& rng, int w, int h, double p = 0.5) {
  Mask m(w, h);
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < m.pixel_count(); ++i) m.set_index(i, coin(rng));
  return m;
}

inline Mask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
  Mask m(w, h);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) m.set(x, y);
  }
  return m;
}

inline EditEvent make_root_prompt(int w, int h, int n = 6, std::uint64_t seed = 7,
                                  const std::string& prompt = "a cat on a sofa") {
  EditEvent root;
  root.event_id = 1;
  root.stage = StageId::kViewpoint;
  root.tool = std::string(kRootTool);
  root.seed = seed;
  root.wall_time = "2026-01-01T00:00:00.000Z";
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& s : gen::generate_viewpoints(prompt, n, seed, w, h)) cands.push_back(payload::raster_to_json(s));
  root.payload = {{"mode", "prompt_first"}, {"prompt", prompt}, {"width", w}, {"height", h}, {"candidates", cands}};
  return root;
}

inline Session make_prompt_session(int w, int h, int n = 6, std::uint64_t seed = 7) {
  const std::string prompt = "a cat on a sofa";
  Session s("test", EntryMode::kPromptFirst, prompt, nullptr, w, h);
  return append_event(s, make_root_prompt(w, h, n, seed, prompt));
}

inline EditEvent make_edit(EventId id, std::optional<EventId> parent, StageId stage, const std::string& tool,
                           nlohmann::json payload = nlohmann::json::object(), std::optional<Mask> mask = std::nullopt,
                           const std::string& branch = std::string(kMainBranch)) {
  EditEvent e;
  e.event_id = id;
  e.parent_id = parent;
  e.branch = branch;
  e.stage = stage;
  e.tool = tool;
  e.payload = std::move(payload);
  e.mask = std::move(mask);
  e.seed = id * 1000 + 1;
  e.wall_time = "2026-01-01T00:00:00.000Z";
  return e;
}

inline nlohmann::json stroke_payload(std::initializer_list<std::pair<float, float>> pts, float radius, float ink = 1.0f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [x, y] : pts) arr.push_back({x, y});
  return {{"points", arr}, {"radius", radius}, {"ink", ink}};
}

inline bool all_equal_outside(const Raster& a, const Raster& b, const Mask& inside) {
  for (std::size_t i = 0; i < inside.pixel_count(); ++i) {
    if (inside.test(i)) continue;
    for (int c = 0; c < a.channels(); ++c) {
      const std::size_t k = i * static_cast<std::size_t>(a.channels()) + static_cast<std::size_t>(c);
      if (a.data()[k] != b.data()[k]) return false;
    }
  }
  return true;
}

}  // namespace creo::test

// Expects `expr` to throw creo::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected_code)                                                   \
  do {                                                                                          \
    bool creo_threw_ = false;                                                                   \
    try {                                                                                       \
      (void)(expr);                                                                             \
    } catch (const ::creo::Error& creo_err_) {                                                  \
      creo_threw_ = true;                                                                       \
      CHECK_MESSAGE(creo_err_.code() == (expected_code), ::creo::error_code_name(creo_err_.code())); \
    }                                                                                           \
    CHECK_MESSAGE(creo_threw_, "expected " #expected_code);                                     \
  } while (false)
