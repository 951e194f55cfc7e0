#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include "creo/core/codec.hpp"
#include "creo/core/payload.hpp"
#include "creo/metrics/metrics.hpp"
#include "creo/raster/ops.hpp"
#include "creo/service/service.hpp"
#include "support/test_support.hpp"

using namespace creo;
using namespace creo::service;
using namespace creo::test;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

IdGenerator counter_ids(std::string prefix = "sess") {
  auto n = std::make_shared<std::atomic<int>>(0);
  return [n, prefix] { return prefix + std::to_string(++*n); };
}

Clock fixed_clock() {
  return [] { return std::string("2026-03-04T05:06:07.000Z"); };
}

ServiceConfig small_config(int canvas = 32) {
  ServiceConfig c;
  c.canvas_size = canvas;
  return c;
}

std::unique_ptr<Service> make_service(ServiceConfig c = small_config()) {
  return std::make_unique<Service>(std::move(c), nullptr, fixed_clock(), counter_ids());
}

std::string prompt_session(Service& svc, int n = 6, std::uint64_t seed = 3) {
  CreateSessionRequest r;
  r.prompt = "a cat on a sofa";
  r.n_viewpoints = n;
  r.seed = seed;
  return svc.create_session(r);
}

EditRequest edit(StageId stage, std::string tool, json payload = json::object(), std::optional<Mask> mask = std::nullopt) {
  EditRequest r;
  r.stage = stage;
  r.tool = std::move(tool);
  r.payload = std::move(payload);
  r.mask = std::move(mask);
  return r;
}

// Fresh temp directory removed at scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("creo-test-" + random_session_id());
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

json archive_files(const std::string& archive) { return json::parse(archive).at("files"); }

std::string archive_file(const std::string& archive, const std::string& name) {
  const auto bytes = base64_decode(archive_files(archive).at(name).get<std::string>());
  return {bytes.begin(), bytes.end()};
}

}  // namespace

TEST_CASE("create_session") {
  auto svc = make_service();
  SUBCASE("prompt first attaches six candidates") {
    const std::string id = prompt_session(*svc);
    const Session s = svc->session(id);
    CHECK(s.event_count() == 1);
    CHECK(s.entry_mode() == EntryMode::kPromptFirst);
    const DecisionState st = svc->state(id, std::nullopt, std::nullopt);
    CHECK(st.candidates.size() == 6);
    CHECK(st.visited.empty());
    CHECK(svc->preview(id, std::nullopt, std::nullopt) == Raster(32, 32, 3, 1.0f));
  }
  SUBCASE("image first with uniform gray reconstructs within one quantum") {
    CreateSessionRequest r;
    r.mode = EntryMode::kImageFirst;
    r.image = Raster(20, 12, 3, 0.4f);
    const std::string id = svc->create_session(r);
    const DecisionState st = svc->state(id, std::nullopt, std::nullopt);
    CHECK(st.visited == std::set<StageId>{StageId::kComposition, StageId::kColor, StageId::kLighting});
    const Raster back = decode_png(encode_png(svc->preview(id, std::nullopt, std::nullopt)));
    for (std::size_t i = 0; i < back.data().size(); ++i) CHECK(std::abs(back.data()[i] - 0.4f) <= 1.0f / 255.0f);
  }
  SUBCASE("errors") {
    CreateSessionRequest r;
    CHECK_ERROR_CODE(svc->create_session(r), ErrorCode::kMissingPrompt);
    r.mode = EntryMode::kImageFirst;
    CHECK_ERROR_CODE(svc->create_session(r), ErrorCode::kMissingImage);
    CHECK(svc->session_ids().empty());
  }
}

TEST_CASE("submit_edit") {
  auto svc = make_service();
  const std::string id = prompt_session(*svc);
  SUBCASE("a stroke darkens exactly its pixels") {
    const Raster before = svc->preview(id, std::nullopt, std::nullopt);
    const auto res = svc->submit_edit(id, edit(StageId::kComposition, "draw", stroke_payload({{4, 5}, {20, 9}}, 1.5f)));
    CHECK(res.event_id == 2);
    CHECK(res.branch == "main");
    raster::Stroke s;
    s.points = {{4, 5}, {20, 9}};
    s.radius = 1.5f;
    const Mask cover = raster::stroke_coverage(32, 32, s);
    for (std::size_t i = 0; i < cover.pixel_count(); ++i)
      for (int c = 0; c < 3; ++c) CHECK(res.preview.data()[i * 3 + c] == (cover.test(i) ? 0.0f : before.data()[i * 3 + c]));
    CHECK_FALSE(res.violation.violated);
  }
  SUBCASE("mock colour fill reports no violation") {
    svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 0}}));
    svc->submit_edit(id, edit(StageId::kColor, "palette_editor", {{"palette", {{{"rgb", {0.2, 0.5, 0.9}}, {"label", "sky"}}}}}));
    const auto res = svc->submit_edit(id, edit(StageId::kColor, "ai_fill", {{"color", 0}}, rect_mask(32, 32, 0, 0, 15, 15)));
    CHECK_FALSE(res.violation.violated);
    CHECK(res.violation.changed_fraction == 0.0);
    const Session s = svc->session(id);
    CHECK(s.event(res.event_id).payload.at("instruction") == "fill:0");
  }
  SUBCASE("strokes under a blurring style stay in scope") {
    svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 1}}));
    for (const char* preset : {"pencil", "watercolor", "digital-paint"}) {
      svc->submit_edit(id, edit(StageId::kStyle, "preset_picker", {{"preset", preset}}));
      const auto res = svc->submit_edit(id, edit(StageId::kComposition, "draw", stroke_payload({{3, 20}, {28, 22}}, 1.5f)));
      CHECK_MESSAGE(!res.violation.violated, preset);
      CHECK_FALSE(svc->submit_edit(id, edit(StageId::kColor, "brush_fill", {{"rgb", {0.9, 0.1, 0.1}}, {"points", {{8, 8}}}, {"radius", 3}}))
                      .violation.violated);
    }
  }
  SUBCASE("fill on Lighting is a tool/stage mismatch") {
    CHECK_ERROR_CODE(svc->submit_edit(id, edit(StageId::kLighting, "fill", {{"color", 0}})), ErrorCode::kToolStageMismatch);
  }
  SUBCASE("unknown session, branch and tool") {
    CHECK_ERROR_CODE(svc->submit_edit("nope", edit(StageId::kComposition, "erase")), ErrorCode::kUnknownSession);
    EditRequest r = edit(StageId::kComposition, "erase", json::object(), Mask::full(32, 32));
    r.branch = "ghost";
    CHECK_ERROR_CODE(svc->submit_edit(id, r), ErrorCode::kUnknownBranch);
    CHECK_ERROR_CODE(svc->submit_edit(id, edit(StageId::kComposition, "smudge")), ErrorCode::kUnknownTool);
  }
  SUBCASE("locked stage") {
    svc->add_lock(id, "main", StageId::kLighting, std::nullopt);
    CHECK_ERROR_CODE(svc->submit_edit(id, edit(StageId::kLighting, "vibe_preset", {{"preset", "sunset"}})), ErrorCode::kStageLocked);
  }
  SUBCASE("failed edits leave the session untouched") {
    const Session before = svc->session(id);
    const DecisionState head = svc->state(id, std::nullopt, std::nullopt);
    CHECK_THROWS(svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 99}})));
    CHECK_THROWS(svc->submit_edit(id, edit(StageId::kColor, "ai_fill", {{"color", 3}}, Mask::full(32, 32))));
    CHECK_THROWS(svc->submit_edit(id, edit(StageId::kComposition, "draw", {{"radius", 1}})));
    CHECK_THROWS(svc->submit_edit(id, edit(StageId::kComposition, "erase", json::object(), Mask(4, 4))));
    const Session after = svc->session(id);
    CHECK(after.event_count() == before.event_count());
    CHECK(after.journal() == before.journal());
    CHECK(svc->state(id, std::nullopt, std::nullopt) == head);
  }
  SUBCASE("vibe preset stores its light rig") {
    const auto res = svc->submit_edit(id, edit(StageId::kLighting, "vibe_preset", {{"preset", "sunset"}}));
    const DecisionState st = svc->state(id, std::nullopt, res.event_id);
    CHECK(st.lights == gen::light_rig_preset("sunset"));
    CHECK(*st.shading == raster::shade_map(32, 32, gen::light_rig_preset("sunset")));
  }
  SUBCASE("regenerate replaces the candidates") {
    const auto before = svc->state(id, std::nullopt, std::nullopt).candidates;
    svc->submit_edit(id, edit(StageId::kViewpoint, "regenerate", {{"count", 4}}));
    const auto after = svc->state(id, std::nullopt, std::nullopt).candidates;
    CHECK(after.size() == 4);
    CHECK_FALSE(*after[0] == *before[0]);
  }
  SUBCASE("explicit seed is recorded") {
    EditRequest r = edit(StageId::kStyle, "preset_picker", {{"preset", "watercolor"}, {"params", {{"grain", 0.2}}}});
    r.seed = 1234;
    const auto res = svc->submit_edit(id, r);
    CHECK(svc->session(id).event(res.event_id).seed == 1234);
    CHECK(svc->state(id, std::nullopt, std::nullopt).style.seed == 1234);
  }
}

TEST_CASE("locks through the service") {
  auto svc = make_service();
  const std::string id = prompt_session(*svc);
  svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 1}}));
  svc->submit_edit(id, edit(StageId::kColor, "palette_editor", {{"palette", {{{"rgb", {0.9, 0.3, 0.1}}}}}}));
  svc->submit_edit(id, edit(StageId::kColor, "brush_fill", {{"color", 0}, {"points", {{0, 0}, {31, 31}}}, {"radius", 6}}));
  const Mask region = rect_mask(32, 32, 0, 0, 15, 31);
  const EventId lock_id = svc->add_lock(id, "main", StageId::kColor, region);
  const Raster chroma_before = *svc->state(id, std::nullopt, std::nullopt).chroma;

  // Colour edits over the whole canvas leave the locked half alone.
  svc->submit_edit(id, edit(StageId::kColor, "brush_fill", {{"rgb", {0.0, 1.0, 0.0}}, {"points", {{16, 16}}}, {"radius", 40}}));
  const Raster chroma_after = *svc->state(id, std::nullopt, std::nullopt).chroma;
  CHECK(all_equal_outside(chroma_after, chroma_before, ~region));
  CHECK_FALSE(chroma_after == chroma_before);

  CHECK_ERROR_CODE(svc->submit_edit(id, edit(StageId::kColor, "ai_fill", {{"color", 0}}, rect_mask(32, 32, 10, 10, 20, 20))),
                   ErrorCode::kLockedRegionRequested);
  CHECK_ERROR_CODE(svc->add_lock(id, "main", StageId::kStyle, region), ErrorCode::kInvalidArgument);

  const auto st = svc->state(id, std::nullopt, std::nullopt);
  REQUIRE(st.locks.region_locks.at(StageId::kColor).size() == 1);
  CHECK(st.locks.region_locks.at(StageId::kColor)[0].id == lock_id);

  svc->remove_lock(id, "main", lock_id);
  CHECK(svc->state(id, std::nullopt, std::nullopt).locks.empty());
  CHECK_ERROR_CODE(svc->remove_lock(id, "main", lock_id), ErrorCode::kUnknownLock);
}

TEST_CASE("branches, revert and viewpoint re-pick") {
  auto svc = make_service();
  const std::string id = prompt_session(*svc);
  svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 0}}));
  const auto e3 = svc->submit_edit(id, edit(StageId::kComposition, "draw", stroke_payload({{3, 3}}, 2))).event_id;
  const auto e4 = svc->submit_edit(id, edit(StageId::kComposition, "draw", stroke_payload({{20, 20}}, 2))).event_id;

  SUBCASE("revert moves the head") {
    svc->revert(id, e3, "main");
    CHECK(svc->session(id).head("main") == e3);
    CHECK(svc->preview(id, std::nullopt, std::nullopt) == svc->preview(id, std::nullopt, e3));
    const auto e5 = svc->submit_edit(id, edit(StageId::kComposition, "erase", json::object(), rect_mask(32, 32, 0, 0, 5, 5))).event_id;
    CHECK(svc->session(id).event(e5).parent_id == e3);
    CHECK(svc->session(id).has_event(e4));
    CHECK_ERROR_CODE(svc->revert(id, 99, "main"), ErrorCode::kUnknownEvent);
  }
  SUBCASE("branch isolation") {
    svc->create_branch(id, e3, "alt");
    CHECK(svc->active_branch(id) == "alt");
    const Raster main_before = svc->preview(id, std::string("main"), std::nullopt);
    EditRequest r = edit(StageId::kLighting, "vibe_preset", {{"preset", "noon"}});
    r.branch = "alt";
    svc->submit_edit(id, r);
    CHECK(svc->preview(id, std::string("main"), std::nullopt) == main_before);
    CHECK_FALSE(svc->preview(id, std::string("alt"), std::nullopt) == main_before);
    CHECK_ERROR_CODE(svc->create_branch(id, e3, "alt"), ErrorCode::kDuplicateBranchName);
  }
  SUBCASE("picking another viewpoint later branches") {
    const auto res = svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 3}}));
    CHECK(res.branch == "viewpoint-5");
    const Session s = svc->session(id);
    CHECK(s.head("main") == e4);
    CHECK(s.head("viewpoint-5") == res.event_id);
    CHECK(s.event(res.event_id).parent_id == e4);
    CHECK(svc->active_branch(id) == "viewpoint-5");
    CHECK(*svc->state(id, std::nullopt, std::nullopt).composition == *svc->state(id, std::nullopt, 1).candidates[3]);
  }
}

TEST_CASE("export and import") {
  auto svc = make_service();
  const std::string id = prompt_session(*svc);
  SUBCASE("fresh export holds one event") {
    const std::string a = svc->export_session(id);
    CHECK(events_from_ndjson(archive_file(a, "events.ndjson")).size() == 1);
    for (const char* f : {"events.ndjson", "meta.json", "layers/Composition.png", "layers/Color.png", "layers/Lighting.png",
                          "layers/Style.json", "preview.png", "actions.ndjson"})
      CHECK(archive_files(a).contains(f));
  }
  SUBCASE("round trip, quantized preview and idempotence") {
    svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 2}}));
    svc->submit_edit(id, edit(StageId::kLighting, "vibe_preset", {{"preset", "sunset"}}));
    svc->submit_edit(id, edit(StageId::kStyle, "preset_picker", {{"preset", "watercolor"}, {"params", {{"grain", 0.15}}}}));
    const std::string a = svc->export_session(id);
    CHECK(a == svc->export_session(id));
    const Raster head = svc->preview(id, std::nullopt, std::nullopt);
    CHECK(decode_png(archive_file(a, "preview.png")) == quantize(head));

    auto other = std::make_unique<Service>(small_config(), nullptr, fixed_clock(), counter_ids("other"));
    const std::string imported = other->import_session(a);
    CHECK(imported == id);
    CHECK(other->preview(imported, std::nullopt, std::nullopt) == head);
    CHECK(other->session(imported).journal() == svc->session(id).journal());
    CHECK(other->export_session(imported) == a);

    // Importing into a service that already has the id picks a new one.
    const std::string again = svc->import_session(a);
    CHECK(again != id);
    CHECK(svc->preview(again, std::nullopt, std::nullopt) == head);
  }
  SUBCASE("bad archives") {
    CHECK_ERROR_CODE(svc->import_session("not json"), ErrorCode::kInvalidArgument);
    CHECK_ERROR_CODE(svc->import_session("{\"format\":\"zip\"}"), ErrorCode::kInvalidArgument);
    CHECK_ERROR_CODE(svc->export_session("nope"), ErrorCode::kUnknownSession);
  }
}

TEST_CASE("mechanical action log") {
  auto svc = make_service();
  const std::string id = prompt_session(*svc);
  svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 0}}));
  svc->submit_edit(id, edit(StageId::kComposition, "draw", stroke_payload({{3, 3}}, 2)));
  svc->add_lock(id, "main", StageId::kComposition, std::nullopt);
  svc->submit_edit(id, edit(StageId::kLighting, "vibe_preset", {{"preset", "overcast"}}));
  svc->revert(id, 3, "main");
  svc->create_branch(id, 2, "b");

  const std::string log = action_log_ndjson(svc->session(id));
  std::vector<json> lines;
  std::istringstream in(log);
  for (std::string l; std::getline(in, l);) lines.push_back(json::parse(l));
  REQUIRE(lines.size() == 6);
  const std::vector<std::string> types = {"generate", "evaluate", "construct", "refine", "generate", "refine"};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CHECK(lines[i].at("action_type") == types[i]);
    CHECK(lines[i].at("index") == static_cast<int>(i + 1));
    CHECK(lines[i].at("intent").is_null());
    CHECK(lines[i].at("agency").is_null());
    CHECK(lines[i].at("direction_change") == false);
    CHECK(lines[i].at("annotation") == "mechanical");
    CHECK(lines[i].at("condition") == "creo");
  }
  CHECK(lines[4].at("iteration_id") == 1);
  CHECK(lines[5].at("iteration_id") == 2);
  CHECK(lines[5].at("tool") == "revert");

  SUBCASE("a revert after a violated edit is a repair") {
    Session s = make_prompt_session(8, 8);
    s = append_event(s, make_edit(2, 1, StageId::kComposition, "erase", json::object(), Mask::full(8, 8)), true);
    s = revert_to(s, 1);
    const std::string l = action_log_ndjson(s, "creo");
    std::istringstream is(l);
    std::vector<json> rs;
    for (std::string line; std::getline(is, line);) rs.push_back(json::parse(line));
    REQUIRE(rs.size() == 3);
    CHECK(rs[1].at("invariant_violation") == true);
    CHECK(rs[2].at("action_type") == "repair");
  }
  SUBCASE("annotated logs are accepted by the metrics parser") {
    std::string annotated;
    std::istringstream is(log);
    for (std::string line; std::getline(is, line);) {
      json j = json::parse(line);
      j["intent"] = "on_intent";
      j["agency"] = "user_driven";
      annotated += j.dump() + "\n";
    }
    const auto parsed = metrics::parse_action_log(annotated);
    CHECK(parsed.size() == 6);
    CHECK_ERROR_CODE(metrics::parse_action_log(log), ErrorCode::kMissingField);
  }
}

TEST_CASE("persistence under data_dir") {
  TempDir dir;
  ServiceConfig c = small_config();
  c.data_dir = dir.path;
  std::string id;
  Raster head;
  {
    auto svc = make_service(c);
    id = prompt_session(*svc);
    svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 1}}));
    svc->create_branch(id, 1, "b");
    svc->revert(id, 1, "main");
    head = svc->preview(id, std::string("main"), std::nullopt);
    CHECK(fs::exists(dir.path / "sessions" / id / "events.ndjson"));
    CHECK(fs::exists(dir.path / "sessions" / id / "meta.json"));
  }
  auto reloaded = make_service(c);
  REQUIRE(reloaded->session_ids() == std::vector<std::string>{id});
  CHECK(reloaded->preview(id, std::string("main"), std::nullopt) == head);
  CHECK(reloaded->session(id).has_branch("b"));
  CHECK(reloaded->active_branch(id) == "main");
}

TEST_CASE("serialized writes: concurrent edits equal some sequential order") {
  auto svc = make_service();
  const std::string id = prompt_session(*svc);
  const EditRequest a = edit(StageId::kComposition, "draw", stroke_payload({{2, 2}, {30, 2}}, 1));
  const EditRequest b = edit(StageId::kColor, "brush_fill", {{"rgb", {1.0, 0.0, 0.0}}, {"points", {{16, 16}}}, {"radius", 5}});
  std::thread ta([&] { svc->submit_edit(id, a); });
  std::thread tb([&] { svc->submit_edit(id, b); });
  ta.join();
  tb.join();
  const Session s = svc->session(id);
  CHECK(s.event_count() == 3);
  CHECK(s.event(3).parent_id == 2);
  const Raster got = svc->preview(id, std::nullopt, std::nullopt);

  Raster expect_ab, expect_ba;
  for (int order = 0; order < 2; ++order) {
    auto ref = make_service();
    const std::string rid = prompt_session(*ref);
    ref->submit_edit(rid, order == 0 ? a : b);
    ref->submit_edit(rid, order == 0 ? b : a);
    (order == 0 ? expect_ab : expect_ba) = ref->preview(rid, std::nullopt, std::nullopt);
  }
  CHECK((got == expect_ab || got == expect_ba));

  SUBCASE("many writers") {
    std::vector<std::thread> ts;
    for (int k = 0; k < 8; ++k)
      ts.emplace_back([&, k] { svc->submit_edit(id, edit(StageId::kComposition, "draw", stroke_payload({{float(k * 3), 10}}, 1))); });
    for (auto& t : ts) t.join();
    const Session s2 = svc->session(id);
    CHECK(s2.event_count() == 11);
    for (EventId e = 2; e <= 11; ++e) CHECK(s2.event(e).parent_id == e - 1);
  }
}

TEST_CASE("config") {
  ServiceConfig c;
  CHECK_NOTHROW(c.validate());
  c.backend = "remote";
  CHECK_ERROR_CODE(c.validate(), ErrorCode::kInvalidArgument);
  c.backend_url = "http://localhost:1/x";
  CHECK_NOTHROW(c.validate());
  CHECK_ERROR_CODE(ServiceConfig::from_json(json{{"canvas_size", "big"}}), ErrorCode::kInvalidArgument);
  const auto j = ServiceConfig::from_json(json{{"listen_address", "0.0.0.0:9000"}, {"canvas_size", 256}, {"violation_tau", 0.01}});
  CHECK(j.listen_address == "0.0.0.0:9000");
  CHECK(j.canvas_size == 256);
  CHECK(j.violation_tau == 0.01);
  CHECK(ServiceConfig{}.canvas_size == 512);
  CHECK(ServiceConfig{}.violation_tau == 1.0 / 255.0);

  SUBCASE("environment overrides") {
    TempDir dir;
    const fs::path file = dir.path / "c.json";
    write_file(file, R"({"backend": "remote", "backend_url": "http://a/b"})");
    ::setenv("CREO_BACKEND_URL", "http://override:1/gen", 1);
    ::setenv("CREO_DATA_DIR", dir.path.c_str(), 1);
    const auto loaded = load_config(file);
    ::unsetenv("CREO_BACKEND_URL");
    ::unsetenv("CREO_DATA_DIR");
    CHECK(loaded.backend == "remote");
    CHECK(loaded.backend_url == std::optional<std::string>("http://override:1/gen"));
    CHECK(loaded.data_dir == dir.path);
  }
}

TEST_CASE("http status mapping and ids") {
  CHECK(http_status_for(ErrorCode::kUnknownSession) == 404);
  CHECK(http_status_for(ErrorCode::kStageLocked) == 409);
  CHECK(http_status_for(ErrorCode::kBackendUnavailable) == 503);
  CHECK(http_status_for(ErrorCode::kToolStageMismatch) == 400);
  CHECK(valid_session_id(random_session_id()));
  CHECK_FALSE(valid_session_id("../etc"));
  CHECK_FALSE(valid_session_id(""));
  CHECK_FALSE(valid_session_id(std::string(65, 'a')));
}

TEST_CASE("render_event_log") {
  auto svc = make_service();
  const std::string id = prompt_session(*svc);
  svc->submit_edit(id, edit(StageId::kViewpoint, "pick_candidate", {{"index", 4}}));
  svc->submit_edit(id, edit(StageId::kStyle, "preset_picker", {{"preset", "pencil"}}));
  const std::string log = events_to_ndjson(svc->session(id).events());
  CHECK(render_event_log(log, std::nullopt) == svc->preview(id, std::nullopt, std::nullopt));
  CHECK(render_event_log(log, 2) == svc->preview(id, std::nullopt, 2));
  CHECK_ERROR_CODE(render_event_log("", std::nullopt), ErrorCode::kInvalidArgument);
  CHECK_ERROR_CODE(render_event_log(log, 17), ErrorCode::kUnknownEvent);
}
