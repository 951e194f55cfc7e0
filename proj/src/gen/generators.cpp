#include "creo/gen/generators.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "creo/core/error.hpp"
#include "creo/pipeline/stage_pipeline.hpp"
#include "creo/raster/ops.hpp"

namespace creo::gen {

namespace {

constexpr const char* kSystemText =
    "You edit one stage of a layered illustration. Change only the attributes marked editable, only inside the "
    "supplied mask, and return a patch image plus its support mask. Anything marked frozen must come back "
    "unchanged.";

const Raster& target_raster(const DecisionState& state, StageId stage) {
  switch (layer_of(stage)) {
    case LayerKind::kInk:
      return *state.composition;
    case LayerKind::kChroma:
      return *state.chroma;
    case LayerKind::kShading:
      return *state.shading;
    case LayerKind::kStyle:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "style stage has no raster layer");
}

std::string bbox_text(const Mask& m) {
  int x0 = m.width(), y0 = m.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.get(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return "empty";
  return fmt::format("x {}..{}, y {}..{}", x0, x1, y0, y1);
}

std::string join_attributes(const pipeline::AttributeSet& set) {
  std::string out;
  for (auto a : set) {
    if (!out.empty()) out += ", ";
    out += pipeline::attribute_name(a);
  }
  return out.empty() ? "none" : out;
}

}  // namespace

std::unique_ptr<Backend> make_backend(const std::string& kind, const std::optional<std::string>& url) {
  if (kind == "mock") return std::make_unique<MockBackend>();
  if (kind == "remote") {
    if (!url || url->empty()) fail(ErrorCode::kBackendUnavailable, "remote backend needs CREO_BACKEND_URL");
    return std::make_unique<RemoteBackend>(RemoteConfig{*url});
  }
  fail(ErrorCode::kInvalidArgument, "unknown backend '" + kind + "'");
}

std::vector<Raster> generate_viewpoints(const std::string& prompt, int count, std::uint64_t seed, int width,
                                        int height) {
  MockBackend mock;
  return generate_viewpoints(mock, prompt, count, seed, width, height);
}

std::vector<Raster> generate_viewpoints(Backend& backend, const std::string& prompt, int count, std::uint64_t seed,
                                        int width, int height) {
  if (prompt.empty()) fail(ErrorCode::kEmptyPrompt, "viewpoint prompt is empty");
  if (count < 1) fail(ErrorCode::kZeroCount, "need at least one viewpoint");
  if (width < 1 || height < 1) fail(ErrorCode::kInvalidArgument, "canvas must be at least 1x1");
  auto out = backend.viewpoints(prompt, count, seed, width, height);
  if (out.size() != static_cast<std::size_t>(count)) {
    fail(ErrorCode::kBackendUnavailable, "backend returned the wrong number of viewpoints");
  }
  for (const auto& r : out) {
    if (!r.same_size(width, height) || r.channels() != 1) {
      fail(ErrorCode::kBackendUnavailable, "backend viewpoint has the wrong shape");
    }
  }
  return out;
}

Mask effective_mask(const GenerationRequest& request) {
  const DecisionState& state = request.state;
  const int w = state.width();
  const int h = state.height();
  if (request.instruction.empty()) fail(ErrorCode::kInvalidArgument, "instruction is empty");
  if (request.mask && !request.mask->same_size(w, h)) fail(ErrorCode::kDimensionMismatch, "mask does not fit canvas");
  if (request.scribble && !request.scribble->same_size(w, h)) {
    fail(ErrorCode::kDimensionMismatch, "scribble does not fit canvas");
  }
  const LayerKind layer = layer_of(request.stage);
  if (pipeline::layer_fully_locked(state.locks, layer)) {
    fail(ErrorCode::kStageLocked, std::string(stage_name(request.stage)) + " is locked");
  }
  const Mask locked = pipeline::layer_lock_mask(state.locks, layer, w, h);
  if (request.mask && request.mask->intersects(locked)) {
    fail(ErrorCode::kLockedRegionRequested, "request mask overlaps a locked region");
  }
  const Mask base = request.mask ? *request.mask : Mask::full(w, h);
  Mask eff = base & ~locked;
  if (!eff.any()) {
    fail(request.mask ? ErrorCode::kInvalidArgument : ErrorCode::kLockedRegionRequested,
         request.mask ? "request mask is empty" : "every pixel of the layer is locked");
  }
  return eff;
}

Diff stage_edit(const GenerationRequest& request, Backend& backend) {
  if (request.stage == StageId::kViewpoint) {
    fail(ErrorCode::kUnknownInstruction, "viewpoint edits go through generate_viewpoints");
  }
  const Mask eff = effective_mask(request);
  Diff diff = backend.propose(request, eff);
  diff.target_stage = request.stage;

  const int w = request.state.width();
  const int h = request.state.height();
  const int channels = request.stage == StageId::kStyle ? 3 : target_raster(request.state, request.stage).channels();
  if (!diff.patch.same_size(w, h) || !diff.mask.same_size(w, h)) {
    fail(ErrorCode::kDimensionMismatch, "backend diff does not match the canvas");
  }
  if (diff.patch.channels() != channels) fail(ErrorCode::kChannelMismatch, "backend patch has the wrong channel count");

  const Mask clipped = diff.mask & eff;
  diff.spillover = diff.mask.count() - clipped.count();
  diff.mask = clipped;
  return diff;
}

Raster apply_diff(const Raster& layer, const Diff& diff) { return raster::masked_composite(layer, diff.patch, diff.mask); }

PromptBundle build_prompt(const GenerationRequest& request) {
  const DecisionState& state = request.state;
  const int w = state.width();
  const int h = state.height();
  const auto editable = pipeline::editable_attributes(request.stage);
  pipeline::AttributeSet frozen;
  for (auto a : pipeline::kAllAttributes) {
    if (!editable.contains(a)) frozen.insert(a);
  }

  PromptBundle b;
  b.system_text = kSystemText;
  b.stage_text = fmt::format(
      "Stage: {}\nEditable attributes: {}\nFrozen attributes (keep unchanged): {}\nInstruction: {}\n"
      "Canvas: {}x{}\nSeed: {}\n",
      stage_name(request.stage), join_attributes(editable), join_attributes(frozen), request.instruction, w, h,
      request.seed);

  std::string locks;
  std::string stage_locked;
  for (auto s : kAllStages) {
    if (state.locks.fully_locked(s)) stage_locked += (stage_locked.empty() ? "" : ", ") + std::string(stage_name(s));
  }
  locks += "Locked stages: " + (stage_locked.empty() ? std::string("none") : stage_locked) + "\n";
  for (const auto& [stage, regions] : state.locks.region_locks) {
    for (const auto& r : regions) {
      locks += fmt::format("Region lock #{} on {}: {} px, {}\n", r.id, stage_name(stage), r.mask.count(),
                           bbox_text(r.mask));
    }
  }
  const LayerKind layer = layer_of(request.stage);
  const std::size_t total = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (pipeline::layer_fully_locked(state.locks, layer)) {
    locks += fmt::format("Locked for {}: entire canvas ({} of {} px)\n", stage_name(request.stage), total, total);
  } else {
    const Mask locked = pipeline::layer_lock_mask(state.locks, layer, w, h);
    const std::size_t n = locked.count();
    locks += n == total ? fmt::format("Locked for {}: entire canvas ({} of {} px)\n", stage_name(request.stage), n, total)
                        : fmt::format("Locked for {}: {} of {} px ({})\n", stage_name(request.stage), n, total,
                                      bbox_text(locked));
  }
  b.lock_description = std::move(locks);

  b.reference_images.emplace_back("preview", pipeline::compose_preview(state));
  b.reference_images.emplace_back("layer", request.stage == StageId::kStyle ? pipeline::compose_unstyled(state)
                                                                            : target_raster(state, request.stage));
  return b;
}

}  // namespace creo::gen
