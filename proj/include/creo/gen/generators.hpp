#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "creo/core/raster.hpp"
#include "creo/core/types.hpp"

namespace creo::gen {

// Mask-bounded patch for one stage layer. Patch values outside `mask` are
// ignored by apply_diff.
struct Diff {
  Mask mask;
  Raster patch;
  StageId target_stage = StageId::kComposition;
  // Pixels the backend proposed outside the effective mask; dropped on clip.
  std::size_t spillover = 0;
};

struct GenerationRequest {
  DecisionState state;
  StageId stage = StageId::kComposition;
  std::string instruction;
  std::optional<Mask> mask;      // nullopt: whole canvas minus locks
  std::optional<Mask> scribble;  // fill seed; defaults to `mask`
  std::uint64_t seed = 0;
};

struct PromptBundle {
  std::string system_text;
  std::string stage_text;
  std::string lock_description;
  std::vector<std::pair<std::string, Raster>> reference_images;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual std::vector<Raster> viewpoints(const std::string& prompt, int count, std::uint64_t seed, int width,
                                         int height) = 0;
  // Proposes a patch for the request. stage_edit clips it afterwards, so a
  // backend may return support outside `effective_mask`.
  virtual Diff propose(const GenerationRequest& request, const Mask& effective_mask) = 0;
};

// Pure, reentrant procedural backend. Every output is a function of the
// request fields and seed.
class MockBackend final : public Backend {
 public:
  std::string name() const override { return "mock"; }
  std::vector<Raster> viewpoints(const std::string& prompt, int count, std::uint64_t seed, int width,
                                 int height) override;
  Diff propose(const GenerationRequest& request, const Mask& effective_mask) override;
};

struct RemoteConfig {
  std::string url;  // http(s)://host[:port]/path
  std::chrono::seconds timeout{60};
  int retries = 2;
};

// HTTP adapter: multipart POST of the prompt bundle and PNG attachments.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteConfig config);
  std::string name() const override { return "remote"; }
  std::vector<Raster> viewpoints(const std::string& prompt, int count, std::uint64_t seed, int width,
                                 int height) override;
  Diff propose(const GenerationRequest& request, const Mask& effective_mask) override;

 private:
  RemoteConfig config_;
};

std::unique_ptr<Backend> make_backend(const std::string& kind, const std::optional<std::string>& url);

inline constexpr int kDefaultViewpointCount = 6;

std::vector<Raster> generate_viewpoints(const std::string& prompt, int count, std::uint64_t seed, int width = 512,
                                        int height = 512);
std::vector<Raster> generate_viewpoints(Backend& backend, const std::string& prompt, int count, std::uint64_t seed,
                                        int width, int height);

// Request mask (or the full canvas) minus every lock on the stage's layer.
// Throws StageLocked / LockedRegionRequested / InvalidArgument.
Mask effective_mask(const GenerationRequest& request);

Diff stage_edit(const GenerationRequest& request, Backend& backend);

Raster apply_diff(const Raster& layer, const Diff& diff);

PromptBundle build_prompt(const GenerationRequest& request);

// Named light rigs for the "vibe:<preset>" instruction.
std::vector<LightSpec> light_rig_preset(const std::string& name);
const std::vector<std::string>& light_rig_names();

}  // namespace creo::gen
