#include "creo/core/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "creo/core/error.hpp"

namespace creo {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    fail(ErrorCode::kInvalidArgument,
         "raster dimensions must be >= 1, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Raster::Raster(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    fail(ErrorCode::kChannelMismatch, "raster must have 1 or 3 channels");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

Raster::Raster(int width, int height, int channels, std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    fail(ErrorCode::kChannelMismatch, "raster must have 1 or 3 channels");
  }
  if (data_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    fail(ErrorCode::kDimensionMismatch, "raster data length does not match width*height*channels");
  }
}

bool operator==(const Raster& a, const Raster& b) {
  if (!a.same_shape(b)) return false;
  // memcmp so that the comparison is bitwise (distinguishes -0.0f from 0.0f).
  return std::memcmp(a.data_.data(), b.data_.data(), a.data_.size() * sizeof(float)) == 0;
}

Mask::Mask(int width, int height, bool value) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * height, value ? 1 : 0);
}

Mask::Mask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::kDimensionMismatch, "mask data length does not match width*height");
  }
  for (auto& b : bits_) {
    if (b > 1) fail(ErrorCode::kInvalidArgument, "mask values must be 0 or 1");
  }
}

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Mask Mask::operator|(const Mask& other) const {
  if (!same_size(other.width_, other.height_)) fail(ErrorCode::kDimensionMismatch, "mask union");
  Mask out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | other.bits_[i];
  return out;
}

Mask Mask::operator&(const Mask& other) const {
  if (!same_size(other.width_, other.height_)) fail(ErrorCode::kDimensionMismatch, "mask intersection");
  Mask out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
  return out;
}

Mask Mask::operator~() const {
  Mask out = *this;
  for (auto& b : out.bits_) b = b ? 0 : 1;
  return out;
}

bool Mask::intersects(const Mask& other) const {
  if (!same_size(other.width_, other.height_)) fail(ErrorCode::kDimensionMismatch, "mask intersection");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && other.bits_[i]) return true;
  }
  return false;
}

bool Mask::subset_of(const Mask& other) const {
  if (!same_size(other.width_, other.height_)) fail(ErrorCode::kDimensionMismatch, "mask subset");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

void require_same_shape(const Raster& a, const Raster& b, const char* what) {
  if (!a.same_size(b.width(), b.height())) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + ": raster sizes differ");
  }
  if (a.channels() != b.channels()) {
    fail(ErrorCode::kChannelMismatch, std::string(what) + ": channel counts differ");
  }
}

void require_mask_fits(const Mask& m, const Raster& r, const char* what) {
  if (!m.same_size(r)) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + ": mask does not match raster size");
  }
}

bool samples_normalized(const Raster& r) {
  return std::all_of(r.data().begin(), r.data().end(),
                     [](float v) { return std::isfinite(v) && v >= 0.0f && v <= 1.0f; });
}

}  // namespace creo
