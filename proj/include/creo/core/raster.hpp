#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace creo {

// Row-major normalized image grid with 1 or 3 interleaved channels.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, int channels, float fill = 0.0f);
  Raster(int width, int height, int channels, std::vector<float> data);

  static Raster filled(int width, int height, int channels, float value) {
    return Raster(width, height, channels, value);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  std::size_t index(int x, int y, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  bool same_shape(const Raster& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }
  bool same_size(int width, int height) const noexcept { return width_ == width && height_ == height; }

  // Bitwise comparison of every sample.
  friend bool operator==(const Raster& a, const Raster& b);

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

// Hard-edged binary coverage mask.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool value = false);
  Mask(int width, int height, std::vector<std::uint8_t> bits);

  static Mask full(int width, int height) { return Mask(width, height, true); }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return bits_.size(); }

  bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v = true) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
  bool test(std::size_t i) const { return bits_[i] != 0; }
  void set_index(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t count() const noexcept;
  bool any() const noexcept { return count() > 0; }
  bool same_size(int width, int height) const noexcept { return width_ == width && height_ == height; }
  bool same_size(const Raster& r) const noexcept { return same_size(r.width(), r.height()); }

  Mask operator|(const Mask& other) const;
  Mask operator&(const Mask& other) const;
  Mask operator~() const;
  bool intersects(const Mask& other) const;
  // True when every set pixel of this mask is also set in `other`.
  bool subset_of(const Mask& other) const;

  friend bool operator==(const Mask& a, const Mask& b) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

void require_same_shape(const Raster& a, const Raster& b, const char* what);
void require_mask_fits(const Mask& m, const Raster& r, const char* what);

// Samples outside [0,1] or non-finite break the raster contract.
bool samples_normalized(const Raster& r);

}  // namespace creo
