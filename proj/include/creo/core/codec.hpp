#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "creo/core/raster.hpp"

namespace creo {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::string base64_encode(std::string_view bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Lossless raster transport: float32 little-endian samples, zlib-deflated,
// base64 text. Used for payloads that must replay bit-exactly.
std::string encode_raster_f32(const Raster& r);
Raster decode_raster_f32(std::string_view text, int width, int height, int channels);

// Row-major bit-packed (MSB first) mask, base64 text.
std::string encode_mask_bits(const Mask& m);
Mask decode_mask_bits(std::string_view text, int width, int height);

// Stroke points as float32 little-endian (x, y) pairs, base64 text.
struct Point2 {
  float x = 0.0f;
  float y = 0.0f;
  friend bool operator==(const Point2&, const Point2&) = default;
};
std::string encode_points(std::span<const Point2> points);
std::vector<Point2> decode_points(std::string_view text);

// 8-bit PNG. Writes quantize with round(v*255); reads map q -> q/255.
std::string encode_png(const Raster& r);
std::string encode_mask_png(const Mask& m);
Raster decode_png(std::string_view bytes);
// Pixels >= 128 (first channel) are set.
Mask decode_mask_png(std::string_view bytes);

std::uint8_t quantize8(float v);
Raster quantize(const Raster& r);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace creo
