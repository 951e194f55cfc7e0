#include "creo/core/codec.hpp"

#include <png.h>
#include <sodium.h>
#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "creo/core/error.hpp"

namespace creo {

static_assert(std::endian::native == std::endian::little, "float payload codec assumes a little-endian host");

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  const std::size_t cap = sodium_base64_encoded_len(bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(cap, '\0');
  sodium_bin2base64(out.data(), cap, bytes.data(), bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::string base64_encode(std::string_view bytes) {
  return base64_encode(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), " \n\r\t", &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    fail(ErrorCode::kInvalidArgument, "malformed base64 payload");
  }
  out.resize(len);
  return out;
}

std::string encode_raster_f32(const Raster& r) {
  const auto samples = r.data();
  const auto* raw = reinterpret_cast<const Bytef*>(samples.data());
  const uLong raw_len = static_cast<uLong>(samples.size() * sizeof(float));
  uLongf packed_len = compressBound(raw_len);
  std::vector<std::uint8_t> packed(packed_len);
  if (compress2(packed.data(), &packed_len, raw, raw_len, Z_BEST_SPEED) != Z_OK) {
    fail(ErrorCode::kIo, "zlib compression failed");
  }
  packed.resize(packed_len);
  return base64_encode(packed);
}

Raster decode_raster_f32(std::string_view text, int width, int height, int channels) {
  const auto packed = base64_decode(text);
  std::vector<float> samples(static_cast<std::size_t>(width) * height * channels);
  uLongf raw_len = static_cast<uLongf>(samples.size() * sizeof(float));
  const uLongf expected = raw_len;
  if (uncompress(reinterpret_cast<Bytef*>(samples.data()), &raw_len, packed.data(),
                 static_cast<uLong>(packed.size())) != Z_OK ||
      raw_len != expected) {
    fail(ErrorCode::kInvalidArgument, "raster payload does not decode to the declared size");
  }
  return Raster(width, height, channels, std::move(samples));
}

std::string encode_mask_bits(const Mask& m) {
  std::vector<std::uint8_t> packed((m.pixel_count() + 7) / 8, 0);
  for (std::size_t i = 0; i < m.pixel_count(); ++i) {
    if (m.test(i)) packed[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return base64_encode(packed);
}

Mask decode_mask_bits(std::string_view text, int width, int height) {
  const auto packed = base64_decode(text);
  Mask m(width, height);
  if (packed.size() != (m.pixel_count() + 7) / 8) {
    fail(ErrorCode::kDimensionMismatch, "mask payload does not match declared size");
  }
  for (std::size_t i = 0; i < m.pixel_count(); ++i) {
    m.set_index(i, (packed[i / 8] & (0x80u >> (i % 8))) != 0);
  }
  return m;
}

std::string encode_points(std::span<const Point2> points) {
  std::vector<std::uint8_t> raw(points.size() * 2 * sizeof(float));
  std::memcpy(raw.data(), points.data(), raw.size());
  return base64_encode(raw);
}

std::vector<Point2> decode_points(std::string_view text) {
  const auto raw = base64_decode(text);
  if (raw.size() % (2 * sizeof(float)) != 0) fail(ErrorCode::kInvalidArgument, "point payload is not xy pairs");
  std::vector<Point2> pts(raw.size() / (2 * sizeof(float)));
  std::memcpy(pts.data(), raw.data(), raw.size());
  return pts;
}

std::uint8_t quantize8(float v) {
  const double clamped = std::clamp(static_cast<double>(v), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

Raster quantize(const Raster& r) {
  Raster out = r;
  for (float& v : out.data()) v = static_cast<float>(quantize8(v)) / 255.0f;
  return out;
}

namespace {

std::string write_png8(int width, int height, int channels, const std::vector<std::uint8_t>& pixels) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, pixels.data(), 0, nullptr)) {
    fail(ErrorCode::kIo, std::string("png encode: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    fail(ErrorCode::kIo, std::string("png encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

std::string encode_png(const Raster& r) {
  std::vector<std::uint8_t> px(r.data().size());
  std::transform(r.data().begin(), r.data().end(), px.begin(), quantize8);
  return write_png8(r.width(), r.height(), r.channels(), px);
}

std::string encode_mask_png(const Mask& m) {
  std::vector<std::uint8_t> px(m.pixel_count());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = m.test(i) ? 255 : 0;
  return write_png8(m.width(), m.height(), 1, px);
}

Raster decode_png(std::string_view bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    fail(ErrorCode::kIo, std::string("png decode: ") + image.message);
  }
  // Colour sources decode to RGB, everything else to gray; alpha is dropped
  // by compositing onto black, which is a no-op for opaque images.
  const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const int channels = colour ? 3 : 1;
  image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(image));
  png_color black{0, 0, 0};
  if (!png_image_finish_read(&image, &black, px.data(), 0, nullptr)) {
    fail(ErrorCode::kIo, std::string("png decode: ") + image.message);
  }
  std::vector<float> samples(px.size());
  std::transform(px.begin(), px.end(), samples.begin(),
                 [](std::uint8_t q) { return static_cast<float>(q) / 255.0f; });
  return Raster(static_cast<int>(image.width), static_cast<int>(image.height), channels, std::move(samples));
}

Mask decode_mask_png(std::string_view bytes) {
  const Raster r = decode_png(bytes);
  Mask m(r.width(), r.height());
  for (int y = 0; y < r.height(); ++y) {
    for (int x = 0; x < r.width(); ++x) m.set(x, y, r.at(x, y, 0) >= 128.0f / 255.0f);
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace creo
