#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "creo/core/codec.hpp"
#include "creo/core/raster.hpp"
#include "creo/core/types.hpp"

// Deterministic image primitives behind every stage tool. Pixel centres sit
// on integer coordinates: pixel (x, y) is the point (x, y).
namespace creo::raster {

struct Stroke {
  enum class Mode { kDraw, kErase };

  std::vector<Point2> points;
  float radius = 1.0f;
  float ink = 1.0f;
  Mode mode = Mode::kDraw;
};

// Pixels whose centre lies within stroke.radius of the polyline (inclusive).
Mask stroke_coverage(int width, int height, const Stroke& stroke);

// Hard round brush. Draw max-blends stroke.ink; erase clears covered pixels.
Raster render_stroke(const Raster& canvas, const Stroke& stroke);

Raster erase_region(const Raster& canvas, const Mask& mask);

// x' = m[0] x + m[1] y + m[2];  y' = m[3] x + m[4] y + m[5]
struct AffineTransform {
  std::array<double, 6> m{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};

  static AffineTransform translation(double dx, double dy) { return {{1.0, 0.0, dx, 0.0, 1.0, dy}}; }
  double determinant() const { return m[0] * m[4] - m[1] * m[3]; }
};

// Cuts the masked pixels, warps them by `t` (nearest neighbour) and
// max-blends them back. Destinations off the canvas are dropped.
Raster lasso_transform(const Raster& canvas, const Mask& mask, const AffineTransform& t);

Raster masked_composite(const Raster& base, const Raster& patch, const Mask& mask);

inline constexpr float kFillInkThreshold = 0.5f;

// Flood-fills (4-connected) each low-ink component of `sketch` touched by the
// scribble, writing color.rgb into a copy of `chroma`.
Raster palette_fill(const Raster& sketch, const Mask& scribble, const PaletteColor& color, const Raster& chroma);

// Pixels that palette_fill would recolour.
Mask fill_region(const Raster& sketch, const Mask& scribble);

Raster shade_map(int width, int height, std::span<const LightSpec> lights);

const std::vector<std::string>& style_presets();
bool is_registered_preset(const std::string& name);
Raster apply_style(const Raster& image, const StyleSpec& style);
// Neighbourhood radius of the preset's filter: a pixel of the styled output
// depends on input pixels at most this far away (Chebyshev distance).
int style_footprint(const std::string& preset);

// Square (Chebyshev) dilation.
Mask dilate(const Mask& mask, int radius);

struct Decomposition {
  Raster composition;
  Raster chroma;
  Raster shading;
};

inline constexpr float kBlackCutoff = 1e-4f;
inline constexpr float kEdgeInkThreshold = 0.2f;

// Factorizes an RGB image into max-channel shading and chroma, and extracts
// an edge sketch from the shading.
Decomposition decompose_image(const Raster& image);

// Sobel gradient magnitude with clamp-to-edge borders (1-channel input).
Raster sobel_magnitude(const Raster& gray);

Raster box_blur3(const Raster& image);

// Zhang-Suen skeletonization of ink > 0.5. Only pixels inside `region` may be
// removed; removed pixels become 0, everything else is untouched.
Raster thin_strokes(const Raster& canvas, const Mask& region);

// Smooth seeded lattice noise in [-1, 1].
double value_noise(std::uint64_t seed, double x, double y, double cell);

}  // namespace creo::raster
