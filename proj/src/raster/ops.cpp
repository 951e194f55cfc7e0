#include "creo/raster/ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "creo/core/error.hpp"
#include "creo/core/hash.hpp"

namespace creo::raster {

namespace {

void require_single_channel(const Raster& r, const char* what) {
  if (r.channels() != 1) fail(ErrorCode::kChannelMismatch, std::string(what) + " expects a 1-channel raster");
}

double segment_distance_sq(double px, double py, const Point2& a, const Point2& b) {
  const double ax = a.x, ay = a.y;
  const double dx = static_cast<double>(b.x) - ax;
  const double dy = static_cast<double>(b.y) - ay;
  const double len_sq = dx * dx + dy * dy;
  double t = 0.0;
  if (len_sq > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len_sq, 0.0, 1.0);
  const double cx = ax + t * dx - px;
  const double cy = ay + t * dy - py;
  return cx * cx + cy * cy;
}

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

double param_or(const StyleSpec& style, const char* key, double fallback) {
  auto it = style.params.find(key);
  return it == style.params.end() ? fallback : it->second;
}

// Mean of the channels at every pixel, as a 1-channel raster.
Raster channel_mean(const Raster& image) {
  Raster out(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.at(x, y) = (image.at(x, y, 0) + image.at(x, y, 1) + image.at(x, y, 2)) / 3.0f;
    }
  }
  return out;
}

void add_grain(Raster& image, std::uint64_t seed, double amplitude, double cell) {
  if (amplitude == 0.0) return;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      // One noise sample per pixel shared by all channels keeps gray pixels gray.
      const double n = amplitude * value_noise(seed, x, y, cell);
      for (int c = 0; c < image.channels(); ++c) image.at(x, y, c) = clamp01(image.at(x, y, c) + n);
    }
  }
}

}  // namespace

Mask stroke_coverage(int width, int height, const Stroke& stroke) {
  if (stroke.points.empty()) fail(ErrorCode::kEmptyStroke, "stroke has no points");
  if (!(stroke.radius > 0.0f) || !std::isfinite(stroke.radius)) {
    fail(ErrorCode::kInvalidArgument, "stroke radius must be > 0");
  }
  Mask cover(width, height);
  const double r = stroke.radius;
  const double r_sq = r * r;
  const auto& pts = stroke.points;
  const std::size_t segments = pts.size() == 1 ? 1 : pts.size() - 1;
  for (std::size_t s = 0; s < segments; ++s) {
    const Point2& a = pts[s];
    const Point2& b = pts.size() == 1 ? pts[0] : pts[s + 1];
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (segment_distance_sq(x, y, a, b) <= r_sq) cover.set(x, y);
      }
    }
  }
  return cover;
}

Raster render_stroke(const Raster& canvas, const Stroke& stroke) {
  require_single_channel(canvas, "render_stroke");
  if (!(stroke.ink >= 0.0f && stroke.ink <= 1.0f)) fail(ErrorCode::kInvalidArgument, "stroke ink outside [0,1]");
  const Mask cover = stroke_coverage(canvas.width(), canvas.height(), stroke);
  Raster out = canvas;
  auto data = out.data();
  for (std::size_t i = 0; i < cover.pixel_count(); ++i) {
    if (!cover.test(i)) continue;
    data[i] = stroke.mode == Stroke::Mode::kDraw ? std::max(data[i], stroke.ink) : 0.0f;
  }
  return out;
}

Raster erase_region(const Raster& canvas, const Mask& mask) {
  require_single_channel(canvas, "erase_region");
  require_mask_fits(mask, canvas, "erase_region");
  Raster out = canvas;
  auto data = out.data();
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (mask.test(i)) data[i] = 0.0f;
  }
  return out;
}

Raster lasso_transform(const Raster& canvas, const Mask& mask, const AffineTransform& t) {
  require_single_channel(canvas, "lasso_transform");
  require_mask_fits(mask, canvas, "lasso_transform");
  const double det = t.determinant();
  if (!(std::abs(det) > 1e-9)) fail(ErrorCode::kSingularTransform, "lasso transform is not invertible");

  // Inverse of the linear part, then of the translation.
  const auto& m = t.m;
  const double ia = m[4] / det, ib = -m[1] / det;
  const double ic = -m[3] / det, id = m[0] / det;

  Raster out = erase_region(canvas, mask);
  const int w = canvas.width();
  const int h = canvas.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double rx = x - m[2];
      const double ry = y - m[5];
      const double sx = ia * rx + ib * ry;
      const double sy = ic * rx + id * ry;
      const auto src_x = static_cast<long long>(std::floor(sx + 0.5));
      const auto src_y = static_cast<long long>(std::floor(sy + 0.5));
      if (src_x < 0 || src_y < 0 || src_x >= w || src_y >= h) continue;
      const int ix = static_cast<int>(src_x);
      const int iy = static_cast<int>(src_y);
      if (!mask.get(ix, iy)) continue;
      out.at(x, y) = std::max(out.at(x, y), canvas.at(ix, iy));
    }
  }
  return out;
}

Raster masked_composite(const Raster& base, const Raster& patch, const Mask& mask) {
  require_same_shape(base, patch, "masked_composite");
  require_mask_fits(mask, base, "masked_composite");
  Raster out = base;
  const int ch = base.channels();
  auto dst = out.data();
  auto src = patch.data();
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (!mask.test(i)) continue;
    for (int c = 0; c < ch; ++c) dst[i * ch + c] = src[i * ch + c];
  }
  return out;
}

Mask fill_region(const Raster& sketch, const Mask& scribble) {
  require_single_channel(sketch, "palette_fill");
  require_mask_fits(scribble, sketch, "palette_fill");
  const int w = sketch.width();
  const int h = sketch.height();
  Mask filled(w, h);
  std::deque<std::pair<int, int>> queue;
  auto low = [&](int x, int y) { return sketch.at(x, y) <= kFillInkThreshold; };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (scribble.get(x, y) && low(x, y) && !filled.get(x, y)) {
        filled.set(x, y);
        queue.emplace_back(x, y);
      }
    }
  }
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k) {
      const int nx = x + kDx[k];
      const int ny = y + kDy[k];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      if (filled.get(nx, ny) || !low(nx, ny)) continue;
      filled.set(nx, ny);
      queue.emplace_back(nx, ny);
    }
  }
  return filled;
}

Raster palette_fill(const Raster& sketch, const Mask& scribble, const PaletteColor& color, const Raster& chroma) {
  if (chroma.channels() != 3) fail(ErrorCode::kChannelMismatch, "palette_fill expects a 3-channel chroma layer");
  if (!chroma.same_size(sketch.width(), sketch.height())) {
    fail(ErrorCode::kDimensionMismatch, "palette_fill: chroma does not match sketch");
  }
  validate_palette_color(color);
  const Mask region = fill_region(sketch, scribble);
  Raster out = chroma;
  auto data = out.data();
  for (std::size_t i = 0; i < region.pixel_count(); ++i) {
    if (!region.test(i)) continue;
    for (int c = 0; c < 3; ++c) data[i * 3 + c] = color.rgb[c];
  }
  return out;
}

Raster shade_map(int width, int height, std::span<const LightSpec> lights) {
  for (const auto& l : lights) validate_light(l);
  Raster out(width, height, 1);
  double ambient = 0.0;
  for (const auto& l : lights) {
    if (l.kind == LightSpec::Kind::kAmbient) ambient += l.intensity;
  }
  constexpr double kDeg = std::numbers::pi / 180.0;
  for (int y = 0; y < height; ++y) {
    const double v = height > 1 ? 2.0 * y / (height - 1) - 1.0 : 0.0;
    for (int x = 0; x < width; ++x) {
      const double u = width > 1 ? 2.0 * x / (width - 1) - 1.0 : 0.0;
      double value = ambient;
      for (const auto& l : lights) {
        if (l.kind != LightSpec::Kind::kDirectional) continue;
        const double az = l.azimuth_deg * kDeg;
        const double el = l.elevation_deg * kDeg;
        value += l.intensity * (0.5 + 0.5 * (u * std::cos(az) * std::cos(el) + v * std::sin(az) * std::cos(el)));
      }
      out.at(x, y) = clamp01(value);
    }
  }
  return out;
}

const std::vector<std::string>& style_presets() {
  static const std::vector<std::string> presets = {"identity", "pencil", "watercolor", "digital-paint",
                                                   "photoreal-mock"};
  return presets;
}

bool is_registered_preset(const std::string& name) {
  const auto& p = style_presets();
  return std::find(p.begin(), p.end(), name) != p.end();
}

Raster apply_style(const Raster& image, const StyleSpec& style) {
  if (!is_registered_preset(style.preset)) fail(ErrorCode::kUnknownPreset, "unknown style preset '" + style.preset + "'");
  if (image.channels() != 3) fail(ErrorCode::kChannelMismatch, "apply_style expects a 3-channel image");
  if (style.preset == "identity") return image;

  if (style.preset == "pencil") {
    const Raster lum = channel_mean(image);
    const Raster edges = sobel_magnitude(lum);
    const double strength = param_or(style, "edge", 0.35);
    Raster out(image.width(), image.height(), 3);
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) {
        const float v = clamp01(lum.at(x, y) - strength * edges.at(x, y));
        out.at(x, y, 0) = v;
        out.at(x, y, 1) = v;
        out.at(x, y, 2) = v;
      }
    }
    return out;
  }

  if (style.preset == "watercolor") {
    Raster out = box_blur3(image);
    add_grain(out, style.seed, param_or(style, "grain", 0.04), param_or(style, "scale", 16.0));
    return out;
  }

  if (style.preset == "digital-paint") {
    Raster out = box_blur3(image);
    const double levels = std::max(2.0, std::round(param_or(style, "levels", 12.0)));
    for (float& v : out.data()) v = clamp01(std::round(v * (levels - 1.0)) / (levels - 1.0));
    return out;
  }

  // photoreal-mock: smoothstep contrast curve plus fine grain.
  Raster out = image;
  const double contrast = param_or(style, "contrast", 0.5);
  for (float& v : out.data()) {
    const double s = static_cast<double>(v) * v * (3.0 - 2.0 * v);
    v = clamp01(v + contrast * (s - v));
  }
  add_grain(out, style.seed, param_or(style, "grain", 0.01), param_or(style, "scale", 2.0));
  return out;
}

int style_footprint(const std::string& preset) {
  if (!is_registered_preset(preset)) fail(ErrorCode::kUnknownPreset, "unknown style preset '" + preset + "'");
  return preset == "pencil" || preset == "watercolor" || preset == "digital-paint" ? 1 : 0;
}

Mask dilate(const Mask& mask, int radius) {
  if (radius < 0) fail(ErrorCode::kInvalidArgument, "dilation radius must be >= 0");
  if (radius == 0) return mask;
  const int w = mask.width(), h = mask.height();
  Mask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y)) continue;
      for (int yy = std::max(0, y - radius); yy <= std::min(h - 1, y + radius); ++yy) {
        for (int xx = std::max(0, x - radius); xx <= std::min(w - 1, x + radius); ++xx) out.set(xx, yy);
      }
    }
  }
  return out;
}

Raster sobel_magnitude(const Raster& gray) {
  require_single_channel(gray, "sobel_magnitude");
  const int w = gray.width();
  const int h = gray.height();
  Raster out(w, h, 1);
  auto px = [&](int x, int y) {
    return static_cast<double>(gray.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)));
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
      const double gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
      out.at(x, y) = static_cast<float>(std::sqrt(gx * gx + gy * gy));
    }
  }
  return out;
}

Raster box_blur3(const Raster& image) {
  const int w = image.width();
  const int h = image.height();
  Raster out(w, h, image.channels());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        double sum = 0.0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            sum += image.at(std::clamp(x + dx, 0, w - 1), std::clamp(y + dy, 0, h - 1), c);
          }
        }
        out.at(x, y, c) = static_cast<float>(sum / 9.0);
      }
    }
  }
  return out;
}

Decomposition decompose_image(const Raster& image) {
  if (image.channels() != 3) fail(ErrorCode::kChannelMismatch, "decompose_image expects a 3-channel image");
  const int w = image.width();
  const int h = image.height();
  Decomposition d{Raster(w, h, 1), Raster(w, h, 3, 1.0f), Raster(w, h, 1)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float s = std::max({image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2)});
      d.shading.at(x, y) = s;
      if (s > kBlackCutoff) {
        for (int c = 0; c < 3; ++c) d.chroma.at(x, y, c) = image.at(x, y, c) / s;
      }
    }
  }
  const Raster grad = sobel_magnitude(d.shading);
  const float peak = *std::max_element(grad.data().begin(), grad.data().end());
  if (peak > 0.0f) {
    for (std::size_t i = 0; i < grad.data().size(); ++i) {
      d.composition.data()[i] = grad.data()[i] / peak > kEdgeInkThreshold ? 1.0f : 0.0f;
    }
  }
  return d;
}

Raster thin_strokes(const Raster& canvas, const Mask& region) {
  require_single_channel(canvas, "thin_strokes");
  require_mask_fits(region, canvas, "thin_strokes");
  const int w = canvas.width();
  const int h = canvas.height();
  std::vector<std::uint8_t> fg(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = canvas.data()[i] > kFillInkThreshold ? 1 : 0;
  auto at = [&](int x, int y) -> int {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;
    return fg[static_cast<std::size_t>(y) * w + x];
  };

  std::vector<std::size_t> removable;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      removable.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          if (!fg[i] || !region.test(i)) continue;
          // Neighbours P2..P9 clockwise from north.
          const int p[8] = {at(x, y - 1), at(x + 1, y - 1), at(x + 1, y),     at(x + 1, y + 1),
                            at(x, y + 1), at(x - 1, y + 1), at(x - 1, y), at(x - 1, y - 1)};
          int neighbours = 0;
          int transitions = 0;
          for (int k = 0; k < 8; ++k) {
            neighbours += p[k];
            if (p[k] == 0 && p[(k + 1) % 8] == 1) ++transitions;
          }
          if (neighbours < 2 || neighbours > 6 || transitions != 1) continue;
          const bool ok = pass == 0 ? (p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0)
                                    : (p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0);
          if (ok) removable.push_back(i);
        }
      }
      for (std::size_t i : removable) fg[i] = 0;
      if (!removable.empty()) changed = true;
    }
  }

  Raster out = canvas;
  auto data = out.data();
  for (std::size_t i = 0; i < fg.size(); ++i) {
    if (data[i] > kFillInkThreshold && !fg[i]) data[i] = 0.0f;
  }
  return out;
}

double value_noise(std::uint64_t seed, double x, double y, double cell) {
  if (!(cell > 0.0)) cell = 1.0;
  const double fx = x / cell;
  const double fy = y / cell;
  const double x0 = std::floor(fx);
  const double y0 = std::floor(fy);
  auto lattice = [seed](double ix, double iy) {
    const auto kx = static_cast<std::uint64_t>(static_cast<std::int64_t>(ix));
    const auto ky = static_cast<std::uint64_t>(static_cast<std::int64_t>(iy));
    return 2.0 * unit_double(hash_combine(hash_combine(seed, kx), ky)) - 1.0;
  };
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double tx = smooth(fx - x0);
  const double ty = smooth(fy - y0);
  const double a = lattice(x0, y0) + tx * (lattice(x0 + 1, y0) - lattice(x0, y0));
  const double b = lattice(x0, y0 + 1) + tx * (lattice(x0 + 1, y0 + 1) - lattice(x0, y0 + 1));
  return a + ty * (b - a);
}

}  // namespace creo::raster
