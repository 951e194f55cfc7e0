#include <algorithm>
#include <cmath>

#include "creo/core/error.hpp"
#include "creo/metrics/metrics.hpp"

namespace creo::metrics {

namespace {

constexpr int kGrid = 8;
constexpr int kBins = 8;

// Cell i of n over `size` samples; never empty, even when size < n.
std::pair<int, int> cell_range(int i, int n, int size) {
  int lo = static_cast<int>(static_cast<long long>(i) * size / n);
  int hi = static_cast<int>(static_cast<long long>(i + 1) * size / n);
  lo = std::min(lo, size - 1);
  hi = std::max(hi, lo + 1);
  return {lo, hi};
}

void require_same_dims(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimensionMismatch, "embeddings differ in length");
}

}  // namespace

Embedding toy_embed(const Raster& image) {
  if (image.empty()) fail(ErrorCode::kDegenerateImage, "empty image");
  const int w = image.width();
  const int h = image.height();
  const int ch = image.channels();
  auto sample = [&](int x, int y, int c) { return static_cast<double>(image.at(x, y, ch == 3 ? c : 0)); };

  Embedding e(kGrid * kGrid + 3 * kBins, 0.0);
  for (int gy = 0; gy < kGrid; ++gy) {
    const auto [y0, y1] = cell_range(gy, kGrid, h);
    for (int gx = 0; gx < kGrid; ++gx) {
      const auto [x0, x1] = cell_range(gx, kGrid, w);
      double sum = 0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) sum += (sample(x, y, 0) + sample(x, y, 1) + sample(x, y, 2)) / 3.0;
      }
      e[static_cast<std::size_t>(gy * kGrid + gx)] = sum / static_cast<double>((y1 - y0) * (x1 - x0));
    }
  }

  const double pixels = static_cast<double>(image.pixel_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double v = sample(x, y, c);
        const int bin = std::min(kBins - 1, static_cast<int>(v * kBins));
        e[static_cast<std::size_t>(kGrid * kGrid + c * kBins + bin)] += v / pixels;
      }
    }
  }

  double norm = 0;
  for (double v : e) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) fail(ErrorCode::kDegenerateImage, "image has an all-zero feature vector");
  for (double& v : e) v /= norm;
  return e;
}

double l2_distance(const Embedding& a, const Embedding& b) {
  require_same_dims(a, b);
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  require_same_dims(a, b);
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) fail(ErrorCode::kDegenerateImage, "zero-norm embedding");
  return dot / std::sqrt(na * nb);
}

double anchoring_distance(const Raster& first, const Raster& last, const Embedder& embedder) {
  const Embedding a = embedder.embed(first);
  const Embedding b = embedder.embed(last);
  for (const auto* e : {&a, &b}) {
    double n = 0;
    for (double v : *e) n += v * v;
    if (std::abs(std::sqrt(n) - 1.0) > 1e-6) fail(ErrorCode::kInvalidArgument, "embedder returned a non-unit vector");
  }
  return l2_distance(a, b);
}

double homogenization_spread(std::span<const Embedding> embeddings) {
  if (embeddings.size() < 2) fail(ErrorCode::kInsufficientData, "spread needs at least two embeddings");
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    for (std::size_t j = i + 1; j < embeddings.size(); ++j) {
      sum += l2_distance(embeddings[i], embeddings[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

std::vector<AnchoringStats> summarize_anchoring(std::span<const SessionAnchoring> sessions) {
  std::vector<AnchoringStats> out;
  std::vector<std::string> order;
  for (const auto& s : sessions) {
    if (std::find(order.begin(), order.end(), s.condition) == order.end()) order.push_back(s.condition);
  }
  for (const auto& cond : order) {
    std::vector<double> d, c;
    std::vector<Embedding> finals;
    for (const auto& s : sessions) {
      if (s.condition != cond) continue;
      d.push_back(s.distance);
      c.push_back(s.cosine);
      finals.push_back(s.final_embedding);
    }
    AnchoringStats a;
    a.condition = cond;
    a.distance = mean_sd(std::move(d));
    a.cosine = mean_sd(std::move(c));
    if (finals.size() >= 2) a.spread = homogenization_spread(finals);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace creo::metrics
