// Copyright 2026 The semcom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic synthetic source images: steps, squares, disks, blobs.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "semcom/generation.hpp"
#include "semcom/image.hpp"
#include "semcom/rng.hpp"

namespace semcom::synthetic {

template <typename F>
SemanticMap render(int w, int h, F intensity) {
  std::vector<double> data(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      data[static_cast<std::size_t>(y) * w + x] = std::clamp(intensity(x, y), 0.0, 1.0);
    }
  }
  return SemanticMap(w, h, std::move(data));
}

// Dark left part, bright from column `at` on.
inline SemanticMap vertical_step(int w, int h, int at, double lo = 0.0, double hi = 1.0) {
  return render(w, h, [=](int x, int) { return x < at ? lo : hi; });
}

inline SemanticMap horizontal_step(int w, int h, int at, double lo = 0.0, double hi = 1.0) {
  return render(w, h, [=](int, int y) { return y < at ? lo : hi; });
}

inline SemanticMap diagonal_step(int w, int h, int offset = 0) {
  return render(w, h, [=](int x, int y) { return x - y > offset ? 1.0 : 0.0; });
}

inline SemanticMap filled_square(int w, int h, int x0, int y0, int side, double bg = 0.0,
                                 double fg = 1.0) {
  return render(w, h, [=](int x, int y) {
    return (x >= x0 && x < x0 + side && y >= y0 && y < y0 + side) ? fg : bg;
  });
}

inline SemanticMap disk(int w, int h, double cx, double cy, double r, double bg = 0.1,
                        double fg = 0.9) {
  return render(w, h, [=](int x, int y) {
    return std::hypot(x - cx, y - cy) <= r ? fg : bg;
  });
}

// Smooth Gaussian bump; its gradient magnitude peaks on a ring of radius s.
inline SemanticMap gaussian_blob(int w, int h, double cx, double cy, double s) {
  return render(w, h, [=](int x, int y) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return std::exp(-r2 / (2.0 * s * s));
  });
}

// Horizontal ramp with a bright disk on top.
inline SemanticMap ramp_with_disk(int w, int h, double cx, double cy, double r) {
  return render(w, h, [=](int x, int y) {
    if (std::hypot(x - cx, y - cy) <= r) return 1.0;
    return 0.6 * static_cast<double>(x) / std::max(1, w - 1);
  });
}

inline SemanticMap uniform_noise(int w, int h, Rng& rng) {
  return render(w, h, [&](int, int) { return rng.uniform(); });
}

// A few random axis-aligned rectangles and disks over a random background.
inline SemanticMap random_shapes(int w, int h, Rng& rng) {
  std::vector<double> data(static_cast<std::size_t>(w) * h, rng.uniform(0.0, 0.3));
  const int shapes = 2 + static_cast<int>(rng.index(3));
  for (int k = 0; k < shapes; ++k) {
    const double value = rng.uniform(0.4, 1.0);
    const bool round = rng.bernoulli(0.5);
    const double cx = rng.uniform(0.2, 0.8) * w, cy = rng.uniform(0.2, 0.8) * h;
    const double size = rng.uniform(0.1, 0.3) * std::min(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool inside = round ? std::hypot(x - cx, y - cy) <= size
                                  : std::abs(x - cx) <= size && std::abs(y - cy) <= size;
        if (inside) data[static_cast<std::size_t>(y) * w + x] = value;
      }
    }
  }
  return SemanticMap(w, h, std::move(data));
}

// Ten images: steps, squares and smooth gradients.
inline std::vector<SourceImage> degradation_corpus(int size = 32) {
  const int n = size;
  return {
      {"vstep", vertical_step(n, n, n / 2)},
      {"hstep", horizontal_step(n, n, n / 3)},
      {"dstep", diagonal_step(n, n, 2)},
      {"square_small", filled_square(n, n, n / 4, n / 4, n / 3)},
      {"square_large", filled_square(n, n, n / 8, n / 6, n / 2, 0.2, 0.8)},
      {"square_corner", filled_square(n, n, n / 2, n / 2, n / 3)},
      {"disk", disk(n, n, 0.5 * n, 0.45 * n, 0.3 * n)},
      {"blob", gaussian_blob(n, n, 0.5 * n, 0.5 * n, 0.18 * n)},
      {"blob_offset", gaussian_blob(n, n, 0.35 * n, 0.6 * n, 0.12 * n)},
      {"ramp_disk", ramp_with_disk(n, n, 0.6 * n, 0.4 * n, 0.2 * n)},
  };
}

}  // namespace semcom::synthetic
