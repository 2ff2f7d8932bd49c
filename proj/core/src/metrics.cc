// Copyright 2026 The mpiforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpiforge/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mpiforge/error.h"
#include "mpiforge/parallel.h"

namespace mpiforge {
namespace {

constexpr int kWindowSize = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

void CheckSameShape(const Image& a, const Image& b) {
  if (!a.SameShape(b) || a.empty()) {
    throw Error(ErrorCode::kShape, "images must be non-empty with equal dimensions");
  }
}

std::vector<double> GaussianWindow(int size) {
  const int radius = size / 2;
  std::vector<double> kernel(size);
  for (int i = 0; i < size; ++i) {
    const double t = i - radius;
    kernel[i] = std::exp(-t * t / (2.0 * kWindowSigma * kWindowSigma));
  }
  std::vector<double> window(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      window[y * size + x] = kernel[y] * kernel[x];
      sum += window[y * size + x];
    }
  }
  for (double& w : window) w /= sum;
  return window;
}

}  // namespace

Image ToLuma(const Image& image) {
  if (image.channels == 1) return image;
  if (image.channels < 3) {
    throw Error(ErrorCode::kShape, "luma needs a 1, 3 or 4 channel image");
  }
  Image luma(image.width, image.height, 1);
  for (std::size_t p = 0; p < image.pixel_count(); ++p) {
    const double* px = &image.data[p * image.channels];
    luma.data[p] = kLumaR * px[0] + kLumaG * px[1] + kLumaB * px[2];
  }
  return luma;
}

double Ssim(const Image& a, const Image& b) {
  CheckSameShape(a, b);
  const Image x = ToLuma(a);
  const Image y = ToLuma(b);

  int size = std::min({kWindowSize, x.width, x.height});
  if (size % 2 == 0) --size;
  const std::vector<double> window = GaussianWindow(size);
  const int rows = x.height - size + 1;
  const int cols = x.width - size + 1;

  std::vector<double> row_sums(rows, 0.0);
  ParallelFor(0, rows, [&](int oy) {
    double row_sum = 0.0;
    for (int ox = 0; ox < cols; ++ox) {
      double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
      for (int wy = 0; wy < size; ++wy) {
        for (int wx = 0; wx < size; ++wx) {
          const double w = window[wy * size + wx];
          const double vx = x.at(ox + wx, oy + wy, 0);
          const double vy = y.at(ox + wx, oy + wy, 0);
          mx += w * vx;
          my += w * vy;
          mxx += w * vx * vx;
          myy += w * vy * vy;
          mxy += w * vx * vy;
        }
      }
      const double var_x = mxx - mx * mx;
      const double var_y = myy - my * my;
      const double cov = mxy - mx * my;
      const double numerator = (2.0 * mx * my + kC1) * (2.0 * cov + kC2);
      const double denominator = (mx * mx + my * my + kC1) * (var_x + var_y + kC2);
      row_sum += numerator / denominator;
    }
    row_sums[oy] = row_sum;
  });

  double total = 0.0;
  for (double s : row_sums) total += s;
  return total / (static_cast<double>(rows) * cols);
}

double MeanAbsoluteError(const Image& a, const Image& b) {
  CheckSameShape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) sum += std::abs(a.data[i] - b.data[i]);
  return sum / static_cast<double>(a.data.size());
}

double Psnr(const Image& a, const Image& b) {
  CheckSameShape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double diff = a.data[i] - b.data[i];
    sum += diff * diff;
  }
  const double mse = sum / static_cast<double>(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

double SynthesisError(const Image& rendered, const Image& gt) {
  return MeanAbsoluteError(rendered, gt) + (1.0 - Ssim(rendered, gt)) / 2.0;
}

MetricReport Evaluate(const Image& a, const Image& b) {
  return MetricReport{Ssim(a, b), MeanAbsoluteError(a, b), Psnr(a, b)};
}

}  // namespace mpiforge
