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

#include "mpiforge/mpi.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mpiforge/error.h"
#include "mpiforge/parallel.h"

namespace mpiforge {
namespace {

constexpr double kValueLogitClamp = 1e-9;

double MaterializeChannel(double logit) {
  return static_cast<double>(static_cast<float>(Sigmoid(logit)));
}

}  // namespace

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Logit(double p) { return std::log(p) - std::log1p(-p); }

Mpi Mpi::FromLogits(std::vector<double> logits, int height, int width,
                    DepthList depths, Camera reference,
                    std::vector<std::uint8_t> zero_mask) {
  Mpi mpi;
  mpi.height_ = height;
  mpi.width_ = width;
  mpi.depths_ = std::move(depths);
  mpi.reference_ = std::move(reference);
  mpi.logits_ = std::move(logits);
  mpi.zero_mask_ = std::move(zero_mask);
  if (mpi.zero_mask_.empty()) mpi.zero_mask_.assign(mpi.voxel_count(), 0);
  mpi.CheckShape();
  mpi.Materialize();
  return mpi;
}

Mpi Mpi::FromValues(std::vector<double> values, int height, int width,
                    DepthList depths, Camera reference,
                    std::vector<std::uint8_t> zero_mask) {
  const bool explicit_mask = !zero_mask.empty();
  Mpi mpi;
  mpi.height_ = height;
  mpi.width_ = width;
  mpi.depths_ = std::move(depths);
  mpi.reference_ = std::move(reference);
  mpi.values_ = std::move(values);
  mpi.logits_.resize(mpi.values_.size());
  if (explicit_mask) {
    mpi.zero_mask_ = std::move(zero_mask);
  } else {
    mpi.zero_mask_.assign(mpi.voxel_count(), 0);
  }
  mpi.CheckShape();
  for (std::size_t v = 0; v < mpi.voxel_count(); ++v) {
    double* rgba = &mpi.values_[v * kChannels];
    for (int c = 0; c < kChannels; ++c) {
      if (!(rgba[c] >= 0.0 && rgba[c] <= 1.0)) {
        throw Error(ErrorCode::kRange, "MPI values must lie in [0,1]");
      }
      mpi.logits_[v * kChannels + c] = Logit(
          std::clamp(rgba[c], kValueLogitClamp, 1.0 - kValueLogitClamp));
    }
    if (!explicit_mask && rgba[3] == 0.0) mpi.zero_mask_[v] = 1;
    if (mpi.zero_mask_[v] != 0) std::fill(rgba, rgba + kChannels, 0.0);
  }
  return mpi;
}

void Mpi::CheckShape() const {
  if (height_ < 1 || width_ < 1) {
    throw Error(ErrorCode::kShape, "MPI planes must be at least 1x1");
  }
  const std::size_t expected = voxel_count() * kChannels;
  const std::size_t got = values_.empty() ? logits_.size() : values_.size();
  if (got != expected || zero_mask_.size() != voxel_count()) {
    throw Error(ErrorCode::kShape,
                "MPI buffer holds " + std::to_string(got) + " values, expected " +
                    std::to_string(expected));
  }
  if (reference_.width != width_ || reference_.height != height_) {
    throw Error(ErrorCode::kShape,
                "reference camera size does not match the MPI grid");
  }
}

void Mpi::Materialize() {
  values_.resize(logits_.size());
  for (std::size_t v = 0; v < voxel_count(); ++v) {
    double* rgba = &values_[v * kChannels];
    const double* logit = &logits_[v * kChannels];
    if (zero_mask_[v] == 0) {
      for (int c = 0; c < kChannels; ++c) rgba[c] = MaterializeChannel(logit[c]);
      if (rgba[3] == 0.0) zero_mask_[v] = 1;
    }
    if (zero_mask_[v] != 0) std::fill(rgba, rgba + kChannels, 0.0);
  }
}

Image Mpi::PlaneRgba(int d) const {
  Image plane(width_, height_, kChannels);
  const auto begin = values_.begin() +
                     static_cast<std::ptrdiff_t>(voxel(d, 0, 0) * kChannels);
  std::copy(begin, begin + static_cast<std::ptrdiff_t>(plane.data.size()),
            plane.data.begin());
  return plane;
}

Image Mpi::PlaneAlpha(int d) const {
  Image plane(width_, height_, 1);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) plane.at(x, y, 0) = alpha(d, y, x);
  }
  return plane;
}

Mpi Mpi::WithZeroMask(std::span<const std::uint8_t> mask) const {
  if (mask.size() != voxel_count()) {
    throw Error(ErrorCode::kShape, "zero mask size does not match the MPI");
  }
  Mpi out = *this;
  for (std::size_t v = 0; v < voxel_count(); ++v) {
    if (mask[v] != 0 && out.zero_mask_[v] == 0) {
      out.zero_mask_[v] = 1;
      std::fill_n(out.values_.begin() + static_cast<std::ptrdiff_t>(v * kChannels),
                  kChannels, 0.0);
    }
  }
  return out;
}

Residual Residual::Zeros(const Mpi& mpi) {
  Residual r;
  r.planes = mpi.planes();
  r.height = mpi.height();
  r.width = mpi.width();
  r.values.assign(mpi.voxel_count() * Mpi::kChannels, 0.0);
  return r;
}

Mpi InitMpi(const Volume& mean_colors, const DepthList& depths,
            const Camera& reference) {
  if (mean_colors.channels != 3 || mean_colors.planes != depths.size() ||
      mean_colors.width != reference.width ||
      mean_colors.height != reference.height) {
    throw Error(ErrorCode::kShape,
                "focal stack must be planes x H x W x 3 matching the depths "
                "and reference camera");
  }
  const double opaque = Logit(1.0 - kLogitClamp);
  const double transparent = Logit(kLogitClamp);
  std::vector<double> logits(mean_colors.data.size() / 3 * Mpi::kChannels);
  for (int d = 0; d < mean_colors.planes; ++d) {
    for (int y = 0; y < mean_colors.height; ++y) {
      for (int x = 0; x < mean_colors.width; ++x) {
        const std::size_t v =
            (static_cast<std::size_t>(d) * mean_colors.height + y) *
                mean_colors.width + x;
        for (int c = 0; c < 3; ++c) {
          const double color = mean_colors.at(d, y, x, c);
          logits[v * 4 + c] =
              color == 0.5 ? 0.0
                           : Logit(std::clamp(color, kLogitClamp, 1.0 - kLogitClamp));
        }
        logits[v * 4 + 3] = d == 0 ? opaque : transparent;
      }
    }
  }
  return Mpi::FromLogits(std::move(logits), mean_colors.height,
                         mean_colors.width, depths, reference);
}

Image CompositeOver(const Mpi& mpi) {
  Image out(mpi.width(), mpi.height(), 3);
  ParallelFor(0, mpi.height(), [&](int y) {
    for (int x = 0; x < mpi.width(); ++x) {
      for (int d = 0; d < mpi.planes(); ++d) {
        const double a = mpi.alpha(d, y, x);
        for (int c = 0; c < 3; ++c) {
          out.at(x, y, c) = mpi.value(d, y, x, c) * a + out.at(x, y, c) * (1.0 - a);
        }
      }
    }
  });
  return out;
}

Volume OverWeights(const Mpi& mpi) {
  const int planes = mpi.planes();
  Volume weights(planes + 1, mpi.height(), mpi.width(), 1);
  ParallelFor(0, mpi.height(), [&](int y) {
    for (int x = 0; x < mpi.width(); ++x) {
      double transmittance = 1.0;
      for (int d = planes - 1; d >= 0; --d) {
        const double a = mpi.alpha(d, y, x);
        weights.at(d, y, x) = a * transmittance;
        transmittance *= 1.0 - a;
      }
      weights.at(planes, y, x) = transmittance;
    }
  });
  return weights;
}

Image RenderView(const Mpi& mpi, const Camera& target) {
  Image out(target.width, target.height, 3);
  for (int d = 0; d < mpi.planes(); ++d) {
    const Homography h = PlaneHomography(mpi.reference(), target, mpi.depths()[d]);
    const Image plane = WarpImage(mpi.PlaneRgba(d), h, target.width, target.height);
    for (std::size_t p = 0; p < out.pixel_count(); ++p) {
      const double a = plane.data[p * 4 + 3];
      for (int c = 0; c < 3; ++c) {
        out.data[p * 3 + c] = plane.data[p * 4 + c] * a + out.data[p * 3 + c] * (1.0 - a);
      }
    }
  }
  return out;
}

Volume WarpAlphaToView(const Mpi& mpi, const Camera& view) {
  Volume out(mpi.planes(), view.height, view.width, 1);
  for (int d = 0; d < mpi.planes(); ++d) {
    const Homography h = PlaneHomography(mpi.reference(), view, mpi.depths()[d]);
    out.SetPlane(d, WarpImage(mpi.PlaneAlpha(d), h, view.width, view.height));
  }
  return out;
}

}  // namespace mpiforge
