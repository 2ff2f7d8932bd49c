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

#ifndef MPIFORGE_MPI_H_
#define MPIFORGE_MPI_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpiforge/geometry.h"
#include "mpiforge/image.h"

namespace mpiforge {

// Clamp applied when converting [0,1] values to logits at initialization.
inline constexpr double kLogitClamp = 1e-3;

double Sigmoid(double x);
double Logit(double p);

// A multiplane image: D fronto-parallel RGBA planes in front of a reference
// camera, plane 0 farthest.
//
// The state is held in pre-activation (logit) space. Materialized values are
// sigmoid(logit) rounded to single precision. Voxels flagged in the zero mask
// materialize to exactly (0, 0, 0, 0); the mask is set wherever alpha would
// otherwise round to zero, so "alpha > 0" and "not masked" coincide except
// for MPIs built from an explicit mask.
//
// Voxel order is plane, row, column; each voxel holds 4 channels (RGBA).
class Mpi {
 public:
  static constexpr int kChannels = 4;

  Mpi() = default;

  static Mpi FromLogits(std::vector<double> logits, int height, int width,
                        DepthList depths, Camera reference,
                        std::vector<std::uint8_t> zero_mask = {});

  // Takes materialized RGBA values verbatim. Without an explicit zero_mask,
  // alpha == 0 marks the zero voxels; with one, the mask is used as given and
  // unmasked voxels may carry alpha == 0 (as after u8 decoding). Logits are
  // derived with a 1e-9 clamp.
  static Mpi FromValues(std::vector<double> values, int height, int width,
                        DepthList depths, Camera reference,
                        std::vector<std::uint8_t> zero_mask = {});

  int planes() const { return depths_.size(); }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::size_t voxel_count() const { return plane_size() * planes(); }

  const DepthList& depths() const { return depths_; }
  const Camera& reference() const { return reference_; }

  std::span<const double> logits() const { return logits_; }
  std::span<const double> values() const { return values_; }
  std::span<const std::uint8_t> zero_mask() const { return zero_mask_; }

  std::size_t voxel(int d, int y, int x) const {
    return (static_cast<std::size_t>(d) * height_ + y) * width_ + x;
  }
  double value(int d, int y, int x, int c) const {
    return values_[voxel(d, y, x) * kChannels + c];
  }
  double alpha(int d, int y, int x) const { return value(d, y, x, 3); }
  bool is_zero(int d, int y, int x) const {
    return zero_mask_[voxel(d, y, x)] != 0;
  }

  Image PlaneRgba(int d) const;
  Image PlaneAlpha(int d) const;

  // Copy with alpha forced to exactly zero wherever mask is non-zero (in
  // addition to voxels that are already zero).
  Mpi WithZeroMask(std::span<const std::uint8_t> mask) const;

 private:
  void Materialize();
  void CheckShape() const;

  int height_ = 0;
  int width_ = 0;
  DepthList depths_;
  Camera reference_;
  std::vector<double> logits_;
  std::vector<double> values_;
  std::vector<std::uint8_t> zero_mask_;
};

// Additive logit-space update with the same dimensions as its target MPI.
struct Residual {
  int planes = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  static Residual Zeros(const Mpi& mpi);
};

// Initial MPI: colors from the focal stack (planes x H x W x 3, values in
// [0,1]), alpha transparent except for an opaque farthest plane.
Mpi InitMpi(const Volume& mean_colors, const DepthList& depths,
            const Camera& reference);

// Back-to-front over compositing of the materialized planes, no warp.
Image CompositeOver(const Mpi& mpi);

// Per-pixel compositing weights alpha_d * prod_{j>d}(1 - alpha_j) for each
// plane, followed by the residual transmittance prod_d(1 - alpha_d) as plane D.
Volume OverWeights(const Mpi& mpi);

// Warps color and alpha of each plane to the target view (no premultiplying)
// and composites back to front.
Image RenderView(const Mpi& mpi, const Camera& target);

// Alpha planes warped into the view's pixel grid, one plane per depth.
Volume WarpAlphaToView(const Mpi& mpi, const Camera& view);

}  // namespace mpiforge

#endif  // MPIFORGE_MPI_H_
