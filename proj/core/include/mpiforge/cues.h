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

#ifndef MPIFORGE_CUES_H_
#define MPIFORGE_CUES_H_

#include <span>
#include <vector>

#include "mpiforge/geometry.h"
#include "mpiforge/image.h"
#include "mpiforge/mpi.h"

namespace mpiforge {

// Summed visibility below which mean and variance fall back to the
// unweighted statistics.
inline constexpr double kVisibilityEpsilon = 1e-4;

// Plane sweep volume: one input image resampled onto each MPI plane in the
// reference pixel grid.
struct Psv {
  Volume values;  // planes x H x W x 3
  Camera source;
  Camera reference;
  DepthList depths;
};

Psv BuildPsv(const Image& image, const Camera& source, const Camera& reference,
             const DepthList& depths);

// Unweighted per-depth mean of the PSVs.
Volume FocalStack(std::span<const Psv> psvs);

// Transmittance from the view to each reference-grid voxel through the
// strictly nearer planes (planes x H x W x 1).
Volume VisibilityVolume(const Mpi& mpi, const Camera& view);

struct CueVolume {
  Volume total_visibility;  // planes x H x W x 1, in [0, K]
  Volume mean_color;        // planes x H x W x 3
  Volume color_variance;    // planes x H x W x 1, channel-averaged
  int view_count = 0;
};

CueVolume ComputeCues(std::span<const Psv> psvs, const Mpi& mpi,
                      std::span<const Camera> cameras);

// Number of planes allowed per pixel: 6 for semi-occluded pixels, else 3.
struct TauMap {
  int width = 0;
  int height = 0;
  std::vector<int> values;

  int at(int x, int y) const { return values[y * width + x]; }
};

inline constexpr int kTauDefault = 3;
inline constexpr int kTauSemiOccluded = 6;

TauMap ComputeTauMap(const CueVolume& cues);

}  // namespace mpiforge

#endif  // MPIFORGE_CUES_H_
