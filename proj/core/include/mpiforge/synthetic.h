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

#ifndef MPIFORGE_SYNTHETIC_H_
#define MPIFORGE_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "mpiforge/geometry.h"
#include "mpiforge/pipeline.h"

namespace mpiforge {

// Lambertian test scene: a textured background plane at z = background_depth
// and, optionally, a textured square at z = foreground_depth. World frame is
// the rig frame; all cameras are fronto-parallel.
struct TwoPlaneSpec {
  int width = 64;
  int height = 64;
  double focal = 64.0;
  double background_depth = 10.29;
  bool has_foreground = true;
  double foreground_depth = 6.55;
  // Foreground square in world units, centered on the optical axis.
  double foreground_half_size = 0.6;
  // Input cameras sit on a 2x2 grid with this spacing in x and y.
  double baseline = 0.6;
  // Held-out camera offset from the rig center.
  double held_out_x = 0.05;
  double held_out_y = -0.04;
  // Dominant texture wavelength, in pixels as seen from the rig.
  double texture_period_px = 8.0;
  // Amplitude of each of the 12 sinusoids summed per color channel.
  double texture_amplitude = 0.12;
  int supersample = 3;
  std::uint64_t seed = 1;
};

struct SyntheticScene {
  Scene inputs;
  View held_out;
  TwoPlaneSpec spec;
};

SyntheticScene MakeTwoPlaneScene(const TwoPlaneSpec& spec);

Image RenderTwoPlane(const TwoPlaneSpec& spec, const Camera& camera);

}  // namespace mpiforge

#endif  // MPIFORGE_SYNTHETIC_H_
