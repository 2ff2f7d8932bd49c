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

#ifndef MPIFORGE_REFINE_H_
#define MPIFORGE_REFINE_H_

#include <functional>

#include "mpiforge/cues.h"
#include "mpiforge/mpi.h"

namespace mpiforge {

using ResidualFn = std::function<Residual(const CueVolume&, const Mpi&)>;

// One update M' = S(M + F(cues, M)); the sum is taken in logit space, so a
// zero residual leaves the logits untouched.
Mpi RefineStep(const Mpi& mpi, const CueVolume& cues,
               const ResidualFn& residual_fn);

// Constants of the photo-consistency residual.
struct HeuristicParams {
  double gain = 4.0;            // g
  double variance_scale = 0.01; // s
  double bias = 0.5;            // b
  double color_rate = 0.5;      // c
};

// Deterministic stand-in for a learned update:
//   d(alpha logit) = g * (exp(-var / s) * vis / K - b)
//   d(color logit) = c * (logit(clamp(mean)) - color logit)
Residual HeuristicResidual(const CueVolume& cues, const Mpi& mpi,
                           const HeuristicParams& params = {});

ResidualFn MakeHeuristicResidual(const HeuristicParams& params = {});

}  // namespace mpiforge

#endif  // MPIFORGE_REFINE_H_
