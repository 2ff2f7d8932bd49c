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

#ifndef MPIFORGE_PIPELINE_H_
#define MPIFORGE_PIPELINE_H_

#include <span>
#include <vector>

#include "mpiforge/cues.h"
#include "mpiforge/geometry.h"
#include "mpiforge/mpi.h"
#include "mpiforge/refine.h"

namespace mpiforge {

struct Scene {
  std::vector<View> views;

  std::vector<Camera> cameras() const;
};

struct PipelineOptions {
  int steps = 4;
  HeuristicParams heuristic;
};

std::vector<Psv> BuildPsvs(const Scene& scene, const Camera& reference,
                           const DepthList& depths);

// M0 from the focal stack, then `steps` refinement iterations with cues
// recomputed from the current MPI before every step.
Mpi RunPipeline(std::span<const Psv> psvs, std::span<const Camera> cameras,
                const Camera& reference, const DepthList& depths, int steps,
                const ResidualFn& residual_fn);

// Whole pipeline against the averaged reference camera of the scene.
Mpi BuildMpi(const Scene& scene, const DepthList& depths,
             const PipelineOptions& options = {});

}  // namespace mpiforge

#endif  // MPIFORGE_PIPELINE_H_
