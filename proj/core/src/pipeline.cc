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

#include "mpiforge/pipeline.h"

#include "mpiforge/error.h"

namespace mpiforge {

std::vector<Camera> Scene::cameras() const {
  std::vector<Camera> out;
  out.reserve(views.size());
  for (const View& view : views) out.push_back(view.camera);
  return out;
}

std::vector<Psv> BuildPsvs(const Scene& scene, const Camera& reference,
                           const DepthList& depths) {
  std::vector<Psv> psvs;
  psvs.reserve(scene.views.size());
  for (const View& view : scene.views) {
    psvs.push_back(BuildPsv(view.image, view.camera, reference, depths));
  }
  return psvs;
}

Mpi RunPipeline(std::span<const Psv> psvs, std::span<const Camera> cameras,
                const Camera& reference, const DepthList& depths, int steps,
                const ResidualFn& residual_fn) {
  if (steps < 0) throw Error(ErrorCode::kRange, "refinement steps must be >= 0");
  Mpi mpi = InitMpi(FocalStack(psvs), depths, reference);
  for (int n = 0; n < steps; ++n) {
    const CueVolume cues = ComputeCues(psvs, mpi, cameras);
    mpi = RefineStep(mpi, cues, residual_fn);
  }
  return mpi;
}

Mpi BuildMpi(const Scene& scene, const DepthList& depths,
             const PipelineOptions& options) {
  const std::vector<Camera> cameras = scene.cameras();
  const Camera reference = AverageReferenceCamera(cameras);
  const std::vector<Psv> psvs = BuildPsvs(scene, reference, depths);
  return RunPipeline(psvs, cameras, reference, depths, options.steps,
                     MakeHeuristicResidual(options.heuristic));
}

}  // namespace mpiforge
