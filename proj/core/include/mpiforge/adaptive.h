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

#ifndef MPIFORGE_ADAPTIVE_H_
#define MPIFORGE_ADAPTIVE_H_

#include <span>
#include <vector>

#include "mpiforge/geometry.h"
#include "mpiforge/mpi.h"
#include "mpiforge/pipeline.h"

namespace mpiforge {

inline constexpr double kDefaultAlphaFloor = 0.3;

struct PruneResult {
  DepthList kept;
  int removed_count = 0;
};

// Drops every plane whose alpha never reaches alpha_floor. At least two
// planes survive: if fewer pass, the two planes with the largest maximum
// alpha are kept.
PruneResult PruneDepths(const Mpi& mpi,
                        double alpha_floor = kDefaultAlphaFloor);

struct IntervalWeights {
  DepthList kept_depths;
  std::vector<double> plane_weights;     // spatial mean alpha per kept plane
  std::vector<double> interval_weights;  // mean of the two endpoint weights
};

IntervalWeights ComputeIntervalWeights(const Mpi& mpi, const DepthList& kept);

// Splits count among intervals in proportion to their weights using
// largest-remainder rounding; remainder ties go to the nearer interval.
// Zero total weight is treated as uniform weights.
std::vector<int> AllocateDepths(std::span<const double> interval_weights,
                                int count);

// Inserts removed_count depths, m per interval placed at evenly spaced
// interior inverse depths, and merges them with the kept depths.
DepthList RedistributeDepths(const IntervalWeights& weights, int removed_count);

struct AdaptOptions {
  PipelineOptions pipeline;
  // Refinement iterations used to produce the MPI that is inspected for empty
  // planes.
  int localize_steps = 4;
  double alpha_floor = kDefaultAlphaFloor;
};

struct AdaptResult {
  Mpi mpi;
  DepthList adapted_depths;
  PruneResult pruned;
  IntervalWeights weights;
};

// Prune/redistribute from an already localized MPI, then rebuild on the
// adapted depths with the MPI's reference camera.
AdaptResult AdaptFromMpi(const Scene& scene, const Mpi& localized, int steps,
                         const AdaptOptions& options = {});

// Localize planes on the initial sampling, prune, redistribute, then rebuild
// the PSVs and rerun the whole iterative pipeline on the new depths.
AdaptResult AdaptAndRebuild(const Scene& scene, const DepthList& initial_depths,
                            int steps, const AdaptOptions& options = {});

}  // namespace mpiforge

#endif  // MPIFORGE_ADAPTIVE_H_
