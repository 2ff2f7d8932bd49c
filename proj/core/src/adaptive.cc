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

#include "mpiforge/adaptive.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mpiforge/error.h"

namespace mpiforge {
namespace {

double PlaneMaxAlpha(const Mpi& mpi, int d) {
  double best = 0.0;
  for (int y = 0; y < mpi.height(); ++y) {
    for (int x = 0; x < mpi.width(); ++x) best = std::max(best, mpi.alpha(d, y, x));
  }
  return best;
}

double PlaneMeanAlpha(const Mpi& mpi, int d) {
  double sum = 0.0;
  for (int y = 0; y < mpi.height(); ++y) {
    for (int x = 0; x < mpi.width(); ++x) sum += mpi.alpha(d, y, x);
  }
  return sum / static_cast<double>(mpi.plane_size());
}

}  // namespace

PruneResult PruneDepths(const Mpi& mpi, double alpha_floor) {
  const int planes = mpi.planes();
  std::vector<double> maxima(planes);
  for (int d = 0; d < planes; ++d) maxima[d] = PlaneMaxAlpha(mpi, d);

  std::vector<int> kept;
  for (int d = 0; d < planes; ++d) {
    if (maxima[d] >= alpha_floor) kept.push_back(d);
  }
  if (kept.size() < 2) {
    std::vector<int> order(planes);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return maxima[a] > maxima[b]; });
    kept.assign(order.begin(), order.begin() + 2);
    std::sort(kept.begin(), kept.end());
  }

  std::vector<double> depths;
  depths.reserve(kept.size());
  for (int d : kept) depths.push_back(mpi.depths()[d]);
  return PruneResult{DepthList(std::move(depths)),
                     planes - static_cast<int>(kept.size())};
}

IntervalWeights ComputeIntervalWeights(const Mpi& mpi, const DepthList& kept) {
  IntervalWeights weights;
  weights.kept_depths = kept;
  for (double depth : kept.values()) {
    const int d = mpi.depths().IndexOf(depth);
    if (d < 0) {
      throw Error(ErrorCode::kMembership,
                  "depth " + std::to_string(depth) + " is not a plane of the MPI");
    }
    weights.plane_weights.push_back(PlaneMeanAlpha(mpi, d));
  }
  for (std::size_t i = 0; i + 1 < weights.plane_weights.size(); ++i) {
    weights.interval_weights.push_back(
        (weights.plane_weights[i] + weights.plane_weights[i + 1]) / 2.0);
  }
  return weights;
}

std::vector<int> AllocateDepths(std::span<const double> interval_weights,
                                int count) {
  if (count < 0) throw Error(ErrorCode::kRange, "cannot allocate a negative count");
  const int intervals = static_cast<int>(interval_weights.size());
  std::vector<int> allocation(intervals, 0);
  if (count == 0) return allocation;
  if (intervals == 0) {
    throw Error(ErrorCode::kRange, "no intervals to place depths in");
  }

  double total = 0.0;
  for (double w : interval_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kRange, "interval weights must be finite and >= 0");
    }
    total += w;
  }
  std::vector<double> remainders(intervals);
  int assigned = 0;
  for (int i = 0; i < intervals; ++i) {
    const double quota = total > 0.0 ? count * interval_weights[i] / total
                                     : static_cast<double>(count) / intervals;
    allocation[i] = static_cast<int>(std::floor(quota));
    remainders[i] = quota - allocation[i];
    assigned += allocation[i];
  }

  // Larger remainder first; on ties the nearer (higher index) interval wins.
  std::vector<int> order(intervals);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
    return a > b;
  });
  for (int i = 0; assigned < count; i = (i + 1) % intervals) {
    ++allocation[order[i]];
    ++assigned;
  }
  return allocation;
}

DepthList RedistributeDepths(const IntervalWeights& weights, int removed_count) {
  if (removed_count < 0) {
    throw Error(ErrorCode::kRange, "removed count must be >= 0");
  }
  const DepthList& kept = weights.kept_depths;
  if (static_cast<int>(weights.interval_weights.size()) != kept.size() - 1) {
    throw Error(ErrorCode::kShape, "need one weight per kept interval");
  }
  const std::vector<int> allocation =
      AllocateDepths(weights.interval_weights, removed_count);

  std::vector<double> depths;
  depths.reserve(kept.size() + removed_count);
  for (int i = 0; i < kept.size(); ++i) {
    depths.push_back(kept[i]);
    if (i + 1 == kept.size()) break;
    const int m = allocation[i];
    const double far_inverse = 1.0 / kept[i];
    const double near_inverse = 1.0 / kept[i + 1];
    for (int k = 1; k <= m; ++k) {
      depths.push_back(1.0 / (far_inverse + k * (near_inverse - far_inverse) / (m + 1)));
    }
  }
  return DepthList(std::move(depths));
}

AdaptResult AdaptFromMpi(const Scene& scene, const Mpi& localized, int steps,
                         const AdaptOptions& options) {
  if (steps < 1) throw Error(ErrorCode::kRange, "adaptation needs steps >= 1");
  const std::vector<Camera> cameras = scene.cameras();
  const Camera& reference = localized.reference();

  AdaptResult result;
  result.pruned = PruneDepths(localized, options.alpha_floor);
  result.weights = ComputeIntervalWeights(localized, result.pruned.kept);
  result.adapted_depths = RedistributeDepths(result.weights, result.pruned.removed_count);

  const std::vector<Psv> psvs = BuildPsvs(scene, reference, result.adapted_depths);
  result.mpi = RunPipeline(psvs, cameras, reference, result.adapted_depths, steps,
                           MakeHeuristicResidual(options.pipeline.heuristic));
  return result;
}

AdaptResult AdaptAndRebuild(const Scene& scene, const DepthList& initial_depths,
                            int steps, const AdaptOptions& options) {
  if (steps < 1) throw Error(ErrorCode::kRange, "adaptation needs steps >= 1");
  if (options.localize_steps < 1) {
    throw Error(ErrorCode::kRange, "localization needs at least one step");
  }
  const std::vector<Camera> cameras = scene.cameras();
  const Camera reference = AverageReferenceCamera(cameras);
  const std::vector<Psv> psvs = BuildPsvs(scene, reference, initial_depths);
  const Mpi localized = RunPipeline(psvs, cameras, reference, initial_depths,
                                    options.localize_steps,
                                    MakeHeuristicResidual(options.pipeline.heuristic));
  return AdaptFromMpi(scene, localized, steps, options);
}

}  // namespace mpiforge
