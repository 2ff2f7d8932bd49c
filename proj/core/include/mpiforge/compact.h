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

#ifndef MPIFORGE_COMPACT_H_
#define MPIFORGE_COMPACT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mpiforge/cues.h"
#include "mpiforge/geometry.h"
#include "mpiforge/image.h"
#include "mpiforge/mpi.h"

namespace mpiforge {

inline constexpr double kDefaultLambda = 0.1;
inline constexpr double kMaxAlphaThreshold = 0.95;

struct SparsityReport {
  Image accumulated_alpha;  // A(x), one channel
  double excess = 0.0;      // sum_x max(A(x) - tau(x), 0)
  double a_min = 0.0;
  double loss = 0.0;
};

// A(x) = sum_d alpha_d(x) over the materialized alphas.
Image AccumulatedAlpha(const Mpi& mpi);
// Same sum over an arbitrary alpha volume (planes x H x W x 1).
Image AccumulatedAlpha(const Volume& alpha);

double SparsityExcess(const Image& accumulated, const TauMap& tau);

// Closed-form subgradient of SparsityExcess with respect to every alpha
// voxel: 1 where A(x) > tau(x), else 0.
Volume SparsityExcessGradient(const Volume& alpha, const TauMap& tau);

// Minimum of A over the reference grid and over each camera's grid after
// warping the alpha planes into it.
double MinAccumulatedAlpha(const Mpi& mpi, std::span<const Camera> cameras);

double SparsityLoss(double excess, double a_min, std::size_t pixel_count);

SparsityReport ComputeSparsity(const Mpi& mpi, const TauMap& tau,
                               std::span<const Camera> cameras);

// synthesis_error + lambda * sparsity.
double TotalLoss(double synthesis_error, double sparsity,
                 double lambda = kDefaultLambda);

// Zeroes alpha (exactly) for voxels whose alpha is below threshold.
// threshold must lie in [0, 0.95].
Mpi ThresholdAlpha(const Mpi& mpi, double threshold);

// Fraction of voxels with non-zero alpha.
double Occupancy(const Mpi& mpi);

struct SweepRecord {
  double threshold = 0.0;
  double occupancy = 0.0;
  double ssim = 0.0;
  double l1 = 0.0;
};

struct SweepCurve {
  std::vector<SweepRecord> records;
};

// For every threshold: compact, render each ground-truth pose, and record
// occupancy with mean SSIM and mean L1.
SweepCurve OccupancySweep(const Mpi& mpi, std::span<const View> gt_views,
                          std::span<const double> thresholds);

// 0, 0.05, ..., 0.95
std::vector<double> DefaultSweepThresholds();

// Header "threshold,occupancy,ssim,l1"; six decimals per value.
std::string SweepCsv(const SweepCurve& curve);

}  // namespace mpiforge

#endif  // MPIFORGE_COMPACT_H_
