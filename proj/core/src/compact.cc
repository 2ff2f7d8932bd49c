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

#include "mpiforge/compact.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "mpiforge/error.h"
#include "mpiforge/metrics.h"
#include "mpiforge/parallel.h"

namespace mpiforge {

Image AccumulatedAlpha(const Mpi& mpi) {
  Image accumulated(mpi.width(), mpi.height(), 1);
  for (int d = 0; d < mpi.planes(); ++d) {
    for (int y = 0; y < mpi.height(); ++y) {
      for (int x = 0; x < mpi.width(); ++x) accumulated.at(x, y, 0) += mpi.alpha(d, y, x);
    }
  }
  return accumulated;
}

Image AccumulatedAlpha(const Volume& alpha) {
  Image accumulated(alpha.width, alpha.height, 1);
  for (int d = 0; d < alpha.planes; ++d) {
    for (int y = 0; y < alpha.height; ++y) {
      for (int x = 0; x < alpha.width; ++x) accumulated.at(x, y, 0) += alpha.at(d, y, x);
    }
  }
  return accumulated;
}

double SparsityExcess(const Image& accumulated, const TauMap& tau) {
  if (accumulated.width != tau.width || accumulated.height != tau.height ||
      accumulated.channels != 1) {
    throw Error(ErrorCode::kShape, "accumulated alpha and tau map differ in size");
  }
  double excess = 0.0;
  for (int y = 0; y < accumulated.height; ++y) {
    for (int x = 0; x < accumulated.width; ++x) {
      excess += std::max(accumulated.at(x, y, 0) - tau.at(x, y), 0.0);
    }
  }
  return excess;
}

Volume SparsityExcessGradient(const Volume& alpha, const TauMap& tau) {
  const Image accumulated = AccumulatedAlpha(alpha);
  if (accumulated.width != tau.width || accumulated.height != tau.height) {
    throw Error(ErrorCode::kShape, "alpha volume and tau map differ in size");
  }
  Volume gradient(alpha.planes, alpha.height, alpha.width, 1);
  for (int d = 0; d < alpha.planes; ++d) {
    for (int y = 0; y < alpha.height; ++y) {
      for (int x = 0; x < alpha.width; ++x) {
        gradient.at(d, y, x) = accumulated.at(x, y, 0) > tau.at(x, y) ? 1.0 : 0.0;
      }
    }
  }
  return gradient;
}

double MinAccumulatedAlpha(const Mpi& mpi, std::span<const Camera> cameras) {
  const Image reference = AccumulatedAlpha(mpi);
  double minimum = *std::min_element(reference.data.begin(), reference.data.end());
  for (const Camera& camera : cameras) {
    const Image warped = AccumulatedAlpha(WarpAlphaToView(mpi, camera));
    minimum = std::min(minimum, *std::min_element(warped.data.begin(), warped.data.end()));
  }
  return minimum;
}

double SparsityLoss(double excess, double a_min, std::size_t pixel_count) {
  if (pixel_count == 0) {
    throw Error(ErrorCode::kRange, "pixel count must be positive");
  }
  return excess / static_cast<double>(pixel_count) + std::abs(std::min(a_min - 1.0, 0.0));
}

SparsityReport ComputeSparsity(const Mpi& mpi, const TauMap& tau,
                               std::span<const Camera> cameras) {
  SparsityReport report;
  report.accumulated_alpha = AccumulatedAlpha(mpi);
  report.excess = SparsityExcess(report.accumulated_alpha, tau);
  report.a_min = MinAccumulatedAlpha(mpi, cameras);
  report.loss = SparsityLoss(report.excess, report.a_min, mpi.plane_size());
  return report;
}

double TotalLoss(double synthesis_error, double sparsity, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kRange, "lambda must be finite and non-negative");
  }
  return synthesis_error + lambda * sparsity;
}

Mpi ThresholdAlpha(const Mpi& mpi, double threshold) {
  if (!(threshold >= 0.0 && threshold <= kMaxAlphaThreshold)) {
    throw Error(ErrorCode::kRange, "alpha threshold must lie in [0, 0.95], got " +
                                       std::to_string(threshold));
  }
  std::vector<std::uint8_t> mask(mpi.voxel_count(), 0);
  const auto values = mpi.values();
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (values[v * Mpi::kChannels + 3] < threshold) mask[v] = 1;
  }
  return mpi.WithZeroMask(mask);
}

double Occupancy(const Mpi& mpi) {
  const auto mask = mpi.zero_mask();
  const auto nonzero = std::count(mask.begin(), mask.end(), std::uint8_t{0});
  return static_cast<double>(nonzero) / static_cast<double>(mpi.voxel_count());
}

SweepCurve OccupancySweep(const Mpi& mpi, std::span<const View> gt_views,
                          std::span<const double> thresholds) {
  if (gt_views.empty()) {
    throw Error(ErrorCode::kEmptyInput, "sweep needs at least one ground-truth view");
  }
  if (thresholds.empty()) {
    throw Error(ErrorCode::kEmptyInput, "sweep needs at least one threshold");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 0.0 && thresholds[i] <= kMaxAlphaThreshold)) {
      throw Error(ErrorCode::kRange, "sweep thresholds must lie in [0, 0.95]");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw Error(ErrorCode::kRange, "sweep thresholds must be strictly increasing");
    }
  }

  SweepCurve curve;
  curve.records.resize(thresholds.size());
  ParallelFor(0, static_cast<int>(thresholds.size()), [&](int i) {
    const Mpi compacted = ThresholdAlpha(mpi, thresholds[i]);
    SweepRecord& record = curve.records[i];
    record.threshold = thresholds[i];
    record.occupancy = Occupancy(compacted);
    for (const View& view : gt_views) {
      const Image rendered = RenderView(compacted, view.camera);
      record.ssim += Ssim(rendered, view.image);
      record.l1 += MeanAbsoluteError(rendered, view.image);
    }
    record.ssim /= static_cast<double>(gt_views.size());
    record.l1 /= static_cast<double>(gt_views.size());
  });
  return curve;
}

std::vector<double> DefaultSweepThresholds() {
  std::vector<double> thresholds;
  for (int i = 0; i <= 19; ++i) thresholds.push_back(i / 20.0);
  return thresholds;
}

std::string SweepCsv(const SweepCurve& curve) {
  std::string csv = "threshold,occupancy,ssim,l1\n";
  char line[128];
  for (const SweepRecord& r : curve.records) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f,%.6f\n", r.threshold,
                  r.occupancy, r.ssim, r.l1);
    csv += line;
  }
  return csv;
}

}  // namespace mpiforge
