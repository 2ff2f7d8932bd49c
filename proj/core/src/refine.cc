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

#include "mpiforge/refine.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mpiforge/error.h"

namespace mpiforge {

Mpi RefineStep(const Mpi& mpi, const CueVolume& cues,
               const ResidualFn& residual_fn) {
  const Residual residual = residual_fn(cues, mpi);
  if (residual.planes != mpi.planes() || residual.height != mpi.height() ||
      residual.width != mpi.width() ||
      residual.values.size() != mpi.logits().size()) {
    throw Error(ErrorCode::kShape, "residual does not match the MPI");
  }
  std::vector<double> logits(mpi.logits().begin(), mpi.logits().end());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double r = residual.values[i];
    if (!std::isfinite(r)) {
      throw Error(ErrorCode::kNumeric, "residual contains a non-finite value");
    }
    logits[i] += r;
  }
  return Mpi::FromLogits(std::move(logits), mpi.height(), mpi.width(),
                         mpi.depths(), mpi.reference(),
                         std::vector<std::uint8_t>(mpi.zero_mask().begin(),
                                                   mpi.zero_mask().end()));
}

Residual HeuristicResidual(const CueVolume& cues, const Mpi& mpi,
                           const HeuristicParams& params) {
  const Volume& vis = cues.total_visibility;
  if (vis.planes != mpi.planes() || vis.height != mpi.height() ||
      vis.width != mpi.width()) {
    throw Error(ErrorCode::kShape, "cue volume does not match the MPI");
  }
  Residual residual = Residual::Zeros(mpi);
  const double views = cues.view_count;
  const auto logits = mpi.logits();
  for (int d = 0; d < mpi.planes(); ++d) {
    for (int y = 0; y < mpi.height(); ++y) {
      for (int x = 0; x < mpi.width(); ++x) {
        const std::size_t base = mpi.voxel(d, y, x) * Mpi::kChannels;
        const double consistency =
            std::exp(-cues.color_variance.at(d, y, x) / params.variance_scale) *
            vis.at(d, y, x) / views;
        residual.values[base + 3] = params.gain * (consistency - params.bias);
        for (int c = 0; c < 3; ++c) {
          const double target = Logit(std::clamp(cues.mean_color.at(d, y, x, c),
                                                 kLogitClamp, 1.0 - kLogitClamp));
          residual.values[base + c] = params.color_rate * (target - logits[base + c]);
        }
      }
    }
  }
  return residual;
}

ResidualFn MakeHeuristicResidual(const HeuristicParams& params) {
  return [params](const CueVolume& cues, const Mpi& mpi) {
    return HeuristicResidual(cues, mpi, params);
  };
}

}  // namespace mpiforge
