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

#include "mpiforge/cues.h"

#include <string>

#include "mpiforge/error.h"
#include "mpiforge/parallel.h"

namespace mpiforge {

Psv BuildPsv(const Image& image, const Camera& source, const Camera& reference,
             const DepthList& depths) {
  if (image.channels != 3) {
    throw Error(ErrorCode::kShape, "PSV input must be an RGB image");
  }
  if (image.width != source.width || image.height != source.height) {
    throw Error(ErrorCode::kShape,
                "image size does not match its camera");
  }
  Psv psv{Volume(depths.size(), reference.height, reference.width, 3), source,
          reference, depths};
  for (int d = 0; d < depths.size(); ++d) {
    // Reference pixel -> source pixel through the plane at this depth.
    const Homography ref_to_source = PlaneHomography(reference, source, depths[d]);
    psv.values.SetPlane(
        d, ResampleImage(image, ref_to_source, reference.width, reference.height));
  }
  return psv;
}

Volume FocalStack(std::span<const Psv> psvs) {
  if (psvs.empty()) throw Error(ErrorCode::kEmptyInput, "no PSVs");
  const Volume& first = psvs.front().values;
  Volume mean(first.planes, first.height, first.width, 3);
  for (const Psv& psv : psvs) {
    if (psv.values.data.size() != mean.data.size()) {
      throw Error(ErrorCode::kShape, "PSV dimensions differ");
    }
    for (std::size_t i = 0; i < mean.data.size(); ++i) mean.data[i] += psv.values.data[i];
  }
  const double k = static_cast<double>(psvs.size());
  for (double& v : mean.data) v /= k;
  return mean;
}

Volume VisibilityVolume(const Mpi& mpi, const Camera& view) {
  const Volume warped = WarpAlphaToView(mpi, view);
  std::vector<Image> warped_planes;
  warped_planes.reserve(mpi.planes());
  for (int j = 0; j < mpi.planes(); ++j) warped_planes.push_back(warped.Plane(j));

  Volume visibility(mpi.planes(), mpi.height(), mpi.width(), 1, 1.0);
  ParallelFor(0, mpi.planes(), [&](int d) {
    const Homography to_view = PlaneHomography(mpi.reference(), view, mpi.depths()[d]);
    for (int y = 0; y < mpi.height(); ++y) {
      for (int x = 0; x < mpi.width(); ++x) {
        const Eigen::Vector2d u = to_view.Apply(Eigen::Vector2d(x, y));
        double transmittance = 1.0;
        for (int j = d + 1; j < mpi.planes(); ++j) {
          transmittance *= 1.0 - SampleBilinear(warped_planes[j], u.x(), u.y(), 0);
        }
        visibility.at(d, y, x) = transmittance;
      }
    }
  });
  return visibility;
}

CueVolume ComputeCues(std::span<const Psv> psvs, const Mpi& mpi,
                      std::span<const Camera> cameras) {
  if (psvs.size() != cameras.size()) {
    throw Error(ErrorCode::kShape, "need one PSV per camera (" +
                                       std::to_string(psvs.size()) + " PSVs, " +
                                       std::to_string(cameras.size()) +
                                       " cameras)");
  }
  if (psvs.empty()) throw Error(ErrorCode::kEmptyInput, "no views for cues");
  const int planes = mpi.planes();
  const int height = mpi.height();
  const int width = mpi.width();
  for (const Psv& psv : psvs) {
    if (psv.values.planes != planes || psv.values.height != height ||
        psv.values.width != width || psv.values.channels != 3) {
      throw Error(ErrorCode::kShape, "PSV does not match the MPI grid");
    }
  }

  const int views = static_cast<int>(psvs.size());
  std::vector<Volume> visibility(views);
  for (int k = 0; k < views; ++k) visibility[k] = VisibilityVolume(mpi, cameras[k]);

  CueVolume cues;
  cues.view_count = views;
  cues.total_visibility = Volume(planes, height, width, 1);
  cues.mean_color = Volume(planes, height, width, 3);
  cues.color_variance = Volume(planes, height, width, 1);

  ParallelFor(0, planes, [&](int d) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double weight_sum = 0.0;
        double mean[3] = {0.0, 0.0, 0.0};
        for (int k = 0; k < views; ++k) {
          const double w = visibility[k].at(d, y, x);
          weight_sum += w;
          for (int c = 0; c < 3; ++c) mean[c] += w * psvs[k].values.at(d, y, x, c);
        }
        cues.total_visibility.at(d, y, x) = weight_sum;

        const bool weighted = weight_sum >= kVisibilityEpsilon;
        if (weighted) {
          for (double& m : mean) m /= weight_sum;
        } else {
          for (int c = 0; c < 3; ++c) {
            mean[c] = 0.0;
            for (int k = 0; k < views; ++k) mean[c] += psvs[k].values.at(d, y, x, c);
            mean[c] /= views;
          }
        }

        double spread = 0.0;
        for (int k = 0; k < views; ++k) {
          const double w = weighted ? visibility[k].at(d, y, x) : 1.0;
          double squared = 0.0;
          for (int c = 0; c < 3; ++c) {
            const double diff = psvs[k].values.at(d, y, x, c) - mean[c];
            squared += diff * diff;
          }
          spread += w * squared;
        }
        const double normalizer = weighted ? weight_sum : static_cast<double>(views);
        cues.color_variance.at(d, y, x) = spread / (3.0 * normalizer);
        for (int c = 0; c < 3; ++c) cues.mean_color.at(d, y, x, c) = mean[c];
      }
    }
  });
  return cues;
}

TauMap ComputeTauMap(const CueVolume& cues) {
  if (cues.view_count < 2) {
    throw Error(ErrorCode::kInsufficientViews,
                "the semi-occlusion test needs at least 2 views");
  }
  const Volume& vis = cues.total_visibility;
  const double k = cues.view_count;
  TauMap tau{vis.width, vis.height,
             std::vector<int>(static_cast<std::size_t>(vis.width) * vis.height,
                              kTauDefault)};
  for (int y = 0; y < vis.height; ++y) {
    for (int x = 0; x < vis.width; ++x) {
      for (int d = 0; d < vis.planes; ++d) {
        const double v = vis.at(d, y, x);
        if (v > 1.0 && v < k) {
          tau.values[static_cast<std::size_t>(y) * vis.width + x] = kTauSemiOccluded;
          break;
        }
      }
    }
  }
  return tau;
}

}  // namespace mpiforge
