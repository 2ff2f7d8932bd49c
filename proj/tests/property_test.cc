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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mpiforge/adaptive.h"
#include "mpiforge/compact.h"
#include "mpiforge/cues.h"
#include "mpiforge/geometry.h"
#include "mpiforge/mpi.h"
#include "oracle.h"

namespace mpiforge {
namespace {

constexpr int kTrials = 200;

bool InUnit(double v) { return v >= 0.0 && v <= 1.0; }

TEST(PropertyTest, SigmoidAndLogitAreInverse) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> p(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const double v = p(rng);
    EXPECT_NEAR(Sigmoid(Logit(v)), v, 1e-12);
  }
}

TEST(PropertyTest, CompositeAndRenderStayInUnitRange) {
  std::mt19937_64 rng(82);
  for (int i = 0; i < kTrials; ++i) {
    const Mpi mpi = oracle::RandomMpi(rng, {5, 5, 0.2});
    for (double v : CompositeOver(mpi).data) ASSERT_TRUE(InUnit(v));
    const Camera view = oracle::RandomCamera(rng, mpi.width(), mpi.height(), 0.2, 0.05);
    for (double v : RenderView(mpi, view).data) ASSERT_TRUE(InUnit(v));
  }
}

TEST(PropertyTest, OverWeightsFormAPartitionOfUnity) {
  std::mt19937_64 rng(83);
  for (int i = 0; i < kTrials; ++i) {
    const Mpi mpi = oracle::RandomMpi(rng, {5, 4, 0.2});
    const Volume w = OverWeights(mpi);
    for (int y = 0; y < mpi.height(); ++y) {
      for (int x = 0; x < mpi.width(); ++x) {
        double sum = 0.0;
        for (int d = 0; d <= mpi.planes(); ++d) {
          ASSERT_GE(w.at(d, y, x), 0.0);
          sum += w.at(d, y, x);
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(PropertyTest, ReferenceVisibilityGrowsTowardTheCamera) {
  std::mt19937_64 rng(84);
  for (int i = 0; i < kTrials; ++i) {
    const Mpi mpi = oracle::RandomMpi(rng, {5, 4, 0.2});
    const Volume vis = VisibilityVolume(mpi, mpi.reference());
    for (int y = 0; y < mpi.height(); ++y) {
      for (int x = 0; x < mpi.width(); ++x) {
        EXPECT_EQ(vis.at(mpi.planes() - 1, y, x), 1.0);
        for (int d = 0; d + 1 < mpi.planes(); ++d) {
          ASSERT_TRUE(InUnit(vis.at(d, y, x)));
          EXPECT_LE(vis.at(d, y, x), vis.at(d + 1, y, x));
        }
      }
    }
  }
}

struct RandomRig {
  Mpi mpi;
  std::vector<Camera> cameras;
  std::vector<Psv> psvs;
};

RandomRig MakeRig(std::mt19937_64& rng) {
  RandomRig rig;
  rig.mpi = oracle::RandomMpi(rng, {4, 4, 0.2});
  const int views = 2 + static_cast<int>(rng() % 3);
  for (int k = 0; k < views; ++k) {
    const Camera cam = oracle::RandomCamera(rng, rig.mpi.width(), rig.mpi.height(), 0.3, 0.05);
    rig.cameras.push_back(cam);
    rig.psvs.push_back(BuildPsv(oracle::RandomImage(rng, cam.width, cam.height, 3), cam,
                                rig.mpi.reference(), rig.mpi.depths()));
  }
  return rig;
}

TEST(PropertyTest, CuesAreInRangeAndIgnoreViewOrder) {
  std::mt19937_64 rng(85);
  for (int i = 0; i < 50; ++i) {
    RandomRig rig = MakeRig(rng);
    const int k = static_cast<int>(rig.cameras.size());
    const CueVolume cues = ComputeCues(rig.psvs, rig.mpi, rig.cameras);
    for (double v : cues.total_visibility.data) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, k + 1e-12);
    }
    for (double v : cues.mean_color.data) ASSERT_TRUE(v >= -1e-12 && v <= 1.0 + 1e-12);
    for (double v : cues.color_variance.data) ASSERT_GE(v, 0.0);

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Camera> cameras;
    std::vector<Psv> psvs;
    for (int j : order) {
      cameras.push_back(rig.cameras[j]);
      psvs.push_back(rig.psvs[j]);
    }
    const CueVolume shuffled = ComputeCues(psvs, rig.mpi, cameras);
    for (std::size_t j = 0; j < cues.mean_color.data.size(); ++j) {
      EXPECT_NEAR(cues.mean_color.data[j], shuffled.mean_color.data[j], 1e-12);
    }
    for (std::size_t j = 0; j < cues.color_variance.data.size(); ++j) {
      EXPECT_NEAR(cues.color_variance.data[j], shuffled.color_variance.data[j], 1e-12);
      EXPECT_NEAR(cues.total_visibility.data[j], shuffled.total_visibility.data[j], 1e-12);
    }
    const TauMap tau = ComputeTauMap(cues);
    EXPECT_EQ(tau.values, ComputeTauMap(shuffled).values);
    for (int t : tau.values) EXPECT_TRUE(t == kTauDefault || t == kTauSemiOccluded);
  }
}

TEST(PropertyTest, ThresholdingOnlyRemovesVoxels) {
  std::mt19937_64 rng(86);
  for (int i = 0; i < kTrials; ++i) {
    const Mpi mpi = oracle::RandomMpi(rng, {5, 4, 0.2});
    double previous = Occupancy(mpi);
    for (double t : DefaultSweepThresholds()) {
      const Mpi cut = ThresholdAlpha(mpi, t);
      const double occupancy = Occupancy(cut);
      EXPECT_LE(occupancy, previous);
      previous = occupancy;
      for (std::size_t v = 0; v < mpi.voxel_count(); ++v) {
        const double a = cut.values()[v * 4 + 3];
        EXPECT_TRUE(a == 0.0 || a == mpi.values()[v * 4 + 3]);
        EXPECT_TRUE(a == 0.0 || a >= t);
      }
    }
  }
}

TEST(PropertyTest, AllocationConservesAndRespectsWeightOrder) {
  std::mt19937_64 rng(87);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    std::vector<double> w(n);
    for (double& v : w) v = unit(rng);
    const int count = static_cast<int>(rng() % 40);
    const std::vector<int> a = AllocateDepths(w, count);
    EXPECT_EQ(std::accumulate(a.begin(), a.end(), 0), count);
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        if (w[p] > w[q]) {
          EXPECT_GE(a[p], a[q]);
        }
      }
    }
  }
}

TEST(PropertyTest, RedistributionKeepsDepthsOrderedAndIncludesKept) {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const DepthList kept = oracle::RandomDepths(rng, 2 + static_cast<int>(rng() % 6));
    IntervalWeights w;
    w.kept_depths = kept;
    for (int j = 0; j < kept.size(); ++j) w.plane_weights.push_back(unit(rng));
    for (int j = 0; j + 1 < kept.size(); ++j) {
      w.interval_weights.push_back((w.plane_weights[j] + w.plane_weights[j + 1]) / 2);
    }
    const int removed = static_cast<int>(rng() % 12);
    const DepthList out = RedistributeDepths(w, removed);
    ASSERT_EQ(out.size(), kept.size() + removed);
    for (int j = 1; j < out.size(); ++j) EXPECT_LT(out[j], out[j - 1]);
    for (double d : kept.values()) EXPECT_GE(out.IndexOf(d), 0);
  }
}

TEST(PropertyTest, HomographyMapsThroughInverse) {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> px(0.0, 8.0);
  for (int i = 0; i < kTrials; ++i) {
    const Camera a = oracle::RandomCamera(rng, 8, 8, 0.5, 0.1);
    const Camera b = oracle::RandomCamera(rng, 8, 8, 0.5, 0.1);
    const double depth = 2.0 + 10.0 * px(rng) / 8.0;
    const Homography h = PlaneHomography(a, b, depth);
    const Eigen::Vector2d p(px(rng), px(rng));
    const Eigen::Vector2d q = h.Apply(p);
    const auto expected = oracle::ProjectThroughPlane(a, b, depth, p.x(), p.y());
    EXPECT_NEAR(q.x(), expected[0], 1e-8);
    EXPECT_NEAR(q.y(), expected[1], 1e-8);
    const Eigen::Vector2d back = h.Inverse().Apply(q);
    EXPECT_NEAR(back.x(), p.x(), 1e-8);
    EXPECT_NEAR(back.y(), p.y(), 1e-8);
  }
}

}  // namespace
}  // namespace mpiforge
