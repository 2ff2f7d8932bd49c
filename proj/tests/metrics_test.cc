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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "mpiforge/error.h"
#include "mpiforge/metrics.h"
#include "oracle.h"

namespace mpiforge {
namespace {

Image Constant(int w, int h, double v) { return Image(w, h, 3, v); }

TEST(LumaTest, WeightsSumToOne) {
  EXPECT_NEAR(kLumaR + kLumaG + kLumaB, 1.0, 1e-15);
  Image rgb(1, 1, 3);
  rgb.at(0, 0, 0) = 1.0;
  EXPECT_NEAR(ToLuma(rgb).at(0, 0, 0), 0.299, 1e-15);
  Image gray(2, 2, 1, 0.25);
  EXPECT_EQ(ToLuma(gray).data, gray.data);
  EXPECT_THROW(ToLuma(Image(2, 2, 2)), Error);
}

TEST(SsimTest, IdenticalImagesScoreOne) {
  std::mt19937_64 rng(61);
  for (int size : {4, 11, 23}) {
    const Image a = oracle::RandomImage(rng, size, size + 3, 3);
    EXPECT_NEAR(Ssim(a, a), 1.0, 1e-9);
  }
}

TEST(SsimTest, ConstantImagesFollowClosedForm) {
  const double c1 = 0.01 * 0.01;
  const double expected = (2 * 0.2 * 0.4 + c1) / (0.2 * 0.2 + 0.4 * 0.4 + c1);
  EXPECT_NEAR(Ssim(Constant(16, 16, 0.2), Constant(16, 16, 0.4)), expected, 1e-9);
  EXPECT_NEAR(expected, oracle::SsimConstant(0.2, 0.4), 1e-15);
  EXPECT_NEAR(expected, 0.80010, 1e-5);
}

TEST(SsimTest, IndependentNoiseScoresLow) {
  std::mt19937_64 rng(62);
  const Image a = oracle::RandomImage(rng, 32, 32, 3);
  const Image b = oracle::RandomImage(rng, 32, 32, 3);
  EXPECT_LT(Ssim(a, b), 0.5);
}

TEST(SsimTest, IsSymmetric) {
  std::mt19937_64 rng(63);
  for (int i = 0; i < 10; ++i) {
    const Image a = oracle::RandomImage(rng, 20, 14, 3);
    const Image b = oracle::RandomImage(rng, 20, 14, 3);
    EXPECT_NEAR(Ssim(a, b), Ssim(b, a), 1e-12);
  }
}

TEST(SsimTest, MatchesDirectWindowedComputation) {
  std::mt19937_64 rng(64);
  for (int i = 0; i < 10; ++i) {
    const int w = 5 + static_cast<int>(rng() % 20);
    const int h = 5 + static_cast<int>(rng() % 20);
    const Image a = oracle::RandomImage(rng, w, h, 3);
    Image b = a;
    for (double& v : b.data) v = std::clamp(v + 0.1 * (static_cast<int>(rng() % 3) - 1), 0.0, 1.0);
    EXPECT_NEAR(Ssim(a, b), oracle::SsimDirect(a, b), 1e-9) << w << "x" << h;
  }
}

TEST(SsimTest, RejectsMismatchedImages) {
  EXPECT_THROW(Ssim(Constant(4, 4, 0), Constant(4, 5, 0)), Error);
  EXPECT_THROW(Ssim(Image(), Image()), Error);
}

TEST(ErrorMetricsTest, Examples) {
  const Image a = Constant(8, 8, 0.2);
  const Image b = Constant(8, 8, 0.4);
  EXPECT_NEAR(MeanAbsoluteError(a, b), 0.2, 1e-15);
  EXPECT_NEAR(Psnr(a, b), 10.0 * std::log10(1.0 / 0.04), 1e-9);
  EXPECT_EQ(Psnr(a, a), std::numeric_limits<double>::infinity());
  EXPECT_EQ(SynthesisError(a, a), 0.0 + (1.0 - Ssim(a, a)) / 2.0);
  EXPECT_NEAR(SynthesisError(a, a), 0.0, 1e-9);
  EXPECT_NEAR(SynthesisError(a, b), 0.2 + (1.0 - oracle::SsimConstant(0.2, 0.4)) / 2.0, 1e-9);
}

TEST(ErrorMetricsTest, EvaluateBundlesAllThree) {
  std::mt19937_64 rng(65);
  const Image a = oracle::RandomImage(rng, 16, 16, 3);
  const Image b = oracle::RandomImage(rng, 16, 16, 3);
  const MetricReport r = Evaluate(a, b);
  EXPECT_EQ(r.ssim, Ssim(a, b));
  EXPECT_EQ(r.l1, MeanAbsoluteError(a, b));
  EXPECT_EQ(r.psnr, Psnr(a, b));
  EXPECT_THROW(MeanAbsoluteError(a, Constant(16, 15, 0)), Error);
}

}  // namespace
}  // namespace mpiforge
