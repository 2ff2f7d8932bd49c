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

#ifndef MPIFORGE_METRICS_H_
#define MPIFORGE_METRICS_H_

#include "mpiforge/image.h"

namespace mpiforge {

// Rec.601 luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

Image ToLuma(const Image& image);

// Single-scale SSIM on luma: 11x11 Gaussian window (sigma 1.5, unit sum),
// K1 = 0.01, K2 = 0.03, dynamic range 1, averaged over the window positions
// that lie fully inside the image. Images narrower than 11 px shrink the
// window to the largest odd size that fits.
double Ssim(const Image& a, const Image& b);

double MeanAbsoluteError(const Image& a, const Image& b);

// Peak signal-to-noise ratio in dB for a unit peak; +inf for equal images.
double Psnr(const Image& a, const Image& b);

// L1 + (1 - SSIM) / 2. Used where a perceptual loss would otherwise go.
double SynthesisError(const Image& rendered, const Image& gt);

struct MetricReport {
  double ssim = 0.0;
  double l1 = 0.0;
  double psnr = 0.0;
};

MetricReport Evaluate(const Image& a, const Image& b);

}  // namespace mpiforge

#endif  // MPIFORGE_METRICS_H_
