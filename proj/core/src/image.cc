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

#include "mpiforge/image.h"

#include <algorithm>
#include <cmath>

namespace mpiforge {

Image Volume::Plane(int d) const {
  Image plane(width, height, channels);
  const auto begin = data.begin() + static_cast<std::ptrdiff_t>(index(d, 0, 0, 0));
  std::copy(begin, begin + static_cast<std::ptrdiff_t>(plane.data.size()),
            plane.data.begin());
  return plane;
}

void Volume::SetPlane(int d, const Image& image) {
  std::copy(image.data.begin(), image.data.end(),
            data.begin() + static_cast<std::ptrdiff_t>(index(d, 0, 0, 0)));
}

double SampleBilinear(const Image& image, double x, double y, int channel) {
  const double max_x = image.width - 1;
  const double max_y = image.height - 1;
  if (!std::isfinite(x)) x = x > 0 ? max_x : 0.0;
  if (!std::isfinite(y)) y = y > 0 ? max_y : 0.0;
  x = std::clamp(x, 0.0, max_x);
  y = std::clamp(y, 0.0, max_y);

  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;

  const double p00 = image.at(x0, y0, channel);
  const double p10 = image.at(x1, y0, channel);
  const double p01 = image.at(x0, y1, channel);
  const double p11 = image.at(x1, y1, channel);
  const double top = p00 + fx * (p10 - p00);
  const double bottom = p01 + fx * (p11 - p01);
  return top + fy * (bottom - top);
}

}  // namespace mpiforge
