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

#ifndef MPIFORGE_IMAGE_H_
#define MPIFORGE_IMAGE_H_

#include <cstddef>
#include <vector>

namespace mpiforge {

// Dense interleaved image, row-major, values nominally in [0,1].
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0)
      : width(width),
        height(height),
        channels(channels),
        data(static_cast<std::size_t>(width) * height * channels, fill) {}

  bool empty() const { return data.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }

  double& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool SameShape(const Image& other) const {
    return width == other.width && height == other.height &&
           channels == other.channels;
  }
};

// Stack of equally sized images: planes x height x width x channels.
struct Volume {
  int planes = 0;
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  Volume() = default;
  Volume(int planes, int height, int width, int channels, double fill = 0.0)
      : planes(planes),
        height(height),
        width(width),
        channels(channels),
        data(static_cast<std::size_t>(planes) * height * width * channels,
             fill) {}

  std::size_t index(int d, int y, int x, int c) const {
    return ((static_cast<std::size_t>(d) * height + y) * width + x) *
               channels +
           c;
  }
  double& at(int d, int y, int x, int c = 0) { return data[index(d, y, x, c)]; }
  double at(int d, int y, int x, int c = 0) const {
    return data[index(d, y, x, c)];
  }

  Image Plane(int d) const;
  void SetPlane(int d, const Image& image);
};

// Bilinear lookup at continuous pixel coordinates (pixel centers at integer
// positions). Coordinates outside the image are clamped to the border.
// Lerp form: equal neighbours reproduce their value exactly.
double SampleBilinear(const Image& image, double x, double y, int channel);

}  // namespace mpiforge

#endif  // MPIFORGE_IMAGE_H_
