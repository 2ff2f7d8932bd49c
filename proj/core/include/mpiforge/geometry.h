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

#ifndef MPIFORGE_GEOMETRY_H_
#define MPIFORGE_GEOMETRY_H_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "mpiforge/image.h"

namespace mpiforge {

// Pinhole camera. Rotation and translation map world points into the camera
// frame (x_cam = R * x_world + t); the camera looks down +z.
struct Camera {
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  int width = 1;
  int height = 1;

  Eigen::Vector3d Center() const { return -rotation.transpose() * translation; }

  // Throws kValidation when the invariants do not hold.
  void Validate() const;
};

// A camera together with the image it observed.
struct View {
  Camera camera;
  Image image;
};

Camera MakeCamera(double focal, double cx, double cy, int width, int height,
                  const Eigen::Matrix3d& rotation = Eigen::Matrix3d::Identity(),
                  const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

// Plane depths ordered back to front: index 0 is the farthest plane.
class DepthList {
 public:
  DepthList() = default;
  // Throws kValidation unless size >= 2, finite, positive, strictly decreasing.
  explicit DepthList(std::vector<double> depths);

  int size() const { return static_cast<int>(depths_.size()); }
  double operator[](int i) const { return depths_[i]; }
  std::span<const double> values() const { return depths_; }
  const std::vector<double>& vector() const { return depths_; }

  // Index of an exactly matching depth, or -1.
  int IndexOf(double depth) const;

  bool operator==(const DepthList&) const = default;

 private:
  std::vector<double> depths_;
};

struct Homography {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Identity();

  Eigen::Vector2d Apply(const Eigen::Vector2d& point) const;
  // Throws kSingularHomography for a (numerically) singular matrix.
  Homography Inverse() const;
};

// Depths whose reciprocals are evenly spaced in [1/far, 1/near], returned
// back to front (first = far, last = near).
DepthList InverseDepthSamples(double near, double far, int count);

// Maps reference pixels to target pixels through the plane z = depth of the
// reference frame: H = K_t (R_rel + t_rel n^T / depth) K_r^-1, n = (0,0,1).
Homography PlaneHomography(const Camera& reference, const Camera& target,
                           double depth);

// Pull resampling: out(p) = source(out_to_source p), bilinear with edge
// clamping.
Image ResampleImage(const Image& source, const Homography& out_to_source,
                    int out_width, int out_height);

// Inverse warp: out(p) = source(h^-1 p), bilinear with edge clamping.
Image WarpImage(const Image& source, const Homography& h, int out_width,
                int out_height);

// Mean camera center plus quaternion-averaged rotation. Intrinsics are
// averaged element-wise and image dimensions are the rounded mean.
Camera AverageReferenceCamera(std::span<const Camera> cameras);

}  // namespace mpiforge

#endif  // MPIFORGE_GEOMETRY_H_
