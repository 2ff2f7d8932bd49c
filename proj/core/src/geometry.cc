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

#include "mpiforge/geometry.h"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include "mpiforge/error.h"
#include "mpiforge/parallel.h"

namespace mpiforge {
namespace {

constexpr double kOrthonormalTolerance = 1e-9;
constexpr double kSingularTolerance = 1e-12;

bool IsSingular(const Eigen::Matrix3d& m) {
  if (!m.allFinite()) return true;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return std::abs((m / scale).determinant()) < kSingularTolerance;
}

}  // namespace

void Camera::Validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kValidation, "camera dimensions must be >= 1");
  }
  if (!intrinsics.allFinite() || !rotation.allFinite() ||
      !translation.allFinite()) {
    throw Error(ErrorCode::kValidation, "camera has non-finite parameters");
  }
  if (intrinsics(1, 0) != 0.0 || intrinsics(2, 0) != 0.0 ||
      intrinsics(2, 1) != 0.0) {
    throw Error(ErrorCode::kValidation, "intrinsics must be upper-triangular");
  }
  if (intrinsics(0, 0) <= 0.0 || intrinsics(1, 1) <= 0.0) {
    throw Error(ErrorCode::kValidation, "focal lengths must be positive");
  }
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() >
      kOrthonormalTolerance) {
    throw Error(ErrorCode::kValidation, "rotation is not orthonormal");
  }
  if (rotation.determinant() <= 0.0) {
    throw Error(ErrorCode::kValidation, "rotation must not be a reflection");
  }
}

Camera MakeCamera(double focal, double cx, double cy, int width, int height,
                  const Eigen::Matrix3d& rotation,
                  const Eigen::Vector3d& center) {
  Camera camera;
  camera.intrinsics << focal, 0.0, cx, 0.0, focal, cy, 0.0, 0.0, 1.0;
  camera.rotation = rotation;
  camera.translation = -rotation * center;
  camera.width = width;
  camera.height = height;
  return camera;
}

DepthList::DepthList(std::vector<double> depths) : depths_(std::move(depths)) {
  if (depths_.size() < 2) {
    throw Error(ErrorCode::kValidation, "a depth list needs at least 2 planes");
  }
  for (std::size_t i = 0; i < depths_.size(); ++i) {
    if (!std::isfinite(depths_[i]) || depths_[i] <= 0.0) {
      throw Error(ErrorCode::kValidation,
                  "depths must be finite and positive");
    }
    if (i > 0 && !(depths_[i] < depths_[i - 1])) {
      throw Error(ErrorCode::kValidation,
                  "depths must be strictly decreasing (back to front)");
    }
  }
}

int DepthList::IndexOf(double depth) const {
  for (int i = 0; i < size(); ++i) {
    if (depths_[i] == depth) return i;
  }
  return -1;
}

Eigen::Vector2d Homography::Apply(const Eigen::Vector2d& point) const {
  const Eigen::Vector3d p = matrix * point.homogeneous();
  return p.hnormalized();
}

Homography Homography::Inverse() const {
  if (IsSingular(matrix)) {
    throw Error(ErrorCode::kSingularHomography, "homography is not invertible");
  }
  return Homography{matrix.inverse()};
}

DepthList InverseDepthSamples(double near, double far, int count) {
  if (!(near > 0.0) || !(far > near) || !std::isfinite(far)) {
    throw Error(ErrorCode::kInvalidRange,
                "need 0 < near < far, got near=" + std::to_string(near) +
                    " far=" + std::to_string(far));
  }
  if (count < 2) {
    throw Error(ErrorCode::kInvalidRange, "need at least 2 depth samples");
  }
  const double inv_far = 1.0 / far;
  const double inv_near = 1.0 / near;
  const double step = (inv_near - inv_far) / (count - 1);
  std::vector<double> depths(count);
  depths.front() = far;
  depths.back() = near;
  for (int i = 1; i + 1 < count; ++i) depths[i] = 1.0 / (inv_far + i * step);
  return DepthList(std::move(depths));
}

Homography PlaneHomography(const Camera& reference, const Camera& target,
                           double depth) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw Error(ErrorCode::kInvalidRange, "plane depth must be positive");
  }
  const Eigen::Matrix3d relative_rotation =
      target.rotation * reference.rotation.transpose();
  const Eigen::Vector3d relative_translation =
      target.translation - relative_rotation * reference.translation;
  const Eigen::RowVector3d normal(0.0, 0.0, 1.0);
  const Eigen::Matrix3d euclidean =
      relative_rotation + relative_translation * normal / depth;
  const Eigen::Matrix3d h =
      target.intrinsics * euclidean * reference.intrinsics.inverse();
  if (IsSingular(h)) {
    throw Error(ErrorCode::kSingularHomography,
                "plane induces a singular homography at depth " +
                    std::to_string(depth));
  }
  return Homography{h};
}

Image WarpImage(const Image& source, const Homography& h, int out_width,
                int out_height) {
  if (source.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot warp an empty image");
  }
  return ResampleImage(source, h.Inverse(), out_width, out_height);
}

Image ResampleImage(const Image& source, const Homography& out_to_source,
                    int out_width, int out_height) {
  if (source.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot resample an empty image");
  }
  const Eigen::Matrix3d& inverse = out_to_source.matrix;
  Image out(out_width, out_height, source.channels);
  ParallelFor(0, out_height, [&](int y) {
    for (int x = 0; x < out_width; ++x) {
      const Eigen::Vector3d p = inverse * Eigen::Vector3d(x, y, 1.0);
      const double sx = p.x() / p.z();
      const double sy = p.y() / p.z();
      for (int c = 0; c < source.channels; ++c) {
        out.at(x, y, c) = SampleBilinear(source, sx, sy, c);
      }
    }
  });
  return out;
}

Camera AverageReferenceCamera(std::span<const Camera> cameras) {
  if (cameras.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no cameras to average");
  }
  const double n = static_cast<double>(cameras.size());

  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Zero();
  Eigen::Matrix4d accumulator = Eigen::Matrix4d::Zero();
  double width = 0.0;
  double height = 0.0;
  for (const Camera& camera : cameras) {
    center += camera.Center();
    intrinsics += camera.intrinsics;
    width += camera.width;
    height += camera.height;
    const Eigen::Vector4d q =
        Eigen::Quaterniond(camera.rotation).normalized().coeffs();
    accumulator += q * q.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(accumulator);
  // Eigenvalues are sorted ascending.
  Eigen::Vector4d mean_q = solver.eigenvectors().col(3);
  const Eigen::Vector4d first_q =
      Eigen::Quaterniond(cameras.front().rotation).normalized().coeffs();
  if (mean_q.dot(first_q) < 0.0) mean_q = -mean_q;
  const Eigen::Quaterniond rotation(mean_q(3), mean_q(0), mean_q(1), mean_q(2));

  Camera average;
  average.rotation = rotation.normalized().toRotationMatrix();
  average.translation = -average.rotation * (center / n);
  average.intrinsics = intrinsics / n;
  average.intrinsics(1, 0) = average.intrinsics(2, 0) = average.intrinsics(2, 1) = 0.0;
  average.intrinsics(2, 2) = 1.0;
  average.width = static_cast<int>(std::lround(width / n));
  average.height = static_cast<int>(std::lround(height / n));
  return average;
}

}  // namespace mpiforge
