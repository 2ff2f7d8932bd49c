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


#include "oracle.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include <Eigen/Geometry>

namespace oracle {
namespace {

// Solves K v = p by back substitution (K upper triangular).
Eigen::Vector3d SolveUpper(const Eigen::Matrix3d& k, const Eigen::Vector3d& p) {
  Eigen::Vector3d v;
  v.z() = p.z() / k(2, 2);
  v.y() = (p.y() - k(1, 2) * v.z()) / k(1, 1);
  v.x() = (p.x() - k(0, 1) * v.y() - k(0, 2) * v.z()) / k(0, 0);
  return v;
}

std::array<double, 2> Project(const Eigen::Matrix3d& k, const Eigen::Vector3d& p) {
  const Eigen::Vector3d q = k * p;
  return {q.x() / q.z(), q.y() / q.z()};
}

Image PlaneImage(const Mpi& mpi, int d, int first_channel, int channels) {
  Image out(mpi.width(), mpi.height(), channels);
  for (int y = 0; y < mpi.height(); ++y) {
    for (int x = 0; x < mpi.width(); ++x) {
      for (int c = 0; c < channels; ++c) out.at(x, y, c) = mpi.value(d, y, x, first_channel + c);
    }
  }
  return out;
}

double Luma(const Image& img, int x, int y) {
  return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
}

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

Eigen::Matrix3d BackHomography(const Camera& reference, const Camera& target, double depth) {
  const Eigen::Matrix3d r = target.rotation * reference.rotation.transpose();
  const Eigen::Vector3d t = target.translation - r * reference.translation;
  const Eigen::Vector3d n_t = r * Eigen::Vector3d::UnitZ();
  const double d_t = depth + n_t.dot(t);
  const Eigen::Matrix3d m = r.transpose() - r.transpose() * t * n_t.transpose() / d_t;
  return reference.intrinsics * m * target.intrinsics.inverse();
}

std::array<double, 2> ProjectThroughPlane(const Camera& reference, const Camera& target,
                                          double depth, double x, double y) {
  const Eigen::Vector3d ray = SolveUpper(reference.intrinsics, Eigen::Vector3d(x, y, 1.0));
  const Eigen::Vector3d in_reference = ray * (depth / ray.z());
  const Eigen::Vector3d world =
      reference.rotation.transpose() * (in_reference - reference.translation);
  const Eigen::Vector3d in_target = target.rotation * world + target.translation;
  return Project(target.intrinsics, in_target);
}

std::array<double, 2> RayToReference(const Camera& reference, const Camera& target,
                                     double depth, double x, double y) {
  const Eigen::Vector3d direction_target =
      SolveUpper(target.intrinsics, Eigen::Vector3d(x, y, 1.0));
  const Eigen::Vector3d origin_world = -target.rotation.transpose() * target.translation;
  const Eigen::Vector3d direction_world = target.rotation.transpose() * direction_target;
  const Eigen::Vector3d origin = reference.rotation * origin_world + reference.translation;
  const Eigen::Vector3d direction = reference.rotation * direction_world;
  const double s = (depth - origin.z()) / direction.z();
  return Project(reference.intrinsics, origin + s * direction);
}

double Bilinear(const Image& image, double x, double y, int channel) {
  x = std::min(std::max(x, 0.0), image.width - 1.0);
  y = std::min(std::max(y, 0.0), image.height - 1.0);
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  return (1 - fx) * (1 - fy) * image.at(x0, y0, channel) +
         fx * (1 - fy) * image.at(x1, y0, channel) +
         (1 - fx) * fy * image.at(x0, y1, channel) + fx * fy * image.at(x1, y1, channel);
}

Image CompositeFrontToBack(const Mpi& mpi) {
  Image out(mpi.width(), mpi.height(), 3);
  for (int y = 0; y < mpi.height(); ++y) {
    for (int x = 0; x < mpi.width(); ++x) {
      double transmittance = 1.0;
      for (int d = mpi.planes() - 1; d >= 0; --d) {
        const double a = mpi.alpha(d, y, x);
        for (int c = 0; c < 3; ++c) out.at(x, y, c) += transmittance * a * mpi.value(d, y, x, c);
        transmittance *= 1.0 - a;
      }
    }
  }
  return out;
}

Image RenderByRays(const Mpi& mpi, const Camera& target) {
  std::vector<Image> planes;
  for (int d = 0; d < mpi.planes(); ++d) planes.push_back(PlaneImage(mpi, d, 0, 4));
  Image out(target.width, target.height, 3);
  for (int y = 0; y < target.height; ++y) {
    for (int x = 0; x < target.width; ++x) {
      double transmittance = 1.0;
      for (int d = mpi.planes() - 1; d >= 0; --d) {
        const auto p = RayToReference(mpi.reference(), target, mpi.depths()[d], x, y);
        const double a = Bilinear(planes[d], p[0], p[1], 3);
        for (int c = 0; c < 3; ++c) {
          out.at(x, y, c) += transmittance * a * Bilinear(planes[d], p[0], p[1], c);
        }
        transmittance *= 1.0 - a;
      }
    }
  }
  return out;
}

Volume WarpAlphaByRays(const Mpi& mpi, const Camera& view) {
  Volume out(mpi.planes(), view.height, view.width, 1);
  for (int d = 0; d < mpi.planes(); ++d) {
    const Image alpha = PlaneImage(mpi, d, 3, 1);
    for (int y = 0; y < view.height; ++y) {
      for (int x = 0; x < view.width; ++x) {
        const auto p = RayToReference(mpi.reference(), view, mpi.depths()[d], x, y);
        out.at(d, y, x) = Bilinear(alpha, p[0], p[1], 0);
      }
    }
  }
  return out;
}

Volume VisibilityByRays(const Mpi& mpi, const Camera& view) {
  const Volume warped = WarpAlphaByRays(mpi, view);
  std::vector<Image> planes;
  for (int d = 0; d < mpi.planes(); ++d) planes.push_back(warped.Plane(d));
  Volume out(mpi.planes(), mpi.height(), mpi.width(), 1);
  for (int d = 0; d < mpi.planes(); ++d) {
    for (int y = 0; y < mpi.height(); ++y) {
      for (int x = 0; x < mpi.width(); ++x) {
        const auto u = ProjectThroughPlane(mpi.reference(), view, mpi.depths()[d], x, y);
        double t = 1.0;
        for (int j = d + 1; j < mpi.planes(); ++j) t *= 1.0 - Bilinear(planes[j], u[0], u[1], 0);
        out.at(d, y, x) = t;
      }
    }
  }
  return out;
}

Cues CuesFromVisibility(std::span<const Volume> psvs, std::span<const Volume> visibility) {
  const Volume& shape = visibility.front();
  const std::size_t voxels = shape.data.size();
  const int k = static_cast<int>(psvs.size());
  Cues cues{std::vector<double>(voxels), std::vector<double>(voxels * 3),
            std::vector<double>(voxels)};
  for (std::size_t v = 0; v < voxels; ++v) {
    double vbar = 0.0;
    for (int i = 0; i < k; ++i) vbar += visibility[i].data[v];
    cues.total_visibility[v] = vbar;
    const bool fallback = vbar < 1e-4;
    double mu[3];
    for (int c = 0; c < 3; ++c) {
      double num = 0.0;
      double den = 0.0;
      for (int i = 0; i < k; ++i) {
        const double w = fallback ? 1.0 : visibility[i].data[v];
        num += w * psvs[i].data[v * 3 + c];
        den += w;
      }
      mu[c] = num / den;
      cues.mean[v * 3 + c] = mu[c];
    }
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < k; ++i) {
      const double w = fallback ? 1.0 : visibility[i].data[v];
      for (int c = 0; c < 3; ++c) {
        const double e = psvs[i].data[v * 3 + c] - mu[c];
        num += w * e * e;
      }
      den += w;
    }
    cues.variance[v] = num / (3.0 * den);
  }
  return cues;
}

std::vector<int> TauFromVisibility(const Volume& total_visibility, int views) {
  std::vector<int> tau(static_cast<std::size_t>(total_visibility.width) *
                       total_visibility.height);
  for (int y = 0; y < total_visibility.height; ++y) {
    for (int x = 0; x < total_visibility.width; ++x) {
      bool semi = false;
      for (int d = 0; d < total_visibility.planes; ++d) {
        const double v = total_visibility.at(d, y, x);
        semi = semi || (1.0 < v && v < views);
      }
      tau[static_cast<std::size_t>(y) * total_visibility.width + x] = semi ? 6 : 3;
    }
  }
  return tau;
}

double SumExcess(const Image& accumulated, std::span<const int> tau) {
  double total = 0.0;
  for (int y = 0; y < accumulated.height; ++y) {
    for (int x = 0; x < accumulated.width; ++x) {
      const double over = accumulated.at(x, y, 0) - tau[static_cast<std::size_t>(y) * accumulated.width + x];
      if (over > 0.0) total += over;
    }
  }
  return total;
}

double SsimDirect(const Image& a, const Image& b) {
  int size = std::min({11, a.width, a.height});
  if (size % 2 == 0) --size;
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double dy = i - r;
      const double dx = j - r;
      w[i * size + j] = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
      total += w[i * size + j];
    }
  }
  for (double& v : w) v /= total;
  const double c1 = 0.01 * 0.01;
  const double c2 = 0.03 * 0.03;
  double sum = 0.0;
  int count = 0;
  for (int oy = 0; oy + size <= a.height; ++oy) {
    for (int ox = 0; ox + size <= a.width; ++ox) {
      double mx = 0.0, my = 0.0;
      for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
          mx += w[i * size + j] * Luma(a, ox + j, oy + i);
          my += w[i * size + j] * Luma(b, ox + j, oy + i);
        }
      }
      double vx = 0.0, vy = 0.0, cxy = 0.0;
      for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
          const double ex = Luma(a, ox + j, oy + i) - mx;
          const double ey = Luma(b, ox + j, oy + i) - my;
          vx += w[i * size + j] * ex * ex;
          vy += w[i * size + j] * ey * ey;
          cxy += w[i * size + j] * ex * ey;
        }
      }
      sum += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return sum / count;
}

double SsimConstant(double mx, double my) {
  const double c1 = 0.01 * 0.01;
  return (2 * mx * my + c1) / (mx * mx + my * my + c1);
}

std::vector<int> LargestRemainder(std::span<const double> weights, int count) {
  const int n = static_cast<int>(weights.size());
  std::vector<double> w(weights.begin(), weights.end());
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) {
    std::fill(w.begin(), w.end(), 1.0);
    total = n;
  }
  std::vector<int> out(n);
  std::vector<double> remainder(n);
  int given = 0;
  for (int i = 0; i < n; ++i) {
    const double quota = count * w[i] / total;
    out[i] = static_cast<int>(std::floor(quota));
    remainder[i] = quota - out[i];
    given += out[i];
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return a > b;
  });
  for (int i = 0; given < count; ++i, ++given) ++out[order[i % n]];
  return out;
}

bool ParseContainer(std::span<const std::uint8_t> bytes, ContainerLayout* layout) {
  const std::uint8_t* p = bytes.data();
  std::size_t left = bytes.size();
  auto take = [&](std::size_t n) {
    if (left < n) return false;
    p += n;
    left -= n;
    return true;
  };
  if (left < 20 || std::memcmp(p, "CMPI", 4) != 0) return false;
  layout->version = static_cast<std::uint16_t>(p[4] | (p[5] << 8));
  layout->quantization = static_cast<std::uint16_t>(p[6] | (p[7] << 8));
  layout->planes = ReadU32(p + 8);
  layout->height = ReadU32(p + 12);
  layout->width = ReadU32(p + 16);
  take(20);
  if (!take(4ull * layout->planes + 21 * 4)) return false;
  const std::size_t sample = layout->quantization == 0 ? 16 : 4;
  const std::uint64_t plane = static_cast<std::uint64_t>(layout->height) * layout->width;
  layout->runs.assign(layout->planes, {});
  layout->payload_bytes.assign(layout->planes, 0);
  for (std::uint32_t d = 0; d < layout->planes; ++d) {
    std::uint64_t covered = 0;
    std::uint64_t nonzero = 0;
    bool zero_run = true;
    while (covered < plane) {
      if (left < 4) return false;
      const std::uint32_t run = ReadU32(p);
      take(4);
      layout->runs[d].push_back(run);
      covered += run;
      if (!zero_run) nonzero += run;
      zero_run = !zero_run;
    }
    if (covered != plane) return false;
    layout->payload_bytes[d] = nonzero * sample;
    if (!take(layout->payload_bytes[d])) return false;
  }
  return left == 0;
}

Mpi RandomMpi(std::mt19937_64& rng, const RandomMpiOptions& options) {
  std::uniform_int_distribution<int> plane_count(1, options.max_planes);
  std::uniform_int_distribution<int> side(1, options.max_size);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int planes = std::max(2, plane_count(rng));
  const int h = side(rng);
  const int w = side(rng);
  std::vector<double> values(static_cast<std::size_t>(planes) * h * w * 4);
  for (std::size_t v = 0; v < values.size() / 4; ++v) {
    const bool zero = unit(rng) < options.zero_probability;
    // Single precision, like every materialized MPI value.
    for (int c = 0; c < 4; ++c) values[v * 4 + c] = zero ? 0.0 : static_cast<float>(unit(rng));
    if (!zero && values[v * 4 + 3] == 0.0) values[v * 4 + 3] = 0.5;
  }
  const Camera reference = mpiforge::MakeCamera(w + 1.0, (w - 1) / 2.0, (h - 1) / 2.0, w, h);
  return Mpi::FromValues(std::move(values), h, w, RandomDepths(rng, planes), reference);
}

Camera RandomCamera(std::mt19937_64& rng, int width, int height, double spread,
                    double max_angle) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
  if (axis.norm() < 1e-6) axis = Eigen::Vector3d::UnitY();
  const double angle = max_angle * unit(rng);
  const Eigen::Matrix3d rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  const Eigen::Vector3d center(spread * unit(rng), spread * unit(rng), spread * unit(rng));
  const double focal = std::max(width, height) * (1.0 + 0.25 * unit(rng));
  return mpiforge::MakeCamera(focal, (width - 1) / 2.0, (height - 1) / 2.0, width, height,
                              rotation, center);
}

Image RandomImage(std::mt19937_64& rng, int width, int height, int channels) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Image img(width, height, channels);
  for (double& v : img.data) v = unit(rng);
  return img;
}

mpiforge::DepthList RandomDepths(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> step(0.2, 2.0);
  std::vector<double> depths(count);
  double z = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
  for (int i = count - 1; i >= 0; --i) {
    depths[i] = z;
    z += step(rng);
  }
  return mpiforge::DepthList(std::move(depths));
}

}  // namespace oracle
