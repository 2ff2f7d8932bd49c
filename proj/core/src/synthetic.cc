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

#include "mpiforge/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>

namespace mpiforge {
namespace {

constexpr int kWaves = 12;

struct Wave {
  double fx, fy, phase, amplitude;
};

// Procedural color texture on one plane, parameterized in world units.
struct Texture {
  std::array<std::array<Wave, kWaves>, 3> waves;
  double period = 1.0;

  double Eval(double x, double y, int c) const {
    double v = 0.5;
    for (const Wave& w : waves[c]) {
      v += w.amplitude *
           std::sin(2.0 * std::numbers::pi * (w.fx * x + w.fy * y) / period + w.phase);
    }
    return std::clamp(v, 0.0, 1.0);
  }
};

Texture MakeTexture(std::mt19937_64& rng, double period, double amplitude) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  Texture texture;
  texture.period = period;
  for (auto& channel : texture.waves) {
    for (int i = 0; i < kWaves; ++i) {
      const double theta = angle(rng);
      const double s = scale(rng);
      channel[i] = Wave{s * std::cos(theta), s * std::sin(theta), angle(rng),
                        amplitude};
    }
  }
  return texture;
}

struct SceneTextures {
  Texture background;
  Texture foreground;
};

SceneTextures MakeTextures(const TwoPlaneSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  SceneTextures t;
  t.background = MakeTexture(rng, spec.texture_period_px * spec.background_depth / spec.focal,
                              spec.texture_amplitude);
  t.foreground = MakeTexture(rng, spec.texture_period_px * spec.foreground_depth / spec.focal,
                              spec.texture_amplitude);
  return t;
}

Camera RigCamera(const TwoPlaneSpec& spec, double x, double y) {
  return MakeCamera(spec.focal, (spec.width - 1) / 2.0, (spec.height - 1) / 2.0,
                    spec.width, spec.height, Eigen::Matrix3d::Identity(),
                    Eigen::Vector3d(x, y, 0.0));
}

Image Render(const TwoPlaneSpec& spec, const SceneTextures& textures,
             const Camera& camera) {
  const Eigen::Matrix3d ray_basis =
      camera.rotation.transpose() * camera.intrinsics.inverse();
  const Eigen::Vector3d center = camera.Center();
  const int s = std::max(1, spec.supersample);
  Image image(camera.width, camera.height, 3);
  for (int y = 0; y < camera.height; ++y) {
    for (int x = 0; x < camera.width; ++x) {
      double rgb[3] = {0.0, 0.0, 0.0};
      for (int sy = 0; sy < s; ++sy) {
        for (int sx = 0; sx < s; ++sx) {
          const double u = x + (sx + 0.5) / s - 0.5;
          const double v = y + (sy + 0.5) / s - 0.5;
          const Eigen::Vector3d dir = ray_basis * Eigen::Vector3d(u, v, 1.0);
          const Texture* texture = &textures.background;
          double depth = spec.background_depth;
          if (spec.has_foreground) {
            const double t = (spec.foreground_depth - center.z()) / dir.z();
            const Eigen::Vector3d p = center + t * dir;
            if (std::abs(p.x()) <= spec.foreground_half_size &&
                std::abs(p.y()) <= spec.foreground_half_size) {
              texture = &textures.foreground;
              depth = spec.foreground_depth;
            }
          }
          const double t = (depth - center.z()) / dir.z();
          const Eigen::Vector3d p = center + t * dir;
          for (int c = 0; c < 3; ++c) rgb[c] += texture->Eval(p.x(), p.y(), c);
        }
      }
      for (int c = 0; c < 3; ++c) image.at(x, y, c) = rgb[c] / (s * s);
    }
  }
  return image;
}

}  // namespace

Image RenderTwoPlane(const TwoPlaneSpec& spec, const Camera& camera) {
  return Render(spec, MakeTextures(spec), camera);
}

SyntheticScene MakeTwoPlaneScene(const TwoPlaneSpec& spec) {
  const SceneTextures textures = MakeTextures(spec);
  SyntheticScene scene;
  scene.spec = spec;
  const double h = spec.baseline / 2.0;
  for (const auto& [x, y] : {std::pair{-h, -h}, std::pair{h, -h},
                             std::pair{-h, h}, std::pair{h, h}}) {
    const Camera camera = RigCamera(spec, x, y);
    scene.inputs.views.push_back(View{camera, Render(spec, textures, camera)});
  }
  const Camera held_out = RigCamera(spec, spec.held_out_x, spec.held_out_y);
  scene.held_out = View{held_out, Render(spec, textures, held_out)};
  return scene;
}

}  // namespace mpiforge
