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

#ifndef MPIFORGE_STORE_H_
#define MPIFORGE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mpiforge/geometry.h"
#include "mpiforge/mpi.h"
#include "mpiforge/pipeline.h"

namespace mpiforge {

// .cmpi container, all fields little-endian:
//
//   "CMPI"                   4 bytes
//   version                  u16 (= 1)
//   quantization             u16 (0 = f32, 1 = u8)
//   D, H, W                  u32 each
//   depths                   D x f32, back to front
//   reference camera         21 x f32 (intrinsics, rotation row-major, t)
//   D plane records:
//     mask runs              u32 lengths alternating zero / non-zero,
//                            starting with a zero run (possibly 0), summing
//                            to H*W
//     samples                RGBA of the non-zero voxels in row-major order
//
// u8 samples are round(v * 255) and decode as v / 255.
enum class Quantization : std::uint16_t { kFloat32 = 0, kUint8 = 1 };

inline constexpr std::uint16_t kContainerVersion = 1;

std::vector<std::uint8_t> EncodeMpi(const Mpi& mpi,
                                    Quantization quantization);

// Throws FormatError (with the failing byte offset) on any malformed input.
Mpi DecodeMpi(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

// 8- or 16-bit gray/gray-alpha/RGB/RGBA PNG to [0,1]. Alpha is dropped
// unless keep_alpha is set; gray expands to RGB.
Image ReadPng(const std::filesystem::path& path, bool keep_alpha = false);
// Writes 3 (RGB) or 4 (RGBA) channel images; values are clamped to [0,1].
void WritePng(const std::filesystem::path& path, const Image& image,
              int bit_depth = 8);

// Rig config: {"cameras": [camera, ...]} where camera is
//   {"intrinsics": [9], "rotation": [9], "translation": [3],
//    "width": w, "height": h, "image": "relative/or/absolute.png"}.
// Image paths resolve against the config's directory.
Scene LoadScene(const std::filesystem::path& config, int min_views = 2);
void SaveScene(const Scene& scene, const std::filesystem::path& config,
               int bit_depth = 16);

// A pose file is a single camera object of the rig schema (image optional).
Camera LoadPose(const std::filesystem::path& path);
void SavePose(const Camera& camera, const std::filesystem::path& path);

std::string DepthsToJson(const DepthList& depths);

struct BundleManifest {
  int planes = 0;
  int width = 0;
  int height = 0;
  int columns = 0;
  int rows = 0;
  std::vector<double> depths;
  Camera camera;
  std::string atlas = "atlas.png";
};

// Writes manifest.json and an RGBA atlas of all planes: ceil(sqrt(D)) columns,
// planes laid out row-major by index, each tile W x H.
BundleManifest ExportWebBundle(const Mpi& mpi,
                               const std::filesystem::path& out_dir);
BundleManifest ReadManifest(const std::filesystem::path& manifest);
Mpi ImportWebBundle(const std::filesystem::path& manifest);

}  // namespace mpiforge

#endif  // MPIFORGE_STORE_H_
