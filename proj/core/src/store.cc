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

#include "mpiforge/store.h"

#include <png.h>

#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "mpiforge/error.h"

namespace mpiforge {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "the container codec assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'M', 'P', 'I'};
constexpr int kCameraFloats = 21;

class ByteWriter {
 public:
  void Raw(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + size);
  }
  void U8(std::uint8_t v) { bytes_.push_back(v); }
  void U16(std::uint16_t v) { Raw(&v, sizeof(v)); }
  void U32(std::uint32_t v) { Raw(&v, sizeof(v)); }
  void F32(double v) {
    const float f = static_cast<float>(v);
    Raw(&f, sizeof(f));
  }
  std::vector<std::uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }

  void Raw(void* out, std::size_t size, const char* what) {
    if (remaining() < size) {
      throw FormatError(offset_, std::string("truncated stream while reading ") + what);
    }
    std::memcpy(out, bytes_.data() + offset_, size);
    offset_ += size;
  }
  std::uint8_t U8(const char* what) {
    std::uint8_t v;
    Raw(&v, sizeof(v), what);
    return v;
  }
  std::uint16_t U16(const char* what) {
    std::uint16_t v;
    Raw(&v, sizeof(v), what);
    return v;
  }
  std::uint32_t U32(const char* what) {
    std::uint32_t v;
    Raw(&v, sizeof(v), what);
    return v;
  }
  float F32(const char* what) {
    float v;
    Raw(&v, sizeof(v), what);
    return v;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t offset_ = 0;
};

void WriteCamera(ByteWriter& out, const Camera& camera) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.F32(camera.intrinsics(r, c));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.F32(camera.rotation(r, c));
  for (int i = 0; i < 3; ++i) out.F32(camera.translation(i));
}

Camera ReadCamera(ByteReader& in, int width, int height) {
  Camera camera;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) camera.intrinsics(r, c) = in.F32("intrinsics");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) camera.rotation(r, c) = in.F32("rotation");
  for (int i = 0; i < 3; ++i) camera.translation(i) = in.F32("translation");
  camera.width = width;
  camera.height = height;
  if (!camera.intrinsics.allFinite() || !camera.rotation.allFinite() ||
      !camera.translation.allFinite()) {
    throw FormatError(in.offset(), "non-finite camera parameters");
  }
  return camera;
}

std::uint8_t QuantizeU8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// ---- JSON helpers ---------------------------------------------------------

json MatrixToJson(const Eigen::Matrix3d& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.push_back(m(r, c));
  return out;
}

json CameraToJson(const Camera& camera) {
  json out;
  out["intrinsics"] = MatrixToJson(camera.intrinsics);
  out["rotation"] = MatrixToJson(camera.rotation);
  out["translation"] = {camera.translation.x(), camera.translation.y(),
                        camera.translation.z()};
  out["width"] = camera.width;
  out["height"] = camera.height;
  return out;
}

std::vector<double> NumberArray(const json& node, const char* key, std::size_t size) {
  if (!node.contains(key) || !node[key].is_array() || node[key].size() != size) {
    throw Error(ErrorCode::kValidation, std::string("camera field '") + key +
                                            "' must be an array of " +
                                            std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (const json& v : node[key]) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kValidation, std::string("camera field '") + key +
                                              "' holds a non-number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Camera CameraFromJson(const json& node) {
  if (!node.is_object()) throw Error(ErrorCode::kValidation, "camera must be an object");
  const auto k = NumberArray(node, "intrinsics", 9);
  const auto r = NumberArray(node, "rotation", 9);
  const auto t = NumberArray(node, "translation", 3);
  if (!node.contains("width") || !node["width"].is_number_integer() ||
      !node.contains("height") || !node["height"].is_number_integer()) {
    throw Error(ErrorCode::kValidation, "camera needs integer width and height");
  }
  Camera camera;
  for (int i = 0; i < 9; ++i) {
    camera.intrinsics(i / 3, i % 3) = k[i];
    camera.rotation(i / 3, i % 3) = r[i];
  }
  camera.translation = Eigen::Vector3d(t[0], t[1], t[2]);
  camera.width = node["width"].get<int>();
  camera.height = node["height"].get<int>();
  camera.Validate();
  return camera;
}

json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

// ---- PNG ------------------------------------------------------------------

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngRaw {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> pixels;
};

// Returns false on a libpng error; no C++ objects are created after setjmp.
bool DecodePng(std::FILE* file, PngRaw& raw, std::vector<png_bytep>& rows) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, file);
  png_read_info(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);
  raw.width = static_cast<int>(png_get_image_width(png, info));
  raw.height = static_cast<int>(png_get_image_height(png, info));
  raw.channels = png_get_channels(png, info);
  raw.bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  raw.pixels.resize(row_bytes * raw.height);
  rows.resize(raw.height);
  for (int y = 0; y < raw.height; ++y) rows[y] = raw.pixels.data() + row_bytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool EncodePng(std::FILE* file, int width, int height, int channels, int bit_depth,
               std::vector<png_bytep>& rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, width, height, bit_depth,
               channels == 4 ? PNG_COLOR_TYPE_RGBA : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

std::vector<std::uint8_t> EncodeMpi(const Mpi& mpi, Quantization quantization) {
  ByteWriter out;
  out.Raw(kMagic, sizeof(kMagic));
  out.U16(kContainerVersion);
  out.U16(static_cast<std::uint16_t>(quantization));
  out.U32(static_cast<std::uint32_t>(mpi.planes()));
  out.U32(static_cast<std::uint32_t>(mpi.height()));
  out.U32(static_cast<std::uint32_t>(mpi.width()));
  for (double depth : mpi.depths().values()) out.F32(depth);
  WriteCamera(out, mpi.reference());

  const auto mask = mpi.zero_mask();
  const auto values = mpi.values();
  const std::size_t plane_size = mpi.plane_size();
  for (int d = 0; d < mpi.planes(); ++d) {
    const std::size_t begin = d * plane_size;
    // Runs alternate zero / non-zero, starting with a (possibly empty) zero run.
    bool zero_run = true;
    std::uint32_t run = 0;
    for (std::size_t i = 0; i < plane_size; ++i) {
      const bool is_zero = mask[begin + i] != 0;
      if (is_zero != zero_run) {
        out.U32(run);
        run = 0;
        zero_run = is_zero;
      }
      ++run;
    }
    out.U32(run);

    for (std::size_t i = 0; i < plane_size; ++i) {
      if (mask[begin + i] != 0) continue;
      for (int c = 0; c < Mpi::kChannels; ++c) {
        const double v = values[(begin + i) * Mpi::kChannels + c];
        if (quantization == Quantization::kUint8) {
          out.U8(QuantizeU8(v));
        } else {
          out.F32(v);
        }
      }
    }
  }
  return out.Take();
}

Mpi DecodeMpi(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  char magic[4];
  in.Raw(magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(0, "bad magic, not a CMPI container");
  }
  const std::uint16_t version = in.U16("version");
  if (version != kContainerVersion) {
    throw FormatError(in.offset() - 2, "unsupported version " + std::to_string(version));
  }
  const std::uint16_t quant = in.U16("quantization");
  if (quant > static_cast<std::uint16_t>(Quantization::kUint8)) {
    throw FormatError(in.offset() - 2, "unknown quantization " + std::to_string(quant));
  }
  const Quantization quantization = static_cast<Quantization>(quant);
  const std::uint32_t planes = in.U32("plane count");
  const std::uint32_t height = in.U32("height");
  const std::uint32_t width = in.U32("width");
  const std::size_t header_end = in.offset();
  if (planes < 2 || height < 1 || width < 1) {
    throw FormatError(header_end, "invalid dimensions");
  }
  // Cheap plausibility bound before allocating: every plane needs >= 4 bytes.
  if (static_cast<std::uint64_t>(planes) * 4 + kCameraFloats * 4 > in.remaining() ||
      static_cast<std::uint64_t>(height) * width > (1ull << 31)) {
    throw FormatError(header_end, "dimensions exceed the stream size");
  }

  std::vector<double> depths(planes);
  for (double& depth : depths) depth = in.F32("depths");
  Camera reference = ReadCamera(in, static_cast<int>(width), static_cast<int>(height));

  const std::size_t plane_size = static_cast<std::size_t>(height) * width;
  std::vector<double> values(plane_size * planes * Mpi::kChannels, 0.0);
  std::vector<std::uint8_t> zero_mask(plane_size * planes, 1);
  for (std::uint32_t d = 0; d < planes; ++d) {
    const auto plane_mask = zero_mask.begin() + static_cast<std::ptrdiff_t>(d * plane_size);
    std::size_t filled = 0;
    bool zero_run = true;
    while (filled < plane_size) {
      const std::size_t at = in.offset();
      const std::uint32_t run = in.U32("mask run");
      if (run > plane_size - filled) throw FormatError(at, "mask runs overflow the plane");
      if (!zero_run) std::fill_n(plane_mask + static_cast<std::ptrdiff_t>(filled), run, 0);
      filled += run;
      zero_run = !zero_run;
    }
    for (std::size_t i = 0; i < plane_size; ++i) {
      if (plane_mask[static_cast<std::ptrdiff_t>(i)] != 0) continue;
      double* rgba = &values[(d * plane_size + i) * Mpi::kChannels];
      for (int c = 0; c < Mpi::kChannels; ++c) {
        const std::size_t at = in.offset();
        const double v = quantization == Quantization::kUint8
                             ? in.U8("sample") / 255.0
                             : static_cast<double>(in.F32("sample"));
        if (!(v >= 0.0 && v <= 1.0)) throw FormatError(at, "sample outside [0,1]");
        rgba[c] = v;
      }
    }
  }
  if (in.remaining() != 0) throw FormatError(in.offset(), "trailing bytes after last plane");

  try {
    return Mpi::FromValues(std::move(values), static_cast<int>(height),
                           static_cast<int>(width), DepthList(std::move(depths)),
                           std::move(reference), std::move(zero_mask));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(header_end, e.what());
  }
}

std::vector<std::uint8_t> ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

Image ReadPng(const fs::path& path, bool keep_alpha) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  PngRaw raw;
  std::vector<png_bytep> rows;
  if (!DecodePng(file.get(), raw, rows)) {
    throw Error(ErrorCode::kIo, "cannot decode PNG " + path.string());
  }
  const int channels = keep_alpha && raw.channels == 4 ? 4 : 3;
  const double scale = raw.bit_depth == 16 ? 65535.0 : 255.0;
  const std::size_t bytes_per_sample = raw.bit_depth == 16 ? 2 : 1;
  Image image(raw.width, raw.height, channels);
  for (std::size_t p = 0; p < image.pixel_count(); ++p) {
    for (int c = 0; c < channels; ++c) {
      const std::uint8_t* s =
          &raw.pixels[(p * raw.channels + c) * bytes_per_sample];
      const unsigned v = bytes_per_sample == 2 ? (s[0] << 8) | s[1] : s[0];
      image.data[p * channels + c] = v / scale;
    }
  }
  return image;
}

void WritePng(const fs::path& path, const Image& image, int bit_depth) {
  if (image.channels != 3 && image.channels != 4) {
    throw Error(ErrorCode::kShape, "PNG output needs 3 or 4 channels");
  }
  if (bit_depth != 8 && bit_depth != 16) {
    throw Error(ErrorCode::kRange, "PNG bit depth must be 8 or 16");
  }
  const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
  const double scale = bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<std::uint8_t> pixels(image.data.size() * bytes_per_sample);
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    const auto v = static_cast<unsigned>(
        std::lround(std::clamp(image.data[i], 0.0, 1.0) * scale));
    if (bytes_per_sample == 2) {
      pixels[2 * i] = static_cast<std::uint8_t>(v >> 8);
      pixels[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
    } else {
      pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  std::vector<png_bytep> rows(image.height);
  const std::size_t row_bytes =
      static_cast<std::size_t>(image.width) * image.channels * bytes_per_sample;
  for (int y = 0; y < image.height; ++y) rows[y] = pixels.data() + row_bytes * y;

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  if (!EncodePng(file.get(), image.width, image.height, image.channels, bit_depth, rows)) {
    throw Error(ErrorCode::kIo, "failed encoding PNG " + path.string());
  }
  if (std::fflush(file.get()) != 0) {
    throw Error(ErrorCode::kIo, "failed writing " + path.string());
  }
}

Scene LoadScene(const fs::path& config, int min_views) {
  const json root = ReadJson(config);
  const json* cameras = &root;
  if (root.is_object()) {
    if (!root.contains("cameras")) {
      throw Error(ErrorCode::kValidation, config.string() + " has no 'cameras' list");
    }
    cameras = &root["cameras"];
  }
  if (!cameras->is_array()) {
    throw Error(ErrorCode::kValidation, "'cameras' must be an array");
  }
  if (static_cast<int>(cameras->size()) < min_views) {
    throw Error(ErrorCode::kInsufficientViews,
                config.string() + " lists " + std::to_string(cameras->size()) +
                    " views, need at least " + std::to_string(min_views));
  }
  Scene scene;
  const fs::path base = config.parent_path();
  for (const json& node : *cameras) {
    View view;
    view.camera = CameraFromJson(node);
    if (!node.contains("image") || !node["image"].is_string()) {
      throw Error(ErrorCode::kValidation, "camera entry lacks an 'image' path");
    }
    fs::path image_path = node["image"].get<std::string>();
    if (image_path.is_relative()) image_path = base / image_path;
    view.image = ReadPng(image_path);
    if (view.image.width != view.camera.width || view.image.height != view.camera.height) {
      throw Error(ErrorCode::kValidation,
                  image_path.string() + " is " + std::to_string(view.image.width) + "x" +
                      std::to_string(view.image.height) + " but the camera declares " +
                      std::to_string(view.camera.width) + "x" +
                      std::to_string(view.camera.height));
    }
    scene.views.push_back(std::move(view));
  }
  return scene;
}

void SaveScene(const Scene& scene, const fs::path& config, int bit_depth) {
  const fs::path base = config.parent_path();
  json cameras = json::array();
  for (std::size_t i = 0; i < scene.views.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%s_%02zu.png", config.stem().c_str(), i);
    WritePng(base / name, scene.views[i].image, bit_depth);
    json node = CameraToJson(scene.views[i].camera);
    node["image"] = name;
    cameras.push_back(std::move(node));
  }
  WriteText(config, json{{"cameras", cameras}}.dump(2) + "\n");
}

Camera LoadPose(const fs::path& path) { return CameraFromJson(ReadJson(path)); }

void SavePose(const Camera& camera, const fs::path& path) {
  WriteText(path, CameraToJson(camera).dump(2) + "\n");
}

std::string DepthsToJson(const DepthList& depths) {
  return json(depths.vector()).dump();
}

BundleManifest ExportWebBundle(const Mpi& mpi, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  BundleManifest manifest;
  manifest.planes = mpi.planes();
  manifest.width = mpi.width();
  manifest.height = mpi.height();
  manifest.columns = 1;
  while (manifest.columns * manifest.columns < manifest.planes) ++manifest.columns;
  manifest.rows = (manifest.planes + manifest.columns - 1) / manifest.columns;
  manifest.depths = mpi.depths().vector();
  manifest.camera = mpi.reference();

  Image atlas(manifest.columns * manifest.width, manifest.rows * manifest.height, 4);
  for (int d = 0; d < manifest.planes; ++d) {
    const int ox = (d % manifest.columns) * manifest.width;
    const int oy = (d / manifest.columns) * manifest.height;
    for (int y = 0; y < manifest.height; ++y) {
      for (int x = 0; x < manifest.width; ++x) {
        for (int c = 0; c < 4; ++c) atlas.at(ox + x, oy + y, c) = mpi.value(d, y, x, c);
      }
    }
  }
  WritePng(out_dir / manifest.atlas, atlas, 8);

  json root;
  root["format"] = "mpiforge-web-bundle";
  root["version"] = 1;
  root["planes"] = manifest.planes;
  root["width"] = manifest.width;
  root["height"] = manifest.height;
  root["depths"] = manifest.depths;
  root["camera"] = CameraToJson(manifest.camera);
  root["atlas"] = {{"file", manifest.atlas},
                   {"columns", manifest.columns},
                   {"rows", manifest.rows},
                   {"tile_width", manifest.width},
                   {"tile_height", manifest.height},
                   {"order", "row-major"},
                   {"bit_depth", 8}};
  WriteText(out_dir / "manifest.json", root.dump(2) + "\n");
  return manifest;
}

BundleManifest ReadManifest(const fs::path& path) {
  const json root = ReadJson(path);
  try {
    BundleManifest manifest;
    manifest.planes = root.at("planes").get<int>();
    manifest.width = root.at("width").get<int>();
    manifest.height = root.at("height").get<int>();
    manifest.depths = root.at("depths").get<std::vector<double>>();
    manifest.camera = CameraFromJson(root.at("camera"));
    const json& atlas = root.at("atlas");
    manifest.atlas = atlas.at("file").get<std::string>();
    manifest.columns = atlas.at("columns").get<int>();
    manifest.rows = atlas.at("rows").get<int>();
    if (static_cast<int>(manifest.depths.size()) != manifest.planes ||
        manifest.columns * manifest.rows < manifest.planes || manifest.columns < 1) {
      throw Error(ErrorCode::kValidation, "manifest plane count disagrees with the atlas layout");
    }
    return manifest;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, "malformed manifest " + path.string() + ": " + e.what());
  }
}

Mpi ImportWebBundle(const fs::path& manifest_path) {
  const BundleManifest manifest = ReadManifest(manifest_path);
  const Image atlas = ReadPng(manifest_path.parent_path() / manifest.atlas, true);
  if (atlas.channels != 4 || atlas.width != manifest.columns * manifest.width ||
      atlas.height != manifest.rows * manifest.height) {
    throw Error(ErrorCode::kValidation, "atlas size does not match the manifest");
  }
  const std::size_t plane_size = static_cast<std::size_t>(manifest.width) * manifest.height;
  std::vector<double> values(plane_size * manifest.planes * Mpi::kChannels);
  // Zero voxels are stored as RGBA 0; a voxel whose alpha merely rounded to 0
  // keeps its color.
  std::vector<std::uint8_t> zero_mask(plane_size * manifest.planes, 0);
  for (int d = 0; d < manifest.planes; ++d) {
    const int ox = (d % manifest.columns) * manifest.width;
    const int oy = (d / manifest.columns) * manifest.height;
    for (int y = 0; y < manifest.height; ++y) {
      for (int x = 0; x < manifest.width; ++x) {
        const std::size_t v = (d * plane_size + static_cast<std::size_t>(y) * manifest.width + x);
        bool zero = true;
        for (int c = 0; c < 4; ++c) {
          values[v * 4 + c] = atlas.at(ox + x, oy + y, c);
          zero = zero && values[v * 4 + c] == 0.0;
        }
        zero_mask[v] = zero ? 1 : 0;
      }
    }
  }
  Camera camera = manifest.camera;
  return Mpi::FromValues(std::move(values), manifest.height, manifest.width,
                         DepthList(manifest.depths), std::move(camera), std::move(zero_mask));
}

}  // namespace mpiforge
