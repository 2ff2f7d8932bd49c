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


#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mpiforge/adaptive.h"
#include "mpiforge/compact.h"
#include "mpiforge/cues.h"
#include "mpiforge/error.h"
#include "mpiforge/geometry.h"
#include "mpiforge/metrics.h"
#include "mpiforge/mpi.h"
#include "mpiforge/pipeline.h"
#include "mpiforge/store.h"
#include "mpiforge/synthetic.h"

namespace mpiforge::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr int kDefaultPlanes = 32;
constexpr double kDefaultNear = 1.0;
constexpr double kDefaultFar = 100.0;

const std::map<std::string, Quantization> kQuantizations = {
    {"f32", Quantization::kFloat32}, {"u8", Quantization::kUint8}};

struct PipelineFlags {
  int planes = kDefaultPlanes;
  double near = kDefaultNear;
  double far = kDefaultFar;
  int steps = 4;
  HeuristicParams heuristic;
  std::string quantization = "f32";
};

void AddPipelineFlags(CLI::App* cmd, PipelineFlags* flags) {
  cmd->add_option("--planes", flags->planes, "Number of MPI planes D")
      ->check(CLI::Range(2, 4096));
  cmd->add_option("--near", flags->near, "Nearest plane depth")->check(CLI::PositiveNumber);
  cmd->add_option("--far", flags->far, "Farthest plane depth")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", flags->steps, "Refinement iterations")->check(CLI::NonNegativeNumber);
  cmd->add_option("--gain", flags->heuristic.gain, "Alpha residual gain");
  cmd->add_option("--variance-scale", flags->heuristic.variance_scale,
                  "Color variance scale of the consistency term")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--bias", flags->heuristic.bias, "Alpha residual bias");
  cmd->add_option("--color-rate", flags->heuristic.color_rate,
                  "Step toward the visibility-weighted mean color");
  cmd->add_option("--quantization", flags->quantization, "Sample encoding of the output")
      ->check(CLI::IsMember(kQuantizations));
}

Mpi ReadMpi(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  return DecodeMpi(bytes);
}

void WriteMpi(const fs::path& path, const Mpi& mpi, const std::string& quantization) {
  WriteFileBytes(path, EncodeMpi(mpi, kQuantizations.at(quantization)));
}

// JSON has no infinity; identical images report psnr as null.
json Number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> ParseThresholds(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::kRange, "bad threshold '" + item + "'");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

std::string FormatThresholds(const std::vector<double>& values) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

void WriteText(const std::string& target, const std::string& text, std::ostream& out) {
  if (target.empty() || target == "-") {
    out << text;
    return;
  }
  std::ofstream file(target, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot open " + target + " for writing");
  file << text;
  if (!file) throw Error(ErrorCode::kIo, "write failed: " + target);
}

double MeanSynthesisError(const Mpi& mpi, const Scene& scene) {
  double sum = 0.0;
  for (const View& view : scene.views) {
    sum += SynthesisError(RenderView(mpi, view.camera), view.image);
  }
  return sum / static_cast<double>(scene.views.size());
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplane image toolkit: build, adapt, render and evaluate MPIs.", "mpiforge"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every command");

  // build
  CLI::App* build = app.add_subcommand("build", "Build an MPI from a rig config");
  std::string build_scene, build_out;
  PipelineFlags build_flags;
  build->add_option("--scene", build_scene, "Rig config JSON")->required();
  build->add_option("--out", build_out, "Output .cmpi")->required();
  AddPipelineFlags(build, &build_flags);

  // adapt
  CLI::App* adapt = app.add_subcommand(
      "adapt", "Prune and redistribute planes, then rebuild; prints the depths as JSON");
  std::string adapt_scene, adapt_out, adapt_mpi, adapt_depths_out;
  PipelineFlags adapt_flags;
  int localize_steps = 4;
  double alpha_floor = kDefaultAlphaFloor;
  adapt->add_option("--scene", adapt_scene, "Rig config JSON")->required();
  adapt->add_option("--out", adapt_out, "Output .cmpi")->required();
  adapt->add_option("--mpi", adapt_mpi,
                    "Prune from this MPI instead of localizing on --planes/--near/--far");
  adapt->add_option("--depths-out", adapt_depths_out, "Also write the depths JSON here");
  adapt->add_option("--localize-steps", localize_steps,
                    "Iterations on the initial sampling before pruning")
      ->check(CLI::PositiveNumber);
  adapt->add_option("--alpha-floor", alpha_floor, "Planes whose max alpha is below this are pruned")
      ->check(CLI::Range(0.0, 1.0));
  AddPipelineFlags(adapt, &adapt_flags);

  // render
  CLI::App* render = app.add_subcommand("render", "Render an MPI at a pose");
  std::string render_mpi, render_pose, render_out;
  int bit_depth = 8;
  double render_threshold = 0.0;
  render->add_option("--mpi", render_mpi, "Input .cmpi")->required();
  render->add_option("--pose", render_pose, "Camera JSON")->required();
  render->add_option("--out", render_out, "Output PNG")->required();
  render->add_option("--bit-depth", bit_depth, "PNG bit depth")->check(CLI::IsMember({8, 16}));
  render->add_option("--threshold", render_threshold, "Zero alphas below this first")
      ->check(CLI::Range(0.0, kMaxAlphaThreshold));

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Occupancy and quality over alpha thresholds (CSV)");
  std::string sweep_mpi, sweep_scene, sweep_out = "-";
  std::string thresholds = FormatThresholds(DefaultSweepThresholds());
  sweep->add_option("--mpi", sweep_mpi, "Input .cmpi")->required();
  sweep->add_option("--scene", sweep_scene, "Rig config with ground-truth views")->required();
  sweep->add_option("--thresholds", thresholds, "Comma-separated, ascending, within [0,0.95]");
  sweep->add_option("--out", sweep_out, "CSV path, - for stdout");

  // metrics
  CLI::App* metrics = app.add_subcommand("metrics", "Compare two images (JSON ssim/l1/psnr)");
  std::string image_a, image_b;
  metrics->add_option("a", image_a, "First PNG")->required();
  metrics->add_option("b", image_b, "Second PNG")->required();

  // convert
  CLI::App* convert = app.add_subcommand(
      "convert", "Convert .cmpi to a web bundle directory, or a bundle back to .cmpi");
  std::string convert_in, convert_out;
  std::string convert_quantization = "f32";
  convert->add_option("--in", convert_in, ".cmpi file, bundle directory or manifest.json")
      ->required();
  convert->add_option("--out", convert_out, "Bundle directory or .cmpi")->required();
  convert->add_option("--quantization", convert_quantization, "Sample encoding for .cmpi output")
      ->check(CLI::IsMember(kQuantizations));

  // loss
  CLI::App* loss = app.add_subcommand("loss", "Sparsity and total loss of an MPI (JSON)");
  std::string loss_mpi, loss_scene;
  double lambda = kDefaultLambda;
  loss->add_option("--mpi", loss_mpi, "Input .cmpi")->required();
  loss->add_option("--scene", loss_scene, "Rig config with the input views")->required();
  loss->add_option("--lambda", lambda, "Sparsity weight")->check(CLI::NonNegativeNumber);

  // synth
  CLI::App* synth = app.add_subcommand(
      "synth", "Write the synthetic two-plane test scene (rig.json, held_out.json/.png)");
  std::string synth_dir;
  TwoPlaneSpec spec;
  synth->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth->add_option("--seed", spec.seed, "Texture seed");
  synth->add_option("--size", spec.width, "Image width and height in pixels")
      ->check(CLI::Range(8, 4096));
  synth->add_option("--baseline", spec.baseline, "Rig spacing")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (build->parsed()) {
      const Scene scene = LoadScene(build_scene);
      PipelineOptions options;
      options.steps = build_flags.steps;
      options.heuristic = build_flags.heuristic;
      const DepthList depths =
          InverseDepthSamples(build_flags.near, build_flags.far, build_flags.planes);
      WriteMpi(build_out, BuildMpi(scene, depths, options), build_flags.quantization);
    } else if (adapt->parsed()) {
      const Scene scene = LoadScene(adapt_scene);
      AdaptOptions options;
      options.pipeline.steps = adapt_flags.steps;
      options.pipeline.heuristic = adapt_flags.heuristic;
      options.localize_steps = localize_steps;
      options.alpha_floor = alpha_floor;
      AdaptResult result =
          adapt_mpi.empty()
              ? AdaptAndRebuild(scene,
                                InverseDepthSamples(adapt_flags.near, adapt_flags.far,
                                                    adapt_flags.planes),
                                adapt_flags.steps, options)
              : AdaptFromMpi(scene, ReadMpi(adapt_mpi), adapt_flags.steps, options);
      WriteMpi(adapt_out, result.mpi, adapt_flags.quantization);
      const std::string depths = DepthsToJson(result.adapted_depths) + "\n";
      if (!adapt_depths_out.empty()) WriteText(adapt_depths_out, depths, out);
      out << depths;
    } else if (render->parsed()) {
      Mpi mpi = ReadMpi(render_mpi);
      if (render_threshold > 0.0) mpi = ThresholdAlpha(mpi, render_threshold);
      WritePng(render_out, RenderView(mpi, LoadPose(render_pose)), bit_depth);
    } else if (sweep->parsed()) {
      const Mpi mpi = ReadMpi(sweep_mpi);
      const Scene scene = LoadScene(sweep_scene, 1);
      const std::vector<double> values = ParseThresholds(thresholds);
      WriteText(sweep_out, SweepCsv(OccupancySweep(mpi, scene.views, values)), out);
    } else if (metrics->parsed()) {
      const MetricReport report = Evaluate(ReadPng(image_a), ReadPng(image_b));
      json doc;
      doc["ssim"] = Number(report.ssim);
      doc["l1"] = Number(report.l1);
      doc["psnr"] = Number(report.psnr);
      out << doc.dump() << "\n";
    } else if (convert->parsed()) {
      const fs::path in(convert_in);
      if (in.extension() == ".cmpi") {
        ExportWebBundle(ReadMpi(in), convert_out);
      } else {
        const fs::path manifest = fs::is_directory(in) ? in / "manifest.json" : in;
        WriteMpi(convert_out, ImportWebBundle(manifest), convert_quantization);
      }
    } else if (loss->parsed()) {
      const Mpi mpi = ReadMpi(loss_mpi);
      const Scene scene = LoadScene(loss_scene);
      const std::vector<Camera> cameras = scene.cameras();
      const std::vector<Psv> psvs = BuildPsvs(scene, mpi.reference(), mpi.depths());
      const TauMap tau = ComputeTauMap(ComputeCues(psvs, mpi, cameras));
      const SparsityReport sparsity = ComputeSparsity(mpi, tau, cameras);
      const double synthesis = MeanSynthesisError(mpi, scene);
      json doc;
      doc["excess"] = Number(sparsity.excess);
      doc["a_min"] = Number(sparsity.a_min);
      doc["sparsity"] = Number(sparsity.loss);
      doc["synthesis"] = Number(synthesis);
      doc["lambda"] = Number(lambda);
      doc["total"] = Number(TotalLoss(synthesis, sparsity.loss, lambda));
      out << doc.dump() << "\n";
    } else if (synth->parsed()) {
      spec.height = spec.width;
      spec.focal = spec.width;
      const SyntheticScene scene = MakeTwoPlaneScene(spec);
      const fs::path dir(synth_dir);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
      SaveScene(scene.inputs, dir / "rig.json");
      SavePose(scene.held_out.camera, dir / "held_out.json");
      WritePng(dir / "held_out.png", scene.held_out.image, 16);
    }
  } catch (const std::exception& e) {
    err << "mpiforge: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace mpiforge::cli
