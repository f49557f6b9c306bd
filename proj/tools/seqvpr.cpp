// seqvpr: sequence-matching VPR experiment harness.
//
//   seqvpr run --config exp.json [--k-sweep paper|full] [--cost-model naive|cached] [--out dir] [--seed n]
//   seqvpr synth --places N --dim D --sigma S --seed n --out dir
//   seqvpr encode --dataset dir --out file.svpr

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "json.hpp"
#include "seqvpr/dataset.hpp"
#include "seqvpr/descriptor_io.hpp"
#include "seqvpr/error.hpp"
#include "seqvpr/harness.hpp"
#include "seqvpr/hog.hpp"
#include "seqvpr/report.hpp"

namespace fs = std::filesystem;

namespace {

struct RunOptions {
  fs::path config;
  std::optional<std::string> k_sweep;
  std::optional<std::string> cost_model;
  std::optional<fs::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
};

struct SynthOptions {
  std::size_t places = 200;
  std::size_t dim = 256;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  double encode_time = 1e-3;
  fs::path out;
};

struct EncodeOptions {
  fs::path dataset;
  fs::path out;
  std::optional<fs::path> manifest;
  std::string technique = "HOG";
  std::size_t jobs = 0;
};

int run_command(const RunOptions& opts) {
  seqvpr::ExperimentConfig config = seqvpr::load_config(opts.config);
  if (opts.k_sweep) config.k_values = seqvpr::k_sweep(*opts.k_sweep);
  if (opts.cost_model) config.cost_model = seqvpr::parse_cost_model(*opts.cost_model);
  if (opts.out) config.output_dir = *opts.out;
  if (opts.seed) config.seed = *opts.seed;
  if (opts.jobs) config.workers = *opts.jobs;

  const auto result = seqvpr::run_experiment(config);
  seqvpr::emit_reports(result.reports, config.output_dir, result.timings);

  std::cout << fmt::format("{:<20} {:<14} {:>3} {:>9} {:>9} {:>9} {:>10}\n", "dataset", "technique", "K", "AUC",
                           "P@R100", "PCU", "boost %");
  for (const auto& r : result.reports) {
    if (r.skipped) {
      std::cerr << fmt::format("skipped {} / {} / K={}: {}\n", r.dataset_name, r.technique_name, r.k, *r.skipped);
      continue;
    }
    std::cout << fmt::format("{:<20} {:<14} {:>3} {:>9.4f} {:>9.4f} {:>9} {:>10}\n", r.dataset_name,
                             r.technique_name, r.k, r.auc, r.p_r100,
                             r.pcu ? fmt::format("{:.4f}", *r.pcu) : "n/a",
                             r.boost_pct_vs_k1 ? fmt::format("{:.2f}", *r.boost_pct_vs_k1) : "n/a");
  }
  std::cout << fmt::format("cost model: {}; results in {}\n", seqvpr::to_string(config.cost_model),
                           config.output_dir.string());
  return 0;
}

int synth_command(const SynthOptions& opts) {
  const auto data = seqvpr::generate_synthetic(opts.places, opts.dim, opts.sigma, opts.seed, opts.encode_time);
  fs::create_directories(opts.out);

  seqvpr::write_svpr(opts.out / "query.svpr", seqvpr::to_svpr(data.queries));
  seqvpr::write_svpr(opts.out / "reference.svpr", seqvpr::to_svpr(data.references));
  seqvpr::write_manifest(opts.out / "manifest.json", {"synthetic", opts.encode_time});

  std::ofstream gt(opts.out / "gt.csv", std::ios::trunc);
  if (!gt) throw seqvpr::Error("cannot write " + (opts.out / "gt.csv").string());
  gt << "query_index,ref_lo,ref_hi\n";
  for (std::size_t i = 0; i < data.ground_truth.entries.size(); ++i) {
    gt << i << ',' << data.ground_truth.entries[i].lo << ',' << data.ground_truth.entries[i].hi << '\n';
  }

  // A ready-to-run experiment over the generated files.
  nlohmann::ordered_json config;
  config["datasets"] = {{{"name", "synthetic"}, {"query_dir", "."}, {"ref_dir", "."}, {"gt", {{"csv", "gt.csv"}}}}};
  config["techniques"] = {{{"name", "synthetic"},
                           {"kind", "import"},
                           {"data", "{traverse_dir}/{traverse}.svpr"},
                           {"manifest", "manifest.json"}}};
  config["k_values"] = seqvpr::kDefaultKValues;
  config["output_dir"] = "results";
  config["seed"] = opts.seed;
  std::ofstream cfg(opts.out / "experiment.json", std::ios::trunc);
  cfg << config.dump(2) << '\n';

  std::cout << fmt::format("wrote {} places (dim {}, sigma {}) to {}\n", opts.places, opts.dim, opts.sigma,
                           opts.out.string());
  return 0;
}

int encode_command(const EncodeOptions& opts) {
  const auto images = seqvpr::load_image_set(opts.dataset);
  const auto raw = seqvpr::encode_set(images, seqvpr::HogParams{}, opts.jobs);
  const seqvpr::DescriptorSet set(raw.descriptors(), raw.encode_time_per_frame(), opts.technique);

  fs::path manifest = opts.manifest.value_or(fs::path(opts.out).replace_extension(".manifest.json"));
  seqvpr::export_descriptors(set, opts.out, manifest);
  std::cout << fmt::format("encoded {} frames (D={}) at {:.6f} s/frame -> {} (+ {})\n", set.size(), set.dim(),
                           set.encode_time_per_frame(), opts.out.string(), manifest.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-based filtering on top of single-frame visual place recognition"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a (technique x dataset x K) sweep and write reports");
  run_cmd->add_option("--config", run.config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--k-sweep", run.k_sweep, "K grid: paper = {1,2,5,10,15}, full = 1..15")
      ->check(CLI::IsMember({"paper", "full"}));
  run_cmd->add_option("--cost-model", run.cost_model, "Sequence encoding cost: naive (t_e*K) or cached (t_e)")
      ->check(CLI::IsMember({"naive", "cached"}));
  run_cmd->add_option("--out", run.out, "Output directory (overrides config)");
  run_cmd->add_option("--seed", run.seed, "Seed for synthetic datasets (overrides config)");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads, 0 = all cores");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic descriptor dataset");
  synth_cmd->add_option("--places", synth.places, "Number of places")->required();
  synth_cmd->add_option("--dim", synth.dim, "Descriptor dimension (>= places)")->required();
  synth_cmd->add_option("--sigma", synth.sigma, "Query noise standard deviation")->required();
  synth_cmd->add_option("--seed", synth.seed, "RNG seed")->required();
  synth_cmd->add_option("--encode-time", synth.encode_time, "Encoding time written to the manifest (s/frame)");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  EncodeOptions encode;
  auto* encode_cmd = app.add_subcommand("encode", "HOG-encode an image directory to SVPR1");
  encode_cmd->add_option("--dataset", encode.dataset, "Image directory")->required()->check(CLI::ExistingDirectory);
  encode_cmd->add_option("--out", encode.out, "Output .svpr file")->required();
  encode_cmd->add_option("--manifest", encode.manifest, "Manifest path (default: <out>.manifest.json)");
  encode_cmd->add_option("--technique-name", encode.technique, "technique_name written to the manifest");
  encode_cmd->add_option("--jobs", encode.jobs, "Worker threads, 0 = all cores");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_command(run);
    if (*synth_cmd) return synth_command(synth);
    if (*encode_cmd) return encode_command(encode);
  } catch (const std::exception& e) {
    std::cerr << "seqvpr: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
