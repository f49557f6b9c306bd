#include "seqvpr/harness.hpp"

#include <algorithm>

#include <gtest/gtest.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "seqvpr/dataset.hpp"
#include "seqvpr/descriptor_io.hpp"
#include "seqvpr/error.hpp"
#include "seqvpr/report.hpp"
#include "test_util.hpp"

namespace seqvpr {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::TempDir;
using testing::write_file;

std::size_t count_substr(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

/// Writes a synthetic dataset as SVPR1 files and returns a matching config.
ExperimentConfig synthetic_import_config(const fs::path& dir, std::size_t places, double sigma, std::uint64_t seed,
                                         double encode_time = 0.01, const std::string& technique = "Imported") {
  const auto data = generate_synthetic(places, places + 8, sigma, seed);
  fs::create_directories(dir);
  write_svpr(dir / "query.svpr", to_svpr(data.queries));
  write_svpr(dir / "reference.svpr", to_svpr(data.references));
  write_manifest(dir / "manifest.json", {technique, encode_time});

  ExperimentConfig config;
  DatasetSpec ds;
  ds.name = "synth";
  ds.query_dir = dir;
  ds.ref_dir = dir;
  ds.gt.aligned_tolerance = 0;
  config.datasets.push_back(ds);
  TechniqueSpec t;
  t.name = technique;
  t.kind = TechniqueKind::import;
  t.data = "{traverse_dir}/{traverse}.svpr";
  t.manifest = "{traverse_dir}/manifest.json";
  config.techniques.push_back(t);
  config.base_dir = dir;
  config.output_dir = dir / "out";
  return config;
}

TEST(NormalizeKValues, SortsDedupsAndAddsBaseline) {
  EXPECT_EQ(normalize_k_values({5}), (std::vector<std::size_t>{1, 5}));
  EXPECT_EQ(normalize_k_values({10, 2, 2, 5}), (std::vector<std::size_t>{1, 2, 5, 10}));
  EXPECT_THROW(normalize_k_values({}), std::invalid_argument);
  EXPECT_THROW(normalize_k_values({0, 3}), std::invalid_argument);
}

TEST(KSweep, PaperAndFull) {
  EXPECT_EQ(k_sweep("paper"), (std::vector<std::size_t>{1, 2, 5, 10, 15}));
  EXPECT_EQ(k_sweep("full").size(), 15u);
  EXPECT_EQ(k_sweep("full").back(), 15u);
  EXPECT_THROW(k_sweep("some"), std::invalid_argument);
}

TEST(ParseConfig, FullDocument) {
  const auto config = parse_config(R"({
    "datasets": [
      {"name": "campus", "query_dir": "q", "ref_dir": "r", "gt": {"csv": "gt.csv"}},
      {"name": "gp", "query_dir": "/abs/q", "ref_dir": "/abs/r", "gt": {"aligned": 3}},
      {"name": "syn", "synthetic": {"places": 50, "dim": 64, "sigma": 0.8}}
    ],
    "techniques": [
      {"name": "HOG", "kind": "hog", "params": {"cell_size": 32}},
      {"name": "NetVLAD", "kind": "import", "data": "{dataset}/{traverse}.svpr", "manifest": "netvlad.json"},
      {"name": "oracle", "kind": "synthetic"}
    ],
    "k_values": [10, 5],
    "cost_model": "cached",
    "output_dir": "out",
    "seed": 42
  })",
                                   "/base");
  ASSERT_EQ(config.datasets.size(), 3u);
  EXPECT_EQ(config.datasets[0].query_dir, fs::path("/base/q"));
  EXPECT_EQ(config.datasets[0].gt.csv, fs::path("/base/gt.csv"));
  EXPECT_EQ(config.datasets[1].query_dir, fs::path("/abs/q"));
  EXPECT_EQ(config.datasets[1].gt.aligned_tolerance, 3u);
  EXPECT_EQ(config.datasets[2].synthetic->sigma, 0.8);
  EXPECT_EQ(config.techniques[0].hog.cell_size, 32);
  EXPECT_EQ(config.techniques[1].kind, TechniqueKind::import);
  EXPECT_EQ(config.techniques[2].kind, TechniqueKind::synthetic);
  EXPECT_EQ(config.k_values, (std::vector<std::size_t>{1, 5, 10}));
  EXPECT_EQ(config.cost_model, CostModel::cached);
  EXPECT_EQ(config.output_dir, fs::path("/base/out"));
  EXPECT_EQ(config.seed, 42u);
}

TEST(ParseConfig, DefaultsAndErrors) {
  const auto config = parse_config(R"({"datasets": [{"name": "d", "query_dir": "q", "ref_dir": "r"}],
                                       "techniques": [{"name": "HOG"}]})",
                                   "/b");
  EXPECT_EQ(config.k_values, kDefaultKValues);
  EXPECT_EQ(config.cost_model, CostModel::naive);
  EXPECT_EQ(config.datasets[0].gt.aligned_tolerance, 2u);
  EXPECT_FALSE(config.datasets[0].gt.csv);

  EXPECT_THROW(parse_config("{", "/b"), Error);
  EXPECT_THROW(parse_config(R"({"datasets": [], "techniques": [], "typo": 1})", "/b"), Error);
  EXPECT_THROW(parse_config(R"({"datasets": [], "techniques": [{"name": "x", "kind": "sift"}]})", "/b"), Error);
  EXPECT_THROW(parse_config(R"({"datasets": [], "techniques": [], "k_values": [0]})", "/b"), Error);
  EXPECT_THROW(parse_config(R"({"datasets": [], "techniques": [], "cost_model": "free"})", "/b"), Error);
}

TEST(ExpandPathTemplate, Placeholders) {
  DatasetSpec d;
  d.name = "campus";
  d.query_dir = "/data/q";
  d.ref_dir = "/data/r";
  EXPECT_EQ(expand_path_template("feats/{dataset}/{traverse}.svpr", d, true), "feats/campus/query.svpr");
  EXPECT_EQ(expand_path_template("{traverse_dir}/x_{traverse}.svpr", d, false), "/data/r/x_reference.svpr");
}

TEST(RunExperiment, NoiselessImportedDescriptorsGivePerfectAuc) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 30, 0.0, 1);
  config.k_values = {1, 2};
  const auto result = run_experiment(config);
  ASSERT_EQ(result.reports.size(), 2u);
  EXPECT_EQ(result.reports[0].k, 1u);
  EXPECT_EQ(result.reports[1].k, 2u);
  for (const auto& r : result.reports) {
    EXPECT_FALSE(r.skipped);
    EXPECT_DOUBLE_EQ(r.auc, 1.0);
    EXPECT_DOUBLE_EQ(r.p_r100, 1.0);
  }
  EXPECT_GE(result.reports[1].auc, result.reports[0].auc);
  EXPECT_EQ(*result.reports[0].boost_pct_vs_k1, 0.0);
}

TEST(RunExperiment, BaselineInjected) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 20, 0.5, 2);
  config.k_values = {5};
  const auto result = run_experiment(config);
  ASSERT_EQ(result.reports.size(), 2u);
  EXPECT_EQ(result.reports[0].k, 1u);
  EXPECT_EQ(result.reports[1].k, 5u);
}

TEST(RunExperiment, MissingQueryDirAbortsBeforeCompute) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 10, 0.0, 3);
  config.datasets[0].query_dir = dir / "missing";
  try {
    run_experiment(config);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("query_dir not found"), std::string::npos);
  }
}

TEST(RunExperiment, MissingDescriptorFileAbortsBeforeCompute) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 10, 0.0, 3);
  config.techniques[0].data = "{traverse_dir}/{traverse}_missing.svpr";
  EXPECT_THROW(run_experiment(config), Error);
}

TEST(RunExperiment, OversizedKIsSkippedWithoutAbortingSiblings) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 8, 0.2, 4);
  config.k_values = {1, 5, 10};
  const auto result = run_experiment(config);
  ASSERT_EQ(result.reports.size(), 3u);
  EXPECT_FALSE(result.reports[0].skipped);
  EXPECT_FALSE(result.reports[1].skipped);
  ASSERT_TRUE(result.reports[2].skipped);
  EXPECT_NE(result.reports[2].skipped->find("K=10"), std::string::npos);
}

TEST(RunExperiment, PcuNormalizesAgainstSlowestCell) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 20, 0.0, 5, 0.36);
  config.k_values = {1, 5};
  config.cost_model = CostModel::naive;
  auto result = run_experiment(config);
  // Perfect precision everywhere; K=5 is the slowest cell (1.8 s).
  EXPECT_NEAR(*result.reports[1].pcu, 1.0, 1e-15);
  EXPECT_NEAR(*result.reports[0].pcu, std::log10(1.8 / 0.36 + 9.0), 1e-12);
  EXPECT_NEAR(result.reports[1].sequence_encode_time, 1.8, 1e-12);

  config.cost_model = CostModel::cached;
  result = run_experiment(config);
  EXPECT_EQ(*result.reports[0].pcu, 1.0);
  EXPECT_EQ(*result.reports[1].pcu, 1.0);
}

TEST(RunExperiment, SyntheticDatasetUsesSeedAndSkipsFileTechniques) {
  ExperimentConfig config;
  DatasetSpec ds;
  ds.name = "syn";
  ds.synthetic = SyntheticSpec{40, 48, 0.6, 0.01};
  config.datasets.push_back(ds);
  TechniqueSpec oracle;
  oracle.name = "oracle";
  oracle.kind = TechniqueKind::synthetic;
  TechniqueSpec hog;
  hog.name = "HOG";
  config.techniques = {oracle, hog};
  config.k_values = {1, 3};
  config.seed = 9;
  const auto a = run_experiment(config);
  ASSERT_EQ(a.reports.size(), 4u);
  EXPECT_FALSE(a.reports[0].skipped);
  EXPECT_TRUE(a.reports[2].skipped);
  EXPECT_TRUE(a.reports[3].skipped);
  const auto b = run_experiment(config);
  EXPECT_EQ(a.reports[1].auc, b.reports[1].auc);
  config.seed = 10;
  const auto c = run_experiment(config);
  EXPECT_NE(a.reports[0].auc, c.reports[0].auc);
}

TEST(RunExperiment, HogOnImageDirectories) {
  TempDir dir;
  fs::create_directories(dir / "q");
  fs::create_directories(dir / "r");
  cv::RNG rng(5);
  for (int n = 0; n < 6; ++n) {
    cv::Mat place(96, 128, CV_8UC1);
    rng.fill(place, cv::RNG::UNIFORM, 0, 255);
    cv::imwrite((dir / "r" / ("ref" + std::to_string(n) + ".png")).string(), place);
    cv::Mat noisy = place.clone();
    cv::Mat noise(96, 128, CV_8UC1);
    rng.fill(noise, cv::RNG::UNIFORM, 0, 20);
    noisy += noise;
    cv::imwrite((dir / "q" / ("q" + std::to_string(n) + ".png")).string(), noisy);
  }
  ExperimentConfig config;
  DatasetSpec ds;
  ds.name = "tiny";
  ds.query_dir = dir / "q";
  ds.ref_dir = dir / "r";
  ds.gt.aligned_tolerance = 0;
  config.datasets.push_back(ds);
  TechniqueSpec hog;
  hog.name = "HOG";
  hog.hog.resize_width = 128;
  hog.hog.resize_height = 96;
  config.techniques.push_back(hog);
  config.k_values = {1, 2};
  const auto result = run_experiment(config);
  ASSERT_EQ(result.reports.size(), 2u);
  EXPECT_DOUBLE_EQ(result.reports[0].p_r100, 1.0);
  EXPECT_GT(result.reports[0].encode_time_per_frame, 0.0);
  EXPECT_TRUE(std::any_of(result.timings.begin(), result.timings.end(),
                          [](const TimingRecord& t) { return t.stage == "similarity_matrix"; }));
}

TEST(EmitReports, OneCellGroupWritesRowsAndPlots) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 25, 0.5, 6);
  config.k_values = {1, 2, 5};
  const auto result = run_experiment(config);
  emit_reports(result.reports, config.output_dir, result.timings);

  const std::string csv = read_file(config.output_dir / "summary.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);  // header + 3 rows
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dataset,technique,k,auc,p_r100,pcu,boost_pct,cost_model");

  const std::string boost = read_file(config.output_dir / "plots" / "synth_boost_vs_k.svg");
  EXPECT_EQ(count_substr(boost, "<circle"), 2u);  // K=2 and K=5
  EXPECT_TRUE(fs::exists(config.output_dir / "plots" / "synth_auc_vs_k.svg"));
  EXPECT_TRUE(fs::exists(config.output_dir / "plots" / "synth_pcu_vs_k.svg"));
  EXPECT_TRUE(fs::exists(config.output_dir / "pr_curves" / "synth__Imported__k5.csv"));
  EXPECT_TRUE(fs::exists(config.output_dir / "timings.csv"));
  EXPECT_NE(read_file(config.output_dir / "summary.json").find("\"reports\""), std::string::npos);
}

TEST(EmitReports, TwoDatasetsGiveTwoPlotTriples) {
  TempDir dir;
  auto config = synthetic_import_config(dir / "a", 12, 0.3, 7);
  auto second = config.datasets[0];
  second.name = "other";
  config.datasets.push_back(second);
  config.k_values = {1, 2};
  const auto result = run_experiment(config);
  emit_reports(result.reports, dir / "out");
  std::size_t svgs = 0;
  for (const auto& entry : fs::directory_iterator(dir / "out" / "plots")) svgs += entry.path().extension() == ".svg";
  EXPECT_EQ(svgs, 6u);
}

TEST(EmitReports, EmptyListAndUnwritableDirectoryFail) {
  TempDir dir;
  EXPECT_THROW(emit_reports({}, dir / "out"), Error);
  write_file(dir / "file", "x");
  MetricsReport r;
  r.dataset_name = "d";
  r.technique_name = "t";
  EXPECT_THROW(emit_reports({r}, dir / "file" / "sub"), Error);
}

TEST(EmitReports, RerunIsByteIdentical) {
  TempDir dir;
  auto config = synthetic_import_config(dir.path(), 40, 0.9, 8);
  config.k_values = k_sweep("full");
  const auto first = run_experiment(config);
  emit_reports(first.reports, dir / "run1", first.timings);
  config.workers = 3;
  const auto second = run_experiment(config);
  emit_reports(second.reports, dir / "run2", second.timings);
  EXPECT_EQ(read_file(dir / "run1" / "summary.csv"), read_file(dir / "run2" / "summary.csv"));
  EXPECT_EQ(read_file(dir / "run1" / "summary.json"), read_file(dir / "run2" / "summary.json"));
}

TEST(Report, CsvQuotesAndNa) {
  MetricsReport r;
  r.dataset_name = "a,b";
  r.technique_name = "t";
  r.auc = 0.5;
  const auto csv = summary_csv({r});
  EXPECT_NE(csv.find("\"a,b\",t,1,0.500000,0.000000,n/a,n/a,naive"), std::string::npos);
  EXPECT_EQ(slugify("Gardens Point/day"), "Gardens_Point_day");
}

}  // namespace
}  // namespace seqvpr
