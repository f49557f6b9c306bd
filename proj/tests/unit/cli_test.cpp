#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "seqvpr/descriptor_io.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using seqvpr::testing::read_file;
using seqvpr::testing::TempDir;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + SEQVPR_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, SynthThenRunWritesOutputs) {
  TempDir dir;
  ASSERT_EQ(run_cli("synth --places 40 --dim 48 --sigma 0.7 --seed 3 --out \"" + (dir / "syn").string() + "\"",
                    dir / "synth.log"),
            0)
      << read_file(dir / "synth.log");
  EXPECT_TRUE(fs::exists(dir / "syn" / "query.svpr"));
  EXPECT_TRUE(fs::exists(dir / "syn" / "gt.csv"));
  EXPECT_EQ(seqvpr::read_manifest(dir / "syn" / "manifest.json").technique_name, "synthetic");

  ASSERT_EQ(run_cli("run --config \"" + (dir / "syn" / "experiment.json").string() +
                        "\" --k-sweep paper --cost-model cached --out \"" + (dir / "out").string() + "\"",
                    dir / "run.log"),
            0)
      << read_file(dir / "run.log");
  const std::string csv = read_file(dir / "out" / "summary.csv");
  EXPECT_NE(csv.find("synthetic,synthetic,15,"), std::string::npos);
  EXPECT_NE(csv.find(",cached\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "plots" / "synthetic_pcu_vs_k.svg"));
}

TEST(Cli, EncodeWritesSvprAndManifest) {
  TempDir dir;
  fs::create_directories(dir / "imgs");
  // 1x1 grayscale PNGs are enough to exercise decoding and export.
  static const unsigned char png[] = {0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49,
                                      0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00,
                                      0x00, 0x00, 0x00, 0x3A, 0x7E, 0x9B, 0x55, 0x00, 0x00, 0x00, 0x0A, 0x49, 0x44,
                                      0x41, 0x54, 0x78, 0x9C, 0x63, 0x60, 0x00, 0x00, 0x00, 0x02, 0x00, 0x01, 0x48,
                                      0xAF, 0xA4, 0x71, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42,
                                      0x60, 0x82};
  for (const char* name : {"a1.png", "a2.png"}) {
    seqvpr::testing::write_file(dir / "imgs" / name, std::string(reinterpret_cast<const char*>(png), sizeof(png)));
  }
  ASSERT_EQ(run_cli("encode --dataset \"" + (dir / "imgs").string() + "\" --out \"" + (dir / "hog.svpr").string() + "\"",
                    dir / "encode.log"),
            0)
      << read_file(dir / "encode.log");
  const auto m = seqvpr::read_svpr(dir / "hog.svpr");
  EXPECT_EQ(m.count, 2u);
  EXPECT_EQ(m.dim, 961u * 36u);
  EXPECT_EQ(seqvpr::read_manifest(dir / "hog.manifest.json").technique_name, "HOG");
}

TEST(Cli, MissingConfigFailsWithNonZeroStatus) {
  TempDir dir;
  EXPECT_NE(run_cli("run --config \"" + (dir / "nope.json").string() + "\"", dir / "log"), 0);
  EXPECT_NE(run_cli("frobnicate", dir / "log"), 0);
}

}  // namespace
