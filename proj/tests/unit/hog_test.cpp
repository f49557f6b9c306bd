#include "seqvpr/hog.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "seqvpr/dataset.hpp"
#include "seqvpr/error.hpp"

namespace seqvpr {
namespace {

GrayImage step_image(int size, bool vertical_edge) {
  GrayImage img(size, size, 0);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) img.at(x, y) = (vertical_edge ? x : y) >= size / 2 ? 255 : 0;
  return img;
}

int argmax_bin(const float* cell, int bins) { return static_cast<int>(std::max_element(cell, cell + bins) - cell); }

TEST(HogParams, DefaultGeometry) {
  const HogParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.cells_x(), 32);
  EXPECT_EQ(p.blocks_x(), 31);
  EXPECT_EQ(p.num_blocks(), 961u);
  EXPECT_EQ(p.descriptor_length(), 961u * 36u);
}

TEST(HogParams, RejectsInconsistentGeometry) {
  HogParams p;
  p.resize_width = 500;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = HogParams{};
  p.block_cells = 64;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = HogParams{};
  p.bins = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ResizeBilinear, PixelCenterAlignment) {
  GrayImage img(2, 1);
  img.at(0, 0) = 0;
  img.at(1, 0) = 100;
  const auto out = resize_bilinear(img, 4, 1);
  EXPECT_FLOAT_EQ(out.at(0, 0), 0.0f);
  EXPECT_FLOAT_EQ(out.at(1, 0), 25.0f);
  EXPECT_FLOAT_EQ(out.at(2, 0), 75.0f);
  EXPECT_FLOAT_EQ(out.at(3, 0), 100.0f);
}

TEST(ResizeBilinear, SameSizeIsIdentity) {
  GrayImage img(5, 3);
  for (std::size_t n = 0; n < img.pixels.size(); ++n) img.pixels[n] = static_cast<std::uint8_t>(n * 13);
  const auto out = resize_bilinear(img, 5, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) EXPECT_EQ(out.at(x, y), img.at(x, y));
}

TEST(EncodeHog, ConstantImageIsZeroVector) {
  const auto d = encode_hog(GrayImage(640, 480, 128));
  EXPECT_EQ(d.size(), HogParams{}.descriptor_length());
  EXPECT_TRUE(std::all_of(d.values().begin(), d.values().end(), [](float v) { return v == 0.0f; }));
  EXPECT_EQ(d.l2_norm(), 0.0);
}

TEST(EncodeHog, Deterministic) {
  GrayImage img(300, 200);
  for (std::size_t n = 0; n < img.pixels.size(); ++n) img.pixels[n] = static_cast<std::uint8_t>((n * 2654435761u) >> 24);
  EXPECT_EQ(encode_hog(img), encode_hog(img));
}

// Gradient of a vertical step under [-1, 0, 1] is (gx, gy) = (+255, 0): angle 0
// degrees, bin floor(0 / 20) = 0. A horizontal step gives angle 90, bin 4.
// For I = 255 where x > y, (gx, gy) = (255, -255): angle -45 -> 135, bin 6.
TEST(HogCellHistograms, VerticalStepEdgeFillsBinZero) {
  const auto hist = hog_cell_histograms(step_image(512, true));
  for (int cy = 0; cy < hist.cells_y; ++cy) {
    for (int cx : {15, 16}) {
      const float* cell = hist.cell(cx, cy);
      EXPECT_EQ(argmax_bin(cell, 9), 0) << "cell " << cx << "," << cy;
      EXPECT_GT(cell[0], 0.0f);
      EXPECT_EQ(std::count(cell + 1, cell + 9, 0.0f), 8);
    }
    EXPECT_EQ(hist.cell(3, cy)[0], 0.0f);
  }
}

TEST(HogCellHistograms, HorizontalStepEdgeFillsBinFour) {
  const auto hist = hog_cell_histograms(step_image(512, false));
  for (int cx = 0; cx < hist.cells_x; ++cx) {
    EXPECT_EQ(argmax_bin(hist.cell(cx, 15), 9), 4);
    EXPECT_EQ(argmax_bin(hist.cell(cx, 16), 9), 4);
  }
}

TEST(HogCellHistograms, DiagonalEdgeFillsBinSix) {
  GrayImage img(512, 512, 0);
  for (int y = 0; y < 512; ++y)
    for (int x = 0; x < 512; ++x) img.at(x, y) = x > y ? 255 : 0;
  const auto hist = hog_cell_histograms(img);
  for (int c = 1; c < 31; ++c) EXPECT_EQ(argmax_bin(hist.cell(c, c), 9), 6) << c;
}

TEST(EncodeHog, StepEdgeEnergyInEdgeBlocks) {
  const HogParams p;
  const auto d = encode_hog(step_image(512, true), p);
  // Block (bx=15, by=0) spans cells 15..16; its top-left cell's bin 0 is its first value.
  const std::size_t block = 15;
  const auto v = d.values().subspan(block * p.block_length(), p.block_length());
  EXPECT_EQ(static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin()) % 9, 0);
  EXPECT_NEAR(euclidean_norm(v), 1.0, 1e-6);
  const auto far = d.values().subspan(2 * p.block_length(), p.block_length());
  EXPECT_EQ(euclidean_norm(far), 0.0);
}

TEST(EncodeHog, EmptyImageThrows) { EXPECT_THROW(encode_hog(GrayImage{}), Error); }

TEST(EncodeSet, IdenticalFramesGiveIdenticalDescriptorsAndPositiveTime) {
  ImageSet set;
  const auto img = step_image(64, true);
  for (int n = 0; n < 10; ++n) {
    set.frames.push_back(img);
    set.source_paths.push_back("f" + std::to_string(n) + ".png");
  }
  const auto out = encode_set(set);
  ASSERT_EQ(out.size(), 10u);
  for (std::size_t i = 1; i < 10; ++i) EXPECT_EQ(out[i], out[0]);
  EXPECT_GT(out.encode_time_per_frame(), 0.0);
  EXPECT_EQ(out.technique_name(), "HOG");
}

TEST(EncodeSet, HundredFramesConsistentDimensionAndOrder) {
  ImageSet set;
  for (int n = 0; n < 100; ++n) {
    GrayImage img(512, 512, 0);
    for (int y = 0; y < 512; ++y)
      for (int x = 0; x < 512; ++x) img.at(x, y) = static_cast<std::uint8_t>((x * (n + 1) + y * 3) & 0xFF);
    set.frames.push_back(std::move(img));
  }
  const auto parallel = encode_set(set, {}, 4);
  ASSERT_EQ(parallel.size(), 100u);
  for (const auto& d : parallel.descriptors()) EXPECT_EQ(d.size(), HogParams{}.descriptor_length());
  EXPECT_EQ(parallel[17], encode_hog(set.frames[17]));
  EXPECT_EQ(parallel[99], encode_hog(set.frames[99]));
}

TEST(EncodeSet, EmptySetThrows) { EXPECT_THROW(encode_set(ImageSet{}), Error); }

}  // namespace
}  // namespace seqvpr
