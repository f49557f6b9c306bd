#pragma once

#include <cstddef>
#include <vector>

#include "seqvpr/descriptor.hpp"
#include "seqvpr/image.hpp"

namespace seqvpr {

struct ImageSet;

/// Whole-image HOG configuration. The defaults are the frozen configuration
/// used for every reported HOG result.
struct HogParams {
  int resize_width = 512;
  int resize_height = 512;
  int cell_size = 16;          // pixels per cell side
  int block_cells = 2;         // cells per block side
  int block_stride_cells = 1;  // block step, in cells
  int bins = 9;                // unsigned orientation bins over [0, 180)
  double block_norm_epsilon = 1e-5;

  int cells_x() const { return resize_width / cell_size; }
  int cells_y() const { return resize_height / cell_size; }
  int blocks_x() const { return (cells_x() - block_cells) / block_stride_cells + 1; }
  int blocks_y() const { return (cells_y() - block_cells) / block_stride_cells + 1; }
  std::size_t num_blocks() const { return static_cast<std::size_t>(blocks_x()) * static_cast<std::size_t>(blocks_y()); }
  std::size_t block_length() const { return static_cast<std::size_t>(block_cells * block_cells * bins); }
  std::size_t descriptor_length() const { return num_blocks() * block_length(); }

  /// Throws std::invalid_argument when the geometry is inconsistent.
  void validate() const;
};

/// Single-precision image used between resize and gradient computation.
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;

  float at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

/// Bilinear resize with pixel-center alignment and replicated borders.
FloatImage resize_bilinear(const GrayImage& image, int width, int height);

/// Per-cell orientation histograms (magnitude-weighted, unnormalized), stored
/// row-major over cells with `bins` floats per cell.
struct CellHistograms {
  int cells_x = 0;
  int cells_y = 0;
  int bins = 0;
  std::vector<float> values;

  const float* cell(int cx, int cy) const {
    return values.data() + (static_cast<std::size_t>(cy) * static_cast<std::size_t>(cells_x) + static_cast<std::size_t>(cx)) *
                               static_cast<std::size_t>(bins);
  }
};

CellHistograms hog_cell_histograms(const GrayImage& image, const HogParams& params = {});

/// Concatenated L2-normalized block histograms in row-major block order;
/// within a block, cells are row-major and each contributes `bins` values.
/// Throws seqvpr::Error for an image with no pixels.
Descriptor encode_hog(const GrayImage& image, const HogParams& params = {});

/// Encodes every frame (in parallel when workers != 1) and records the mean
/// wall-clock time per frame. Output order follows frame order.
DescriptorSet encode_set(const ImageSet& images, const HogParams& params = {}, std::size_t workers = 0);

}  // namespace seqvpr
