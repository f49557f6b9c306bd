#include "seqvpr/hog.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "seqvpr/dataset.hpp"
#include "seqvpr/error.hpp"
#include "seqvpr/parallel.hpp"

namespace seqvpr {

void HogParams::validate() const {
  if (resize_width <= 0 || resize_height <= 0) throw std::invalid_argument("HOG resize dimensions must be positive");
  if (cell_size <= 0 || block_cells <= 0 || block_stride_cells <= 0 || bins <= 0) {
    throw std::invalid_argument("HOG cell, block, stride and bin counts must be positive");
  }
  if (resize_width % cell_size != 0 || resize_height % cell_size != 0) {
    throw std::invalid_argument("HOG resize dimensions must be divisible by the cell size");
  }
  if (block_cells > cells_x() || block_cells > cells_y()) {
    throw std::invalid_argument("HOG block does not fit in the cell grid");
  }
  if ((cells_x() - block_cells) % block_stride_cells != 0 || (cells_y() - block_cells) % block_stride_cells != 0) {
    throw std::invalid_argument("HOG block stride does not tile the cell grid");
  }
  if (!(block_norm_epsilon > 0.0)) throw std::invalid_argument("HOG block norm epsilon must be positive");
}

FloatImage resize_bilinear(const GrayImage& image, int width, int height) {
  if (image.empty()) throw Error("cannot resize an image with no pixels");
  if (width <= 0 || height <= 0) throw std::invalid_argument("resize target must be positive");

  FloatImage out{width, height, std::vector<float>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height))};
  const double scale_x = static_cast<double>(image.width) / width;
  const double scale_y = static_cast<double>(image.height) / height;

  // Precompute horizontal taps once per column.
  std::vector<int> x0(width), x1(width);
  std::vector<double> fx(width);
  for (int x = 0; x < width; ++x) {
    const double sx = std::clamp((x + 0.5) * scale_x - 0.5, 0.0, static_cast<double>(image.width - 1));
    x0[x] = static_cast<int>(sx);
    x1[x] = std::min(x0[x] + 1, image.width - 1);
    fx[x] = sx - x0[x];
  }

  for (int y = 0; y < height; ++y) {
    const double sy = std::clamp((y + 0.5) * scale_y - 0.5, 0.0, static_cast<double>(image.height - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double fy = sy - y0;
    for (int x = 0; x < width; ++x) {
      const double top = image.at(x0[x], y0) * (1.0 - fx[x]) + image.at(x1[x], y0) * fx[x];
      const double bottom = image.at(x0[x], y1) * (1.0 - fx[x]) + image.at(x1[x], y1) * fx[x];
      out.pixels[static_cast<std::size_t>(y) * width + x] = static_cast<float>(top * (1.0 - fy) + bottom * fy);
    }
  }
  return out;
}

CellHistograms hog_cell_histograms(const GrayImage& image, const HogParams& params) {
  params.validate();
  if (image.empty()) throw Error("cannot encode an image with no pixels");

  const FloatImage img = resize_bilinear(image, params.resize_width, params.resize_height);
  const int w = img.width;
  const int h = img.height;
  const double bin_width = 180.0 / params.bins;

  CellHistograms hist{params.cells_x(), params.cells_y(), params.bins,
                      std::vector<float>(static_cast<std::size_t>(params.cells_x()) * params.cells_y() * params.bins)};
  std::vector<double> acc(hist.values.size(), 0.0);

  for (int y = 0; y < h; ++y) {
    const int up = std::max(y - 1, 0);
    const int down = std::min(y + 1, h - 1);
    const int cy = y / params.cell_size;
    for (int x = 0; x < w; ++x) {
      // Centered [-1, 0, 1] differences with replicated borders.
      const double gx = static_cast<double>(img.at(std::min(x + 1, w - 1), y)) - img.at(std::max(x - 1, 0), y);
      const double gy = static_cast<double>(img.at(x, down)) - img.at(x, up);
      const double magnitude = std::sqrt(gx * gx + gy * gy);
      if (magnitude == 0.0) continue;

      double angle = std::atan2(gy, gx) * (180.0 / std::numbers::pi);
      if (angle < 0.0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      const int bin = std::min(static_cast<int>(angle / bin_width), params.bins - 1);

      const int cx = x / params.cell_size;
      acc[(static_cast<std::size_t>(cy) * hist.cells_x + cx) * params.bins + bin] += magnitude;
    }
  }
  std::transform(acc.begin(), acc.end(), hist.values.begin(), [](double v) { return static_cast<float>(v); });
  return hist;
}

Descriptor encode_hog(const GrayImage& image, const HogParams& params) {
  const CellHistograms hist = hog_cell_histograms(image, params);
  const double eps_sq = params.block_norm_epsilon * params.block_norm_epsilon;

  std::vector<float> out;
  out.reserve(params.descriptor_length());
  std::vector<double> block(params.block_length());
  for (int by = 0; by < params.blocks_y(); ++by) {
    for (int bx = 0; bx < params.blocks_x(); ++bx) {
      std::size_t n = 0;
      double sum_sq = 0.0;
      for (int dy = 0; dy < params.block_cells; ++dy) {
        for (int dx = 0; dx < params.block_cells; ++dx) {
          const float* cell =
              hist.cell(bx * params.block_stride_cells + dx, by * params.block_stride_cells + dy);
          for (int b = 0; b < params.bins; ++b) {
            block[n] = cell[b];
            sum_sq += block[n] * block[n];
            ++n;
          }
        }
      }
      const double scale = 1.0 / std::sqrt(sum_sq + eps_sq);
      for (double v : block) out.push_back(static_cast<float>(v * scale));
    }
  }
  return Descriptor(std::move(out));
}

DescriptorSet encode_set(const ImageSet& images, const HogParams& params, std::size_t workers) {
  if (images.frames.empty()) throw Error("cannot encode an empty image set");
  params.validate();

  std::vector<Descriptor> descriptors(images.frames.size());
  const auto start = std::chrono::steady_clock::now();
  parallel_for(
      images.frames.size(),
      [&](std::size_t i) {
        try {
          descriptors[i] = encode_hog(images.frames[i], params);
        } catch (const Error& e) {
          const std::string name = i < images.source_paths.size() ? images.source_paths[i].string()
                                                                   : "frame " + std::to_string(i);
          throw Error(name + ": " + e.what());
        }
      },
      workers);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const double per_frame = elapsed.count() / static_cast<double>(images.frames.size());
  return DescriptorSet(std::move(descriptors), per_frame, "HOG");
}

}  // namespace seqvpr
