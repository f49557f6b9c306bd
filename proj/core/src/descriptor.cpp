#include "seqvpr/descriptor.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "seqvpr/error.hpp"

namespace seqvpr {

double euclidean_norm(std::span<const float> values) {
  double sum = 0.0;
  for (float v : values) sum += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(sum);
}

Descriptor::Descriptor(std::vector<float> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error("descriptor component " + std::to_string(i) + " is not finite");
    }
  }
  l2_norm_ = euclidean_norm(values_);
}

DescriptorSet::DescriptorSet(std::vector<Descriptor> descriptors, double encode_time_per_frame,
                             std::string technique_name)
    : descriptors_(std::move(descriptors)),
      encode_time_per_frame_(encode_time_per_frame),
      technique_name_(std::move(technique_name)) {
  if (!std::isfinite(encode_time_per_frame_) || encode_time_per_frame_ < 0.0) {
    throw std::invalid_argument("encode time per frame must be finite and >= 0");
  }
  for (std::size_t i = 1; i < descriptors_.size(); ++i) {
    if (descriptors_[i].size() != descriptors_.front().size()) {
      throw std::invalid_argument("descriptor " + std::to_string(i) + " has dimension " +
                                  std::to_string(descriptors_[i].size()) + ", expected " +
                                  std::to_string(descriptors_.front().size()));
    }
  }
}

}  // namespace seqvpr
