#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace seqvpr {

/// Euclidean norm accumulated in double precision.
double euclidean_norm(std::span<const float> values);

/// Fixed-length feature vector for one frame. Components are always finite
/// and the norm is cached at construction.
class Descriptor {
 public:
  Descriptor() = default;

  /// Throws seqvpr::Error if any component is NaN or infinite.
  explicit Descriptor(std::vector<float> values);

  std::span<const float> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double l2_norm() const { return l2_norm_; }

  friend bool operator==(const Descriptor& a, const Descriptor& b) { return a.values_ == b.values_; }

 private:
  std::vector<float> values_;
  double l2_norm_ = 0.0;
};

/// Descriptors of one traverse produced by one technique, together with the
/// per-frame encoding time (measured, or taken from a manifest).
class DescriptorSet {
 public:
  DescriptorSet() = default;

  /// Throws std::invalid_argument on mixed dimensionality or a negative
  /// (or non-finite) encoding time.
  DescriptorSet(std::vector<Descriptor> descriptors, double encode_time_per_frame, std::string technique_name);

  const std::vector<Descriptor>& descriptors() const { return descriptors_; }
  const Descriptor& operator[](std::size_t i) const { return descriptors_[i]; }
  std::size_t size() const { return descriptors_.size(); }
  bool empty() const { return descriptors_.empty(); }
  /// 0 for an empty set.
  std::size_t dim() const { return descriptors_.empty() ? 0 : descriptors_.front().size(); }
  double encode_time_per_frame() const { return encode_time_per_frame_; }
  const std::string& technique_name() const { return technique_name_; }

 private:
  std::vector<Descriptor> descriptors_;
  double encode_time_per_frame_ = 0.0;
  std::string technique_name_;
};

}  // namespace seqvpr
