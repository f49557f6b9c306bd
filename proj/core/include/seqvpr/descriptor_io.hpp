#pragma once

// SVPR1 binary layout (all integers and floats little-endian):
//   bytes 0..4   magic "SVPR1"
//   bytes 5..8   u32 count N
//   bytes 9..12  u32 dim D
//   then N*D float32 values, row-major (descriptor by descriptor)

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqvpr/descriptor.hpp"

namespace seqvpr {

inline constexpr std::string_view kSvprMagic = "SVPR1";
inline constexpr std::size_t kSvprHeaderSize = 5 + 4 + 4;

/// Raw contents of an SVPR1 file.
struct SvprMatrix {
  std::uint32_t count = 0;
  std::uint32_t dim = 0;
  std::vector<float> values;  // count * dim entries
};

std::vector<std::byte> encode_svpr(const SvprMatrix& matrix);
/// Throws seqvpr::Error on a bad magic ("magic mismatch") or when the payload
/// length disagrees with the header ("size mismatch").
SvprMatrix decode_svpr(std::span<const std::byte> bytes);

void write_svpr(const std::filesystem::path& path, const SvprMatrix& matrix);
SvprMatrix read_svpr(const std::filesystem::path& path);

/// Sidecar JSON: {"technique_name": str, "encode_time_per_frame_sec": float}.
struct Manifest {
  std::string technique_name;
  double encode_time_per_frame_sec = 0.0;
};

Manifest parse_manifest(std::string_view json_text);
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

SvprMatrix to_svpr(const DescriptorSet& set);

/// Loads precomputed descriptors. Norms are computed on load; non-finite
/// values and negative manifest times are rejected.
DescriptorSet import_descriptors(const std::filesystem::path& data_path, const std::filesystem::path& manifest_path);

void export_descriptors(const DescriptorSet& set, const std::filesystem::path& data_path,
                        const std::filesystem::path& manifest_path);

}  // namespace seqvpr
