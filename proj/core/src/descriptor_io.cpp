#include "seqvpr/descriptor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"

#include "seqvpr/error.hpp"

namespace seqvpr {
namespace {

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::byte>((v >> shift) & 0xFFu));
}

std::uint32_t get_u32(std::span<const std::byte> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= std::to_integer<std::uint32_t>(bytes[offset + b]) << (8 * b);
  return v;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

}  // namespace

std::vector<std::byte> encode_svpr(const SvprMatrix& matrix) {
  const std::size_t expected = static_cast<std::size_t>(matrix.count) * matrix.dim;
  if (matrix.values.size() != expected) {
    throw std::invalid_argument("SVPR1 payload has " + std::to_string(matrix.values.size()) + " values, header promises " +
                                std::to_string(expected));
  }
  std::vector<std::byte> out;
  out.reserve(kSvprHeaderSize + expected * 4);
  for (char c : kSvprMagic) out.push_back(static_cast<std::byte>(c));
  put_u32(out, matrix.count);
  put_u32(out, matrix.dim);
  for (float v : matrix.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

SvprMatrix decode_svpr(std::span<const std::byte> bytes) {
  if (bytes.size() < kSvprMagic.size() ||
      std::memcmp(bytes.data(), kSvprMagic.data(), kSvprMagic.size()) != 0) {
    throw Error("SVPR1 magic mismatch");
  }
  if (bytes.size() < kSvprHeaderSize) throw Error("SVPR1 size mismatch: truncated header");

  SvprMatrix matrix;
  matrix.count = get_u32(bytes, 5);
  matrix.dim = get_u32(bytes, 9);
  const std::size_t n_values = static_cast<std::size_t>(matrix.count) * matrix.dim;
  const std::size_t payload = bytes.size() - kSvprHeaderSize;
  if (payload != n_values * 4) {
    throw Error("SVPR1 size mismatch: header promises " + std::to_string(n_values * 4) + " payload bytes, found " +
                std::to_string(payload));
  }
  matrix.values.resize(n_values);
  for (std::size_t i = 0; i < n_values; ++i) {
    matrix.values[i] = std::bit_cast<float>(get_u32(bytes, kSvprHeaderSize + 4 * i));
  }
  return matrix;
}

void write_svpr(const std::filesystem::path& path, const SvprMatrix& matrix) {
  const auto bytes = encode_svpr(matrix);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

SvprMatrix read_svpr(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_svpr(bytes);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Manifest parse_manifest(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("manifest must be a JSON object");
  if (!doc.contains("technique_name") || !doc["technique_name"].is_string()) {
    throw Error("manifest field technique_name missing or not a string");
  }
  if (!doc.contains("encode_time_per_frame_sec") || !doc["encode_time_per_frame_sec"].is_number()) {
    throw Error("manifest field encode_time_per_frame_sec missing or not a number");
  }
  Manifest m;
  m.technique_name = doc["technique_name"].get<std::string>();
  m.encode_time_per_frame_sec = doc["encode_time_per_frame_sec"].get<double>();
  if (!std::isfinite(m.encode_time_per_frame_sec) || m.encode_time_per_frame_sec < 0.0) {
    throw Error("manifest encode_time_per_frame_sec must be >= 0");
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_manifest(text);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  nlohmann::ordered_json doc;
  doc["technique_name"] = manifest.technique_name;
  doc["encode_time_per_frame_sec"] = manifest.encode_time_per_frame_sec;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

SvprMatrix to_svpr(const DescriptorSet& set) {
  SvprMatrix matrix;
  matrix.count = static_cast<std::uint32_t>(set.size());
  matrix.dim = static_cast<std::uint32_t>(set.dim());
  matrix.values.reserve(set.size() * set.dim());
  for (const auto& d : set.descriptors()) matrix.values.insert(matrix.values.end(), d.values().begin(), d.values().end());
  return matrix;
}

DescriptorSet import_descriptors(const std::filesystem::path& data_path, const std::filesystem::path& manifest_path) {
  const Manifest manifest = read_manifest(manifest_path);
  const SvprMatrix matrix = read_svpr(data_path);

  std::vector<Descriptor> descriptors;
  descriptors.reserve(matrix.count);
  for (std::size_t n = 0; n < matrix.count; ++n) {
    auto first = matrix.values.begin() + static_cast<std::ptrdiff_t>(n * matrix.dim);
    std::vector<float> values(first, first + matrix.dim);
    try {
      descriptors.emplace_back(std::move(values));
    } catch (const Error& e) {
      throw Error(data_path.string() + ": descriptor " + std::to_string(n) + ": " + e.what());
    }
  }
  return DescriptorSet(std::move(descriptors), manifest.encode_time_per_frame_sec, manifest.technique_name);
}

void export_descriptors(const DescriptorSet& set, const std::filesystem::path& data_path,
                        const std::filesystem::path& manifest_path) {
  write_svpr(data_path, to_svpr(set));
  write_manifest(manifest_path, {set.technique_name(), set.encode_time_per_frame()});
}

}  // namespace seqvpr
