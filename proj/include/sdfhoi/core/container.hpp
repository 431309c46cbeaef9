#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdfhoi/core/types.hpp"

namespace sdfhoi {

// Versioned binary container used by all on-disk artifacts (datasets,
// checkpoints, predictions). Layout:
//
//   magic "SDFHOI1\0" | u32 version | u32 kind | u64 record_count
//   record*: u32 name_len | name | u64 payload_len | payload | u32 crc32
//
// A record payload is a bundle of named arrays, each: u32 name_len | name |
// u32 dtype | u32 ndim | u64 dims[] | raw little-endian data.

enum class FileKind : std::uint32_t {
  Dataset = 1,
  Checkpoint = 2,
  Predictions = 3,
  Metrics = 4,
};

enum class DType : std::uint32_t { F32 = 0, F64 = 1, I32 = 2, U8 = 3 };

struct NamedArray {
  std::string name;
  DType dtype = DType::F32;
  std::vector<std::uint64_t> dims;
  std::vector<unsigned char> data;

  std::size_t count() const;
};

// Array <-> Eigen conversion helpers. Arrays persist float32 per the format;
// conversions widen/narrow as needed.
NamedArray make_array_f32(const std::string& name, const MatXd& m);
NamedArray make_array_f32(const std::string& name, const MatXf& m);
NamedArray make_array_i32(const std::string& name, const MatX3i& m);
NamedArray make_scalar_u64(const std::string& name, std::uint64_t v);
MatXd array_to_matd(const NamedArray& a);
MatXf array_to_matf(const NamedArray& a);
MatX3i array_to_mat3i(const NamedArray& a);
std::uint64_t array_to_u64(const NamedArray& a);

struct Bundle {
  std::vector<NamedArray> arrays;

  void add(NamedArray a) { arrays.push_back(std::move(a)); }
  bool has(const std::string& name) const;
  const NamedArray& get(const std::string& name) const;  // throws IoError

  std::vector<unsigned char> encode() const;
  static Bundle decode(const unsigned char* p, std::size_t n);
};

class ContainerWriter {
 public:
  ContainerWriter(const std::string& path, FileKind kind);
  ~ContainerWriter();
  ContainerWriter(const ContainerWriter&) = delete;
  ContainerWriter& operator=(const ContainerWriter&) = delete;

  void add_record(const std::string& name, const Bundle& bundle);
  void finish();  // patches the record count; implicit in the destructor

 private:
  struct Impl;
  Impl* impl_;
};

class ContainerReader {
 public:
  explicit ContainerReader(const std::string& path);
  ~ContainerReader();
  ContainerReader(const ContainerReader&) = delete;
  ContainerReader& operator=(const ContainerReader&) = delete;

  FileKind kind() const;
  std::size_t size() const;
  const std::string& name(std::size_t i) const;
  // Verifies the record checksum; throws ChecksumError on mismatch.
  Bundle read(std::size_t i) const;
  Bundle read(const std::string& name) const;
  bool has(const std::string& name) const;
  // CRC of every record's payload CRC, in order: a cheap content hash.
  std::uint64_t content_hash() const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace sdfhoi
