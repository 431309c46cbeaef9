#include "sdfhoi/core/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "sdfhoi/core/errors.hpp"
#include "sdfhoi/core/hash.hpp"

static_assert(std::endian::native == std::endian::little,
              "container format assumes a little-endian host");

namespace sdfhoi {

namespace {

constexpr char kMagic[8] = {'S', 'D', 'F', 'H', 'O', 'I', '1', '\0'};
constexpr std::uint32_t kVersion = 1;

std::size_t dtype_size(DType t) {
  switch (t) {
    case DType::F32:
      return 4;
    case DType::F64:
      return 8;
    case DType::I32:
      return 4;
    case DType::U8:
      return 1;
  }
  throw IoError("container: unknown dtype");
}

template <class T>
void put(std::vector<unsigned char>& out, const T& v) {
  const auto* p = reinterpret_cast<const unsigned char*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

void put_str(std::vector<unsigned char>& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

struct Cursor {
  const unsigned char* p;
  std::size_t left;

  template <class T>
  T take() {
    if (left < sizeof(T)) throw TruncatedFileError("container: truncated payload");
    T v;
    std::memcpy(&v, p, sizeof(T));
    p += sizeof(T);
    left -= sizeof(T);
    return v;
  }
  std::string take_str() {
    const auto n = take<std::uint32_t>();
    if (left < n) throw TruncatedFileError("container: truncated string");
    std::string s(reinterpret_cast<const char*>(p), n);
    p += n;
    left -= n;
    return s;
  }
  void take_bytes(std::vector<unsigned char>& out, std::size_t n) {
    if (left < n) throw TruncatedFileError("container: truncated array data");
    out.assign(p, p + n);
    p += n;
    left -= n;
  }
};

}  // namespace

std::size_t NamedArray::count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

NamedArray make_array_f32(const std::string& name, const MatXd& m) {
  NamedArray a;
  a.name = name;
  a.dtype = DType::F32;
  a.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  a.data.resize(static_cast<std::size_t>(m.size()) * 4);
  auto* out = reinterpret_cast<float*>(a.data.data());
  for (Eigen::Index i = 0; i < m.size(); ++i)
    out[i] = static_cast<float>(m.data()[i]);  // row-major storage
  return a;
}

NamedArray make_array_f32(const std::string& name, const MatXf& m) {
  NamedArray a;
  a.name = name;
  a.dtype = DType::F32;
  a.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  a.data.resize(static_cast<std::size_t>(m.size()) * 4);
  std::memcpy(a.data.data(), m.data(), a.data.size());
  return a;
}

NamedArray make_array_i32(const std::string& name, const MatX3i& m) {
  NamedArray a;
  a.name = name;
  a.dtype = DType::I32;
  a.dims = {static_cast<std::uint64_t>(m.rows()), 3};
  a.data.resize(static_cast<std::size_t>(m.size()) * 4);
  std::memcpy(a.data.data(), m.data(), a.data.size());
  return a;
}

NamedArray make_scalar_u64(const std::string& name, std::uint64_t v) {
  // stored as two i32 halves to stay within the dtype set
  NamedArray a;
  a.name = name;
  a.dtype = DType::I32;
  a.dims = {2};
  a.data.resize(8);
  std::memcpy(a.data.data(), &v, 8);
  return a;
}

MatXd array_to_matd(const NamedArray& a) {
  const MatXf f = array_to_matf(a);
  return f.cast<double>();
}

MatXf array_to_matf(const NamedArray& a) {
  if (a.dtype != DType::F32) throw IoError("array '" + a.name + "' is not f32");
  if (a.dims.size() != 2) throw IoError("array '" + a.name + "' is not 2-D");
  MatXf m(static_cast<Eigen::Index>(a.dims[0]), static_cast<Eigen::Index>(a.dims[1]));
  if (a.data.size() != static_cast<std::size_t>(m.size()) * 4)
    throw TruncatedFileError("array '" + a.name + "' has wrong byte count");
  std::memcpy(m.data(), a.data.data(), a.data.size());
  return m;
}

MatX3i array_to_mat3i(const NamedArray& a) {
  if (a.dtype != DType::I32 || a.dims.size() != 2 || a.dims[1] != 3)
    throw IoError("array '" + a.name + "' is not an i32 n-by-3 array");
  MatX3i m(static_cast<Eigen::Index>(a.dims[0]), 3);
  if (a.data.size() != static_cast<std::size_t>(m.size()) * 4)
    throw TruncatedFileError("array '" + a.name + "' has wrong byte count");
  std::memcpy(m.data(), a.data.data(), a.data.size());
  return m;
}

std::uint64_t array_to_u64(const NamedArray& a) {
  if (a.data.size() != 8) throw IoError("array '" + a.name + "' is not a u64 scalar");
  std::uint64_t v;
  std::memcpy(&v, a.data.data(), 8);
  return v;
}

bool Bundle::has(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return true;
  return false;
}

const NamedArray& Bundle::get(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return a;
  throw IoError("bundle: missing array '" + name + "'");
}

std::vector<unsigned char> Bundle::encode() const {
  std::vector<unsigned char> out;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(arrays.size()));
  for (const auto& a : arrays) {
    put_str(out, a.name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(a.dtype));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(a.dims.size()));
    for (auto d : a.dims) put<std::uint64_t>(out, d);
    if (a.data.size() != a.count() * dtype_size(a.dtype))
      throw IoError("bundle: array '" + a.name + "' byte count mismatch");
    out.insert(out.end(), a.data.begin(), a.data.end());
  }
  return out;
}

Bundle Bundle::decode(const unsigned char* p, std::size_t n) {
  Cursor c{p, n};
  Bundle b;
  const auto count = c.take<std::uint32_t>();
  b.arrays.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedArray a;
    a.name = c.take_str();
    a.dtype = static_cast<DType>(c.take<std::uint32_t>());
    const auto ndim = c.take<std::uint32_t>();
    a.dims.resize(ndim);
    for (auto& d : a.dims) d = c.take<std::uint64_t>();
    c.take_bytes(a.data, a.count() * dtype_size(a.dtype));
    b.arrays.push_back(std::move(a));
  }
  return b;
}

// ---------------------------------------------------------------------------

struct ContainerWriter::Impl {
  std::ofstream out;
  std::string path;
  std::uint64_t count = 0;
  bool finished = false;
};

ContainerWriter::ContainerWriter(const std::string& path, FileKind kind)
    : impl_(new Impl) {
  impl_->path = path;
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) {
    delete impl_;
    throw IoError("container: cannot write " + path);
  }
  impl_->out.write(kMagic, 8);
  const std::uint32_t ver = kVersion, k = static_cast<std::uint32_t>(kind);
  impl_->out.write(reinterpret_cast<const char*>(&ver), 4);
  impl_->out.write(reinterpret_cast<const char*>(&k), 4);
  const std::uint64_t zero = 0;
  impl_->out.write(reinterpret_cast<const char*>(&zero), 8);
}

ContainerWriter::~ContainerWriter() {
  try {
    finish();
  } catch (...) {
  }
  delete impl_;
}

void ContainerWriter::add_record(const std::string& name, const Bundle& bundle) {
  if (impl_->finished) throw IoError("container: writer already finished");
  const auto payload = bundle.encode();
  const std::uint32_t name_len = static_cast<std::uint32_t>(name.size());
  const std::uint64_t payload_len = payload.size();
  const std::uint32_t crc = crc32(payload.data(), payload.size());
  auto& out = impl_->out;
  out.write(reinterpret_cast<const char*>(&name_len), 4);
  out.write(name.data(), name_len);
  out.write(reinterpret_cast<const char*>(&payload_len), 8);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  out.write(reinterpret_cast<const char*>(&crc), 4);
  if (!out) throw IoError("container: write failure on " + impl_->path);
  ++impl_->count;
}

void ContainerWriter::finish() {
  if (impl_->finished) return;
  impl_->finished = true;
  impl_->out.seekp(16);
  impl_->out.write(reinterpret_cast<const char*>(&impl_->count), 8);
  impl_->out.close();
  if (!impl_->out) throw IoError("container: close failure on " + impl_->path);
}

// ---------------------------------------------------------------------------

struct ContainerReader::Impl {
  struct Rec {
    std::string name;
    std::uint64_t offset;  // payload offset
    std::uint64_t size;
    std::uint32_t crc;
  };
  mutable std::ifstream in;
  std::string path;
  FileKind kind;
  std::vector<Rec> recs;
  std::map<std::string, std::size_t> by_name;
};

ContainerReader::ContainerReader(const std::string& path) : impl_(new Impl) {
  auto fail = [&](auto&& make) {
    delete impl_;
    throw make;
  };
  impl_->path = path;
  auto& in = impl_->in;
  in.open(path, std::ios::binary);
  if (!in) fail(IoError("container: cannot open " + path));
  char magic[8];
  std::uint32_t ver = 0, kind = 0;
  std::uint64_t count = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&ver), 4);
  in.read(reinterpret_cast<char*>(&kind), 4);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in) fail(TruncatedFileError("container: truncated header in " + path));
  if (std::memcmp(magic, kMagic, 8) != 0)
    fail(VersionMismatchError("container: bad magic in " + path));
  if (ver != kVersion)
    fail(VersionMismatchError("container: unsupported version " +
                              std::to_string(ver) + " in " + path));
  impl_->kind = static_cast<FileKind>(kind);
  impl_->recs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint32_t name_len = 0;
    in.read(reinterpret_cast<char*>(&name_len), 4);
    if (!in) fail(TruncatedFileError("container: truncated record header"));
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    std::uint64_t payload_len = 0;
    in.read(reinterpret_cast<char*>(&payload_len), 8);
    if (!in) fail(TruncatedFileError("container: truncated record header"));
    const std::uint64_t offset = static_cast<std::uint64_t>(in.tellg());
    in.seekg(static_cast<std::streamoff>(payload_len), std::ios::cur);
    std::uint32_t crc = 0;
    in.read(reinterpret_cast<char*>(&crc), 4);
    if (!in) fail(TruncatedFileError("container: truncated record '" + name + "'"));
    impl_->by_name[name] = impl_->recs.size();
    impl_->recs.push_back({std::move(name), offset, payload_len, crc});
  }
}

ContainerReader::~ContainerReader() { delete impl_; }

FileKind ContainerReader::kind() const { return impl_->kind; }
std::size_t ContainerReader::size() const { return impl_->recs.size(); }
const std::string& ContainerReader::name(std::size_t i) const {
  return impl_->recs.at(i).name;
}

Bundle ContainerReader::read(std::size_t i) const {
  const auto& r = impl_->recs.at(i);
  std::vector<unsigned char> payload(r.size);
  impl_->in.clear();
  impl_->in.seekg(static_cast<std::streamoff>(r.offset));
  impl_->in.read(reinterpret_cast<char*>(payload.data()),
                 static_cast<std::streamsize>(r.size));
  if (!impl_->in)
    throw TruncatedFileError("container: cannot read record '" + r.name + "'");
  if (crc32(payload.data(), payload.size()) != r.crc)
    throw ChecksumError("container: checksum mismatch in record '" + r.name + "'");
  return Bundle::decode(payload.data(), payload.size());
}

Bundle ContainerReader::read(const std::string& name) const {
  const auto it = impl_->by_name.find(name);
  if (it == impl_->by_name.end())
    throw IoError("container: no record '" + name + "' in " + impl_->path);
  return read(it->second);
}

bool ContainerReader::has(const std::string& name) const {
  return impl_->by_name.count(name) != 0;
}

std::uint64_t ContainerReader::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& r : impl_->recs) {
    h = fnv1a64(r.name, h);
    h = fnv1a64(&r.crc, 4, h);
  }
  return h;
}

}  // namespace sdfhoi
