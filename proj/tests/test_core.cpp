#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sdfhoi/core/config.hpp"
#include "sdfhoi/core/container.hpp"
#include "sdfhoi/core/errors.hpp"
#include "sdfhoi/core/hash.hpp"
#include "sdfhoi/core/parallel.hpp"
#include "sdfhoi/core/rng.hpp"

using namespace sdfhoi;

namespace {
std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a = Rng::stream(7, 1, 2, 3);
  Rng b = Rng::stream(7, 1, 2, 3);
  Rng c = Rng::stream(7, 1, 2, 4);
  CHECK(a.next() == b.next());
  CHECK(a.next() == b.next());
  CHECK(Rng::stream(7, 1, 2, 3).next() != c.next());

  Rng d(42);
  double mean = 0;
  for (int i = 0; i < 10000; ++i) mean += d.uniform();
  CHECK(mean / 10000 == doctest::Approx(0.5).epsilon(0.02));
  double var = 0, m2 = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = d.normal();
    m2 += x;
    var += x * x;
  }
  CHECK(m2 / 10000 == doctest::Approx(0.0).epsilon(0.05));
  CHECK(var / 10000 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("crc32 matches known vector") {
  // "123456789" -> 0xCBF43926 (standard check value)
  CHECK(crc32("123456789", 9) == 0xCBF43926u);
}

TEST_CASE("config round trip, typed getters, errors") {
  Config c = Config::parse("sdfhoi-config v1\n# comment\ntrain.epochs = 40\n"
                           "train.lr = 1e-4\nname = base run\n");
  CHECK(c.get_int("train.epochs") == 40);
  CHECK(c.get_num("train.lr") == doctest::Approx(1e-4));
  CHECK(c.get_str("name") == "base run");
  CHECK(c.get_int("missing", 7) == 7);
  CHECK_THROWS_AS((void)c.get_num("name"), ValidationError);
  CHECK_THROWS_AS((void)c.get_int("missing"), ValidationError);
  CHECK_THROWS_AS((void)Config::parse("bogus\n"), VersionMismatchError);

  const Config back = Config::parse(c.serialize());
  CHECK(back.items() == c.items());
  CHECK(back.hash() == c.hash());
  CHECK(back.hash({"train."}) != back.hash({"name"}));
}

TEST_CASE("container round trip and failure modes") {
  const std::string path = tmp_path("sdfhoi_container_test.bin");
  MatXf m(2, 3);
  m << 1, 2, 3, 4, 5.5f, -6;
  {
    ContainerWriter w(path, FileKind::Checkpoint);
    Bundle b;
    b.add(make_array_f32("m", m));
    b.add(make_scalar_u64("n", 0xdeadbeefULL));
    w.add_record("rec", b);
    w.finish();
  }
  {
    ContainerReader r(path);
    CHECK(r.kind() == FileKind::Checkpoint);
    CHECK(r.size() == 1);
    const Bundle b = r.read("rec");
    CHECK(array_to_matf(b.get("m")) == m);
    CHECK(array_to_u64(b.get("n")) == 0xdeadbeefULL);
  }

  SUBCASE("corrupt one payload byte -> checksum error") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(24 + 4 + 3 + 8 + 10);  // somewhere inside the payload
    char byte = 0x77;
    f.write(&byte, 1);
    f.close();
    ContainerReader r(path);
    CHECK_THROWS_AS((void)r.read("rec"), ChecksumError);
  }
  SUBCASE("truncated file") {
    const auto full = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, full - 6);
    CHECK_THROWS_AS(ContainerReader{path}, TruncatedFileError);
  }
  SUBCASE("bad magic -> version mismatch") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXXXXXX", 8);
    f.close();
    CHECK_THROWS_AS(ContainerReader{path}, VersionMismatchError);
  }
  std::remove(path.c_str());
}

TEST_CASE("empty container is valid") {
  const std::string path = tmp_path("sdfhoi_container_empty.bin");
  {
    ContainerWriter w(path, FileKind::Dataset);
    w.finish();
  }
  ContainerReader r(path);
  CHECK(r.size() == 0);
  std::remove(path.c_str());
}

TEST_CASE("parallel_for strided partition covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 3, [&](std::size_t i, int) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
