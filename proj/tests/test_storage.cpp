#include <doctest.h>

#include <algorithm>
#include <set>

#include "generators.h"
#include "stam/storage.h"
#include "stam/workspace.h"

using namespace stam;

namespace {

TensorStorage csrIdentity2() {
  TensorBuilder builder({2, 2}, csr());
  builder.appendRow({0}, {{0, 1.0}});
  builder.appendRow({1}, {{1, 1.0}});
  return builder.finalize();
}

}  // namespace

TEST_CASE("empty storage per format") {
  TensorStorage dense22({2, 2}, denseFormat(2));
  CHECK(dense22.vals() == std::vector<double>{0, 0, 0, 0});

  TensorStorage sparseVec({3}, TensorFormat({compressed()}));
  CHECK(sparseVec.level(0).pos == std::vector<int64_t>{0, 0});
  CHECK(sparseVec.level(0).idx.empty());
  CHECK(sparseVec.vals().empty());

  TensorStorage csr23({2, 3}, csr());
  CHECK(csr23.level(1).pos == std::vector<int64_t>{0, 0, 0});

  CHECK_THROWS_AS(TensorStorage({2}, csr()), Error);
}

TEST_CASE("locate") {
  TensorStorage identity = csrIdentity2();
  CHECK(identity.locate({1, 1}) == 1);
  CHECK(identity.locate({0, 1}) == std::nullopt);

  TensorStorage dense({2, 3}, denseFormat(2));
  CHECK(dense.locate({1, 2}) == 5);

  CHECK_THROWS_AS(identity.locate({2, 0}), Error);
}

TEST_CASE("append rows") {
  TensorBuilder builder({2, 2}, csr());
  builder.appendRow({0}, {{1, 3.0}});
  SUBCASE("single entry") {
    TensorStorage storage = builder.finalize();
    CHECK(storage.level(1).pos == std::vector<int64_t>{0, 1, 1});
    CHECK(storage.level(1).idx == std::vector<int64_t>{1});
  }
  SUBCASE("second row") {
    builder.appendRow({1}, {{0, 2.0}, {1, 4.0}});
    TensorStorage storage = builder.finalize();
    CHECK(storage.level(1).pos == std::vector<int64_t>{0, 1, 3});
    CHECK(storage.level(1).idx == std::vector<int64_t>{1, 0, 1});
    CHECK(storage.vals() == std::vector<double>{3.0, 2.0, 4.0});
  }
  SUBCASE("earlier row rejected") {
    builder.appendRow({1}, {{0, 2.0}});
    CHECK_THROWS_AS(builder.appendRow({0}, {{0, 9.0}}), Error);
  }
}

TEST_CASE("iterate level") {
  TensorStorage identity = csrIdentity2();
  auto row0 = iterateLevel(identity, 1, 0);
  REQUIRE(row0.size() == 1);
  CHECK(row0[0] == std::pair<int64_t, int64_t>{0, 0});

  TensorStorage dense({3}, denseFormat(1));
  auto level = iterateLevel(dense, 0, 0);
  REQUIRE(level.size() == 3);
  CHECK(level[2].first == 2);

  TensorStorage empty({2, 2}, csr());
  CHECK(iterateLevel(empty, 1, 0).empty());
  CHECK_THROWS_AS(iterateLevel(empty, 2, 0), Error);
}

TEST_CASE("workspace insert and drain") {
  Workspace ws({4});
  ws.insert(2, 1.5, true);
  CHECK(ws.value(2) == 1.5);
  CHECK(ws.insertedCoords() == std::vector<int64_t>{2});

  ws.insert(2, 2.0, true);
  CHECK(ws.value(2) == 3.5);
  CHECK(ws.insertedCoords() == std::vector<int64_t>{2});

  ws.insert(0, 1.0, false);
  ws.insert(0, 5.0, false);
  CHECK(ws.value(0) == 5.0);

  SUBCASE("sorted drain") {
    auto drained = ws.drain(true);
    REQUIRE(drained.size() == 2);
    CHECK(drained[0] == std::pair<int64_t, double>{0, 5.0});
    CHECK(drained[1] == std::pair<int64_t, double>{2, 3.5});
    ws.checkClean();
  }
  SUBCASE("insertion-order drain") {
    auto drained = ws.drain(false);
    REQUIRE(drained.size() == 2);
    CHECK(drained[0].first == 2);
    CHECK(drained[1].first == 0);
  }
  SUBCASE("empty after reset") {
    ws.reset();
    CHECK(ws.drain(true).empty());
  }
}

TEST_CASE("workspace reset touches only inserted entries") {
  Workspace ws({1000});
  int64_t before = ws.touchedEntries();
  ws.insert(10, 1.0, true);
  ws.insert(500, 2.0, true);
  ws.insert(10, 3.0, true);
  auto drained = ws.drain(false);
  CHECK(drained.size() == 2);
  // 3 inserts plus reset of the 2 distinct coordinates.
  CHECK(ws.touchedEntries() - before == 5);
  ws.checkClean();
}

TEST_CASE("csr round trip reproduces sorted deduplicated input") {
  testing::Rng rng(42);
  for (int trial = 0; trial < 20; trial++) {
    std::vector<int64_t> dims = {1 + testing::uniformInt(rng, 20),
                                 1 + testing::uniformInt(rng, 20)};
    auto entries = testing::randomEntries(dims, 0.3, rng);
    TensorStorage storage = fromCoo(dims, csr(), entries);
    storage.validate();

    std::sort(entries.begin(), entries.end());
    auto roundTrip = storage.entries();
    REQUIRE(roundTrip.size() == entries.size());
    for (size_t e = 0; e < entries.size(); e++) {
      CHECK(roundTrip[e].first == entries[e].first);
      CHECK(roundTrip[e].second == doctest::Approx(entries[e].second));
    }
  }
}

TEST_CASE("locate agrees with iteration on random tensors") {
  testing::Rng rng(7);
  for (int trial = 0; trial < 10; trial++) {
    std::vector<int64_t> dims = {1 + testing::uniformInt(rng, 100),
                                 1 + testing::uniformInt(rng, 100)};
    double density = 0.05 + 0.25 * testing::uniformValue(rng);
    auto entries = testing::randomEntries(dims, density, rng);

    for (const TensorFormat& format : {csr(), csc(), dcsr()}) {
      TensorStorage storage = fromCoo(dims, format, entries);
      for (const auto& [coords, value] : storage.entries()) {
        auto position = storage.locate(coords);
        REQUIRE(position.has_value());
        CHECK(storage.vals()[*position] == value);
      }
    }
  }
}

TEST_CASE("column-major storage orders by column") {
  TensorStorage storage =
      fromCoo({2, 3}, csc(), {{{0, 2}, 1.0}, {{1, 0}, 2.0}, {{0, 0}, 3.0}});
  // Level 0 is the column mode; entries sorted by (column, row).
  CHECK(storage.level(1).idx == std::vector<int64_t>{0, 1, 0});
  CHECK(storage.vals() == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(storage.locate({0, 2}) == 2);
}

TEST_CASE("duplicate coordinates combine by addition") {
  TensorStorage storage = fromCoo({4}, TensorFormat({compressed()}),
                                  {{{1}, 2.0}, {{1}, 3.0}, {{2}, 1.0}});
  CHECK(storage.level(0).idx == std::vector<int64_t>{1, 2});
  CHECK(storage.vals() == std::vector<double>{5.0, 1.0});
}

TEST_CASE("builder tracks doubled allocations") {
  TensorBuilder builder({10000}, TensorFormat({compressed()}));
  for (int64_t c = 0; c < 3000; c++) builder.append({c}, 1.0);
  // 1024 then 2048 then 4096 entries for idx and vals.
  CHECK(builder.bytesAllocated() >= 3000 * 16);
  TensorStorage storage = builder.finalize();
  CHECK(storage.storedCount() == 3000);
}
