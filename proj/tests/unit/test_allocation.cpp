#include <doctest.h>

#include <set>

#include "spectrumlab/allocation.hpp"
#include "spectrumlab/errors.hpp"

using namespace spectrumlab;

TEST_CASE("global action space enumerates compositions in lexicographic order") {
  GlobalActionSpace space{2, 4};
  CHECK(static_cast<std::uint64_t>(space.cardinality()) == 5);
  CHECK(space.decode(0) == std::vector<int>{0, 4});
  CHECK(space.decode(2) == std::vector<int>{2, 2});
  CHECK(space.decode(4) == std::vector<int>{4, 0});
  CHECK_THROWS_AS(space.decode(5), DomainError);

  SUBCASE("single beam has exactly one action") {
    GlobalActionSpace one{1, 4};
    CHECK(static_cast<std::uint64_t>(one.cardinality()) == 1);
    CHECK(one.decode(0) == std::vector<int>{4});
    CHECK(one.head_sizes().empty());
  }
}

TEST_CASE("regional space uses most-significant-first base-S digits") {
  RegionalActionSpace space{10, {4, 5, 6}};
  CHECK(static_cast<std::uint64_t>(space.cardinality()) == 1000);
  CHECK(space.decode(123) == std::vector<int>{1, 2, 3});
  CHECK(static_cast<std::uint64_t>(space.encode({1, 2, 3})) == 123);
  CHECK(space.head_sizes() == std::vector<int>{10, 10, 10});
}

TEST_CASE("local space mixes per-user digits with the UAV move") {
  LocalActionSpace space;
  space.channels = 2;
  space.power_levels = 2;
  space.users = {10, 11};
  space.has_move = true;
  CHECK(static_cast<std::uint64_t>(space.cardinality()) == 4 * 4 * 5);

  LocalAction a = space.decode(0);
  CHECK(a.per_user[0].channel == 0);
  CHECK(a.per_user[0].power_level == 1);
  CHECK(a.move == UavMove::Stay);

  // move is the least significant digit
  LocalAction b = space.decode(1);
  CHECK(b.move == UavMove::North);
  CHECK(b.per_user == a.per_user);
}

TEST_CASE("encode/decode round-trips over whole small spaces") {
  GlobalActionSpace g{3, 5};
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(g.cardinality()); ++i) {
    auto counts = g.decode(i);
    int sum = 0;
    for (int c : counts) sum += c;
    CHECK(sum == 5);
    CHECK(static_cast<std::uint64_t>(g.encode(counts)) == i);
  }

  RegionalActionSpace r{3, {1, 2}};
  for (std::uint64_t i = 0; i < 9; ++i)
    CHECK(static_cast<std::uint64_t>(r.encode(r.decode(i))) == i);

  LocalActionSpace l;
  l.channels = 3;
  l.power_levels = 2;
  l.users = {7};
  l.has_move = true;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(l.cardinality()); ++i)
    CHECK(static_cast<std::uint64_t>(l.encode(l.decode(i))) == i);
}

TEST_CASE("digit resolution spreads sub-bands across owned chunks") {
  // One beam owning four chunks with S=4: digits map to distinct chunks.
  std::vector<int> owned{0, 1, 2, 3};
  std::set<int> abs_subbands;
  for (int digit = 0; digit < 4; ++digit) {
    auto band = resolve_subband_digit(owned, digit, 4);
    CHECK(band.chunk == digit);
    CHECK(band.subband == 0);
    abs_subbands.insert(absolute_subband_index(band, 4));
  }
  CHECK(abs_subbands.size() == 4);

  // Two owned chunks with S=10: digits spread over both chunks.
  std::vector<int> two{2, 3};
  std::set<int> seen;
  for (int digit = 0; digit < 10; ++digit) {
    auto band = resolve_subband_digit(two, digit, 10);
    CHECK((band.chunk == 2 || band.chunk == 3));
    seen.insert(absolute_subband_index(band, 10));
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("action index renders arbitrarily large values") {
  ActionIndex v = 1;
  for (int i = 0; i < 25; ++i) v *= 20;  // 20^25 overflows u64
  CHECK(action_index_to_string(v) == "335544320000000000000000000000000");
  CHECK(action_index_to_string(0) == "0");
}
