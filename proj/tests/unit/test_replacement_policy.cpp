// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "core/replacement_policy.hpp"
#include "reference/reference_model.hpp"

using namespace numasim;

namespace {

// Full set where way w has recency ranks[w]; remote_shared ways listed in
// `shared` are installed Shared with the bit set.
CacheSet make_set(const std::vector<std::uint32_t>& ranks, const std::vector<WayId>& shared = {}) {
  CacheSet s(static_cast<std::uint32_t>(ranks.size()));
  for (WayId w = 0; w < ranks.size(); ++w) {
    const bool bit = std::find(shared.begin(), shared.end(), w) != shared.end();
    s.ways[w] = LlcLine{w + 100, bit ? MoesiState::Shared : MoesiState::Exclusive, bit, ranks[w]};
  }
  return s;
}

std::vector<std::uint32_t> ranks_of(const CacheSet& s) {
  std::vector<std::uint32_t> r;
  for (const auto& l : s.ways) r.push_back(l.recency);
  return r;
}

bool is_prefix_permutation(const CacheSet& s) {
  std::vector<std::uint32_t> r;
  for (const auto& l : s.ways)
    if (l.valid()) r.push_back(l.recency);
  std::sort(r.begin(), r.end());
  for (std::uint32_t i = 0; i < r.size(); ++i)
    if (r[i] != i) return false;
  return true;
}

}  // namespace

TEST_CASE("threshold defaults are quarter and half associativity") {
  auto p = PolicyConfig::with_defaults(PolicyKind::BiasedAlways, 16);
  CHECK(p.t_local == 4);
  CHECK(p.t_remote == 8);
  p = PolicyConfig::with_defaults(PolicyKind::BiasedAlways, 2);
  CHECK(p.t_local == 1);  // floor(2/4) clamped
  CHECK(p.t_remote == 1);
  CHECK_THROWS_AS((PolicyConfig{PolicyKind::BiasedAlways, 0, 2}.validate(4)), ConfigError);
  CHECK_THROWS_AS((PolicyConfig{PolicyKind::BiasedAlways, 1, 5}.validate(4)), ConfigError);
}

TEST_CASE("touch rotates the LRU stack") {
  auto s = make_set({0, 1, 2, 3});
  touch(s, 3);
  CHECK(ranks_of(s) == std::vector<std::uint32_t>{1, 2, 3, 0});
  touch(s, 3);
  CHECK(ranks_of(s) == std::vector<std::uint32_t>{1, 2, 3, 0});
  CHECK_THROWS_AS(touch(s, 9), InternalError);
}

TEST_CASE("random touches keep ranks a permutation") {
  std::mt19937_64 rng(3);
  auto s = make_set({0, 1, 2, 3, 4, 5, 6, 7});
  for (int i = 0; i < 1000; ++i) {
    touch(s, static_cast<WayId>(rng() % 8));
    REQUIRE(is_prefix_permutation(s));
  }
}

TEST_CASE("touch on an invalid way is an internal error") {
  CacheSet s(4);
  CHECK_THROWS_AS(touch(s, 0), InternalError);
}

TEST_CASE("on_fill installs at MRU and forces the bit off outside Shared") {
  CacheSet s(4);
  on_fill(s, 0, 7, MoesiState::Shared, true);
  CHECK(s.ways[0].remote_shared);
  CHECK(s.ways[0].recency == 0);
  on_fill(s, 1, 8, MoesiState::Exclusive, true);
  CHECK_FALSE(s.ways[1].remote_shared);
  CHECK(s.ways[0].recency == 1);
}

TEST_CASE("a filled line becomes LRU after A-1 other touches") {
  CacheSet s(4);
  for (WayId w = 0; w < 4; ++w) on_fill(s, w, w, MoesiState::Exclusive, false);
  on_fill(s, 2, 42, MoesiState::Shared, true);
  for (WayId w : {0u, 1u, 3u}) touch(s, w);
  CHECK(lru_way(s) == 2);
}

TEST_CASE("invalidate closes the recency gap") {
  auto s = make_set({0, 1, 2, 3});
  invalidate(s, 1);
  CHECK(is_prefix_permutation(s));
  CHECK(s.valid_count() == 3);
  CHECK(s.first_invalid() == 1);
}

TEST_CASE("remote-home counter at threshold evicts the shared LRU line and resets") {
  // A=16: t_local=4, t_remote=8
  std::vector<std::uint32_t> ranks(16);
  std::iota(ranks.begin(), ranks.end(), 0);
  auto s = make_set(ranks, {15});
  s.remote_sharing_remote_home_counter = 8;
  std::vector<SocketId> homes(16, 0);
  homes[15] = 1;
  const auto cfg = PolicyConfig::with_defaults(PolicyKind::BiasedAlways, 16);
  const auto d = select_victim(s, 0, homes, cfg, true);
  CHECK(d.way == 15);
  CHECK_FALSE(d.biased);
  CHECK(d.counter_event == CounterEvent::ResetRemote);
  CHECK(s.remote_sharing_remote_home_counter == 0);
}

TEST_CASE("bias disabled reduces to plain LRU") {
  auto s = make_set({1, 2, 0, 3}, {3});
  std::vector<SocketId> homes(4, 1);
  const auto d = select_victim(s, 0, homes, PolicyConfig::with_defaults(PolicyKind::BiasedAdaptive, 4), false);
  CHECK(d == VictimDecision{3, false, CounterEvent::None});
  const auto lru = select_victim(s, 0, homes, PolicyConfig::with_defaults(PolicyKind::LruOnly, 4), true);
  CHECK(lru == VictimDecision{3, false, CounterEvent::None});
}

TEST_CASE("local-home shared LRU line is protected by the next non-shared way") {
  // A=4, t_local=1. Way 0 is LRU and shared; way 2 is second-worst and not.
  auto s = make_set({3, 0, 2, 1}, {0});
  std::vector<SocketId> homes(4, 0);
  const auto d = select_victim(s, 0, homes, PolicyConfig{PolicyKind::BiasedAlways, 1, 2}, true);
  CHECK(d == VictimDecision{2, true, CounterEvent::IncrementLocal});
  CHECK(s.remote_sharing_local_home_counter == 1);
  CHECK(s.remote_sharing_remote_home_counter == 0);
}

TEST_CASE("alternative victim skips shared ways deeper in the stack") {
  auto s = make_set({3, 2, 1, 0}, {0, 1});
  std::vector<SocketId> homes(4, 1);
  const auto d = select_victim(s, 0, homes, PolicyConfig{PolicyKind::BiasedAlways, 1, 2}, true);
  CHECK(d == VictimDecision{2, true, CounterEvent::IncrementRemote});
}

TEST_CASE("all-shared set falls back to LRU without touching counters") {
  auto s = make_set({3, 2, 1, 0}, {0, 1, 2, 3});
  std::vector<SocketId> homes(4, 1);
  const auto d = select_victim(s, 0, homes, PolicyConfig{PolicyKind::BiasedAlways, 1, 2}, true);
  CHECK(d == VictimDecision{0, false, CounterEvent::None});
  CHECK(s.remote_sharing_remote_home_counter == 0);
}

TEST_CASE("select_victim requires a full set") {
  CacheSet s(4);
  on_fill(s, 0, 1, MoesiState::Shared, true);
  std::vector<SocketId> homes(4, 0);
  CHECK_THROWS_AS(select_victim(s, 0, homes, PolicyConfig{PolicyKind::BiasedAlways, 1, 2}, true), InternalError);
  CacheSet empty;
  CHECK_THROWS_AS(select_victim(empty, 0, {}, PolicyConfig{PolicyKind::BiasedAlways, 1, 2}, true), InternalError);
}

TEST_CASE("select_victim agrees with the brute-force oracle on random sets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t assoc = 2 + static_cast<std::uint32_t>(rng() % 15);
    std::vector<std::uint32_t> ranks(assoc);
    std::iota(ranks.begin(), ranks.end(), 0);
    std::shuffle(ranks.begin(), ranks.end(), rng);
    std::vector<WayId> shared;
    std::vector<SocketId> homes(assoc);
    for (WayId w = 0; w < assoc; ++w) {
      if (rng() % 2) shared.push_back(w);
      homes[w] = static_cast<SocketId>(rng() % 2);
    }
    auto s = make_set(ranks, shared);
    const PolicyConfig cfg{PolicyKind::BiasedAlways, 1 + static_cast<std::uint32_t>(rng() % assoc),
                           1 + static_cast<std::uint32_t>(rng() % assoc)};
    s.remote_sharing_local_home_counter = static_cast<std::uint32_t>(rng() % (cfg.t_local + 1));
    s.remote_sharing_remote_home_counter = static_cast<std::uint32_t>(rng() % (cfg.t_remote + 1));

    std::vector<reference::RefWay> ref_ways;
    for (WayId w = 0; w < assoc; ++w)
      ref_ways.push_back({s.ways[w].remote_shared, assoc - s.ways[w].recency, homes[w] == 0});
    std::uint64_t lc = s.remote_sharing_local_home_counter, rc = s.remote_sharing_remote_home_counter;
    const bool bias = rng() % 4 != 0;
    const auto want = reference::reference_victim(ref_ways, bias, lc, rc, cfg.t_local, cfg.t_remote);

    const auto got = select_victim(s, 0, homes, cfg, bias);
    REQUIRE(got.way == want.way);
    REQUIRE(got.biased == want.biased);
    REQUIRE(s.remote_sharing_local_home_counter == lc);
    REQUIRE(s.remote_sharing_remote_home_counter == rc);
    if (got.biased) REQUIRE_FALSE(s.ways[got.way].remote_shared);
  }
}
