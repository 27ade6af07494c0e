#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "dilatelab/corpus.hpp"
#include "dilatelab/setcore.hpp"
#include "dilatelab/text.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace dilatelab;

namespace {

const OpConfig kForceBitset{kDefaultBitsetBudgetBits, Kernel::kBitset};
const OpConfig kForceMerge{kDefaultBitsetBudgetBits, Kernel::kMerge};

bool is_ap(const IntSet& s) {
  if (s.size() < 3) return true;
  const i64 d = s[1] - s[0];
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (s[i] - s[i - 1] != d) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("IntSet basics and validation") {
  CHECK_THROWS_AS(IntSet({3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(IntSet({1, 1}), std::invalid_argument);
  const IntSet s = IntSet::of({4, -1, 2});
  CHECK(s == IntSet({-1, 2, 4}));
  CHECK(s.min() == -1);
  CHECK(s.max() == 4);
  CHECK(s.span() == 6);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(3));
  CHECK(IntSet{}.empty());
  CHECK_THROWS_AS(IntSet{}.min(), std::domain_error);
  CHECK(IntSet::interval(2, 5) == IntSet({2, 3, 4, 5}));
  CHECK(IntSet::of({0, 1, 4}).reflected() == IntSet({0, 3, 4}));
}

TEST_CASE("dilate") {
  CHECK(dilate(IntSet::of({1, 2, 3}), 3) == IntSet({3, 6, 9}));
  CHECK(dilate(IntSet::of({5, 7}), 1) == IntSet({5, 7}));
  CHECK(dilate(IntSet::of({1, 2}), -2) == IntSet({-4, -2}));
  CHECK(dilate(IntSet::of({1, 2, 9}), 0) == IntSet({0}));
  CHECK_THROWS_AS(dilate(IntSet{}, 2), std::invalid_argument);
  CHECK_THROWS_AS(dilate(IntSet::of({i64{1} << 62}), 4), std::overflow_error);
}

TEST_CASE("sumset examples") {
  CHECK(sumset(IntSet::of({0, 1}), IntSet::of({0, 3})) ==
        IntSet({0, 1, 3, 4}));
  const IntSet b = IntSet::of({2, 5, 11});
  CHECK(sumset(IntSet::of({0}), b) == b);
  // derived with the double-loop oracle
  const IntSet expected = IntSet::of({0, 1, 3, 4, 6, 9, 10, 12});
  CHECK(oracle::naive_sumset(IntSet::of({0, 1, 3}), IntSet::of({0, 3, 9})) ==
        expected);
  CHECK(sumset(IntSet::of({0, 1, 3}), IntSet::of({0, 3, 9})) == expected);
  CHECK_THROWS_AS(sumset(IntSet{}, b), std::invalid_argument);
  CHECK_THROWS_AS(
      sumset(IntSet::of({i64{1} << 62}), IntSet::of({i64{1} << 62})),
      std::overflow_error);
}

TEST_CASE("repeated_add examples") {
  CHECK(repeated_add(0, IntSet::of({3, 5})) == IntSet({0}));
  const IntSet a = IntSet::of({0, 1, 3});
  CHECK(oracle::naive_repeated_add(2, a) == IntSet({0, 1, 2, 3, 4, 6}));
  CHECK(repeated_add(2, a) == IntSet({0, 1, 2, 3, 4, 6}));
  CHECK(oracle::naive_repeated_add(3, IntSet::of({0, 1})) ==
        IntSet({0, 1, 2, 3}));
  CHECK(repeated_add(3, IntSet::of({0, 1})) == IntSet({0, 1, 2, 3}));
  CHECK(repeated_add(1, a) == a);
  CHECK_THROWS_AS(repeated_add(-1, a), std::invalid_argument);
}

TEST_CASE("dilate_sum examples") {
  CHECK(oracle::naive_dilate_sum(DilateVector::of({1, 3}), IntSet::of({1, 2})) ==
        IntSet({4, 5, 7, 8}));
  CHECK(dilate_sum(DilateVector::of({1, 3}), IntSet::of({1, 2})) ==
        IntSet({4, 5, 7, 8}));
  // oracle value: 9 appears in no representation 2a + 3b with a, b in {0,1,2}
  const IntSet two_three =
      oracle::naive_dilate_sum(DilateVector::of({2, 3}), IntSet::of({0, 1, 2}));
  CHECK(two_three == IntSet({0, 2, 3, 4, 5, 6, 7, 8, 10}));
  CHECK(dilate_sum(DilateVector::of({2, 3}), IntSet::of({0, 1, 2})) ==
        two_three);
  const IntSet a = IntSet::of({-3, 0, 11});
  CHECK(dilate_sum(DilateVector::of({1}), a) == a);
}

TEST_CASE("dilate_sum is fold-order independent") {
  const IntSet a = IntSet::of({0, 2, 3, 7});
  const std::vector<std::vector<i64>> perms = {
      {1, -2, 3}, {3, 1, -2}, {-2, 3, 1}, {3, -2, 1}};
  const IntSet reference = dilate_sum(DilateVector::of({1, -2, 3}), a);
  for (const auto& p : perms) {
    CHECK(dilate_sum(DilateVector(p), a) == reference);
  }
}

TEST_CASE("normalize") {
  const auto [set1, map1] = normalize(IntSet::of({6, 10, 14}));
  CHECK(set1 == IntSet({0, 1, 2}));
  CHECK(map1 == AffineMap{6, 4});
  CHECK(map1.apply(set1) == IntSet({6, 10, 14}));

  const auto [set2, map2] = normalize(IntSet::of({0, 1}));
  CHECK(set2 == IntSet({0, 1}));
  CHECK(map2 == AffineMap{0, 1});

  const auto [set3, map3] = normalize(IntSet::of({9}));
  CHECK(set3 == IntSet({0}));
  CHECK(map3 == AffineMap{9, 1});

  // idempotent
  const auto again = normalize(set1);
  CHECK(again.set == set1);
  CHECK(again.map == AffineMap{0, 1});
}

TEST_CASE("gcd_reduce") {
  const auto [g1, v1] = gcd_reduce(DilateVector::of({4, 6}));
  CHECK(g1 == 2);
  CHECK(v1 == DilateVector::of({2, 3}));
  const auto [g2, v2] = gcd_reduce(DilateVector::of({1, 3}));
  CHECK(g2 == 1);
  CHECK(v2 == DilateVector::of({1, 3}));
  const auto [g3, v3] = gcd_reduce(DilateVector::of({-6, 9, 15}));
  CHECK(g3 == 3);
  CHECK(v3 == DilateVector::of({-2, 3, 5}));
}

TEST_CASE("DilateVector derived quantities") {
  CHECK_THROWS_AS(DilateVector::of({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(DilateVector(std::vector<i64>{}), std::invalid_argument);
  const DilateVector v = DilateVector::of({2, 3});
  CHECK(v.gcd() == 1);
  CHECK(v.l1_norm() == 5);
  CHECK(v.linf_norm() == 3);
  CHECK(v.sum() == 5);
  CHECK(v.tau(0) == 3);
  CHECK(v.tau(1) == 2);
  CHECK(v.removed(0) == DilateVector::of({3}));

  const DilateVector w = DilateVector::of({-4, 6, 10});
  CHECK(w.gcd() == 2);
  CHECK(w.l1_norm() == 20);
  CHECK(w.sum() == 12);
  for (std::size_t i = 0; i < w.k(); ++i) {
    for (std::size_t j = 0; j < w.k(); ++j) {
      if (i != j) CHECK(w.coeff(j) % w.tau(i) == 0);
    }
  }
  CHECK_THROWS_AS(DilateVector::of({5}).tau(0), std::domain_error);
}

TEST_CASE("oracle equivalence: exhaustive pairs in a small window") {
  std::vector<IntSet> sets;
  for_each_subset(6, 1, 6, [&](const IntSet& s) { sets.push_back(s); });
  for (const IntSet& a : sets) {
    for (const IntSet& b : sets) {
      const IntSet expected = oracle::naive_sumset(a, b);
      REQUIRE(sumset(a, b, kForceBitset) == expected);
      REQUIRE(sumset(a, b, kForceMerge) == expected);
    }
  }
}

TEST_CASE("oracle equivalence: random instances across the 64-bit window") {
  Rng rng(20260810);
  for (int iter = 0; iter < 2000; ++iter) {
    const i64 window = 2 + static_cast<i64>(rng.next_below(63));
    const int size_a =
        1 + static_cast<int>(rng.next_below(std::min<i64>(8, window)));
    const int size_b =
        1 + static_cast<int>(rng.next_below(std::min<i64>(8, window)));
    const i64 shift_a = static_cast<i64>(rng.next_below(200)) - 100;
    const i64 shift_b = static_cast<i64>(rng.next_below(200)) - 100;
    const IntSet a = random_subset(rng, size_a, window).translated(shift_a);
    const IntSet b = random_subset(rng, size_b, window).translated(shift_b);
    const IntSet expected = oracle::naive_sumset(a, b);
    REQUIRE(sumset(a, b, kForceBitset) == expected);
    REQUIRE(sumset(a, b, kForceMerge) == expected);
  }
}

TEST_CASE("oracle equivalence: dilate_sum and repeated_add") {
  Rng rng(7);
  const auto vectors = coprime_vectors(1, 3, 5);
  for (int iter = 0; iter < 300; ++iter) {
    const int size = 1 + static_cast<int>(rng.next_below(6));
    const IntSet a = random_subset(rng, size, 24);
    const DilateVector& v =
        vectors[static_cast<std::size_t>(rng.next_below(vectors.size()))];
    const IntSet expected = oracle::naive_dilate_sum(v, a);
    REQUIRE(dilate_sum(v, a, kForceBitset) == expected);
    REQUIRE(dilate_sum(v, a, kForceMerge) == expected);
    const i64 h = static_cast<i64>(rng.next_below(4));
    REQUIRE(repeated_add(h, a) == oracle::naive_repeated_add(h, a));
  }
}

TEST_CASE("translation, dilation, and gcd covariance") {
  Rng rng(11);
  const auto vectors = coprime_vectors(1, 3, 6);
  for (int iter = 0; iter < 200; ++iter) {
    const IntSet a =
        random_subset(rng, 2 + static_cast<int>(rng.next_below(5)), 20);
    const DilateVector& v =
        vectors[static_cast<std::size_t>(rng.next_below(vectors.size()))];
    const i64 t = static_cast<i64>(rng.next_below(21)) - 10;
    const IntSet base = dilate_sum(v, a);

    CHECK(dilate_sum(v, a.translated(t)) == base.translated(v.sum() * t));

    for (i64 c : {-3, -1, 2, 5}) {
      CHECK(dilate_sum(v, dilate(a, c)).size() == base.size());
    }

    std::vector<i64> doubled;
    for (i64 c : v.coeffs()) doubled.push_back(2 * c);
    CHECK(dilate_sum(DilateVector(doubled), a).size() == base.size());
  }
}

TEST_CASE("sumset size bounds and AP equality characterization") {
  // Exhaustive over all |A|,|B| <= 5 within window 16 (47M pairs), done on
  // raw bitmasks so the full grid stays fast and independent of the library.
  std::vector<std::uint32_t> masks;
  std::vector<int> sizes;
  std::vector<bool> ap;  // is an AP (sizes < 3 count as APs)
  std::vector<int> diff;
  for (std::uint32_t m = 1; m < (1u << 16); ++m) {
    const int pc = std::popcount(m);
    if (pc > 5) continue;
    masks.push_back(m);
    sizes.push_back(pc);
    std::vector<int> bits;
    for (int i = 0; i < 16; ++i) {
      if (m & (1u << i)) bits.push_back(i);
    }
    bool is_progression = true;
    for (std::size_t i = 2; i < bits.size(); ++i) {
      if (bits[i] - bits[i - 1] != bits[1] - bits[0]) is_progression = false;
    }
    ap.push_back(is_progression);
    diff.push_back(bits.size() >= 2 ? bits[1] - bits[0] : 0);
  }
  REQUIRE(masks.size() == 6884);

  Rng spot(2);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    for (std::size_t j = 0; j < masks.size(); ++j) {
      std::uint32_t sum = 0;
      std::uint32_t rest = masks[i];
      while (rest != 0) {
        sum |= masks[j] << std::countr_zero(rest);
        rest &= rest - 1;
      }
      const int n = std::popcount(sum);
      REQUIRE(n >= sizes[i] + sizes[j] - 1);
      REQUIRE(n <= sizes[i] * sizes[j]);
      const bool tight = n == sizes[i] + sizes[j] - 1;
      const bool ap_same_diff =
          sizes[i] == 1 || sizes[j] == 1 ||
          (ap[i] && ap[j] && diff[i] == diff[j]);
      REQUIRE(tight == ap_same_diff);
    }
    // tie a sample back to the library path
    if (spot.next_below(500) == 0) {
      std::vector<i64> ea, eb;
      for (int b = 0; b < 16; ++b) {
        if (masks[i] & (1u << b)) ea.push_back(b);
      }
      const std::uint32_t other =
          masks[static_cast<std::size_t>(spot.next_below(masks.size()))];
      for (int b = 0; b < 16; ++b) {
        if (other & (1u << b)) eb.push_back(b);
      }
      std::uint32_t sum = 0;
      for (i64 x : ea) sum |= other << x;
      REQUIRE(sumset(IntSet(ea), IntSet(eb)).size() ==
              static_cast<std::size_t>(std::popcount(sum)));
    }
  }
}

TEST_CASE("repeated_add dominates dilate") {
  std::vector<IntSet> sets;
  for_each_subset(7, 1, 4, [&](const IntSet& s) { sets.push_back(s); });
  for (const IntSet& a : sets) {
    for (i64 h = 1; h <= 4; ++h) {
      const IntSet added = repeated_add(h, a);
      const IntSet scaled = dilate(a, h);
      for (i64 x : scaled) REQUIRE(added.contains(x));
      const bool equal = added == scaled;
      REQUIRE(equal == (a.size() == 1 || h == 1));
    }
  }
}

TEST_CASE("text round trips and error messages") {
  CHECK(parse_int_set("[0,1,3,4]") == IntSet({0, 1, 3, 4}));
  CHECK(parse_int_set(" [ -4 , 2 ]") == IntSet({-4, 2}));
  CHECK(parse_int_set("[]").empty());
  CHECK(to_text(IntSet::of({-4, 2})) == "[-4,2]");
  CHECK(parse_dilate_vector("( 1 , -3 )") == DilateVector::of({1, -3}));
  CHECK(to_text(DilateVector::of({1, -3})) == "(1,-3)");
  CHECK(parse_rational("3/6") == rat(1, 2));
  CHECK(parse_rational("7") == rat(7));

  CHECK_THROWS_WITH_AS(parse_int_set("0,1"), doctest::Contains("set literal"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_int_set("[1,]"), doctest::Contains("set literal"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_dilate_vector("()"),
                       doctest::Contains("dilate vector"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_rational("1/0"), doctest::Contains("rational"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_int_set("[99999999999999999999]"),
                  std::invalid_argument);
}
