#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dilatelab/report.hpp"
#include "dilatelab/setcore.hpp"

namespace dilatelab {

/// min(|A+A|, |A-A|) / |A| — the strongest valid K for the two-sided
/// "either |A+A| <= K|A| or |A-A| <= K|A|" hypotheses.
[[nodiscard]] Rat doubling_min(const IntSet& a, const OpConfig& cfg = {});

/// |A+C|*|B| <= |A+B|*|B+C| (the triangle inequality, cross-multiplied to
/// stay in integers). holds must be true on every input.
[[nodiscard]] InequalityReport check_ruzsa_triangle(const IntSet& a,
                                                    const IntSet& b,
                                                    const IntSet& c,
                                                    const OpConfig& cfg = {});

/// |A+A|*|B| <= |A+B|^2, the squared form of |A+B| >= sqrt(|A+A||B|).
[[nodiscard]] InequalityReport check_corollary_sqrt(const IntSet& a,
                                                    const IntSet& b,
                                                    const OpConfig& cfg = {});

/// |h1*A - h2*A| <= K^(h1+h2) |A| for nonnegative repeated-addition
/// multiplicities, with K = doubling_min(A). Evaluated in exact rationals.
[[nodiscard]] InequalityReport check_plunnecke(const IntSet& a, i64 h1, i64 h2,
                                               const OpConfig& cfg = {});

struct CoverResult {
  IntSet translates;        // X, a maximal subset of B with disjoint A+x
  InequalityReport report;  // lhs = |X|, rhs = floor(|A+B|/|A|)
};

/// Greedy covering construction: picks x in ascending order of B, keeping x
/// whenever A+x is disjoint from all previously kept translates. Verifies
/// B is covered by (A-A)+X and that |X| meets the cardinality cap; holds
/// reflects both.
[[nodiscard]] CoverResult ruzsa_cover(const IntSet& a, const IntSet& b,
                                      const OpConfig& cfg = {});

inline constexpr std::uint64_t kDefaultFreimanTupleCap = 1365;  // C(15, 4)

/// Pairs the i-th smallest element of a with the i-th smallest of b.
/// Throws std::invalid_argument on size mismatch.
[[nodiscard]] std::vector<std::pair<i64, i64>> monotone_pairing(
    const IntSet& a, const IntSet& b);

/// True iff the bijection given by the pairing preserves equality of r-fold
/// sums in both directions. Compares multiset-sum fingerprints instead of
/// iterating the biconditional tuple by tuple; instances with more than
/// max_tuples multisets are rejected with std::invalid_argument.
[[nodiscard]] bool is_freiman_isomorphism(
    std::span<const std::pair<i64, i64>> pairing, int r,
    std::uint64_t max_tuples = kDefaultFreimanTupleCap);

struct DigitDecomposition {
  int max_bit = 0;                     // r
  std::vector<std::vector<int>> bits;  // k rows of r+1 binary digits
};
[[nodiscard]] nlohmann::json to_json(const DigitDecomposition& d);

/// For all-positive coefficients and 0 in A, verifies the binary-digit
/// inclusion: the dilate sum is contained in
/// sum_j (sum_i bit(i,j)) * (2^j * A). holds records the set inclusion;
/// lhs/rhs are the two sizes and the witness carries the digit matrix.
[[nodiscard]] InequalityReport check_digit_cover(const DilateVector& v,
                                                 const IntSet& a,
                                                 const OpConfig& cfg = {});

/// Mixed-sign coefficients split into the positive part and the negated
/// negative part; each part is checked separately.
[[nodiscard]] std::vector<InequalityReport> check_digit_cover_parts(
    const DilateVector& v, const IntSet& a, const OpConfig& cfg = {});

struct DoublingExponent {
  Rat doubling;   // K
  Rat ratio;      // |S(A)| / |A|
  double p;       // 7 + 12 sum_i log2(1 + |c_i|)
  double p_emp;   // log(ratio)/log(K); NaN when K == 1
};

[[nodiscard]] DoublingExponent doubling_exponent(const DilateVector& v,
                                                 const IntSet& a,
                                                 const OpConfig& cfg = {});

/// |S(A)|/|A| <= K^p with p = 7 + 12 sum log2(1+|c_i|). The only check that
/// needs floating point (p is irrational); the bound is decreased by 1e-9
/// before comparing so a holds verdict is conservative. K == 1 (singleton)
/// compares against exactly 1.
[[nodiscard]] InequalityReport check_gentriag_bound(const DilateVector& v,
                                                    const IntSet& a,
                                                    const OpConfig& cfg = {});

inline constexpr double kGentriagTolerance = 1e-9;

/// |A + lambda^k * A|/|A| <= (|A+A|/|A|)^(k(|lambda|+1)), exact rationals.
[[nodiscard]] InequalityReport check_power_dilate(const IntSet& a, i64 lambda,
                                                  i64 k,
                                                  const OpConfig& cfg = {});

struct SurveyEntry {
  IntSet set;
  i64 size;
  Rat doubling;
  Rat ratio;
  double p_emp;
};

struct SurveySummary {
  double max_p_emp = 0.0;
  double mean_p_emp = 0.0;
  std::size_t argmax_index = 0;
  std::vector<std::size_t> flagged;  // indices with p_emp >= 3
  std::vector<SurveyEntry> entries;  // corpus order
};

/// Evaluates p_emp over a corpus; every set must have K > 1 (singletons are
/// rejected). Entries keep corpus order and the reduction is deterministic
/// for any worker count.
[[nodiscard]] SurveySummary exponent_survey(std::span<const IntSet> corpus,
                                            const DilateVector& v,
                                            const OpConfig& cfg = {},
                                            int jobs = 1);

}  // namespace dilatelab
