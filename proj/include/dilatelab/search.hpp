#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dilatelab/setcore.hpp"

namespace dilatelab {

/// Representative of the affine-equivalence class of a nonempty set:
/// translated to min 0, divided by the gcd of its elements, and replaced by
/// its reflection when that is lexicographically smaller.
[[nodiscard]] IntSet canonical_form(const IntSet& a);

/// Visits exactly one canonical representative for every affine class of
/// m-subsets of [0, window), in lexicographic order. Requires 2 <= m <= window.
void for_each_canonical(int m, i64 window,
                        const std::function<void(const IntSet&)>& fn);

[[nodiscard]] std::vector<IntSet> canonical_sets(int m, i64 window);

/// Default search window for size class m.
[[nodiscard]] inline i64 default_window(int m) {
  return std::max<i64>(4 * static_cast<i64>(m), 16);
}

struct SearchOptions {
  int jobs = 1;
  bool prune = true;               // branch-and-bound on |S(prefix)| + (m - L)
  bool collect_minimizers = true;
  i64 stabilization_stride = 4;
  /// When nonempty, per-prefix results are persisted here and a matching
  /// file is resumed instead of recomputed.
  std::string checkpoint_path;
};

struct SearchResult {
  DilateVector lambda;
  int m = 0;
  i64 window = 0;
  i64 min_size = 0;
  std::vector<IntSet> minimizers;  // canonical forms, lexicographic
  bool stabilized = false;
};

/// Exact minimum of |S_v(A)| over all m-element subsets of [0, window),
/// searched over canonical representatives with branch-and-bound pruning,
/// together with every canonical minimizer. stabilized records whether a
/// min-only rerun at window + stride found the same minimum.
[[nodiscard]] SearchResult minimal_dilate_sum(const DilateVector& v, int m,
                                              i64 window,
                                              const SearchOptions& opts = {});

/// Grows the window by the stabilization stride until the minimum stops
/// moving (or max_growth_steps is exhausted; the result then carries
/// stabilized = false).
[[nodiscard]] SearchResult search_stabilized(const DilateVector& v, int m,
                                             i64 initial_window,
                                             const SearchOptions& opts = {},
                                             int max_growth_steps = 8);

/// Increments of |S_v({a_1..a_j})| as the elements are added in increasing
/// order: deltas[j-2] = |B_j| - |B_{j-1}| for j = 2..n, with |B_1| = 1.
struct GrowthTrace {
  std::vector<i64> elements;
  std::vector<i64> deltas;

  [[nodiscard]] i64 final_size() const;
};

/// Requires |A| >= 2. Computed incrementally: each step inserts only the
/// sums that involve the new element.
[[nodiscard]] GrowthTrace growth_trace(const DilateVector& v, const IntSet& a,
                                       const OpConfig& cfg = {});

enum class GrowthStatus {
  kHolds,
  kBoundaryUndetermined,  // a trailing delta of 3 with no next step to test
  kViolated,
};

struct GrowthDichotomy {
  GrowthStatus status = GrowthStatus::kHolds;
  int issue_at = 0;  // 1-based step index for a boundary or violation
  GrowthTrace trace;
};

/// The two-step growth pattern for coefficients (1,3): every step k >= 5
/// either gains at least 4, or gains exactly 3 with the next step gaining at
/// least 5. Requires |A| >= 6. A violation indicates an implementation bug.
[[nodiscard]] GrowthDichotomy check_growth_dichotomy(const IntSet& a,
                                                     const OpConfig& cfg = {});

struct LowerBoundRow {
  int m = 0;
  i64 window = 0;
  i64 min_size = 0;
  i64 defect = 0;  // ||v/g||_1 * m - min_size
  bool stabilized = false;
  std::size_t n_minimizers = 0;
};

/// Stabilized minima for m in [m_lo, m_hi] with the additive defect against
/// the l1-norm main term. window_override = 0 uses the default window policy.
[[nodiscard]] std::vector<LowerBoundRow> lower_bound_table(
    const DilateVector& v, int m_lo, int m_hi, const SearchOptions& opts = {},
    i64 window_override = 0);

}  // namespace dilatelab
