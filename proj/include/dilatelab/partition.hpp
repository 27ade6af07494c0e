#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dilatelab/report.hpp"
#include "dilatelab/setcore.hpp"

namespace dilatelab {

/// The split of A into residue classes mod tau. Only nonempty fibers are
/// stored; quotient(r) is the fiber divided out by the modulus,
/// {floor(a/tau) : a in the fiber}, which has the same dilate-sum size.
struct ResiduePartition {
  i64 modulus = 1;
  std::map<i64, IntSet> fibers;

  [[nodiscard]] IntSet quotient(i64 residue) const;
  [[nodiscard]] std::size_t total_elements() const;
};

/// Requires A nonempty and tau >= 1. Residues are the mathematical ones in
/// [0, tau), also for negative elements.
[[nodiscard]] ResiduePartition residue_partition(const IntSet& a, i64 tau);

enum class FiberDisjointness {
  kPreconditionViolated,  // gcd(tau, sum of coefficients) != 1; no claim made
  kDisjoint,
  kOverlapping,
};

/// Whether the dilate sums of distinct fibers are pairwise disjoint. The
/// claim only applies when gcd(tau, sum c_i) = 1; otherwise the precondition
/// violation is reported distinctly. kOverlapping under a valid precondition
/// signals an implementation bug, not a counterexample.
[[nodiscard]] FiberDisjointness check_fiber_disjointness(
    const DilateVector& v, const ResiduePartition& partition,
    const OpConfig& cfg = {});

/// Result of evaluating both alternatives of the residue dichotomy on one
/// instance. The guarantee under test is that at least one of them holds;
/// both sides of each alternative are kept for audit.
struct DichotomyReport {
  // alternative I: |S| >= (1/(k-1)) sum_i tau_i |S_i| - 2 delta n - tau_1
  bool growth_holds = false;
  Rat growth_lhs;  // |S|
  Rat growth_rhs;  // the bound

  // alternative II: some fiber of A mod tau_i avoids one end of [1, n]
  bool sparse_holds = false;
  struct SparseWitness {
    std::size_t index;   // i, 0-based
    i64 residue;         // r*
    enum class Kind { kLowInterval, kHighInterval, kEmptyFiber } kind;
  };
  std::optional<SparseWitness> sparse_witness;

  Rat delta;
  i64 n = 0;
  std::vector<i64> taus;

  [[nodiscard]] bool any_holds() const { return growth_holds || sparse_holds; }
};

[[nodiscard]] nlohmann::json to_json(const DichotomyReport& r);

/// Evaluates the dichotomy exactly. The set is first translated so its
/// minimum is 1 (both alternatives are translation-consistent in that
/// frame); delta is an exact rational and the interval endpoints are
/// compared without rounding. Requires k >= 2, coprime coefficients,
/// delta > 0.
[[nodiscard]] DichotomyReport check_dichotomy(const DilateVector& v,
                                              const IntSet& a, const Rat& delta,
                                              const OpConfig& cfg = {});

/// For coprime coefficients with zero sum: the bound
/// (1/(k-1)) sum_i |S_{v^i}(A)| - 5 <= |S_v(A)|, reported with the bound on
/// the lhs. Also asserts every reduced vector v^i is coprime.
[[nodiscard]] InequalityReport check_fiber_inequality(const DilateVector& v,
                                                      const IntSet& a,
                                                      const OpConfig& cfg = {});

}  // namespace dilatelab
