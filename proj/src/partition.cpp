#include "dilatelab/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace dilatelab {

namespace {

i64 floor_mod(i64 a, i64 m) {
  const i64 r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

IntSet ResiduePartition::quotient(i64 residue) const {
  const auto it = fibers.find(residue);
  if (it == fibers.end()) {
    throw std::invalid_argument("ResiduePartition::quotient: empty fiber");
  }
  std::vector<i64> v;
  v.reserve(it->second.size());
  for (i64 a : it->second) v.push_back((a - residue) / modulus);
  return IntSet(std::move(v));
}

std::size_t ResiduePartition::total_elements() const {
  std::size_t n = 0;
  for (const auto& [r, fiber] : fibers) n += fiber.size();
  return n;
}

ResiduePartition residue_partition(const IntSet& a, i64 tau) {
  if (a.empty()) {
    throw std::invalid_argument("residue_partition: empty set");
  }
  if (tau < 1) {
    throw std::invalid_argument("residue_partition: modulus must be >= 1");
  }
  std::map<i64, std::vector<i64>> buckets;
  for (i64 x : a) buckets[floor_mod(x, tau)].push_back(x);
  ResiduePartition p;
  p.modulus = tau;
  for (auto& [r, elems] : buckets) {
    p.fibers.emplace(r, IntSet(std::move(elems)));
  }
  return p;
}

FiberDisjointness check_fiber_disjointness(const DilateVector& v,
                                           const ResiduePartition& partition,
                                           const OpConfig& cfg) {
  if (gcd_i64(partition.modulus, v.sum()) != 1) {
    return FiberDisjointness::kPreconditionViolated;
  }
  // Pairwise disjoint iff the union of the fiber dilate sums is as large as
  // the sum of their sizes.
  std::vector<i64> all;
  std::size_t total = 0;
  for (const auto& [r, fiber] : partition.fibers) {
    const IntSet s = dilate_sum(v, fiber, cfg);
    total += s.size();
    all.insert(all.end(), s.begin(), s.end());
  }
  const IntSet merged = IntSet::from_values(std::move(all));
  return merged.size() == total ? FiberDisjointness::kDisjoint
                                : FiberDisjointness::kOverlapping;
}

nlohmann::json to_json(const DichotomyReport& r) {
  nlohmann::json j{
      {"growth_holds", r.growth_holds},
      {"growth_lhs", rat_to_json(r.growth_lhs)},
      {"growth_rhs", rat_to_json(r.growth_rhs)},
      {"sparse_holds", r.sparse_holds},
      {"delta", rat_to_json(r.delta)},
      {"n", r.n},
      {"taus", r.taus},
  };
  if (r.sparse_witness) {
    const char* kind = nullptr;
    switch (r.sparse_witness->kind) {
      case DichotomyReport::SparseWitness::Kind::kLowInterval:
        kind = "low_interval";
        break;
      case DichotomyReport::SparseWitness::Kind::kHighInterval:
        kind = "high_interval";
        break;
      case DichotomyReport::SparseWitness::Kind::kEmptyFiber:
        kind = "empty_fiber";
        break;
    }
    j["sparse_witness"] = nlohmann::json{{"i", r.sparse_witness->index},
                                         {"residue", r.sparse_witness->residue},
                                         {"containment", kind}};
  }
  return j;
}

DichotomyReport check_dichotomy(const DilateVector& v, const IntSet& a,
                                const Rat& delta, const OpConfig& cfg) {
  if (v.k() < 2) {
    throw std::invalid_argument("check_dichotomy: needs k >= 2");
  }
  if (!v.is_coprime()) {
    throw std::invalid_argument("check_dichotomy: coefficients not coprime");
  }
  if (a.empty()) {
    throw std::invalid_argument("check_dichotomy: empty set");
  }
  if (!(delta > 0)) {
    throw std::invalid_argument("check_dichotomy: delta must be positive");
  }

  // Work in the frame A <= {1, ..., n} with 1 in A.
  const IntSet shifted = a.translated(1 - a.min());
  const i64 n = shifted.max();
  const std::size_t k = v.k();

  DichotomyReport report;
  report.delta = delta;
  report.n = n;
  report.taus = v.taus();

  // Alternative I, exact.
  report.growth_lhs = rat(static_cast<i64>(dilate_sum(v, shifted, cfg).size()));
  Rat weighted_sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const i64 si =
        static_cast<i64>(dilate_sum(v.removed(i), shifted, cfg).size());
    weighted_sum += rat(report.taus[i]) * rat(si);
  }
  report.growth_rhs = weighted_sum / rat(static_cast<i64>(k) - 1) -
                      2 * delta * rat(n) - rat(report.taus[0]);
  report.growth_holds = report.growth_lhs >= report.growth_rhs;

  // Alternative II, exact interval endpoints.
  for (std::size_t i = 0; i < k && !report.sparse_holds; ++i) {
    const i64 tau = report.taus[i];
    const i64 abs_ci = v.coeff(i) < 0 ? -v.coeff(i) : v.coeff(i);
    const Rat low_end = (1 - delta / rat(abs_ci)) * rat(n);
    const Rat high_start = delta * rat(n) / rat(abs_ci);
    const ResiduePartition part = residue_partition(shifted, tau);
    for (i64 r = 0; r < tau; ++r) {
      const auto it = part.fibers.find(r);
      if (it == part.fibers.end()) {
        report.sparse_holds = true;
        report.sparse_witness = DichotomyReport::SparseWitness{
            i, r, DichotomyReport::SparseWitness::Kind::kEmptyFiber};
        break;
      }
      const IntSet& fiber = it->second;
      if (rat(fiber.max()) <= low_end) {
        report.sparse_holds = true;
        report.sparse_witness = DichotomyReport::SparseWitness{
            i, r, DichotomyReport::SparseWitness::Kind::kLowInterval};
        break;
      }
      if (rat(fiber.min()) >= high_start) {
        report.sparse_holds = true;
        report.sparse_witness = DichotomyReport::SparseWitness{
            i, r, DichotomyReport::SparseWitness::Kind::kHighInterval};
        break;
      }
    }
  }
  return report;
}

InequalityReport check_fiber_inequality(const DilateVector& v, const IntSet& a,
                                        const OpConfig& cfg) {
  if (v.k() < 2) {
    throw std::invalid_argument("check_fiber_inequality: needs k >= 2");
  }
  if (v.sum() != 0) {
    throw std::invalid_argument(
        "check_fiber_inequality: coefficients must sum to zero");
  }
  if (!v.is_coprime()) {
    throw std::invalid_argument(
        "check_fiber_inequality: coefficients not coprime");
  }
  if (a.empty()) {
    throw std::invalid_argument("check_fiber_inequality: empty set");
  }

  Rat sum = 0;
  for (std::size_t i = 0; i < v.k(); ++i) {
    const DilateVector reduced = v.removed(i);
    // Zero coefficient sum forces every tau_i to 1.
    if (reduced.gcd() != 1) {
      throw std::logic_error(
          "check_fiber_inequality: reduced vector unexpectedly not coprime");
    }
    sum += rat(static_cast<i64>(dilate_sum(reduced, a, cfg).size()));
  }
  const Rat bound = sum / rat(static_cast<i64>(v.k()) - 1) - 5;
  const Rat size = rat(static_cast<i64>(dilate_sum(v, a, cfg).size()));
  return InequalityReport::make("fiber_inequality", bound, size);
}

}  // namespace dilatelab
