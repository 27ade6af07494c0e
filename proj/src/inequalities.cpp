#include "dilatelab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace dilatelab {

namespace {

bool is_subset(const IntSet& inner, const IntSet& outer) {
  auto it = outer.begin();
  for (i64 x : inner) {
    it = std::lower_bound(it, outer.end(), x);
    if (it == outer.end() || *it != x) return false;
  }
  return true;
}

i64 isize(const IntSet& s) { return static_cast<i64>(s.size()); }

}  // namespace

Rat doubling_min(const IntSet& a, const OpConfig& cfg) {
  const i64 plus = isize(sumset(a, a, cfg));
  const i64 minus = isize(difference_set(a, a, cfg));
  return rat(std::min(plus, minus), isize(a));
}

InequalityReport check_ruzsa_triangle(const IntSet& a, const IntSet& b,
                                      const IntSet& c, const OpConfig& cfg) {
  const Rat lhs = rat(isize(sumset(a, c, cfg))) * rat(isize(b));
  const Rat rhs = rat(isize(sumset(a, b, cfg))) * rat(isize(sumset(b, c, cfg)));
  return InequalityReport::make("ruzsa_triangle", lhs, rhs);
}

InequalityReport check_corollary_sqrt(const IntSet& a, const IntSet& b,
                                      const OpConfig& cfg) {
  const Rat lhs = rat(isize(sumset(a, a, cfg))) * rat(isize(b));
  const Rat ab = rat(isize(sumset(a, b, cfg)));
  return InequalityReport::make("corollary_sqrt", lhs, ab * ab);
}

InequalityReport check_plunnecke(const IntSet& a, i64 h1, i64 h2,
                                 const OpConfig& cfg) {
  if (h1 < 0 || h2 < 0) {
    throw std::invalid_argument("check_plunnecke: negative multiplicity");
  }
  const IntSet diff =
      sumset(repeated_add(h1, a, cfg),
             dilate(repeated_add(h2, a, cfg), -1), cfg);
  const Rat k = doubling_min(a, cfg);
  const Rat rhs =
      rat_pow(k, static_cast<unsigned long>(h1 + h2)) * rat(isize(a));
  nlohmann::json witness{{"K", rat_str(k)}, {"h1", h1}, {"h2", h2}};
  return InequalityReport::make("plunnecke", rat(isize(diff)), rhs,
                                std::move(witness));
}

CoverResult ruzsa_cover(const IntSet& a, const IntSet& b, const OpConfig& cfg) {
  const IntSet diff = difference_set(a, a, cfg);
  // A+x meets A+y iff x-y lands in A-A, so the greedy test is a membership
  // check against the difference set.
  std::vector<i64> picked;
  for (i64 x : b) {
    bool disjoint = true;
    for (i64 y : picked) {
      if (diff.contains(x - y)) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) picked.push_back(x);
  }
  IntSet translates(std::move(picked));

  const bool covered = is_subset(b, sumset(diff, translates, cfg));
  const i64 cap = isize(sumset(a, b, cfg)) / isize(a);

  InequalityReport report;
  report.name = "ruzsa_cover_cap";
  report.lhs = rat(isize(translates));
  report.rhs = rat(cap);
  report.holds = covered && report.lhs <= report.rhs;
  report.slack = report.rhs - report.lhs;
  report.witness = nlohmann::json{{"translates", to_json(translates)},
                                  {"covered", covered}};
  return {std::move(translates), std::move(report)};
}

std::vector<std::pair<i64, i64>> monotone_pairing(const IntSet& a,
                                                  const IntSet& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("monotone_pairing: size mismatch");
  }
  std::vector<std::pair<i64, i64>> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i], b[i]);
  return out;
}

bool is_freiman_isomorphism(std::span<const std::pair<i64, i64>> pairing,
                            int r, std::uint64_t max_tuples) {
  if (r < 2) {
    throw std::invalid_argument("is_freiman_isomorphism: order must be >= 2");
  }
  if (pairing.empty()) {
    throw std::invalid_argument("is_freiman_isomorphism: empty pairing");
  }
  const std::size_t n = pairing.size();
  {
    std::vector<i64> lhs, rhs;
    for (auto [x, y] : pairing) {
      lhs.push_back(x);
      rhs.push_back(y);
    }
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    if (std::adjacent_find(lhs.begin(), lhs.end()) != lhs.end() ||
        std::adjacent_find(rhs.begin(), rhs.end()) != rhs.end()) {
      throw std::invalid_argument("is_freiman_isomorphism: not a bijection");
    }
  }
  // C(n+r-1, r) multisets; refuse instances beyond the work cap.
  std::uint64_t tuples = 1;
  for (int i = 1; i <= r; ++i) {
    tuples = tuples * (n - 1 + static_cast<std::uint64_t>(i)) /
             static_cast<std::uint64_t>(i);
    if (tuples > max_tuples) {
      throw std::invalid_argument(
          "is_freiman_isomorphism: instance exceeds the multiset cap");
    }
  }

  // Equal sums must pair up on both sides: the multiset-sum maps
  // left->right and right->left must both be functions.
  std::unordered_map<i64, i64> fwd, bwd;
  std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
  for (;;) {
    i64 sum_left = 0;
    i64 sum_right = 0;
    for (std::size_t i : idx) {
      sum_left = checked_add(sum_left, pairing[i].first);
      sum_right = checked_add(sum_right, pairing[i].second);
    }
    if (auto [it, inserted] = fwd.try_emplace(sum_left, sum_right);
        !inserted && it->second != sum_right) {
      return false;
    }
    if (auto [it, inserted] = bwd.try_emplace(sum_right, sum_left);
        !inserted && it->second != sum_left) {
      return false;
    }
    // next nondecreasing index tuple
    int pos = r - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    const std::size_t next = idx[static_cast<std::size_t>(pos)] + 1;
    for (std::size_t i = static_cast<std::size_t>(pos);
         i < static_cast<std::size_t>(r); ++i) {
      idx[i] = next;
    }
  }
  return true;
}

nlohmann::json to_json(const DigitDecomposition& d) {
  return nlohmann::json{{"r", d.max_bit}, {"digits", d.bits}};
}

namespace {

DigitDecomposition decompose_digits(const DilateVector& v) {
  int max_bit = 0;
  for (i64 c : v.coeffs()) {
    int b = 0;
    while ((c >> (b + 1)) != 0) ++b;
    max_bit = std::max(max_bit, b);
  }
  DigitDecomposition d;
  d.max_bit = max_bit;
  for (i64 c : v.coeffs()) {
    std::vector<int> row(static_cast<std::size_t>(max_bit) + 1, 0);
    for (int j = 0; j <= max_bit; ++j) {
      row[static_cast<std::size_t>(j)] = static_cast<int>((c >> j) & 1);
    }
    d.bits.push_back(std::move(row));
  }
  return d;
}

}  // namespace

InequalityReport check_digit_cover(const DilateVector& v, const IntSet& a,
                                   const OpConfig& cfg) {
  for (i64 c : v.coeffs()) {
    if (c <= 0) {
      throw std::invalid_argument(
          "check_digit_cover: coefficients must be positive");
    }
  }
  if (!a.contains(0)) {
    throw std::invalid_argument("check_digit_cover: 0 must be in the set");
  }
  const DigitDecomposition d = decompose_digits(v);
  IntSet rhs_set = IntSet::of({0});
  for (int j = 0; j <= d.max_bit; ++j) {
    i64 h = 0;
    for (const auto& row : d.bits) h += row[static_cast<std::size_t>(j)];
    if (h == 0) continue;
    const IntSet term =
        repeated_add(h, dilate(a, i64{1} << j), cfg);
    rhs_set = sumset(rhs_set, term, cfg);
  }
  const IntSet lhs_set = dilate_sum(v, a, cfg);

  InequalityReport report;
  report.name = "digit_cover";
  report.lhs = rat(isize(lhs_set));
  report.rhs = rat(isize(rhs_set));
  report.holds = is_subset(lhs_set, rhs_set);
  report.slack = report.rhs - report.lhs;
  report.witness = to_json(d);
  return report;
}

std::vector<InequalityReport> check_digit_cover_parts(const DilateVector& v,
                                                      const IntSet& a,
                                                      const OpConfig& cfg) {
  std::vector<i64> pos, neg;
  for (i64 c : v.coeffs()) {
    (c > 0 ? pos : neg).push_back(c > 0 ? c : -c);
  }
  std::vector<InequalityReport> out;
  if (!pos.empty()) {
    out.push_back(check_digit_cover(DilateVector(std::move(pos)), a, cfg));
  }
  if (!neg.empty()) {
    out.push_back(check_digit_cover(DilateVector(std::move(neg)), a, cfg));
  }
  return out;
}

DoublingExponent doubling_exponent(const DilateVector& v, const IntSet& a,
                                   const OpConfig& cfg) {
  DoublingExponent e;
  e.doubling = doubling_min(a, cfg);
  e.ratio = rat(isize(dilate_sum(v, a, cfg)), isize(a));
  e.p = 7.0;
  for (i64 c : v.coeffs()) {
    e.p += 12.0 * std::log2(1.0 + static_cast<double>(c < 0 ? -c : c));
  }
  if (e.doubling > 1) {
    e.p_emp = std::log(rat_double(e.ratio)) / std::log(rat_double(e.doubling));
  } else {
    e.p_emp = std::numeric_limits<double>::quiet_NaN();
  }
  return e;
}

InequalityReport check_gentriag_bound(const DilateVector& v, const IntSet& a,
                                      const OpConfig& cfg) {
  const DoublingExponent e = doubling_exponent(v, a, cfg);

  InequalityReport report;
  report.name = "gentriag_bound";
  report.lhs = e.ratio;
  nlohmann::json witness{{"K", rat_str(e.doubling)}, {"p", e.p}};
  if (e.doubling == 1) {
    report.rhs = rat(1);
    report.holds = report.lhs <= report.rhs;
  } else {
    const long double kd =
        static_cast<long double>(e.doubling.get_num().get_d()) /
        static_cast<long double>(e.doubling.get_den().get_d());
    long double bound = std::exp2l(static_cast<long double>(e.p) *
                                   std::log2l(kd));
    if (!std::isfinite(static_cast<double>(bound))) {
      bound = std::numeric_limits<double>::max();
    }
    report.rhs = Rat(static_cast<double>(bound));
    report.holds = rat_double(report.lhs) <=
                   static_cast<double>(bound) - kGentriagTolerance;
    witness["p_emp"] = e.p_emp;
  }
  report.slack = report.rhs - report.lhs;
  report.witness = std::move(witness);
  return report;
}

InequalityReport check_power_dilate(const IntSet& a, i64 lambda, i64 k,
                                    const OpConfig& cfg) {
  if (k < 1) {
    throw std::invalid_argument("check_power_dilate: k must be positive");
  }
  i64 power = 1;
  for (i64 i = 0; i < k; ++i) power = checked_mul(power, lambda);
  const Rat lhs = rat(isize(sumset(a, dilate(a, power), cfg)), isize(a));
  const Rat base = rat(isize(sumset(a, a, cfg)), isize(a));
  const i64 abs_lambda = lambda < 0 ? -lambda : lambda;
  const unsigned long exp =
      static_cast<unsigned long>(checked_mul(k, abs_lambda + 1));
  nlohmann::json witness{{"lambda", lambda}, {"k", k}, {"lambda_pow_k", power}};
  return InequalityReport::make("power_dilate", lhs, rat_pow(base, exp),
                                std::move(witness));
}

SurveySummary exponent_survey(std::span<const IntSet> corpus,
                              const DilateVector& v, const OpConfig& cfg,
                              int jobs) {
  SurveySummary summary;
  summary.entries.resize(corpus.size());

  auto evaluate = [&](std::size_t i) {
    const DoublingExponent e = doubling_exponent(v, corpus[i], cfg);
    if (!(e.doubling > 1)) {
      throw std::invalid_argument(
          "exponent_survey: corpus set has doubling constant 1");
    }
    summary.entries[i] = SurveyEntry{corpus[i], isize(corpus[i]), e.doubling,
                                     e.ratio, e.p_emp};
  };

  if (jobs <= 1 || corpus.size() < 2) {
    for (std::size_t i = 0; i < corpus.size(); ++i) evaluate(i);
  } else {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), corpus.size());
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < corpus.size(); i += workers) evaluate(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  // Reduce in corpus order so the summary is identical for any job count.
  double sum = 0.0;
  for (std::size_t i = 0; i < summary.entries.size(); ++i) {
    const double p = summary.entries[i].p_emp;
    sum += p;
    if (i == 0 || p > summary.max_p_emp) {
      summary.max_p_emp = p;
      summary.argmax_index = i;
    }
    if (p >= 3.0) summary.flagged.push_back(i);
  }
  if (!summary.entries.empty()) {
    summary.mean_p_emp = sum / static_cast<double>(summary.entries.size());
  }
  return summary;
}

}  // namespace dilatelab
