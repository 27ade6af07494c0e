// dilate-lab: compute sums of dilates, verify the inequality suites on
// exhaustive or seeded random corpora, search for extremal sets, survey
// empirical doubling exponents, and print growth traces.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 soundness alarm (some
// verifier reported a violation).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dilatelab/corpus.hpp"
#include "dilatelab/inequalities.hpp"
#include "dilatelab/partition.hpp"
#include "dilatelab/report.hpp"
#include "dilatelab/search.hpp"
#include "dilatelab/setcore.hpp"
#include "dilatelab/text.hpp"

using namespace dilatelab;
using nlohmann::json;

namespace {

constexpr const char* kToolName = "dilate-lab";
constexpr const char* kVersion = "0.1.0";

struct OutputSpec {
  std::string path;            // empty = stdout
  std::string format = "json"; // json | csv
  bool canonical = false;      // omit volatile header fields
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json meta_block(const std::string& config_echo, const OutputSpec& out) {
  json meta{{"tool", kToolName}, {"version", kVersion}, {"config", config_echo}};
  if (!out.canonical) meta["wallclock"] = iso_timestamp();
  return meta;
}

std::string meta_csv_comments(const std::string& config_echo,
                              const OutputSpec& out) {
  std::string s;
  s += std::string("# tool=") + kToolName + " version=" + kVersion + "\n";
  s += "# config=" + config_echo + "\n";
  if (!out.canonical) s += "# wallclock=" + iso_timestamp() + "\n";
  return s;
}

void write_output(const OutputSpec& out, const std::string& payload) {
  if (out.path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open output file: " + out.path);
  }
  f << payload;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

OpConfig op_config_from_env() {
  OpConfig cfg;
  if (const char* raw = std::getenv("DILATE_LAB_BITSET_BUDGET")) {
    char* end = nullptr;
    const long long v = std::strtoll(raw, &end, 10);
    if (end == raw || *end != '\0' || v <= 0) {
      throw std::invalid_argument(
          "DILATE_LAB_BITSET_BUDGET must be a positive integer");
    }
    cfg.bitset_budget_bits = static_cast<i64>(v);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Sweep runner: index-addressed instances, optionally parallel, violations
// merged in instance order so reports are schedule-independent.
// ---------------------------------------------------------------------------

struct SweepOutcome {
  std::size_t instances = 0;
  std::vector<json> violations;
};

SweepOutcome run_sweep(std::size_t count, int jobs,
                       const std::function<std::optional<json>(std::size_t)>& check) {
  SweepOutcome outcome;
  outcome.instances = count;
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) {
      if (auto v = check(i)) outcome.violations.push_back(std::move(*v));
    }
    return outcome;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  std::vector<std::vector<std::pair<std::size_t, json>>> found(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) {
          if (auto v = check(i)) found[w].emplace_back(i, std::move(*v));
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<std::pair<std::size_t, json>> merged;
  for (auto& v : found) {
    merged.insert(merged.end(), std::make_move_iterator(v.begin()),
                  std::make_move_iterator(v.end()));
  }
  std::sort(merged.begin(), merged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [i, v] : merged) outcome.violations.push_back(std::move(v));
  return outcome;
}

json violation_entry(const char* kind, json detail) {
  return json{{"check", kind}, {"detail", std::move(detail)}};
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  bool exhaustive = false;
  i64 random_count = 0;
  std::uint64_t seed = 0;
  i64 window = 0;    // 0 = suite default
  int max_size = 0;  // 0 = suite default
  std::string lambda_text;
  int jobs = 1;
  OpConfig ops;
};

struct RandomDomain {
  i64 window;
  int max_size;
};

RandomDomain random_domain(const VerifyArgs& args, json& params) {
  RandomDomain d{args.window > 0 ? args.window : 50,
                 args.max_size > 0 ? args.max_size : 8};
  params = {{"window", d.window}, {"max_size", d.max_size}};
  return d;
}

int random_size(Rng& rng, int lo, const RandomDomain& d) {
  const int hi = std::max(lo, std::min<int>(d.max_size,
                                            static_cast<int>(d.window)));
  return lo + static_cast<int>(rng.next_below(
                  static_cast<std::uint64_t>(hi - lo + 1)));
}

std::vector<IntSet> subsets_in_window(i64 window, int min_size, int max_size) {
  std::vector<IntSet> sets;
  for_each_subset(window, min_size, max_size,
                  [&](const IntSet& s) { sets.push_back(s); });
  return sets;
}

std::vector<IntSet> random_sets(Rng& rng, i64 count, int min_size,
                                int max_size, i64 window) {
  std::vector<IntSet> sets;
  sets.reserve(static_cast<std::size_t>(count));
  for (i64 i = 0; i < count; ++i) {
    const int size = min_size + static_cast<int>(rng.next_below(
                         static_cast<std::uint64_t>(max_size - min_size + 1)));
    sets.push_back(random_subset(rng, size, window));
  }
  return sets;
}

std::vector<DilateVector> lambda_grid(const VerifyArgs& args, int k_min,
                                      int k_max, i64 max_l1,
                                      bool positive_only) {
  if (!args.lambda_text.empty()) {
    return {parse_dilate_vector(args.lambda_text)};
  }
  return coprime_vectors(k_min, k_max, max_l1, positive_only);
}

SweepOutcome verify_triangle(const VerifyArgs& args, json& params) {
  const i64 window = args.window > 0 ? args.window : 6;
  const int max_size = args.max_size > 0 ? args.max_size : static_cast<int>(window);
  params = {{"window", window}, {"max_size", max_size}};
  std::vector<IntSet> sets;
  std::vector<std::array<IntSet, 3>> random_triples;
  std::size_t count = 0;
  if (args.exhaustive) {
    sets = subsets_in_window(window, 1, max_size);
    count = sets.size() * sets.size() * sets.size();
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    for (i64 i = 0; i < args.random_count; ++i) {
      random_triples.push_back({random_subset(rng, random_size(rng, 1, d), d.window),
                                random_subset(rng, random_size(rng, 1, d), d.window),
                                random_subset(rng, random_size(rng, 1, d), d.window)});
    }
    count = random_triples.size();
  }
  return run_sweep(count, args.jobs, [&](std::size_t i) -> std::optional<json> {
    const IntSet *a, *b, *c;
    if (args.exhaustive) {
      const std::size_t n = sets.size();
      a = &sets[i / (n * n)];
      b = &sets[(i / n) % n];
      c = &sets[i % n];
    } else {
      a = &random_triples[i][0];
      b = &random_triples[i][1];
      c = &random_triples[i][2];
    }
    const auto report = check_ruzsa_triangle(*a, *b, *c, args.ops);
    if (report.holds) return std::nullopt;
    json detail = to_json(report);
    detail["A"] = to_json(*a);
    detail["B"] = to_json(*b);
    detail["C"] = to_json(*c);
    return violation_entry("ruzsa_triangle", std::move(detail));
  });
}

SweepOutcome verify_pair_suite(const VerifyArgs& args, json& params,
                               bool cover) {
  const i64 window = args.window > 0 ? args.window : 8;
  const int max_size = args.max_size > 0 ? args.max_size : static_cast<int>(window);
  params = {{"window", window}, {"max_size", max_size}};
  std::vector<IntSet> sets;
  std::vector<std::array<IntSet, 2>> random_pairs;
  std::size_t count = 0;
  if (args.exhaustive) {
    sets = subsets_in_window(window, 1, max_size);
    count = sets.size() * sets.size();
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    for (i64 i = 0; i < args.random_count; ++i) {
      random_pairs.push_back({random_subset(rng, random_size(rng, 1, d), d.window),
                              random_subset(rng, random_size(rng, 1, d), d.window)});
    }
    count = random_pairs.size();
  }
  return run_sweep(count, args.jobs, [&](std::size_t i) -> std::optional<json> {
    const IntSet *a, *b;
    if (args.exhaustive) {
      a = &sets[i / sets.size()];
      b = &sets[i % sets.size()];
    } else {
      a = &random_pairs[i][0];
      b = &random_pairs[i][1];
    }
    const InequalityReport report =
        cover ? ruzsa_cover(*a, *b, args.ops).report
              : check_corollary_sqrt(*a, *b, args.ops);
    if (report.holds) return std::nullopt;
    json detail = to_json(report);
    detail["A"] = to_json(*a);
    detail["B"] = to_json(*b);
    return violation_entry(cover ? "ruzsa_cover" : "corollary_sqrt",
                           std::move(detail));
  });
}

SweepOutcome verify_plunnecke(const VerifyArgs& args, json& params) {
  const i64 window = args.window > 0 ? args.window : 11;
  const int max_size = args.max_size > 0 ? args.max_size : 6;
  params = {{"window", window}, {"max_size", max_size}, {"max_multiplicity", 3}};
  // one instance = one (set, h1, h2) triple in both modes
  std::vector<IntSet> sets;
  std::vector<std::pair<i64, i64>> hs;
  if (args.exhaustive) {
    const auto grid = subsets_in_window(window, 2, max_size);
    for (const IntSet& a : grid) {
      for (i64 h1 = 0; h1 <= 3; ++h1) {
        for (i64 h2 = 0; h2 <= 3; ++h2) {
          if (h1 + h2 == 0) continue;
          sets.push_back(a);
          hs.emplace_back(h1, h2);
        }
      }
    }
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    for (i64 i = 0; i < args.random_count; ++i) {
      sets.push_back(random_subset(rng, random_size(rng, 2, d), d.window));
      const i64 h1 = static_cast<i64>(rng.next_below(4));
      const i64 h2 = h1 == 0 ? 1 + static_cast<i64>(rng.next_below(3))
                             : static_cast<i64>(rng.next_below(4));
      hs.emplace_back(h1, h2);
    }
  }
  return run_sweep(sets.size(), args.jobs,
                   [&](std::size_t i) -> std::optional<json> {
    const auto report =
        check_plunnecke(sets[i], hs[i].first, hs[i].second, args.ops);
    if (report.holds) return std::nullopt;
    json detail = to_json(report);
    detail["A"] = to_json(sets[i]);
    return violation_entry("plunnecke", std::move(detail));
  });
}

SweepOutcome verify_single_set_lambda(const VerifyArgs& args, json& params,
                                      const std::string& which) {
  const bool digit = which == "digit";
  const i64 window = args.window > 0 ? args.window : 11;
  const int max_size = args.max_size > 0 ? args.max_size : 6;
  // one instance = one (set, vector) pair in both modes; the exhaustive
  // cross product is addressed by index to avoid materializing it
  std::vector<IntSet> sets;
  std::vector<DilateVector> vectors;
  std::size_t count = 0;
  bool crossed = false;
  if (args.exhaustive) {
    sets = subsets_in_window(window, 2, max_size);
    vectors = lambda_grid(args, 1, 3, 8, /*positive_only=*/digit);
    count = sets.size() * vectors.size();
    crossed = true;
    params = {{"window", window}, {"max_size", max_size},
              {"lambda_grid", vectors.size()}};
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    const auto fixed = args.lambda_text.empty()
                           ? std::optional<DilateVector>{}
                           : std::optional<DilateVector>{
                                 parse_dilate_vector(args.lambda_text)};
    for (i64 i = 0; i < args.random_count; ++i) {
      sets.push_back(random_subset(rng, random_size(rng, 2, d), d.window));
      DilateVector v = fixed ? *fixed : random_coprime_vector(rng, 1, 3, 8);
      if (digit && !fixed) {
        std::vector<i64> mags;
        for (i64 c : v.coeffs()) mags.push_back(c < 0 ? -c : c);
        v = DilateVector(std::move(mags));
      }
      vectors.push_back(std::move(v));
    }
    count = sets.size();
  }
  return run_sweep(count, args.jobs,
                   [&](std::size_t i) -> std::optional<json> {
    const IntSet& raw = crossed ? sets[i / vectors.size()] : sets[i];
    const DilateVector& v = crossed ? vectors[i % vectors.size()] : vectors[i];
    if (digit) {
      const IntSet a = normalize(raw).set;  // guarantees 0 in A
      for (const auto& report : check_digit_cover_parts(v, a, args.ops)) {
        if (!report.holds) {
          json detail = to_json(report);
          detail["A"] = to_json(a);
          detail["lambda"] = to_text(v);
          return violation_entry("digit_cover", std::move(detail));
        }
      }
      return std::nullopt;
    }
    const auto report = check_gentriag_bound(v, raw, args.ops);
    if (report.holds) return std::nullopt;
    json detail = to_json(report);
    detail["A"] = to_json(raw);
    detail["lambda"] = to_text(v);
    return violation_entry("gentriag_bound", std::move(detail));
  });
}

SweepOutcome verify_power(const VerifyArgs& args, json& params) {
  const i64 window = args.window > 0 ? args.window : 11;
  const int max_size = args.max_size > 0 ? args.max_size : 6;
  params = {{"window", window}, {"max_size", max_size},
            {"lambda_range", 3}, {"k_range", 3}};
  std::vector<IntSet> sets;
  std::vector<std::pair<i64, i64>> lk;
  if (args.exhaustive) {
    for (const IntSet& a : subsets_in_window(window, 2, max_size)) {
      for (i64 lambda = -3; lambda <= 3; ++lambda) {
        if (lambda == 0) continue;
        for (i64 k = 1; k <= 3; ++k) {
          sets.push_back(a);
          lk.emplace_back(lambda, k);
        }
      }
    }
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    for (i64 i = 0; i < args.random_count; ++i) {
      sets.push_back(random_subset(rng, random_size(rng, 2, d), d.window));
      const i64 lambda = (rng.next_below(2) ? 1 : -1) *
                         (1 + static_cast<i64>(rng.next_below(3)));
      lk.emplace_back(lambda, 1 + static_cast<i64>(rng.next_below(3)));
    }
  }
  return run_sweep(sets.size(), args.jobs,
                   [&](std::size_t i) -> std::optional<json> {
    const auto report =
        check_power_dilate(sets[i], lk[i].first, lk[i].second, args.ops);
    if (report.holds) return std::nullopt;
    json detail = to_json(report);
    detail["A"] = to_json(sets[i]);
    return violation_entry("power_dilate", std::move(detail));
  });
}

SweepOutcome verify_dichotomy(const VerifyArgs& args, json& params) {
  const i64 window = args.window > 0 ? args.window : 12;
  const int max_size =
      args.max_size > 0 ? args.max_size : static_cast<int>(window);
  const auto vectors = args.lambda_text.empty()
                           ? coprime_vectors(2, 3, 6)
                           : std::vector<DilateVector>{
                                 parse_dilate_vector(args.lambda_text)};
  const std::vector<Rat> delta_values{rat(1, 4), rat(1, 2), rat(1)};
  params = {{"window", window}, {"max_size", max_size},
            {"lambda_grid", vectors.size()}, {"deltas", {"1/4", "1/2", "1"}}};
  std::vector<IntSet> sets;
  std::vector<DilateVector> vecs;
  std::vector<Rat> deltas;
  std::size_t count = 0;
  bool crossed = false;
  if (args.exhaustive) {
    // A runs over subsets of [1, window]; the cross product with the vector
    // grid and the three deltas is addressed by index
    for_each_subset(window, 1, max_size, [&](const IntSet& s) {
      sets.push_back(s.translated(1));
    });
    vecs = vectors;
    deltas = delta_values;
    count = sets.size() * vecs.size() * deltas.size();
    crossed = true;
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    for (i64 i = 0; i < args.random_count; ++i) {
      sets.push_back(random_subset(rng, random_size(rng, 1, d), d.window));
      vecs.push_back(args.lambda_text.empty()
                         ? random_coprime_vector(rng, 2, 3, 6)
                         : vectors.front());
      deltas.push_back(delta_values[rng.next_below(3)]);
    }
    count = sets.size();
  }
  return run_sweep(count, args.jobs,
                   [&](std::size_t i) -> std::optional<json> {
    const std::size_t per_set = crossed ? vecs.size() * deltas.size() : 1;
    const IntSet& a = crossed ? sets[i / per_set] : sets[i];
    const DilateVector& v =
        crossed ? vecs[(i / deltas.size()) % vecs.size()] : vecs[i];
    const Rat& delta = crossed ? deltas[i % deltas.size()] : deltas[i];
    const auto report = check_dichotomy(v, a, delta, args.ops);
    if (report.any_holds()) return std::nullopt;
    json detail = to_json(report);
    detail["A"] = to_json(a);
    detail["lambda"] = to_text(v);
    return violation_entry("dichotomy", std::move(detail));
  });
}

SweepOutcome verify_fiber(const VerifyArgs& args, json& params) {
  const i64 window = args.window > 0 ? args.window : 11;
  const int max_size =
      args.max_size > 0 ? args.max_size : static_cast<int>(window);
  const auto zero_sum = zero_sum_coprime_vectors(3, 6);
  const auto general = coprime_vectors(2, 3, 6);
  params = {{"window", window}, {"max_size", max_size},
            {"zero_sum_grid", zero_sum.size()},
            {"disjointness_grid", general.size()}, {"max_modulus", 6}};
  // each instance is either the zero-sum inequality (modulus 0 sentinel) or
  // one disjointness check for a concrete modulus; in exhaustive mode the
  // per-set checks are enumerated once and addressed by index
  std::vector<std::pair<DilateVector, i64>> checks;
  for (const DilateVector& v : zero_sum) checks.emplace_back(v, 0);
  for (const DilateVector& v : general) {
    for (i64 tau = 1; tau <= 6; ++tau) {
      if (gcd_i64(tau, v.sum()) != 1) continue;  // claim not asserted
      checks.emplace_back(v, tau);
    }
  }

  std::vector<IntSet> sets;
  std::vector<std::size_t> draw;  // random mode: check index per instance
  std::size_t count = 0;
  bool crossed = false;
  if (args.exhaustive) {
    sets = subsets_in_window(window, 1, max_size);
    count = sets.size() * checks.size();
    crossed = true;
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    for (i64 i = 0; i < args.random_count; ++i) {
      sets.push_back(random_subset(rng, random_size(rng, 1, d), d.window));
      draw.push_back(static_cast<std::size_t>(rng.next_below(checks.size())));
    }
    count = sets.size();
  }
  return run_sweep(count, args.jobs,
                   [&](std::size_t i) -> std::optional<json> {
    const IntSet& a = crossed ? sets[i / checks.size()] : sets[i];
    const auto& [v, tau] = checks[crossed ? i % checks.size() : draw[i]];
    if (tau == 0) {
      const auto report = check_fiber_inequality(v, a, args.ops);
      if (report.holds) return std::nullopt;
      json detail = to_json(report);
      detail["A"] = to_json(a);
      detail["lambda"] = to_text(v);
      return violation_entry("fiber_inequality", std::move(detail));
    }
    const auto status =
        check_fiber_disjointness(v, residue_partition(a, tau), args.ops);
    if (status != FiberDisjointness::kOverlapping) return std::nullopt;
    return violation_entry(
        "fiber_disjointness",
        json{{"A", to_json(a)}, {"lambda", to_text(v)}, {"tau", tau}});
  });
}

SweepOutcome verify_growth(const VerifyArgs& args, json& params) {
  const i64 window = args.window > 0 ? args.window : 15;
  const int max_size = args.max_size > 0 ? args.max_size : 7;
  params = {{"window", window}, {"min_size", 6}, {"max_size", max_size}};
  std::vector<IntSet> sets;
  if (args.exhaustive) {
    sets = subsets_in_window(window, 6, max_size);
  } else {
    const RandomDomain d = random_domain(args, params);
    Rng rng(args.seed);
    sets = random_sets(rng, args.random_count, 6, std::max(6, d.max_size),
                       d.window);
  }
  return run_sweep(sets.size(), args.jobs,
                   [&](std::size_t i) -> std::optional<json> {
    const auto result = check_growth_dichotomy(sets[i], args.ops);
    if (result.status != GrowthStatus::kViolated) return std::nullopt;
    return violation_entry("growth_dichotomy",
                           json{{"A", to_json(sets[i])},
                                {"violated_at", result.issue_at},
                                {"deltas", result.trace.deltas}});
  });
}

int run_verify(const VerifyArgs& args, const OutputSpec& out,
               const std::string& echo) {
  json params;
  SweepOutcome outcome;
  if (args.suite == "triangle") {
    outcome = verify_triangle(args, params);
  } else if (args.suite == "sqrt") {
    outcome = verify_pair_suite(args, params, /*cover=*/false);
  } else if (args.suite == "cover") {
    outcome = verify_pair_suite(args, params, /*cover=*/true);
  } else if (args.suite == "plunnecke") {
    outcome = verify_plunnecke(args, params);
  } else if (args.suite == "digit" || args.suite == "gentriag") {
    outcome = verify_single_set_lambda(args, params, args.suite);
  } else if (args.suite == "power") {
    outcome = verify_power(args, params);
  } else if (args.suite == "dichotomy") {
    outcome = verify_dichotomy(args, params);
  } else if (args.suite == "fiber") {
    outcome = verify_fiber(args, params);
  } else if (args.suite == "growth") {
    outcome = verify_growth(args, params);
  } else if (args.suite == "selftest") {
    // Emits one synthetic violation so operators can confirm that the
    // soundness alarm (exit code 2) propagates through their pipelines.
    params = json::object();
    outcome.instances = 1;
    outcome.violations.push_back(violation_entry(
        "selftest", json{{"note", "synthetic violation, not a finding"}}));
  } else {
    throw std::invalid_argument("unknown verify suite: " + args.suite);
  }

  params["mode"] = args.exhaustive ? "exhaustive" : "random";
  if (!args.exhaustive) {
    params["random"] = args.random_count;
    params["seed"] = args.seed;
  }

  const bool pass = outcome.violations.empty();
  json report{{"meta", meta_block(echo, out)},
              {"command", "verify"},
              {"suite", args.suite},
              {"params", params},
              {"instances", outcome.instances},
              {"violations", outcome.violations},
              {"pass", pass}};
  if (out.format == "csv") {
    std::string csv = meta_csv_comments(echo, out);
    csv += "suite,instances,violations,pass\n";
    csv += args.suite + "," + std::to_string(outcome.instances) + "," +
           std::to_string(outcome.violations.size()) + "," +
           (pass ? "true" : "false") + "\n";
    write_output(out, csv);
  } else {
    write_output(out, report.dump(2) + "\n");
  }
  return pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// other commands
// ---------------------------------------------------------------------------

int run_compute(const std::string& lambda_text, const std::string& set_text,
                const std::string& kernel_name, const OutputSpec& out,
                const std::string& echo) {
  OpConfig cfg = op_config_from_env();
  if (kernel_name == "bitset") {
    cfg.kernel = Kernel::kBitset;
  } else if (kernel_name == "merge") {
    cfg.kernel = Kernel::kMerge;
  } else if (kernel_name != "auto") {
    throw std::invalid_argument("unknown kernel: " + kernel_name);
  }
  const DilateVector v = parse_dilate_vector(lambda_text);
  const IntSet a = parse_int_set(set_text);
  const IntSet result = dilate_sum(v, a, cfg);
  if (out.format == "csv") {
    std::string csv = meta_csv_comments(echo, out);
    csv += "size,result\n";
    csv += std::to_string(result.size()) + ",\"" + to_text(result) + "\"\n";
    write_output(out, csv);
  } else {
    json report{{"meta", meta_block(echo, out)},
                {"command", "compute"},
                {"lambda", to_json(v)},
                {"set", to_json(a)},
                {"result", to_json(result)},
                {"size", result.size()}};
    write_output(out, report.dump(2) + "\n");
  }
  return 0;
}

int run_search(const std::string& lambda_text, const std::string& m_text,
               i64 window, int jobs, const std::string& checkpoint,
               const OutputSpec& out, const std::string& echo) {
  const DilateVector v = parse_dilate_vector(lambda_text);
  SearchOptions opts;
  opts.jobs = jobs;
  opts.checkpoint_path = checkpoint;

  int m_lo = 0, m_hi = 0;
  try {
    if (const auto dots = m_text.find(".."); dots != std::string::npos) {
      m_lo = std::stoi(m_text.substr(0, dots));
      m_hi = std::stoi(m_text.substr(dots + 2));
    } else {
      m_lo = m_hi = std::stoi(m_text);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed --m: expected M or M1..M2, got " +
                                m_text);
  }
  if (m_lo < 2 || m_hi < m_lo) {
    throw std::invalid_argument("infeasible search: bad size class range");
  }

  const i64 main_coeff = gcd_reduce(v).second.l1_norm();
  std::vector<SearchResult> results;
  for (int m = m_lo; m <= m_hi; ++m) {
    if (m_lo == m_hi && window > 0) {
      results.push_back(minimal_dilate_sum(v, m, window, opts));
    } else {
      const i64 start = window > 0 ? window : default_window(m);
      results.push_back(search_stabilized(v, m, start, opts));
    }
  }

  if (out.format == "csv") {
    std::string csv = meta_csv_comments(echo, out);
    csv += "m,min_size,defect,stabilized,n_minimizers\n";
    for (const auto& r : results) {
      csv += std::to_string(r.m) + "," + std::to_string(r.min_size) + "," +
             std::to_string(main_coeff * r.m - r.min_size) + "," +
             (r.stabilized ? "true" : "false") + "," +
             std::to_string(r.minimizers.size()) + "\n";
    }
    write_output(out, csv);
  } else {
    json rows = json::array();
    for (const auto& r : results) {
      json minimizers = json::array();
      for (const IntSet& s : r.minimizers) minimizers.push_back(to_json(s));
      rows.push_back(json{{"m", r.m},
                          {"window", r.window},
                          {"min_size", r.min_size},
                          {"defect", main_coeff * r.m - r.min_size},
                          {"stabilized", r.stabilized},
                          {"n_minimizers", r.minimizers.size()},
                          {"minimizers", minimizers}});
    }
    json report{{"meta", meta_block(echo, out)},
                {"command", "search"},
                {"lambda", to_json(v)},
                {"results", rows}};
    write_output(out, report.dump(2) + "\n");
  }
  return 0;
}

int run_exponent(const std::string& lambda_text, bool exhaustive, i64 window,
                 int max_size, i64 random_count, std::uint64_t seed,
                 int set_size, int jobs, const OutputSpec& out,
                 const std::string& echo) {
  const DilateVector v = parse_dilate_vector(lambda_text);
  const OpConfig cfg = op_config_from_env();
  std::vector<IntSet> corpus;
  json params;
  if (exhaustive) {
    const i64 w = window > 0 ? window : 11;
    const int ms = max_size > 0 ? max_size : static_cast<int>(w);
    for_each_subset(w, 2, ms, [&](const IntSet& s) { corpus.push_back(s); });
    params = {{"mode", "exhaustive"}, {"window", w}, {"max_size", ms}};
  } else {
    const i64 w = window > 0 ? window : 64;
    const int size = set_size > 0 ? set_size : 8;
    Rng rng(seed);
    for (i64 i = 0; i < random_count; ++i) {
      corpus.push_back(random_subset(rng, size, w));
    }
    params = {{"mode", "random"}, {"window", w}, {"size", size},
              {"random", random_count}, {"seed", seed}};
  }
  const SurveySummary summary = exponent_survey(corpus, v, cfg, jobs);

  if (out.format == "csv") {
    std::string csv = meta_csv_comments(echo, out);
    csv += "set,size,K,lhs,p_emp\n";
    for (const auto& e : summary.entries) {
      csv += "\"" + to_text(e.set) + "\"," + std::to_string(e.size) + "," +
             rat_str(e.doubling) + "," + rat_str(e.ratio) + "," +
             fmt_double(e.p_emp) + "\n";
    }
    write_output(out, csv);
  } else {
    json flagged = json::array();
    for (std::size_t i : summary.flagged) {
      flagged.push_back(json{{"index", i}, {"set", to_json(summary.entries[i].set)},
                             {"p_emp", summary.entries[i].p_emp}});
    }
    json report{{"meta", meta_block(echo, out)},
                {"command", "exponent"},
                {"lambda", to_json(v)},
                {"params", params},
                {"instances", summary.entries.size()},
                {"max_p_emp", summary.max_p_emp},
                {"mean_p_emp", summary.mean_p_emp},
                {"argmax_set", to_json(summary.entries.empty()
                                           ? IntSet{}
                                           : summary.entries[summary.argmax_index].set)},
                {"flagged", flagged}};
    write_output(out, report.dump(2) + "\n");
  }
  return 0;
}

int run_trace(const std::string& lambda_text, const std::string& set_text,
              const OutputSpec& out, const std::string& echo) {
  const DilateVector v = parse_dilate_vector(lambda_text);
  const IntSet a = parse_int_set(set_text);
  const OpConfig cfg = op_config_from_env();
  const GrowthTrace trace = growth_trace(v, a, cfg);
  if (out.format == "csv") {
    std::string csv = meta_csv_comments(echo, out);
    csv += "k,element,delta\n";
    for (std::size_t j = 1; j < trace.elements.size(); ++j) {
      csv += std::to_string(j + 1) + "," + std::to_string(trace.elements[j]) +
             "," + std::to_string(trace.deltas[j - 1]) + "\n";
    }
    write_output(out, csv);
  } else {
    json report{{"meta", meta_block(echo, out)},
                {"command", "trace"},
                {"lambda", to_json(v)},
                {"set", to_json(a)},
                {"initial_size", 1},
                {"deltas", trace.deltas},
                {"total", trace.final_size()}};
    write_output(out, report.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic on sums of dilates: compute, verify, search"};
  app.require_subcommand(1);

  OutputSpec out;
  std::string lambda_text, set_text, m_text, kernel_name = "auto";
  std::string checkpoint, suite;
  i64 window = 0, random_count = 0;
  int max_size = 0, jobs = 1, set_size = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out.path, "write the report to a file");
    cmd->add_option("--format", out.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--canonical", out.canonical,
                  "omit volatile header fields for byte-identical reports");
  };

  auto* compute = app.add_subcommand("compute", "evaluate a sum of dilates");
  compute->add_option("--lambda", lambda_text, "coefficient vector, e.g. (1,3)")
      ->required();
  compute->add_option("--set", set_text, "set literal, e.g. [0,1,3,4]")
      ->required();
  compute->add_option("--kernel", kernel_name, "auto|bitset|merge")
      ->check(CLI::IsMember({"auto", "bitset", "merge"}));
  add_output(compute);

  auto* verify = app.add_subcommand("verify", "run an inequality suite");
  verify->add_option("--suite", suite,
                     "triangle|sqrt|plunnecke|cover|digit|gentriag|power|"
                     "dichotomy|fiber|growth")
      ->required();
  verify->add_flag("--exhaustive", exhaustive, "sweep the exhaustive grid");
  auto* rnd = verify->add_option("--random", random_count,
                                 "number of random instances");
  verify->add_option("--seed", seed, "seed for random corpora");
  rnd->needs("--seed");
  verify->add_option("--window", window, "override the sweep window");
  verify->add_option("--max-size", max_size, "override the maximum set size");
  verify->add_option("--lambda", lambda_text, "restrict to one vector");
  verify->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  add_output(verify);

  auto* search = app.add_subcommand("search", "minimal dilate-sum search");
  search->add_option("--lambda", lambda_text, "coefficient vector")->required();
  search->add_option("--m", m_text, "size class, single (4) or range (2..6)")
      ->required();
  search->add_option("--window", window, "search window [0, N)");
  search->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  search->add_option("--checkpoint", checkpoint, "checkpoint file for resume");
  add_output(search);

  auto* exponent = app.add_subcommand("exponent", "empirical exponent survey");
  exponent->add_option("--lambda", lambda_text, "coefficient vector")->required();
  exponent->add_flag("--exhaustive", exhaustive, "sweep subsets of a window");
  auto* rnd2 = exponent->add_option("--random", random_count,
                                    "number of random sets");
  exponent->add_option("--seed", seed, "seed for random corpora");
  rnd2->needs("--seed");
  exponent->add_option("--window", window, "universe window");
  exponent->add_option("--max-size", max_size, "max size (exhaustive mode)");
  exponent->add_option("--size", set_size, "set size (random mode)");
  exponent->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  add_output(exponent);

  auto* trace = app.add_subcommand("trace", "growth trace of a set");
  trace->add_option("--lambda", lambda_text, "coefficient vector")->required();
  trace->add_option("--set", set_text, "set literal")->required();
  add_output(trace);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    // canonical echo of the resolved configuration, independent of flag order
    std::ostringstream echo;
    if (app.got_subcommand(compute)) {
      echo << "compute --lambda " << lambda_text << " --set " << set_text
           << " --kernel " << kernel_name << " --format " << out.format;
      return run_compute(lambda_text, set_text, kernel_name, out, echo.str());
    }
    if (app.got_subcommand(verify)) {
      if (!exhaustive && random_count <= 0) {
        throw std::invalid_argument(
            "verify: pass --exhaustive or --random N --seed S");
      }
      if (exhaustive && random_count > 0) {
        throw std::invalid_argument(
            "verify: --exhaustive and --random are mutually exclusive");
      }
      VerifyArgs args{suite,  exhaustive, random_count, seed, window,
                      max_size, lambda_text, jobs, op_config_from_env()};
      echo << "verify --suite " << suite
           << (exhaustive ? " --exhaustive" : " --random ")
           << (exhaustive ? "" : std::to_string(random_count) + " --seed " +
                                     std::to_string(seed))
           << " --window " << window << " --max-size " << max_size
           << " --jobs " << jobs << " --format " << out.format;
      return run_verify(args, out, echo.str());
    }
    if (app.got_subcommand(search)) {
      echo << "search --lambda " << lambda_text << " --m " << m_text
           << " --window " << window << " --jobs " << jobs << " --format "
           << out.format;
      return run_search(lambda_text, m_text, window, jobs, checkpoint, out,
                        echo.str());
    }
    if (app.got_subcommand(exponent)) {
      if (!exhaustive && random_count <= 0) {
        throw std::invalid_argument(
            "exponent: pass --exhaustive or --random N --seed S");
      }
      echo << "exponent --lambda " << lambda_text
           << (exhaustive ? " --exhaustive" : " --random ")
           << (exhaustive ? "" : std::to_string(random_count) + " --seed " +
                                     std::to_string(seed))
           << " --window " << window << " --format " << out.format;
      return run_exponent(lambda_text, exhaustive, window, max_size,
                          random_count, seed, set_size, jobs, out, echo.str());
    }
    if (app.got_subcommand(trace)) {
      echo << "trace --lambda " << lambda_text << " --set " << set_text
           << " --format " << out.format;
      return run_trace(lambda_text, set_text, out, echo.str());
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: overflow: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
