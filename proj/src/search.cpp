#include "dilatelab/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dilatelab/text.hpp"

namespace dilatelab {

namespace {

constexpr i64 kMaxSearchWindowBits = i64{1} << 26;
constexpr int kMaxPrefix = 24;

void validate_size_class(int m, i64 window) {
  if (m < 2) {
    throw std::invalid_argument("search: size class must be at least 2");
  }
  if (m > kMaxPrefix) {
    throw std::invalid_argument("search: size class too large");
  }
  if (static_cast<i64>(m) > window) {
    throw std::invalid_argument(
        "infeasible search: size class exceeds the window");
  }
}

/// Evaluates |S_v(P)| for prefixes P of subsets of [0, window) on flat,
/// preallocated bit buffers. One instance per worker thread.
class PrefixSumKernel {
 public:
  PrefixSumKernel(const DilateVector& v, i64 window)
      : coeffs_(v.coeffs().begin(), v.coeffs().end()), top_(window - 1) {
    const i64 width = checked_add(checked_mul(v.l1_norm(), top_), 1);
    if (width > kMaxSearchWindowBits) {
      throw std::invalid_argument("search: window too large for the kernel");
    }
    i64 partial_l1 = 0;
    for (i64 c : coeffs_) {
      partial_l1 += (c < 0 ? -c : c);
      const i64 stage_width = partial_l1 * top_ + 1;
      stage_words_.push_back(
          static_cast<std::size_t>((stage_width + 63) / 64));
    }
    for (std::size_t w : stage_words_) {
      stages_.emplace_back(w, 0);
    }
  }

  /// Number of elements of c_1*P + ... + c_k*P.
  i64 size_for(const i64* prefix, int len) {
    auto& stage0 = stages_[0];
    std::fill(stage0.begin(), stage0.end(), 0);
    for (int j = 0; j < len; ++j) {
      set_bit(stage0, shift_for(0, prefix[j]));
    }
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      auto& dst = stages_[i];
      std::fill(dst.begin(), dst.end(), 0);
      const auto& src = stages_[i - 1];
      const std::size_t src_words = stage_words_[i - 1];
      for (int j = 0; j < len; ++j) {
        or_shifted(dst, src, src_words, shift_for(i, prefix[j]));
      }
    }
    i64 count = 0;
    for (std::uint64_t w : stages_.back()) count += std::popcount(w);
    return count;
  }

 private:
  // Offsets are kept nonnegative per stage: negative coefficients anchor at
  // the top of the window instead of the bottom.
  [[nodiscard]] i64 shift_for(std::size_t stage, i64 e) const {
    const i64 c = coeffs_[stage];
    return c >= 0 ? c * e : (-c) * (top_ - e);
  }

  static void set_bit(std::vector<std::uint64_t>& words, i64 offset) {
    words[static_cast<std::size_t>(offset >> 6)] |= std::uint64_t{1}
                                                    << (offset & 63);
  }

  static void or_shifted(std::vector<std::uint64_t>& dst,
                         const std::vector<std::uint64_t>& src,
                         std::size_t src_words, i64 shift) {
    const std::size_t word_shift = static_cast<std::size_t>(shift >> 6);
    const unsigned bit_shift = static_cast<unsigned>(shift & 63);
    if (bit_shift == 0) {
      for (std::size_t i = 0; i < src_words; ++i) {
        dst[i + word_shift] |= src[i];
      }
      return;
    }
    for (std::size_t i = 0; i < src_words; ++i) {
      const std::uint64_t w = src[i];
      if (w == 0) continue;
      dst[i + word_shift] |= w << bit_shift;
      const std::uint64_t spill = w >> (64 - bit_shift);
      if (spill != 0) dst[i + word_shift + 1] |= spill;
    }
  }

  std::vector<i64> coeffs_;
  i64 top_;
  std::vector<std::size_t> stage_words_;
  std::vector<std::vector<std::uint64_t>> stages_;
};

bool reflection_not_smaller(const i64* prefix, int m) {
  // Keep A iff A <= reflect(A) lexicographically.
  const i64 top = prefix[m - 1];
  for (int i = 0; i < m; ++i) {
    const i64 mirrored = top - prefix[m - 1 - i];
    if (mirrored < prefix[i]) return false;
    if (mirrored > prefix[i]) return true;
  }
  return true;  // palindromic
}

struct TaskResult {
  i64 min = std::numeric_limits<i64>::max();
  std::vector<IntSet> minimizers;
};

void fetch_min(std::atomic<i64>& target, i64 value) {
  i64 cur = target.load(std::memory_order_relaxed);
  while (value < cur &&
         !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

struct SubtreeParams {
  int m;
  i64 window;
  bool prune;
  bool collect;
};

void search_rec(const SubtreeParams& p, PrefixSumKernel& kernel, i64* prefix,
                int len, i64 gcd_so_far, std::atomic<i64>& best,
                TaskResult& out) {
  const i64 size = kernel.size_for(prefix, len);
  if (len == p.m) {
    if (gcd_so_far != 1) return;
    if (!reflection_not_smaller(prefix, p.m)) return;
    if (size < out.min) {
      out.min = size;
      if (p.collect) {
        out.minimizers.clear();
        out.minimizers.emplace_back(std::vector<i64>(prefix, prefix + p.m));
      }
      fetch_min(best, size);
    } else if (size == out.min && p.collect) {
      out.minimizers.emplace_back(std::vector<i64>(prefix, prefix + p.m));
    }
    return;
  }
  if (p.prune) {
    // Each further element adds at least one new extreme sum, so
    // size + (m - len) is a valid lower bound for any completion.
    const i64 bound = size + (p.m - len);
    const i64 cutoff = best.load(std::memory_order_relaxed);
    if (p.collect ? bound > cutoff : bound >= cutoff) return;
  }
  const i64 remaining = p.m - len - 1;
  for (i64 e = prefix[len - 1] + 1; e + remaining <= p.window - 1; ++e) {
    prefix[len] = e;
    search_rec(p, kernel, prefix, len + 1, gcd_i64(gcd_so_far, e), best, out);
  }
}

TaskResult run_subtree(const DilateVector& v, const SubtreeParams& p,
                       i64 second_element, std::atomic<i64>& best) {
  PrefixSumKernel kernel(v, p.window);
  i64 prefix[kMaxPrefix];
  prefix[0] = 0;
  prefix[1] = second_element;
  TaskResult out;
  search_rec(p, kernel, prefix, 2, second_element, best, out);
  return out;
}

// ---------------------------------------------------------------------------
// Checkpointing: one JSON object per completed second-element subtree.
// ---------------------------------------------------------------------------

constexpr const char* kCheckpointSchema = "dilate-lab-search-checkpoint-v1";

class Checkpoint {
 public:
  Checkpoint(std::string path, const DilateVector& v, int m, i64 window,
             bool collect_minimizers)
      : path_(std::move(path)) {
    meta_ = {{"schema", kCheckpointSchema},
             {"lambda", std::vector<i64>(v.coeffs().begin(), v.coeffs().end())},
             {"m", m},
             {"window", window},
             {"minimizers_collected", collect_minimizers}};
  }

  /// Loads previously completed subtrees; throws on a mismatched file.
  std::map<i64, TaskResult> load() {
    std::map<i64, TaskResult> done;
    std::ifstream in(path_);
    if (!in) return done;
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument("checkpoint file is not valid JSON: " +
                                  path_);
    }
    for (const auto& [key, value] : meta_.items()) {
      if (!j.contains(key) || j[key] != value) {
        throw std::invalid_argument(
            "checkpoint file does not match this search: " + path_);
      }
    }
    tasks_ = j.value("tasks", nlohmann::json::object());
    for (const auto& [key, entry] : tasks_.items()) {
      TaskResult r;
      r.min = entry.at("min").get<i64>();
      for (const auto& s : entry.value("minimizers", nlohmann::json::array())) {
        r.minimizers.emplace_back(s.get<std::vector<i64>>());
      }
      done.emplace(std::stoll(key), std::move(r));
    }
    return done;
  }

  void record(i64 second_element, const TaskResult& r) {
    std::lock_guard<std::mutex> lock(mutex_);
    nlohmann::json entry{{"min", r.min}};
    nlohmann::json sets = nlohmann::json::array();
    for (const IntSet& s : r.minimizers) {
      sets.push_back(std::vector<i64>(s.begin(), s.end()));
    }
    entry["minimizers"] = std::move(sets);
    tasks_[std::to_string(second_element)] = std::move(entry);
    nlohmann::json j = meta_;
    j["tasks"] = tasks_;
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) {
        throw std::runtime_error("cannot write checkpoint file: " + tmp);
      }
      out << j.dump();
    }
    std::rename(tmp.c_str(), path_.c_str());
  }

 private:
  std::string path_;
  nlohmann::json meta_;
  nlohmann::json tasks_ = nlohmann::json::object();
  std::mutex mutex_;
};

i64 min_only_search(const DilateVector& v, int m, i64 window,
                    i64 upper_bound) {
  SubtreeParams p{m, window, /*prune=*/true, /*collect=*/false};
  std::atomic<i64> best{upper_bound};
  i64 result = upper_bound;
  for (i64 e1 = 1; e1 + (m - 2) <= window - 1; ++e1) {
    const TaskResult r = run_subtree(v, p, e1, best);
    result = std::min(result, r.min);
  }
  return result;
}

}  // namespace

IntSet canonical_form(const IntSet& a) {
  const IntSet base = normalize(a).set;
  if (base.size() < 2) return base;
  const IntSet mirrored = base.reflected();
  return mirrored < base ? mirrored : base;
}

void for_each_canonical(int m, i64 window,
                        const std::function<void(const IntSet&)>& fn) {
  validate_size_class(m, window);
  std::vector<i64> prefix(static_cast<std::size_t>(m));
  prefix[0] = 0;
  auto rec = [&](auto&& self, int len, i64 gcd_so_far) -> void {
    if (len == m) {
      if (gcd_so_far != 1) return;
      if (!reflection_not_smaller(prefix.data(), m)) return;
      fn(IntSet(prefix));
      return;
    }
    const i64 remaining = m - len - 1;
    for (i64 e = prefix[static_cast<std::size_t>(len - 1)] + 1;
         e + remaining <= window - 1; ++e) {
      prefix[static_cast<std::size_t>(len)] = e;
      self(self, len + 1, gcd_i64(gcd_so_far, e));
    }
  };
  rec(rec, 1, 0);
}

std::vector<IntSet> canonical_sets(int m, i64 window) {
  std::vector<IntSet> out;
  for_each_canonical(m, window, [&](const IntSet& s) { out.push_back(s); });
  return out;
}

SearchResult minimal_dilate_sum(const DilateVector& v, int m, i64 window,
                                const SearchOptions& opts) {
  validate_size_class(m, window);

  std::unique_ptr<Checkpoint> checkpoint;
  std::map<i64, TaskResult> done;
  if (!opts.checkpoint_path.empty()) {
    checkpoint = std::make_unique<Checkpoint>(opts.checkpoint_path, v, m,
                                              window, opts.collect_minimizers);
    done = checkpoint->load();
  }

  std::vector<i64> tasks;
  for (i64 e1 = 1; e1 + (m - 2) <= window - 1; ++e1) tasks.push_back(e1);

  const SubtreeParams params{m, window, opts.prune, opts.collect_minimizers};
  std::vector<TaskResult> results(tasks.size());
  std::atomic<i64> best{std::numeric_limits<i64>::max()};
  for (const auto& [e1, r] : done) fetch_min(best, r.min);

  auto run_task = [&](std::size_t idx) {
    const i64 e1 = tasks[idx];
    if (const auto it = done.find(e1); it != done.end()) {
      results[idx] = it->second;
      return;
    }
    results[idx] = run_subtree(v, params, e1, best);
    if (checkpoint) checkpoint->record(e1, results[idx]);
  };

  if (opts.jobs <= 1 || tasks.size() < 2) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min<std::size_t>(
        static_cast<std::size_t>(opts.jobs), tasks.size());
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next.fetch_add(1); i < tasks.size();
               i = next.fetch_add(1)) {
            run_task(i);
          }
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

  // Deterministic reduction: exact global minimum, then the tie lists merged
  // in subtree order (which is already lexicographic).
  SearchResult result{v, m, window, 0, {}, false};
  result.min_size = std::numeric_limits<i64>::max();
  for (const TaskResult& r : results) {
    result.min_size = std::min(result.min_size, r.min);
  }
  if (opts.collect_minimizers) {
    for (const TaskResult& r : results) {
      if (r.min == result.min_size) {
        result.minimizers.insert(result.minimizers.end(),
                                 r.minimizers.begin(), r.minimizers.end());
      }
    }
    std::sort(result.minimizers.begin(), result.minimizers.end(),
              [](const IntSet& a, const IntSet& b) { return (a <=> b) < 0; });
  }

  const i64 probe = min_only_search(
      v, m, window + opts.stabilization_stride, result.min_size);
  result.stabilized = probe == result.min_size;
  return result;
}

SearchResult search_stabilized(const DilateVector& v, int m,
                               i64 initial_window, const SearchOptions& opts,
                               int max_growth_steps) {
  i64 window = std::max<i64>(initial_window, m);
  SearchResult result = minimal_dilate_sum(v, m, window, opts);
  for (int step = 0; step < max_growth_steps && !result.stabilized; ++step) {
    window += opts.stabilization_stride;
    result = minimal_dilate_sum(v, m, window, opts);
  }
  return result;
}

i64 GrowthTrace::final_size() const {
  i64 total = 1;
  for (i64 d : deltas) total += d;
  return total;
}

GrowthTrace growth_trace(const DilateVector& v, const IntSet& a,
                         const OpConfig& cfg) {
  (void)cfg;
  if (a.size() < 2) {
    throw std::invalid_argument("growth_trace: needs at least two elements");
  }
  if (v.k() > 16) {
    throw std::invalid_argument("growth_trace: too many coefficients");
  }
  const std::size_t k = v.k();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;

  std::vector<i64> mask_sum(full + 1, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const unsigned low = static_cast<unsigned>(std::countr_zero(mask));
    mask_sum[mask] =
        checked_add(mask_sum[mask & (mask - 1)], v.coeff(low));
  }

  // lattice[mask] = S of the sub-vector selected by mask over the prefix so
  // far; growing the prefix only inserts sums that use the new element.
  std::vector<std::vector<i64>> lattice(full + 1);
  lattice[0] = {0};
  const i64 first = a[0];
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    lattice[mask] = {checked_mul(mask_sum[mask], first)};
  }

  GrowthTrace trace;
  trace.elements.assign(a.begin(), a.end());
  for (std::size_t j = 1; j < a.size(); ++j) {
    const i64 e = a[j];
    std::vector<std::vector<i64>> next(full + 1);
    next[0] = {0};
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      std::vector<i64> grown = lattice[mask];
      for (std::uint32_t part = mask; part != 0; part = (part - 1) & mask) {
        const i64 offset = checked_mul(mask_sum[part], e);
        for (i64 s : lattice[mask ^ part]) {
          grown.push_back(checked_add(offset, s));
        }
      }
      std::sort(grown.begin(), grown.end());
      grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
      next[mask] = std::move(grown);
    }
    trace.deltas.push_back(static_cast<i64>(next[full].size()) -
                           static_cast<i64>(lattice[full].size()));
    lattice = std::move(next);
  }
  return trace;
}

GrowthDichotomy check_growth_dichotomy(const IntSet& a, const OpConfig& cfg) {
  if (a.size() < 6) {
    throw std::invalid_argument(
        "check_growth_dichotomy: needs at least six elements");
  }
  GrowthDichotomy result;
  result.trace = growth_trace(DilateVector::of({1, 3}), a, cfg);
  const auto& deltas = result.trace.deltas;
  const int n = static_cast<int>(a.size());
  auto delta_at = [&](int step) { return deltas[static_cast<size_t>(step - 2)]; };

  for (int step = 5; step <= n; ++step) {
    const i64 d = delta_at(step);
    if (d >= 4) continue;
    if (d == 3) {
      if (step == n) {
        if (result.status == GrowthStatus::kHolds) {
          result.status = GrowthStatus::kBoundaryUndetermined;
          result.issue_at = step;
        }
        continue;
      }
      if (delta_at(step + 1) >= 5) continue;
    }
    result.status = GrowthStatus::kViolated;
    result.issue_at = step;
    return result;
  }
  return result;
}

std::vector<LowerBoundRow> lower_bound_table(const DilateVector& v, int m_lo,
                                             int m_hi,
                                             const SearchOptions& opts,
                                             i64 window_override) {
  if (m_lo < 2 || m_hi < m_lo) {
    throw std::invalid_argument("lower_bound_table: bad size range");
  }
  const i64 main_coeff = gcd_reduce(v).second.l1_norm();
  std::vector<LowerBoundRow> rows;
  for (int m = m_lo; m <= m_hi; ++m) {
    const i64 start =
        window_override > 0 ? window_override : default_window(m);
    const SearchResult r = search_stabilized(v, m, start, opts);
    LowerBoundRow row;
    row.m = m;
    row.window = r.window;
    row.min_size = r.min_size;
    row.defect = main_coeff * m - r.min_size;
    row.stabilized = r.stabilized;
    row.n_minimizers = r.minimizers.size();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dilatelab
