#pragma once

#include <array>
#include <chrono>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "splitcount/classify.hpp"
#include "splitcount/cyclotomic.hpp"
#include "splitcount/endofunction.hpp"
#include "splitcount/genfun.hpp"
#include "splitcount/splitting.hpp"

namespace splitcount {

enum class TheoremId {
  D2_MAIN,
  CYCLE_D,
  CHAIN_D,
  TREE_D,
  TYPE1,
  TYPE2,
  PRODUCT,
  ZETA_HN,
  RIENER,
  OTHER,  // exploratory records for unclassified endofunctions
};

inline constexpr std::array<TheoremId, 10> kAllTheoremIds = {
    TheoremId::D2_MAIN, TheoremId::CYCLE_D, TheoremId::CHAIN_D, TheoremId::TREE_D,
    TheoremId::TYPE1,   TheoremId::TYPE2,   TheoremId::PRODUCT, TheoremId::ZETA_HN,
    TheoremId::RIENER,  TheoremId::OTHER};

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::D2_MAIN: return "D2_MAIN";
    case TheoremId::CYCLE_D: return "CYCLE_D";
    case TheoremId::CHAIN_D: return "CHAIN_D";
    case TheoremId::TREE_D: return "TREE_D";
    case TheoremId::TYPE1: return "TYPE1";
    case TheoremId::TYPE2: return "TYPE2";
    case TheoremId::PRODUCT: return "PRODUCT";
    case TheoremId::ZETA_HN: return "ZETA_HN";
    case TheoremId::RIENER: return "RIENER";
    case TheoremId::OTHER: return "OTHER";
  }
  return "?";
}

/// One theorem instance checked on one input. When the theorem's hypotheses
/// do not hold, applicable is false, passed is vacuously true, and lhs/rhs
/// still record both sides for audit.
struct TheoremCheck {
  TheoremId id = TheoremId::OTHER;
  bool applicable = false;
  bool passed = true;
  std::string lhs;  // sigma (or the expected value)
  std::string rhs;  // evaluation, in cyclotomic text form
};

/// sigma(2;T) = g_T(-1) whenever sigma(2;T) > 0.
inline TheoremCheck check_d2(const Endofunction& T) {
  if (T.n() % 2 != 0) throw OddN("the d = 2 check needs even n");
  const Int sigma = sigma_fast(T, 2).sigma;
  const Int gval = invariant_gf(T).eval(-1);
  TheoremCheck out;
  out.id = TheoremId::D2_MAIN;
  out.applicable = sigma > 0;
  out.passed = out.applicable ? sigma == gval : true;
  out.lhs = sigma.get_str();
  out.rhs = gval.get_str();
  return out;
}

namespace detail {

inline TheoremId theorem_for_tag(StructureTag tag) {
  switch (tag) {
    case StructureTag::Chain: return TheoremId::CHAIN_D;
    case StructureTag::Cycle: return TheoremId::CYCLE_D;
    case StructureTag::Tree: return TheoremId::TREE_D;
    case StructureTag::Type1: return TheoremId::TYPE1;
    case StructureTag::Type2: return TheoremId::TYPE2;
    case StructureTag::ProductOfTypes: return TheoremId::PRODUCT;
    case StructureTag::Other: return TheoremId::OTHER;
  }
  return TheoremId::OTHER;
}

struct FlagCheckResult {
  TheoremCheck check;
  StructureTag tag = StructureTag::Other;
  Int sigma;
  CyclotomicInteger value{1};
};

inline FlagCheckResult check_flag_detail(const FunctionalGraph& g, int d) {
  check_divides(d, g.n);
  FlagCheckResult out;
  const StructureClass cls = classify(g, d);
  out.tag = cls.tag;
  out.sigma = sigma_fast(g, d).sigma;
  out.value = eval_at_roots(flag_gf(g, d), d, 1);

  bool applicable;
  switch (cls.tag) {
    case StructureTag::Chain:
    case StructureTag::Type1:
    case StructureTag::Type2:
    case StructureTag::ProductOfTypes:
      applicable = true;
      break;
    case StructureTag::Cycle:
      applicable = g.components.front().cycle_len() % d == 0;
      break;
    case StructureTag::Tree:
      applicable = out.sigma > 0;
      break;
    case StructureTag::Other:
    default:
      applicable = false;
      break;
  }

  out.check.id = theorem_for_tag(cls.tag);
  out.check.applicable = applicable;
  const std::optional<Int> as_int = out.value.as_integer();
  out.check.passed = applicable ? (as_int.has_value() && *as_int == out.sigma) : true;
  out.check.lhs = out.sigma.get_str();
  out.check.rhs = out.value.to_string();
  return out;
}

}  // namespace detail

/// sigma(d;T) = g_T(zeta, ..., zeta^d) for the structural classes where the
/// equality is a theorem; for tag Other both sides are recorded without
/// asserting (the equality genuinely fails on some inputs).
inline TheoremCheck check_flag(const Endofunction& T, int d) {
  return detail::check_flag_detail(decompose(T), d).check;
}

namespace detail {

/// h_n(zeta^l, ..., zeta^d) by the variable-extension recurrence
/// h_j(.., x) = h_j(..) + x * h_{j-1}(.., x); exact cyclotomic arithmetic.
inline CyclotomicInteger h_at_roots(int d, int l, int n) {
  std::vector<CyclotomicInteger> h(static_cast<size_t>(n) + 1, CyclotomicInteger(d));
  h[0] = CyclotomicInteger::from_int(d, 1);
  for (int i = l; i <= d; ++i) {
    const CyclotomicInteger x = root_power(d, i);
    for (int j = 1; j <= n; ++j)
      h[static_cast<size_t>(j)] = h[static_cast<size_t>(j)] + x * h[static_cast<size_t>(j - 1)];
  }
  return h[static_cast<size_t>(n)];
}

}  // namespace detail

/// h_{dk}(zeta^l, ..., zeta^d) = 1.
inline TheoremCheck check_zeta_hn(int d, int l, int k) {
  if (d < 1 || l < 1 || l > d || k < 1) throw Error("check_zeta_hn needs 1 <= l <= d, k >= 1");
  const CyclotomicInteger value = detail::h_at_roots(d, l, d * k);
  TheoremCheck out;
  out.id = TheoremId::ZETA_HN;
  out.applicable = true;
  out.passed = value == CyclotomicInteger::from_int(d, 1);
  out.lhs = "1";
  out.rhs = value.to_string();
  return out;
}

/// Gaussian binomial [m+n over n]_q at q = zeta_d equals
/// C(n/d + floor(m/d), floor(m/d)) for n a multiple of d.
inline TheoremCheck check_riener(int d, int m, int n) {
  if (d < 1 || m < 0 || n < 0 || n % d != 0) throw Error("check_riener needs d >= 1 and d | n");
  const CyclotomicInteger value = eval_unipoly_at(gaussian_binomial(m, n), root_power(d, 1));
  Int expected;
  mpz_bin_uiui(expected.get_mpz_t(), static_cast<unsigned long>(n / d + m / d),
               static_cast<unsigned long>(m / d));
  TheoremCheck out;
  out.id = TheoremId::RIENER;
  out.applicable = true;
  const std::optional<Int> as_int = value.as_integer();
  out.passed = as_int.has_value() && *as_int == expected;
  out.lhs = expected.get_str();
  out.rhs = value.to_string();
  return out;
}

struct TheoremTally {
  uint64_t applicable = 0;
  uint64_t passed = 0;
  uint64_t failed = 0;
};

struct Counterexample {
  uint64_t index = 0;  // enumeration index or draw number; not persisted
  std::vector<int> image1;
  TheoremId theorem = TheoremId::OTHER;
  long long sigma = 0;
  std::string eval;
  int d = 0;
};

struct OracleMismatch {
  uint64_t index = 0;
  std::vector<int> image1;
  std::string fast;
  std::string brute;
};

/// Aggregated result of a verification sweep. Everything except wall_ms is
/// deterministic for fixed parameters and independent of sharding.
struct VerifyReport {
  std::string mode;  // "exhaustive" or "random"
  int n = 0;
  int d = 0;
  uint64_t seed = 0;       // random mode only
  uint64_t count = 0;      // endofunctions checked
  uint64_t shard_begin = 0;
  uint64_t shard_end = 0;  // exhaustive mode: checked index range
  std::vector<std::pair<TheoremId, TheoremTally>> tallies;
  std::vector<std::pair<std::string, uint64_t>> tag_histogram;
  std::vector<Counterexample> counterexamples;
  uint64_t failed_total = 0;  // across all theorems, before truncation
  bool truncated = false;
  uint64_t oracle_checked = 0;
  std::vector<OracleMismatch> oracle_mismatches;
  double wall_ms = 0;
};

struct VerifyOptions {
  int jobs = 1;
  size_t max_counterexamples = 1000;
  /// Cross-check sigma_fast against sigma_bruteforce when C(n, n/d) is at
  /// most this cap (random sweeps only).
  unsigned long long oracle_cap = 100000000ull;
};

namespace detail {

constexpr size_t kNumTags = 7;
constexpr std::array<StructureTag, kNumTags> kAllTags = {
    StructureTag::Chain,  StructureTag::Cycle, StructureTag::Tree,
    StructureTag::Type1,  StructureTag::Type2, StructureTag::ProductOfTypes,
    StructureTag::Other};

struct SweepAccumulator {
  std::array<TheoremTally, kAllTheoremIds.size()> tallies{};
  std::array<uint64_t, kNumTags> tag_counts{};
  std::vector<Counterexample> cex;
  uint64_t oracle_checked = 0;
  std::vector<OracleMismatch> mismatches;
};

inline size_t id_index(TheoremId id) { return static_cast<size_t>(id); }
inline size_t tag_index(StructureTag tag) { return static_cast<size_t>(tag); }

inline void record(SweepAccumulator& acc, const TheoremCheck& check, uint64_t index,
                   const Endofunction& T, int d) {
  TheoremTally& tally = acc.tallies[id_index(check.id)];
  if (check.applicable) {
    ++tally.applicable;
    if (check.passed) {
      ++tally.passed;
    } else {
      ++tally.failed;
      Counterexample c;
      c.index = index;
      c.image1 = T.images1();
      c.theorem = check.id;
      c.sigma = std::stoll(check.lhs);
      c.eval = check.rhs;
      c.d = d;
      acc.cex.push_back(std::move(c));
    }
  }
}

inline void check_one(const Endofunction& T, int d, uint64_t index, bool run_oracle,
                      unsigned long long oracle_cap, SweepAccumulator& acc) {
  const FunctionalGraph g = decompose(T);
  const FlagCheckResult flag = check_flag_detail(g, d);
  ++acc.tag_counts[tag_index(flag.tag)];
  record(acc, flag.check, index, T, d);
  if (d == 2) {
    // Same sigma as the flag check; only g_T(-1) is new.
    const Int gval = invariant_gf(g).eval(-1);
    TheoremCheck d2;
    d2.id = TheoremId::D2_MAIN;
    d2.applicable = flag.sigma > 0;
    d2.passed = d2.applicable ? flag.sigma == gval : true;
    d2.lhs = flag.sigma.get_str();
    d2.rhs = gval.get_str();
    record(acc, d2, index, T, 2);
  }
  if (run_oracle) {
    ++acc.oracle_checked;
    const SplittingResult brute = sigma_bruteforce(T, d, false, oracle_cap);
    if (brute.sigma != flag.sigma) {
      OracleMismatch m;
      m.index = index;
      m.image1 = T.images1();
      m.fast = flag.sigma.get_str();
      m.brute = brute.sigma.get_str();
      acc.mismatches.push_back(std::move(m));
    }
  }
}

inline void merge_into(VerifyReport& report, std::vector<SweepAccumulator>& parts,
                       size_t max_cex) {
  std::array<TheoremTally, kAllTheoremIds.size()> tallies{};
  std::array<uint64_t, kNumTags> tags{};
  for (SweepAccumulator& acc : parts) {
    for (size_t i = 0; i < tallies.size(); ++i) {
      tallies[i].applicable += acc.tallies[i].applicable;
      tallies[i].passed += acc.tallies[i].passed;
      tallies[i].failed += acc.tallies[i].failed;
    }
    for (size_t i = 0; i < tags.size(); ++i) tags[i] += acc.tag_counts[i];
    report.oracle_checked += acc.oracle_checked;
    for (auto& m : acc.mismatches) report.oracle_mismatches.push_back(std::move(m));
    for (auto& c : acc.cex) {
      ++report.failed_total;
      if (report.counterexamples.size() < max_cex)
        report.counterexamples.push_back(std::move(c));
      else
        report.truncated = true;
    }
  }
  // Workers cover contiguous ascending index ranges, so per-part vectors are
  // already sorted and concatenation preserves index order.
  for (TheoremId id : kAllTheoremIds)
    report.tallies.emplace_back(id, tallies[id_index(id)]);
  for (StructureTag tag : kAllTags)
    report.tag_histogram.emplace_back(to_string(tag), tags[tag_index(tag)]);
}

template <typename Body>
inline void run_sharded(uint64_t begin, uint64_t end, int jobs,
                        std::vector<SweepAccumulator>& parts, const Body& body) {
  const uint64_t total = end - begin;
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::min<uint64_t>(
                                                          total == 0 ? 1 : total, 1024))));
  parts.resize(static_cast<size_t>(workers));
  if (workers == 1) {
    body(begin, end, parts[0]);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  const uint64_t chunk = total / static_cast<uint64_t>(workers);
  const uint64_t rem = total % static_cast<uint64_t>(workers);
  uint64_t lo = begin;
  for (int w = 0; w < workers; ++w) {
    const uint64_t hi = lo + chunk + (static_cast<uint64_t>(w) < rem ? 1 : 0);
    threads.emplace_back([&, w, lo, hi]() {
      try {
        body(lo, hi, parts[static_cast<size_t>(w)]);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
    lo = hi;
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Run the d-flag check (and the d = 2 check when d == 2) on every
/// endofunction whose enumeration index lies in the shard (default: all n^n).
inline VerifyReport exhaustive_verify(int n, int d,
                                      std::optional<std::pair<uint64_t, uint64_t>> shard = {},
                                      VerifyOptions options = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const uint64_t total = endofunction_count(n);
  detail::check_divides(d, n);
  uint64_t begin = 0, end = total;
  if (shard) {
    begin = shard->first;
    end = shard->second;
    if (begin > end || end > total) throw Error("shard range out of bounds");
  }

  VerifyReport report;
  report.mode = "exhaustive";
  report.n = n;
  report.d = d;
  report.count = end - begin;
  report.shard_begin = begin;
  report.shard_end = end;

  std::vector<detail::SweepAccumulator> parts;
  detail::run_sharded(begin, end, options.jobs, parts,
                      [&](uint64_t lo, uint64_t hi, detail::SweepAccumulator& acc) {
                        for (EndofunctionCursor cur(n, lo, hi); !cur.done(); cur.advance())
                          detail::check_one(cur.value(), d, cur.index(), false, 0, acc);
                      });
  detail::merge_into(report, parts, options.max_counterexamples);
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

/// Same checks on seeded-uniform endofunctions, plus the sigma oracle
/// cross-check whenever C(n, n/d) is under the cap. The whole batch is drawn
/// from one mt19937_64 stream before sharding, so results are independent of
/// the job count.
inline VerifyReport random_verify(int n, int d, uint64_t count, uint64_t seed,
                                  VerifyOptions options = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::check_divides(d, n);

  std::vector<Endofunction> batch;
  batch.reserve(count);
  std::mt19937_64 rng(seed);
  for (uint64_t i = 0; i < count; ++i) batch.push_back(random_endofunction_from(rng, n));

  const bool run_oracle =
      n <= 64 &&
      detail::binomial_capped(n, n / d, options.oracle_cap) <= options.oracle_cap;

  VerifyReport report;
  report.mode = "random";
  report.n = n;
  report.d = d;
  report.seed = seed;
  report.count = count;

  std::vector<detail::SweepAccumulator> parts;
  detail::run_sharded(0, count, options.jobs, parts,
                      [&](uint64_t lo, uint64_t hi, detail::SweepAccumulator& acc) {
                        for (uint64_t i = lo; i < hi; ++i)
                          detail::check_one(batch[static_cast<size_t>(i)], d, i, run_oracle,
                                            options.oracle_cap, acc);
                      });
  detail::merge_into(report, parts, options.max_counterexamples);
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

/// One JSONL line per counterexample, in enumeration order.
inline std::string counterexamples_jsonl(const VerifyReport& report) {
  std::string out;
  for (const Counterexample& c : report.counterexamples) {
    nlohmann::ordered_json line;
    line["image"] = c.image1;
    line["theorem"] = to_string(c.theorem);
    line["sigma"] = c.sigma;
    line["eval"] = c.eval;
    line["d"] = c.d;
    out += line.dump();
    out += '\n';
  }
  return out;
}

/// Report JSON; deterministic except for wall_time_ms.
inline nlohmann::ordered_json report_to_json(const VerifyReport& report,
                                             const std::string& counterexamples_path) {
  nlohmann::ordered_json family;
  family["mode"] = report.mode;
  family["n"] = report.n;
  family["d"] = report.d;
  if (report.mode == "random") {
    family["seed"] = report.seed;
  } else {
    family["shard"] = {report.shard_begin, report.shard_end};
  }
  family["count"] = report.count;

  nlohmann::ordered_json tallies;
  for (const auto& [id, tally] : report.tallies) {
    tallies[to_string(id)] = {{"applicable", tally.applicable},
                              {"passed", tally.passed},
                              {"failed", tally.failed}};
  }

  nlohmann::ordered_json histogram;
  for (const auto& [tag, count] : report.tag_histogram) histogram[tag] = count;

  nlohmann::ordered_json oracle;
  oracle["checked"] = report.oracle_checked;
  oracle["mismatch_count"] = report.oracle_mismatches.size();
  nlohmann::ordered_json mismatches = nlohmann::ordered_json::array();
  for (const OracleMismatch& m : report.oracle_mismatches) {
    mismatches.push_back({{"image", m.image1}, {"fast", m.fast}, {"brute", m.brute}});
  }
  oracle["mismatches"] = mismatches;

  nlohmann::ordered_json out;
  out["family"] = family;
  out["tallies"] = tallies;
  out["counterexamples_path"] =
      counterexamples_path.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(counterexamples_path);
  out["failed_total"] = report.failed_total;
  out["counterexamples_truncated"] = report.truncated;
  out["tag_histogram"] = histogram;
  out["oracle"] = oracle;
  out["wall_time_ms"] = report.wall_ms;
  return out;
}

}  // namespace splitcount
