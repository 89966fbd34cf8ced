#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "splitcount/classify.hpp"
#include "splitcount/cyclotomic.hpp"
#include "splitcount/endofunction.hpp"
#include "splitcount/genfun.hpp"
#include "splitcount/splitting.hpp"
#include "splitcount/verify.hpp"

namespace splitcount::cli {

// Exit codes: 0 success, 1 internal error (e.g. oracle disagreement),
// 2 input error, 3 cap/overflow guard, 4 theorem failure found by verify.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitTheoremFailure = 4;

namespace detail {

using nlohmann::ordered_json;

/// "2 3 4 4" parses directly; "@maps.txt" reads one endofunction per line.
inline std::vector<Endofunction> load_inputs(const std::string& input) {
  std::vector<Endofunction> result;
  if (!input.empty() && input[0] == '@') {
    std::ifstream file(input.substr(1));
    if (!file) throw ParseError("cannot open input file: " + input.substr(1));
    std::string line;
    while (std::getline(file, line)) {
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) result.push_back(parse_endofunction(line));
    }
    if (result.empty()) throw EmptyInput();
  } else {
    result.push_back(parse_endofunction(input));
  }
  return result;
}

inline ordered_json unipoly_coeff_map(const UniPoly& p) {
  ordered_json out = ordered_json::object();
  for (int i = 0; i <= p.degree(); ++i)
    if (p.coeff(i) != 0) out[std::to_string(i)] = p.coeff(i).get_str();
  return out;
}

inline ordered_json multipoly_coeff_map(const MultiPoly& p) {
  ordered_json out = ordered_json::object();
  for (size_t t = 0; t < p.nterms(); ++t) {
    auto e = p.term_exps(t);
    std::string key;
    for (size_t v = 0; v < e.size(); ++v) {
      if (v) key += ',';
      key += std::to_string(e[v]);
    }
    out[key] = p.term_coeff(t).get_str();
  }
  return out;
}

inline ordered_json decomposition_json(const FunctionalGraph& g) {
  ordered_json comps = ordered_json::array();
  for (const Component& comp : g.components) {
    ordered_json trees = ordered_json::array();
    for (const AttachedTree& tree : comp.trees)
      trees.push_back({{"root", tree.root + 1}, {"anchor", tree.anchor + 1}, {"size", tree.size}});
    std::vector<int> cycle1;
    for (int c : comp.cycle) cycle1.push_back(c + 1);
    comps.push_back({{"cycle", cycle1},
                     {"cycle_len", comp.cycle_len()},
                     {"size", comp.size},
                     {"trees", trees}});
  }
  return {{"components", comps}};
}

inline ordered_json classification_json(const StructureClass& cls) {
  ordered_json kinds = ordered_json::array();
  for (ComponentKind k : cls.component_kinds) kinds.push_back(to_string(k));
  ordered_json out;
  out["tag"] = to_string(cls.tag);
  out["d"] = cls.d;
  out["component_kinds"] = kinds;
  out["type2_tree_root"] =
      cls.type2_tree_root ? ordered_json(*cls.type2_tree_root) : ordered_json();
  return out;
}

inline std::string ordinal(int d) {
  if (d % 100 / 10 == 1) return std::to_string(d) + "th";
  switch (d % 10) {
    case 1: return std::to_string(d) + "st";
    case 2: return std::to_string(d) + "nd";
    case 3: return std::to_string(d) + "rd";
    default: return std::to_string(d) + "th";
  }
}

struct AnalyzeSettings {
  std::string input;
  int d = 2;
  bool json = false;
};

inline void run_analyze(const AnalyzeSettings& s, std::ostream& out) {
  for (const Endofunction& T : load_inputs(s.input)) {
    const FunctionalGraph g = decompose(T);
    const StructureClass cls = classify(g, s.d);
    const UniPoly inv = invariant_gf(g);
    const MultiPoly flag = flag_gf(g, s.d);
    const CyclotomicInteger value = eval_at_roots(flag, s.d, 1);
    const bool divides = (T.n() % s.d == 0);
    std::optional<SplittingResult> sigma;
    std::optional<TheoremCheck> flag_check;
    if (divides) {
      sigma = sigma_fast(g, s.d);
      flag_check = splitcount::detail::check_flag_detail(g, s.d).check;
    }
    std::optional<TheoremCheck> d2_check;
    if (T.n() % 2 == 0) d2_check = check_d2(T);

    if (s.json) {
      ordered_json j;
      j["input"] = T.to_string();
      j["n"] = T.n();
      j["d"] = s.d;
      j["decomposition"] = decomposition_json(g);
      j["classification"] = classification_json(cls);
      j["invariant_gf"] = inv.to_string();
      j["flag_gf"] = flag.to_string();
      j["eval_at_roots"] = {{"value", value.to_string()},
                            {"integer", value.as_integer()
                                            ? ordered_json(value.as_integer()->get_str())
                                            : ordered_json()}};
      j["sigma"] = sigma ? ordered_json{{"method", "fast"}, {"value", sigma->sigma.get_str()}}
                         : ordered_json();
      ordered_json checks = ordered_json::array();
      auto add_check = [&](const TheoremCheck& c) {
        checks.push_back({{"theorem", to_string(c.id)},
                          {"applicable", c.applicable},
                          {"passed", c.passed},
                          {"sigma", c.lhs},
                          {"eval", c.rhs}});
      };
      if (flag_check) add_check(*flag_check);
      if (d2_check) add_check(*d2_check);
      j["theorem_checks"] = checks;
      out << j.dump() << "\n";
    } else {
      out << "input: " << T.to_string() << "\n";
      out << "n: " << T.n() << "\n";
      out << "decomposition: " << g.components.size() << " component"
          << (g.components.size() == 1 ? "" : "s") << "\n";
      for (size_t i = 0; i < g.components.size(); ++i) {
        const Component& comp = g.components[i];
        out << "  component " << i + 1 << ": cycle (";
        for (size_t k = 0; k < comp.cycle.size(); ++k)
          out << (k ? " " : "") << comp.cycle[k] + 1;
        out << "), length " << comp.cycle_len() << ", " << comp.trees.size()
            << " attached tree" << (comp.trees.size() == 1 ? "" : "s") << "\n";
        for (const AttachedTree& tree : comp.trees)
          out << "    tree root " << tree.root + 1 << " -> anchor " << tree.anchor + 1
              << " (size " << tree.size << ")\n";
      }
      out << "classification (d=" << s.d << "): " << to_string(cls.tag) << "\n";
      out << "invariant gf: " << inv.to_string() << "\n";
      out << "flag gf (d=" << s.d << "): " << flag.to_string() << "\n";
      out << "eval at (z, z^2, ..., z^" << s.d << "), z = primitive " << ordinal(s.d)
          << " root of unity: " << value.to_string() << "\n";
      if (sigma)
        out << "sigma (fast): " << sigma->sigma.get_str() << "\n";
      else
        out << "sigma: undefined (d does not divide n)\n";
      auto print_check = [&](const TheoremCheck& c) {
        out << "theorem " << to_string(c.id) << ": "
            << (c.applicable ? (c.passed ? "passed" : "FAILED") : "not applicable; recorded")
            << " (sigma=" << c.lhs << ", eval=" << c.rhs << ")\n";
      };
      if (flag_check) print_check(*flag_check);
      if (d2_check) print_check(*d2_check);
      out << "\n";
    }
  }
}

struct GfSettings {
  std::string input;
  int d = 2;
  bool json = false;
};

inline void run_gf(const GfSettings& s, std::ostream& out) {
  for (const Endofunction& T : load_inputs(s.input)) {
    const FunctionalGraph g = decompose(T);
    const UniPoly inv = invariant_gf(g);
    const MultiPoly flag = flag_gf(g, s.d);
    if (s.json) {
      ordered_json j;
      j["input"] = T.to_string();
      j["n"] = T.n();
      j["d"] = s.d;
      j["invariant_gf"] = {{"text", inv.to_string()}, {"coeffs", unipoly_coeff_map(inv)}};
      j["flag_gf"] = {{"text", flag.to_string()}, {"coeffs", multipoly_coeff_map(flag)}};
      out << j.dump() << "\n";
    } else {
      out << "invariant gf: " << inv.to_string() << "\n";
      out << "flag gf (d=" << s.d << "): " << flag.to_string() << "\n";
    }
  }
}

struct SigmaSettings {
  std::string input;
  int d = 2;
  std::string method = "fast";
  bool witnesses = false;
  unsigned long long cap = 100000000ull;
  bool json = false;
};

inline int run_sigma(const SigmaSettings& s, std::ostream& out, std::ostream& err) {
  for (const Endofunction& T : load_inputs(s.input)) {
    std::optional<SplittingResult> fast, brute;
    if (s.method == "fast" || s.method == "both")
      fast = sigma_fast(T, s.d, s.witnesses);
    if (s.method == "brute" || s.method == "both")
      brute = sigma_bruteforce(T, s.d, s.witnesses, s.cap);
    if (fast && brute && fast->sigma != brute->sigma) {
      err << "error: sigma methods disagree on " << T.to_string() << ": fast="
          << fast->sigma.get_str() << " brute=" << brute->sigma.get_str() << "\n";
      return kExitInternal;
    }
    auto witness_json = [](const SplittingResult& r) {
      ordered_json w = ordered_json::array();
      if (r.witnesses)
        for (const auto& nodes : *r.witnesses) w.push_back(nodes);
      return w;
    };
    if (s.json) {
      ordered_json j;
      j["input"] = T.to_string();
      j["d"] = s.d;
      if (fast) j["fast"] = fast->sigma.get_str();
      if (brute) j["brute"] = brute->sigma.get_str();
      if (s.witnesses) j["witnesses"] = witness_json(fast ? *fast : *brute);
      out << j.dump() << "\n";
    } else {
      if (fast) out << "sigma (fast): " << fast->sigma.get_str() << "\n";
      if (brute) out << "sigma (brute): " << brute->sigma.get_str() << "\n";
      if (s.witnesses) {
        const SplittingResult& r = fast ? *fast : *brute;
        if (r.witnesses)
          for (const auto& nodes : *r.witnesses) {
            out << "witness: {";
            for (size_t i = 0; i < nodes.size(); ++i) out << (i ? "," : "") << nodes[i];
            out << "}\n";
          }
      }
    }
  }
  return kExitOk;
}

struct EvalSettings {
  std::string input;
  int d = 2;
  std::optional<long> at;
  bool json = false;
};

inline void run_eval(const EvalSettings& s, std::ostream& out) {
  for (const Endofunction& T : load_inputs(s.input)) {
    const FunctionalGraph g = decompose(T);
    if (s.at) {
      const Int value = invariant_gf(g).eval(Int(*s.at));
      if (s.json) {
        ordered_json j;
        j["input"] = T.to_string();
        j["at"] = *s.at;
        j["value"] = value.get_str();
        out << j.dump() << "\n";
      } else {
        out << "g_T(" << *s.at << ") = " << value.get_str() << "\n";
      }
      continue;
    }
    const CyclotomicInteger value = eval_at_roots(flag_gf(g, s.d), s.d, 1);
    const std::optional<Int> as_int = value.as_integer();
    if (s.json) {
      ordered_json j;
      j["input"] = T.to_string();
      j["d"] = s.d;
      j["value"] = value.to_string();
      j["integer"] = as_int ? ordered_json(as_int->get_str()) : ordered_json();
      out << j.dump() << "\n";
    } else {
      out << "flag gf at (z, ..., z^" << s.d << "): " << value.to_string();
      if (as_int)
        out << " (integer " << as_int->get_str() << ")";
      else
        out << " (not an integer)";
      out << "\n";
    }
  }
}

struct VerifySettings {
  bool exhaustive = true;
  int n = 4;
  int d = 2;
  uint64_t count = 1000;
  uint64_t seed = 0;
  std::optional<uint64_t> shard_begin, shard_end;
  int jobs = 1;
  unsigned long long cap = 100000000ull;
  size_t max_cex = 1000;
  std::string out_path;
  std::string cex_path;
  bool json = false;
};

inline int run_verify(const VerifySettings& s, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.jobs = s.jobs;
  options.oracle_cap = s.cap;
  options.max_counterexamples = s.max_cex;

  VerifyReport report;
  if (s.exhaustive) {
    std::optional<std::pair<uint64_t, uint64_t>> shard;
    if (s.shard_begin || s.shard_end) {
      const uint64_t total = endofunction_count(s.n);
      shard = {s.shard_begin.value_or(0), s.shard_end.value_or(total)};
    }
    report = exhaustive_verify(s.n, s.d, shard, options);
  } else {
    report = random_verify(s.n, s.d, s.count, s.seed, options);
  }

  std::string cex_path = s.cex_path;
  if (cex_path.empty() && !s.out_path.empty()) {
    cex_path = s.out_path;
    const size_t dot = cex_path.rfind('.');
    if (dot != std::string::npos) cex_path.resize(dot);
    cex_path += ".counterexamples.jsonl";
  }
  if (!cex_path.empty()) {
    std::ofstream f(cex_path, std::ios::binary);
    if (!f) throw Error("cannot write " + cex_path);
    f << counterexamples_jsonl(report);
  }

  const ordered_json j = report_to_json(report, cex_path);
  if (!s.out_path.empty()) {
    std::ofstream f(s.out_path, std::ios::binary);
    if (!f) throw Error("cannot write " + s.out_path);
    f << j.dump(2) << "\n";
  }
  if (s.json || s.out_path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    out << "checked " << report.count << " endofunctions (n=" << report.n
        << ", d=" << report.d << ", " << report.mode << ")\n";
    for (const auto& [id, tally] : report.tallies) {
      if (tally.applicable == 0 && tally.failed == 0) continue;
      out << "  " << to_string(id) << ": applicable=" << tally.applicable
          << " passed=" << tally.passed << " failed=" << tally.failed << "\n";
    }
    out << "tag histogram:";
    for (const auto& [tag, cnt] : report.tag_histogram)
      if (cnt) out << " " << tag << "=" << cnt;
    out << "\n";
    if (report.oracle_checked)
      out << "oracle cross-checks: " << report.oracle_checked
          << ", mismatches: " << report.oracle_mismatches.size() << "\n";
    out << "report: " << (s.out_path.empty() ? "(stdout)" : s.out_path) << "\n";
    if (!cex_path.empty()) out << "counterexamples: " << cex_path << "\n";
    out << "wall time: " << report.wall_ms << " ms\n";
  }

  if (!report.oracle_mismatches.empty()) {
    err << "error: sigma oracle mismatch detected (" << report.oracle_mismatches.size()
        << " cases); see report\n";
    return kExitInternal;
  }
  if (report.failed_total > 0) {
    err << "theorem failures: " << report.failed_total << "\n";
    return kExitTheoremFailure;
  }
  return kExitOk;
}

}  // namespace detail

/// Entry point shared by the binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact counting of d-splitting subsets of endofunctions"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  detail::AnalyzeSettings analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "decompose, classify, and check one map");
  cmd_analyze->add_option("input", analyze.input, "images, e.g. \"2 3 4 4\", or @file")->required();
  cmd_analyze->add_option("-d", analyze.d, "flag order")->check(CLI::PositiveNumber)
      ->capture_default_str();

  detail::GfSettings gf;
  auto* cmd_gf = app.add_subcommand("gf", "print invariant and flag generating functions");
  cmd_gf->add_option("input", gf.input, "images or @file")->required();
  cmd_gf->add_option("-d", gf.d, "flag order")->check(CLI::PositiveNumber)->capture_default_str();

  detail::SigmaSettings sigma;
  auto* cmd_sigma = app.add_subcommand("sigma", "count d-splitting subsets");
  cmd_sigma->add_option("input", sigma.input, "images or @file")->required();
  cmd_sigma->add_option("-d", sigma.d, "order")->check(CLI::PositiveNumber)->capture_default_str();
  cmd_sigma->add_option("--method", sigma.method, "fast | brute | both")
      ->check(CLI::IsMember({"fast", "brute", "both"}))
      ->capture_default_str();
  cmd_sigma->add_flag("--witnesses", sigma.witnesses, "list the splitting subsets");
  cmd_sigma->add_option("--cap", sigma.cap, "brute-force subset cap")
      ->envname("SPLITCOUNT_CAP")
      ->capture_default_str();

  detail::EvalSettings eval;
  auto* cmd_eval = app.add_subcommand("eval", "evaluate generating functions");
  cmd_eval->add_option("input", eval.input, "images or @file")->required();
  cmd_eval->add_option("-d", eval.d, "order for the root-of-unity evaluation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  long at_value = 0;
  auto* at_opt = cmd_eval->add_option("--at", at_value, "evaluate the invariant gf at an integer");

  detail::VerifySettings verify;
  auto* cmd_verify = app.add_subcommand("verify", "sweep families of endofunctions");
  cmd_verify->require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-n", verify.n, "domain size")->required()->check(CLI::PositiveNumber);
    sub->add_option("-d", verify.d, "order")->required()->check(CLI::PositiveNumber);
    sub->add_option("--jobs", verify.jobs, "worker threads")->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--out", verify.out_path, "report JSON path (default: stdout)");
    sub->add_option("--cex-out", verify.cex_path, "counterexample JSONL path");
    sub->add_option("--max-cex", verify.max_cex, "truncate counterexample list")
        ->capture_default_str();
    sub->add_option("--cap", verify.cap, "sigma oracle cross-check cap")
        ->envname("SPLITCOUNT_CAP")
        ->capture_default_str();
  };
  auto* cmd_exhaustive = cmd_verify->add_subcommand("exhaustive", "all n^n endofunctions");
  add_common(cmd_exhaustive);
  uint64_t shard_begin = 0, shard_end = 0;
  auto* opt_sb = cmd_exhaustive->add_option("--shard-begin", shard_begin, "first index");
  auto* opt_se = cmd_exhaustive->add_option("--shard-end", shard_end, "one past last index");
  auto* cmd_random = cmd_verify->add_subcommand("random", "seeded uniform sample");
  add_common(cmd_random);
  cmd_random->add_option("--count", verify.count, "number of draws")->capture_default_str();
  cmd_random->add_option("--seed", verify.seed, "PRNG seed")->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("splitcount");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  const bool json = (format == "json");
  try {
    if (*cmd_analyze) {
      analyze.json = json;
      detail::run_analyze(analyze, out);
      return kExitOk;
    }
    if (*cmd_gf) {
      gf.json = json;
      detail::run_gf(gf, out);
      return kExitOk;
    }
    if (*cmd_sigma) {
      sigma.json = json;
      return detail::run_sigma(sigma, out, err);
    }
    if (*cmd_eval) {
      eval.json = json;
      if (at_opt->count() > 0) eval.at = at_value;
      detail::run_eval(eval, out);
      return kExitOk;
    }
    if (*cmd_verify) {
      verify.json = json;
      verify.exhaustive = cmd_exhaustive->parsed();
      if (opt_sb->count()) verify.shard_begin = shard_begin;
      if (opt_se->count()) verify.shard_end = shard_end;
      return detail::run_verify(verify, out, err);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvalidD& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const OddN& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const OverflowGuard& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}

}  // namespace splitcount::cli
