#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "qk/digraph.hpp"
#include "qk/errors.hpp"
#include "qk/generators.hpp"
#include "qk/io.hpp"
#include "qk/quasi_kernel.hpp"
#include "qk/recognition.hpp"
#include "qk/small_qk.hpp"
#include "qk/split.hpp"

namespace qk {

using ordered_json = nlohmann::ordered_json;

enum class ScanMode { exhaustive, sampled };
enum class Family { all, sink_free, tournament, semicomplete, one_way_split, indeg_le_3, dag_partitioned };
enum class Check { conjecture, thm1, thm2, thm3_contrapositive, thm4, thm5, thm6, lemma1, jm, oracle_cross };

inline constexpr std::string_view kCheckNames[] = {"conjecture", "thm1", "thm2",   "thm3_contrapositive", "thm4",
                                                   "thm5",       "thm6", "lemma1", "jm",                  "oracle_cross"};
inline constexpr std::string_view kFamilyNames[] = {"all",           "sink_free",  "tournament",     "semicomplete",
                                                    "one_way_split", "indeg_le_3", "dag_partitioned"};

inline std::string_view to_string(Check c) { return kCheckNames[static_cast<int>(c)]; }
inline std::string_view to_string(Family f) { return kFamilyNames[static_cast<int>(f)]; }
inline std::string_view to_string(ScanMode m) { return m == ScanMode::exhaustive ? "exhaustive" : "sampled"; }

inline Check parse_check(std::string_view s) {
  for (int i = 0; i < static_cast<int>(std::size(kCheckNames)); ++i)
    if (kCheckNames[i] == s) return static_cast<Check>(i);
  throw invalid_input("unknown check '" + std::string(s) + "'");
}
inline Family parse_family(std::string_view s) {
  for (int i = 0; i < static_cast<int>(std::size(kFamilyNames)); ++i)
    if (kFamilyNames[i] == s) return static_cast<Family>(i);
  throw invalid_input("unknown family '" + std::string(s) + "'");
}

struct ScanConfig {
  ScanMode mode = ScanMode::sampled;
  std::size_t n_min = 1;
  std::size_t n_max = 5;
  std::uint64_t sample_count = 100;
  double p = 0.3;
  Family family = Family::all;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<Check> checks = {Check::conjecture};
  // Exact minimum quasi-kernels are only computed up to this order.
  std::size_t exact_limit = 14;
  // Per-instance entries kept in the report (lowest indices first).
  std::size_t max_recorded_instances = 1000;
};

struct CheckTally {
  std::uint64_t pass = 0;
  std::uint64_t fail = 0;
  std::uint64_t skip = 0;
};

struct ScanReport {
  ScanConfig config;
  std::uint64_t instances = 0;
  std::map<Check, CheckTally> tallies;
  std::uint64_t witnesses = 0;  // forbidden patterns returned by thm1/thm2
  double max_ratio = 0.0;       // max over checked instances of minQK / floor(n/2)
  std::vector<ordered_json> recorded;
  std::vector<ordered_json> counterexamples;
  double wall_time_s = 0.0;

  bool clean() const { return counterexamples.empty(); }
  ordered_json to_json(bool include_wall_time = true) const;
};

inline std::uint64_t digraph_hash(const Digraph& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_digraph(d)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline ordered_json to_json(const VertexSet& s) { return s.members(); }

inline ordered_json to_json(const ForbiddenWitness& w) {
  ordered_json j;
  j["kind"] = std::string(to_string(w.kind));
  j["center"] = w.center;
  j["tails"] = w.tails;
  if (w.extra_arc) j["extra_arc"] = {w.extra_arc->tail, w.extra_arc->head};
  return j;
}

namespace detail {

enum class Outcome { pass, fail, skip };

struct CheckResult {
  Outcome outcome = Outcome::skip;
  ordered_json certificate;  // set on fail, sometimes on pass
};

struct ScanInstance {
  Digraph graph;
  std::optional<OneWaySplitPartition> split;
  std::optional<std::pair<VertexSet, VertexSet>> parts;
};

/// Evaluates the configured checks on one instance; caches the exact
/// minimum quasi-kernel between checks.
class InstanceEvaluator {
 public:
  InstanceEvaluator(const ScanConfig& cfg, const ScanInstance& inst) : cfg_(cfg), inst_(inst), d_(inst.graph) {}

  CheckResult run(Check c) {
    try {
      switch (c) {
        case Check::conjecture: return conjecture();
        case Check::thm1: return forbidden_algo(false);
        case Check::thm2: return forbidden_algo(true);
        case Check::thm3_contrapositive: return thm3();
        case Check::thm4: return thm4();
        case Check::thm5: return thm5();
        case Check::thm6: return thm6();
        case Check::lemma1: return lemma1();
        case Check::jm: return jm();
        case Check::oracle_cross: return oracle_cross();
      }
    } catch (const std::exception& e) {
      return fail({{"error", e.what()}});
    }
    return {};
  }

  std::optional<std::size_t> min_size() const {
    return min_qk_ ? std::optional<std::size_t>(min_qk_->size) : std::nullopt;
  }
  bool produced_witness() const { return witness_; }
  const ordered_json& details() const { return details_; }

 private:
  static CheckResult pass() { return {Outcome::pass, {}}; }
  static CheckResult skip() { return {Outcome::skip, {}}; }
  static CheckResult fail(ordered_json cert) { return {Outcome::fail, std::move(cert)}; }
  static CheckResult verdict(bool ok, ordered_json cert) { return ok ? pass() : fail(std::move(cert)); }

  std::size_t half() const { return d_.order() / 2; }
  bool sink_free() const { return d_.order() > 0 && is_sink_free(d_); }

  const MinQuasiKernel* min_qk() {
    if (d_.order() > cfg_.exact_limit) return nullptr;
    if (!min_qk_) min_qk_ = minimum_quasi_kernel_exact(d_);
    return &*min_qk_;
  }

  CheckResult conjecture() {
    if (!sink_free()) return skip();
    const auto* mq = min_qk();
    if (!mq) return skip();
    return verdict(mq->size <= half(), {{"minimum_quasi_kernel", to_json(mq->set)}});
  }

  CheckResult forbidden_algo(bool k41) {
    if (!sink_free()) return skip();
    const SmallQkOutcome out = k41 ? small_qk_k41_free(d_) : small_qk_anti_claw_free(d_);
    if (out.found_quasi_kernel()) {
      const VertexSet& q = out.quasi_kernel();
      return verdict(is_quasi_kernel(d_, q) && is_small(d_, q), {{"quasi_kernel", to_json(q)}});
    }
    witness_ = true;
    const ForbiddenWitness& w = out.witness();
    details_[k41 ? "thm2_witness" : "thm1_witness"] = to_json(w);
    const bool pattern_exists = k41 ? (find_forbidden(d_, ForbiddenKind::k41) || find_forbidden(d_, ForbiddenKind::k41_plus))
                                    : find_forbidden(d_, ForbiddenKind::anti_claw).has_value();
    return verdict(verify_witness(d_, w) && pattern_exists, {{"witness", to_json(w)}});
  }

  CheckResult thm3() {
    if (!sink_free()) return skip();
    if (theorem3_predicate(d_)) return skip();
    const auto* mq = min_qk();
    if (!mq) return skip();
    return verdict(mq->size <= half(), {{"minimum_quasi_kernel", to_json(mq->set)}});
  }

  CheckResult thm4() {
    if (!sink_free() || d_.order() > kDefaultKernelBudget) return skip();
    const auto kernel = kernel_exact(d_);
    if (!kernel) return skip();
    if (!is_good_quasi_kernel(d_, *kernel)) return fail({{"kernel", to_json(*kernel)}, {"reason", "kernel not good"}});
    const VertexSet q = small_qk_good(d_, *kernel);
    return verdict(is_quasi_kernel(d_, q) && is_small(d_, q), {{"quasi_kernel", to_json(q)}});
  }

  CheckResult thm5() {
    if (!sink_free() || d_.order() < 3) return skip();
    auto part = inst_.split ? inst_.split : recognize_one_way_split(d_);
    if (!part) return skip();
    const VertexSet q = split_small_qk(d_, *part);
    return verdict(is_quasi_kernel(d_, q) && static_cast<double>(q.size()) <= split_bound(d_.order()) + kSplitBoundSlack,
                   {{"quasi_kernel", to_json(q)}});
  }

  CheckResult thm6() {
    const VertexSet s = sinks(d_);
    const VertexSet into_s = in_neighborhood(d_, s);
    const VertexSet rest = (s | into_s).complement();
    VertexSet v1 = rest, v2 = d_.empty_set();
    if (inst_.parts) {
      v1 = inst_.parts->first & rest;
      v2 = inst_.parts->second & rest;
    } else if (!is_dag(induced(d_, rest).graph)) {
      return skip();
    }
    const VertexSet q = small_qk_partitioned(d_, v1, v2);
    const std::size_t bound2 = d_.order() + s.size() - into_s.size();
    return verdict(is_quasi_kernel(d_, q) && 2 * q.size() <= bound2, {{"quasi_kernel", to_json(q)}});
  }

  CheckResult lemma1() {
    if (!sink_free()) return skip();
    const VertexSet q = quasi_kernel_cl(d_);
    const auto sub = induced(d_, second_in_neighborhood(d_, q));
    if (!is_dag(sub.graph) && sub.graph.order() > kDefaultKernelBudget) return skip();
    if (!kernel_of(sub.graph)) return skip();
    const VertexSet r = small_qk_via_kernel_of_n2(d_, q);
    return verdict(is_quasi_kernel(d_, r) && is_small(d_, r), {{"quasi_kernel", to_json(r)}});
  }

  CheckResult jm() {
    const VertexSet q = quasi_kernel_cl(d_);
    const auto r = jacob_meyniel_refine_detailed(d_, q);
    const bool ok = is_quasi_kernel(d_, r.quasi_kernel) && !r.quasi_kernel.intersects(in_neighborhood(d_, r.q_tilde));
    return verdict(ok, {{"start", to_json(q)}, {"refined", to_json(r.quasi_kernel)}});
  }

  CheckResult oracle_cross() {
    const auto* mq = min_qk();
    if (!mq) return skip();
    const VertexSet cl = quasi_kernel_cl(d_);
    if (mq->size > cl.size() || !is_quasi_kernel(d_, mq->set))
      return fail({{"minimum", to_json(mq->set)}, {"chvatal_lovasz", to_json(cl)}});
    if (sink_free()) {
      auto part = inst_.split ? inst_.split : recognize_one_way_split(d_);
      if (part) {
        const auto split = split_min_qk_exact(d_, *part);
        if (split.size != mq->size) return fail({{"minimum", to_json(mq->set)}, {"split_exact", to_json(split.set)}});
      }
    }
    if (d_.order() <= kDefaultKernelBudget && is_dag(d_)) {
      const VertexSet k = kernel_dag(d_);
      const auto e = kernel_exact(d_);
      if (!e || !(*e == k)) return fail({{"kernel_dag", to_json(k)}});
    }
    return pass();
  }

  const ScanConfig& cfg_;
  const ScanInstance& inst_;
  const Digraph& d_;
  std::optional<MinQuasiKernel> min_qk_;
  bool witness_ = false;
  ordered_json details_ = ordered_json::object();
};

struct ChunkResult {
  std::uint64_t instances = 0;
  std::map<Check, CheckTally> tallies;
  std::uint64_t witnesses = 0;
  double max_ratio = 0.0;
  std::vector<ordered_json> recorded;
  std::vector<ordered_json> counterexamples;
};

inline bool family_filter(Family f, const Digraph& d) {
  switch (f) {
    case Family::all: return true;
    case Family::sink_free: return is_sink_free(d);
    case Family::tournament: return is_tournament(d);
    case Family::semicomplete: return is_semicomplete(d);
    case Family::one_way_split: return is_sink_free(d) && recognize_one_way_split(d).has_value();
    case Family::indeg_le_3:
      if (!is_sink_free(d)) return false;
      for (Vertex v = 0; v < d.order(); ++v)
        if (d.in_degree(v) > 3) return false;
      return true;
    case Family::dag_partitioned: break;
  }
  throw invalid_input("family dag_partitioned is only available in sampled mode");
}

inline ScanInstance sample_instance(const ScanConfig& cfg, std::uint64_t index) {
  Rng rng = substream(cfg.seed, index);
  const std::size_t n = cfg.n_min + detail::below(rng, cfg.n_max - cfg.n_min + 1);
  ScanInstance inst;
  switch (cfg.family) {
    case Family::all: inst.graph = random_digraph(n, cfg.p, rng); break;
    case Family::sink_free: inst.graph = random_sink_free_digraph(n, cfg.p, rng); break;
    case Family::tournament: inst.graph = random_tournament(n, rng); break;
    case Family::semicomplete: inst.graph = random_semicomplete(n, rng); break;
    case Family::one_way_split: {
      const std::size_t ny = 2 + detail::below(rng, n - 1);  // 2..n
      inst.graph = random_split(n - ny, ny, cfg.p, rng);
      inst.split = OneWaySplitPartition{VertexSet(n), VertexSet(n)};
      for (Vertex v = 0; v < n; ++v) (v < n - ny ? inst.split->x : inst.split->y).insert(v);
      break;
    }
    case Family::indeg_le_3: inst.graph = random_indegree3(n, cfg.p, rng); break;
    case Family::dag_partitioned: {
      auto pd = random_dag_partitioned(n, cfg.p, rng);
      inst.graph = std::move(pd.graph);
      inst.parts = std::make_pair(std::move(pd.v1), std::move(pd.v2));
      break;
    }
  }
  return inst;
}

inline void evaluate(const ScanConfig& cfg, const ScanInstance& inst, std::uint64_t index, ChunkResult& out,
                     bool record) {
  const Digraph& d = inst.graph;
  InstanceEvaluator ev(cfg, inst);
  ordered_json outcomes = ordered_json::object();
  for (Check c : cfg.checks) {
    const CheckResult r = ev.run(c);
    auto& tally = out.tallies[c];
    switch (r.outcome) {
      case Outcome::pass: ++tally.pass; outcomes[std::string(to_string(c))] = "pass"; break;
      case Outcome::skip: ++tally.skip; outcomes[std::string(to_string(c))] = "skip"; break;
      case Outcome::fail: {
        ++tally.fail;
        outcomes[std::string(to_string(c))] = "fail";
        ordered_json cx;
        cx["index"] = index;
        cx["n"] = d.order();
        cx["check"] = std::string(to_string(c));
        cx["digraph"] = serialize_digraph(d);
        cx["certificate"] = r.certificate;
        out.counterexamples.push_back(std::move(cx));
        break;
      }
    }
  }
  ++out.instances;
  if (ev.produced_witness()) ++out.witnesses;
  const auto mq = ev.min_size();
  if (mq && d.order() >= 2 && is_sink_free(d))
    out.max_ratio = std::max(out.max_ratio, static_cast<double>(*mq) / static_cast<double>(d.order() / 2));
  if (record) {
    ordered_json j;
    j["index"] = index;
    j["n"] = d.order();
    j["hash"] = hex64(digraph_hash(d));
    j["min_qk"] = mq ? ordered_json(*mq) : ordered_json(nullptr);
    j["checks"] = std::move(outcomes);
    if (!ev.details().empty()) j["details"] = ev.details();
    out.recorded.push_back(std::move(j));
  }
}

inline void merge(ChunkResult& into, ChunkResult&& from) {
  into.instances += from.instances;
  for (auto& [c, t] : from.tallies) {
    auto& dst = into.tallies[c];
    dst.pass += t.pass;
    dst.fail += t.fail;
    dst.skip += t.skip;
  }
  into.witnesses += from.witnesses;
  into.max_ratio = std::max(into.max_ratio, from.max_ratio);
  for (auto& j : from.recorded) into.recorded.push_back(std::move(j));
  for (auto& j : from.counterexamples) into.counterexamples.push_back(std::move(j));
}

inline void validate(const ScanConfig& cfg) {
  if (cfg.n_min > cfg.n_max) throw invalid_input("empty n range");
  if (cfg.mode == ScanMode::exhaustive) {
    if (cfg.n_max > kMaxEnumerationOrder) throw resource_error("exhaustive scans are limited to n <= 5");
    if (cfg.family == Family::dag_partitioned) throw invalid_input("family dag_partitioned needs sampled mode");
  } else {
    detail::require_probability(cfg.p);
    const std::size_t min_n = cfg.family == Family::all || cfg.family == Family::tournament ||
                                      cfg.family == Family::semicomplete || cfg.family == Family::dag_partitioned
                                  ? 0
                                  : 2;
    if (cfg.n_min < min_n) throw invalid_input("family " + std::string(to_string(cfg.family)) + " needs n >= 2");
    if (cfg.family == Family::one_way_split && cfg.p == 0.0) throw invalid_input("one_way_split needs p > 0");
  }
}

}  // namespace detail

/// Runs the configured checks over every instance. Instances are processed
/// in fixed-size chunks by `workers` threads; chunk results are merged in
/// index order, so the report does not depend on the worker count.
inline ScanReport run_scan(const ScanConfig& cfg) {
  detail::validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  constexpr std::uint64_t kChunk = 512;

  struct Job {
    std::size_t n;  // exhaustive only
    std::uint64_t begin, end;
  };
  std::vector<Job> jobs;
  if (cfg.mode == ScanMode::exhaustive) {
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      const std::uint64_t count = enumeration_count(n);
      for (std::uint64_t b = 0; b < count; b += kChunk) jobs.push_back({n, b, std::min(count, b + kChunk)});
    }
  } else {
    for (std::uint64_t b = 0; b < cfg.sample_count; b += kChunk)
      jobs.push_back({0, b, std::min(cfg.sample_count, b + kChunk)});
  }

  std::vector<detail::ChunkResult> results(jobs.size());
  std::vector<std::uint64_t> offsets(jobs.size(), 0);  // recorded-instance budget is assigned after the fact
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    try {
      while (!failed.load()) {
        const std::size_t j = next.fetch_add(1);
        if (j >= jobs.size()) return;
        const Job& job = jobs[j];
        auto& out = results[j];
        if (cfg.mode == ScanMode::exhaustive) {
          const bool prefilter = cfg.family != Family::all && cfg.family != Family::tournament &&
                                 cfg.family != Family::semicomplete;
          enumerate_digraphs(
              job.n, prefilter,
              [&](const Digraph& d, std::uint64_t index) {
                if (!detail::family_filter(cfg.family, d)) return;
                detail::ScanInstance inst{d, std::nullopt, std::nullopt};
                detail::evaluate(cfg, inst, index, out, out.recorded.size() < cfg.max_recorded_instances);
              },
              job.begin, job.end);
        } else {
          for (std::uint64_t i = job.begin; i < job.end; ++i)
            detail::evaluate(cfg, detail::sample_instance(cfg, i), i, out,
                             out.recorded.size() < cfg.max_recorded_instances);
        }
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::max(1U, cfg.workers); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  detail::ChunkResult total;
  for (auto& r : results) detail::merge(total, std::move(r));
  if (total.recorded.size() > cfg.max_recorded_instances) total.recorded.resize(cfg.max_recorded_instances);

  ScanReport report;
  report.config = cfg;
  report.instances = total.instances;
  for (Check c : cfg.checks) report.tallies[c] = total.tallies[c];
  report.witnesses = total.witnesses;
  report.max_ratio = total.max_ratio;
  report.recorded = std::move(total.recorded);
  report.counterexamples = std::move(total.counterexamples);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

// The worker count is not echoed: reports must not depend on it.
inline ordered_json ScanReport::to_json(bool include_wall_time) const {
  ordered_json j;
  auto& c = j["config"];
  c["mode"] = std::string(qk::to_string(config.mode));
  c["n_min"] = config.n_min;
  c["n_max"] = config.n_max;
  c["sample_count"] = config.sample_count;
  c["p"] = config.p;
  c["family"] = std::string(qk::to_string(config.family));
  c["seed"] = config.seed;
  c["checks"] = ordered_json::array();
  for (Check ch : config.checks) c["checks"].push_back(std::string(qk::to_string(ch)));
  c["exact_limit"] = config.exact_limit;
  c["max_recorded_instances"] = config.max_recorded_instances;

  auto& a = j["aggregate"];
  a["instances"] = instances;
  a["checks"] = ordered_json::object();
  for (const auto& [ch, t] : tallies) a["checks"][std::string(qk::to_string(ch))] = {{"pass", t.pass}, {"fail", t.fail}, {"skip", t.skip}};
  a["witnesses"] = witnesses;
  a["max_min_qk_ratio"] = max_ratio;
  a["counterexample_count"] = counterexamples.size();
  if (include_wall_time) a["wall_time_s"] = wall_time_s;

  j["instances"] = recorded;
  j["counterexamples"] = counterexamples;
  return j;
}

// ---------------------------------------------------------------------------

struct SharpnessRow {
  std::size_t k;
  std::size_t n;
  std::size_t exact;
  double bound;
  bool equal;
};

/// Exact minimum quasi-kernel size of D_k against (n+3)/2 - sqrt(n), which
/// equals 2k^2 + 1 at n = (2k+1)^2.
inline std::vector<SharpnessRow> reproduce_sharpness_table(std::size_t k_max) {
  if (k_max < 1 || k_max > 6) throw invalid_input("k_max must lie in 1..6");
  std::vector<SharpnessRow> rows;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const Digraph d = construct_d_k(k);
    const auto part = recognize_one_way_split(d);
    if (!part) throw invariant_error("D_k is not recognized as one-way split");
    const std::size_t exact = split_min_qk_exact(d, *part).size;
    const double bound = split_bound(d.order());
    rows.push_back({k, d.order(), exact, bound, std::abs(static_cast<double>(exact) - bound) < 1e-9});
  }
  return rows;
}

}  // namespace qk
