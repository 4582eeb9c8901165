// qk: command-line front end for the quasi-kernel library.
// Exit codes: 0 success, 1 check failure, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qk/scan.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qk::invalid_input("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw qk::resource_error("cannot write " + path);
}

qk::Digraph load_graph(const std::string& path) { return qk::parse_digraph(read_file(path)); }

qk::VertexSet parse_set(const qk::Digraph& d, const std::string& text) {
  qk::VertexSet s = d.empty_set();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = qk::detail::trim(item);
    if (t.empty()) continue;
    std::uint64_t v = 0;
    if (!qk::detail::parse_uint(t, v) || v >= d.order())
      throw qk::invalid_input("bad vertex '" + std::string(t) + "' in set");
    s.insert(static_cast<qk::Vertex>(v));
  }
  return s;
}

// Partition files hold one "name: v,v,..." line per part; '#' starts a comment.
std::map<std::string, qk::VertexSet> load_partition(const qk::Digraph& d, const std::string& path) {
  std::map<std::string, qk::VertexSet> parts;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = qk::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) throw qk::parse_error(lineno, "expected 'name: vertices'");
    parts[std::string(qk::detail::trim(t.substr(0, colon)))] = parse_set(d, std::string(t.substr(colon + 1)));
  }
  return parts;
}

qk::VertexSet part_or_empty(const qk::Digraph& d, const std::map<std::string, qk::VertexSet>& parts,
                            const std::string& name) {
  const auto it = parts.find(name);
  return it == parts.end() ? d.empty_set() : it->second;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  auto num = [&](const std::string& s) {
    std::uint64_t v = 0;
    if (!qk::detail::parse_uint(s, v)) throw qk::invalid_input("bad n range '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  if (dots == std::string::npos) return {num(text), num(text)};
  return {num(text.substr(0, dots)), num(text.substr(dots + 2))};
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string type = "random";
  std::size_t n = 8, k = 1, nx = 3, ny = 3;
  double p = 0.3;
  std::uint64_t seed = 1;
  std::string out;
  std::string outer;
  std::vector<std::string> parts;
};

int cmd_gen(const GenOptions& o) {
  qk::Rng rng = qk::substream(o.seed, 0);
  qk::Digraph d;
  std::vector<std::string> labels;
  if (o.type == "random") d = qk::random_digraph(o.n, o.p, rng);
  else if (o.type == "tournament") d = qk::random_tournament(o.n, rng);
  else if (o.type == "semicomplete") d = qk::random_semicomplete(o.n, rng);
  else if (o.type == "circulant") d = qk::construct_circulant_tournament(o.k);
  else if (o.type == "split") d = qk::random_split(o.nx, o.ny, o.p, rng);
  else if (o.type == "dk") d = qk::construct_d_k(o.k);
  else if (o.type == "dstar") {
    d = qk::construct_dstar();
    labels = qk::dstar_labels();
  } else if (o.type == "compose") {
    qk::CompositionSpec spec;
    if (!o.outer.empty()) {
      spec.outer = load_graph(o.outer);
      for (const auto& p : o.parts) spec.parts.push_back(load_graph(p));
    } else {
      spec.outer = qk::random_digraph(o.n, o.p, rng);
      for (std::size_t i = 0; i < o.n; ++i) spec.parts.push_back(qk::random_digraph(1 + qk::detail::below(rng, 3), o.p, rng));
    }
    const auto comp = qk::compose(spec);
    d = comp.graph;
    for (qk::Vertex v = 0; v < d.order(); ++v)
      labels.push_back(std::to_string(comp.block_of[v]) + "." + std::to_string(v - comp.block_start[comp.block_of[v]]));
  } else {
    throw qk::invalid_input("unknown generator type '" + o.type + "'");
  }
  write_output(o.out, qk::serialize_digraph(d, labels));
  return 0;
}

int cmd_verify(const std::string& graph, const std::string& set, const std::string& mode) {
  const auto d = load_graph(graph);
  const auto s = parse_set(d, set);
  bool ok = false;
  if (mode == "kernel") ok = qk::verify_kernel(d, s);
  else if (mode == "qk") ok = qk::is_quasi_kernel(d, s);
  else if (mode == "good-qk") ok = qk::is_good_quasi_kernel(d, s);
  else if (mode == "small-qk") ok = qk::is_quasi_kernel(d, s) && qk::is_small(d, s);
  else throw qk::invalid_input("unknown verify mode '" + mode + "'");
  std::cout << (ok ? "valid" : "invalid") << ' ' << mode << ' ' << s.to_string() << '\n';
  return ok ? 0 : kExitFail;
}

int cmd_find(const std::string& graph, const std::string& algo, const std::string& partition, const std::string& set) {
  const auto d = load_graph(graph);
  auto given = [&] {
    if (set.empty()) throw qk::invalid_input("--algo " + algo + " needs --set");
    return parse_set(d, set);
  };
  qk::ordered_json out;
  out["algo"] = algo;
  if (algo == "cl") {
    out["quasi_kernel"] = qk::to_json(qk::quasi_kernel_cl(d));
  } else if (algo == "anti-claw" || algo == "k41") {
    const auto r = algo == "k41" ? qk::small_qk_k41_free(d) : qk::small_qk_anti_claw_free(d);
    if (r.found_quasi_kernel()) out["quasi_kernel"] = qk::to_json(r.quasi_kernel());
    else out["witness"] = qk::to_json(r.witness());
    out["steps"] = r.steps;
  } else if (algo == "good") {
    out["quasi_kernel"] = qk::to_json(qk::small_qk_good(d, given()));
  } else if (algo == "lemma-n2") {
    const auto q = set.empty() ? qk::quasi_kernel_cl(d) : given();
    out["quasi_kernel"] = qk::to_json(qk::small_qk_via_kernel_of_n2(d, q));
  } else if (algo == "partition") {
    if (partition.empty()) throw qk::invalid_input("--algo partition needs --partition");
    const auto parts = load_partition(d, partition);
    out["quasi_kernel"] =
        qk::to_json(qk::small_qk_partitioned(d, part_or_empty(d, parts, "v1"), part_or_empty(d, parts, "v2")));
  } else if (algo == "split") {
    std::optional<qk::OneWaySplitPartition> part;
    if (!partition.empty()) {
      const auto parts = load_partition(d, partition);
      part = qk::OneWaySplitPartition{part_or_empty(d, parts, "x"), part_or_empty(d, parts, "y")};
    } else {
      part = qk::recognize_one_way_split(d);
      if (!part) throw qk::invalid_input("digraph is not one-way split");
    }
    out["quasi_kernel"] = qk::to_json(qk::split_small_qk(d, *part));
    out["bound"] = qk::split_bound(d.order());
  } else {
    throw qk::invalid_input("unknown algorithm '" + algo + "'");
  }
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_min(const std::string& graph, std::optional<std::size_t> cap, bool split_exact) {
  const auto d = load_graph(graph);
  qk::MinQuasiKernel m;
  if (split_exact) {
    const auto part = qk::recognize_one_way_split(d);
    if (!part) throw qk::invalid_input("digraph is not one-way split");
    m = qk::split_min_qk_exact(d, *part);
  } else {
    m = qk::minimum_quasi_kernel_exact(d, cap);
  }
  qk::ordered_json out;
  out["size"] = m.size;
  out["set"] = qk::to_json(m.set);
  out["half"] = d.order() / 2;
  std::cout << out.dump() << '\n';
  return 0;
}

struct ScanOptions {
  std::string mode = "sampled";
  std::string n = "1..5";
  std::vector<std::string> checks = {"conjecture"};
  std::string family = "all";
  std::uint64_t samples = 100;
  double p = 0.3;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t max_recorded = 1000;
  std::string report;
  bool omit_wall_time = false;
};

int cmd_scan(const ScanOptions& o) {
  qk::ScanConfig cfg;
  if (o.mode == "exhaustive") cfg.mode = qk::ScanMode::exhaustive;
  else if (o.mode == "sampled") cfg.mode = qk::ScanMode::sampled;
  else throw qk::invalid_input("unknown scan mode '" + o.mode + "'");
  std::tie(cfg.n_min, cfg.n_max) = parse_range(o.n);
  cfg.checks.clear();
  for (const auto& c : o.checks) cfg.checks.push_back(qk::parse_check(c));
  cfg.family = qk::parse_family(o.family);
  cfg.sample_count = o.samples;
  cfg.p = o.p;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.max_recorded_instances = o.max_recorded;

  const auto report = qk::run_scan(cfg);
  write_output(o.report, report.to_json(!o.omit_wall_time).dump(2) + "\n");
  std::cerr << "instances " << report.instances << ", counterexamples " << report.counterexamples.size() << '\n';
  return report.clean() ? 0 : kExitFail;
}

int cmd_table(std::size_t k_max) {
  bool all_equal = true;
  std::printf("%3s %6s %6s %10s %6s\n", "k", "n", "exact", "bound", "equal");
  for (const auto& r : qk::reproduce_sharpness_table(k_max)) {
    std::printf("%3zu %6zu %6zu %10.4f %6s\n", r.k, r.n, r.exact, r.bound, r.equal ? "true" : "false");
    all_equal = all_equal && r.equal;
  }
  return all_equal ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-kernel toolkit"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a digraph");
  g->add_option("--type", gen.type, "random|tournament|semicomplete|circulant|split|dk|dstar|compose");
  g->add_option("--n", gen.n);
  g->add_option("--k", gen.k);
  g->add_option("--nx", gen.nx);
  g->add_option("--ny", gen.ny);
  g->add_option("--p", gen.p);
  g->add_option("--seed", gen.seed);
  g->add_option("--template", gen.outer, "Outer digraph of a composition");
  g->add_option("--parts", gen.parts, "One digraph file per outer vertex");
  g->add_option("--out", gen.out, "Output file ('-' for stdout)")->required();

  std::string graph, set, vmode = "qk";
  auto* v = app.add_subcommand("verify", "Check a vertex set");
  v->add_option("--graph", graph)->required();
  v->add_option("--set", set)->required();
  v->add_option("--mode", vmode, "kernel|qk|good-qk|small-qk");

  std::string algo = "cl", partition;
  auto* f = app.add_subcommand("find", "Construct a quasi-kernel");
  f->add_option("--graph", graph)->required();
  f->add_option("--algo", algo, "cl|anti-claw|k41|good|lemma-n2|partition|split");
  f->add_option("--partition", partition);
  f->add_option("--set", set);

  std::optional<std::size_t> cap;
  bool split_exact = false;
  auto* m = app.add_subcommand("min", "Minimum quasi-kernel");
  m->add_option("--graph", graph)->required();
  m->add_option("--cap", cap);
  m->add_flag("--split-exact", split_exact);

  ScanOptions scan;
  auto* s = app.add_subcommand("scan", "Exhaustive or sampled scan");
  s->add_option("--mode", scan.mode, "exhaustive|sampled");
  s->add_option("--n", scan.n, "N or A..B");
  s->add_option("--checks", scan.checks)->delimiter(',');
  s->add_option("--family", scan.family);
  s->add_option("--samples", scan.samples);
  s->add_option("--p", scan.p);
  s->add_option("--seed", scan.seed);
  s->add_option("--workers", scan.workers);
  s->add_option("--max-recorded", scan.max_recorded);
  s->add_option("--report", scan.report, "Output JSON file ('-' for stdout)");
  s->add_flag("--omit-wall-time", scan.omit_wall_time);

  std::size_t k_max = 4;
  auto* t = app.add_subcommand("table", "Sharpness table for D_k");
  t->add_option("--k-max", k_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*v) return cmd_verify(graph, set, vmode);
    if (*f) return cmd_find(graph, algo, partition, set);
    if (*m) return cmd_min(graph, cap, split_exact);
    if (*s) return cmd_scan(scan);
    if (*t) return cmd_table(k_max);
  } catch (const qk::invariant_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
