// ecml: count / decide / generate from the command line.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecml/ecml.hpp"

namespace {

using nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ecml::Graph load_graph(const std::string& path) {
  std::string text = slurp(path);
  bool pace = false;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto tok = ecml::detail::split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    pace = tok[0] == "p";
    break;
  }
  try {
    return ecml::parse_graph(text, pace ? ecml::GraphFormat::PaceGr : ecml::GraphFormat::EdgeList);
  } catch (const ecml::ParseError& e) {
    throw ecml::ParseError(0, path + ": " + e.what());
  }
}

ecml::ProblemSpec load_problem(const std::string& name_or_path) {
  std::ifstream probe(name_or_path);
  if (probe) return ecml::parse_problem(slurp(name_or_path));
  return ecml::make_problem(name_or_path);
}

json load_bindings(const std::string& arg) {
  if (arg.empty()) return json::object();
  std::string text = arg.front() == '{' ? arg : slurp(arg);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ecml::ParseError(0, std::string("bindings: ") + e.what());
  }
}

struct Common {
  std::string graph, td, problem, bindings;
  std::uint64_t budget = 40'000'000;
  bool json_out = true;
  bool tables = false;
};

struct Loaded {
  ecml::Instance inst;
  ecml::ProblemSpec spec;
  ecml::NiceDecomposition nice;
  int width = -1;
};

Loaded load(const Common& c) {
  Loaded l;
  ecml::Graph g = load_graph(c.graph);
  l.spec = load_problem(c.problem);
  l.inst = ecml::bind_instance(g, l.spec, load_bindings(c.bindings));
  ecml::TreeDecomposition td;
  if (c.td.empty()) {
    td = ecml::greedy_decomposition(g);
    std::cerr << "heuristic decomposition, width " << td.width() << "\n";
  } else {
    td = ecml::parse_td(slurp(c.td));
    auto report = ecml::validate_decomposition(g, td);
    if (!report.valid()) throw ecml::Error("invalid tree decomposition: " + report.violations.front().message);
  }
  l.width = td.width();
  l.nice = ecml::make_nice(g, td);
  return l;
}

void print(const json& j, bool as_json) {
  if (as_json) {
    std::cout << j.dump() << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

int cmd_count(const Common& c) {
  auto t0 = std::chrono::steady_clock::now();
  Loaded l = load(c);
  ecml::detail::DpOptions opt;
  opt.max_entries = c.budget;
  auto res = ecml::count_with_stats(l.inst, l.nice, l.spec, opt);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json j{{"count", res.count.str()}, {"width_used", l.width}, {"branches", res.branches}, {"wall_time", secs}};
  if (c.tables) j["tables"] = ecml::table_sizes_json(res.stats);
  print(j, c.json_out);
  return 0;
}

int cmd_decide(const Common& c, std::uint64_t seed, double target_error, int workers) {
  Loaded l = load(c);
  ecml::DecideOptions opt;
  opt.target_error = target_error;
  opt.workers = workers;
  opt.dp.max_entries = c.budget;
  auto res = ecml::decide(l.inst, l.nice, l.spec, seed, opt);
  json j{{"answer", res.answer ? "yes" : "no"},
         {"seed", res.seed},
         {"branches", res.branches},
         {"repetitions", res.repetitions},
         {"rng", res.rng}};
  if (res.witness) j["odd_W_witness"] = {{"branch", res.witness->branch}, {"W", res.witness->W}};
  print(j, c.json_out);
  return 0;
}

int cmd_generate(const std::string& cnf_path, int l, const std::string& out, bool as_json) {
  if (l < 5) throw InputError("--l must be at least 5");
  ecml::CnfFormula cnf = ecml::parse_dimacs(slurp(cnf_path));
  auto h = ecml::generate_hard_instance(cnf, l);
  std::string gr = out + ".gr", td = out + ".td", idx = out + ".json";
  std::ofstream(gr) << ecml::write_pace_gr(h.graph);
  std::ofstream(td) << ecml::write_td(h.path_decomposition, h.graph.num_vertices());
  json index = ecml::gadget_index_json(h);
  index["variables_count"] = cnf.num_vars;
  index["clauses_count"] = cnf.clauses.size();
  std::ofstream(idx) << index.dump(2) << "\n";
  json j{{"k", h.k},
         {"l", h.l},
         {"vertices", h.graph.num_vertices()},
         {"edges", h.graph.num_edges()},
         {"width", h.path_decomposition.width()},
         {"files", {gr, td, idx}}};
  print(j, as_json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting modal logic on graphs of bounded treewidth"};
  app.require_subcommand(1);

  Common c;
  std::uint64_t seed = 1;
  double target_error = std::ldexp(1.0, -20);
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string cnf, out = "hard";
  int l = 5;
  bool text = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--graph", c.graph, "graph file (.gr or edge list)")->required();
    sub->add_option("--td", c.td, "tree decomposition (.td); min-fill heuristic when absent");
    sub->add_option("--problem", c.problem, "catalogue name or problem file")->required();
    sub->add_option("--bindings", c.bindings, "JSON file or inline JSON with params and fixed sets");
    sub->add_option("--budget", c.budget, "maximum entries per DP table");
    sub->add_flag("--json", c.json_out, "JSON output (default)");
    sub->add_flag("--text", text, "key: value output");
  };
  auto* count = app.add_subcommand("count", "count solutions of an ECML problem");
  add_common(count);
  count->add_flag("--tables", c.tables, "include per-node table sizes");
  auto* decide = app.add_subcommand("decide", "decide an ECML+C problem (Monte Carlo, no false positives)");
  add_common(decide);
  decide->add_option("--seed", seed, "random seed");
  decide->add_option("--target-error", target_error, "false-negative bound");
  decide->add_option("--workers", workers, "parallel repetitions");
  auto* solve = app.add_subcommand("solve", "count when possible, otherwise decide");
  add_common(solve);
  solve->add_option("--seed", seed, "random seed");
  solve->add_option("--target-error", target_error, "false-negative bound");
  solve->add_option("--workers", workers, "parallel repetitions");
  auto* generate = app.add_subcommand("generate", "3CNF to C_l / girth vertex deletion instance");
  generate->add_option("--cnf", cnf, "DIMACS file")->required();
  generate->add_option("--l", l, "cycle length, at least 5")->required();
  generate->add_option("--out", out, "output prefix for .gr/.td/.json");
  generate->add_flag("--json", c.json_out, "JSON output (default)");
  generate->add_flag("--text", text, "key: value output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (text) c.json_out = false;

  try {
    if (*count) return cmd_count(c);
    if (*decide) return cmd_decide(c, seed, target_error, workers);
    if (*solve) {
      bool connectivity = load_problem(c.problem).has_connectivity();
      return connectivity ? cmd_decide(c, seed, target_error, workers) : cmd_count(c);
    }
    if (*generate) return cmd_generate(cnf, l, out, c.json_out);
  } catch (const ecml::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ecml::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ecml::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
