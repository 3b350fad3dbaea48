#pragma once

// Command-line front end.  Commands:
//
//   depth       depth of one query point (--point-index i or --point "c1,c2,...")
//   heuristic   Chinneck cover only (an upper bound)
//   oracle      brute-force enumeration (small instances)
//   median      depth of every point against the others, and the maximizers
//   gen-random  random integer point set
//   gen-anova   sign gradients of a random two-factor ANOVA fit
//   bench       CSV of depth runs over every instance file in a directory
//
// Exit codes: 0 ok, 2 input error, 3 a time or node limit was hit, 1 for
// anything unexpected.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hsdepth/anova.hpp"
#include "hsdepth/binsearch.hpp"
#include "hsdepth/bnc.hpp"
#include "hsdepth/elastic.hpp"
#include "hsdepth/generate.hpp"
#include "hsdepth/io.hpp"
#include "hsdepth/oracle.hpp"

namespace hsdepth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitLimit = 3;

enum class Algorithm { kBnc, kBinsearch, kHeuristic, kOracle };
enum class OutputFormat { kText, kJson };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kBnc: return "bnc";
    case Algorithm::kBinsearch: return "binsearch";
    case Algorithm::kHeuristic: return "heuristic";
    case Algorithm::kOracle: return "oracle";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "bnc") return Algorithm::kBnc;
  if (name == "binsearch") return Algorithm::kBinsearch;
  if (name == "heuristic") return Algorithm::kHeuristic;
  if (name == "oracle") return Algorithm::kOracle;
  throw InputError("unknown algorithm '" + name + "'");
}

struct RunConfig {
  std::string command;
  std::string input;
  Algorithm algorithm = Algorithm::kBnc;
  std::optional<Branching> branching;  // unset: solver default
  std::optional<CutMode> cuts;
  double epsilon = 1e-5;
  double box_bound = 1.0;
  double time_limit = 600.0;
  long node_limit = 1'000'000;
  OutputFormat output = OutputFormat::kText;
  std::uint64_t seed = 1;
  std::optional<long> point_index;
  std::optional<std::string> point;
  int threads = 0;  // median workers; 0 = hardware concurrency

  // gen-random / gen-anova
  int n = 20;
  int d = 2;
  int range = 10;
  int m = 2;
  int r = 2;
  double stddev = 1.0;
  std::string theta_file;
  std::string output_path;

  // bench
  std::string dir;
  std::vector<std::string> algorithms{"bnc", "binsearch"};

  void validate() const {
    const bool search_flags = branching.has_value() || cuts.has_value();
    if (search_flags && (algorithm == Algorithm::kOracle || algorithm == Algorithm::kHeuristic)) {
      throw InputError("--branching/--cuts do not apply to the " + std::string(to_string(algorithm)) + " algorithm");
    }
    if (point_index && point) throw InputError("give either --point-index or --point, not both");
    if (!(epsilon > 0.0) || !(box_bound > 0.0)) throw InputError("--epsilon and --box must be positive");
    if (time_limit < 0.0 || node_limit < 0) throw InputError("limits must be non-negative");
  }

  SolverParams base_params() const {
    SolverParams p;
    p.epsilon = epsilon;
    p.box_bound = box_bound;
    p.time_limit = time_limit;
    p.node_limit = node_limit;
    if (branching) p.branching = *branching;
    if (cuts) p.cuts = *cuts;
    return p;
  }
};

/// What every depth-producing command prints.
struct Report {
  int depth = 0;
  std::vector<std::size_t> cover;  // indices into the input file
  Vector direction;
  std::string status = "Proven";
  long nodes = 0;
  long cuts = 0;
  double time_ms = 0.0;
  std::optional<double> epsilon_star;
  bool limit_hit = false;
};

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["depth"] = r.depth;
  j["cover"] = r.cover;
  j["direction"] = r.direction;
  j["status"] = r.status;
  j["nodes"] = r.nodes;
  j["cuts"] = r.cuts;
  j["time_ms"] = r.time_ms;
  if (r.epsilon_star) j["epsilon_star"] = *r.epsilon_star;
  return j;
}

inline void print_text(std::ostream& out, const Report& r) {
  out << "depth " << r.depth << "\nstatus " << r.status << "\ncover";
  for (auto i : r.cover) out << ' ' << i;
  out << "\ndirection";
  for (double v : r.direction) out << ' ' << v;
  out << "\nnodes " << r.nodes << "\ncuts " << r.cuts << "\ntime_ms " << r.time_ms << '\n';
  if (r.epsilon_star) out << "epsilon_star " << *r.epsilon_star << '\n';
}

/// Depth of `p` among `points` with the configured algorithm.  Cover indices
/// refer to `points`.
inline Report solve_with(const PointSet& points, const Vector& p, const RunConfig& cfg, Algorithm algorithm) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  if (algorithm == Algorithm::kOracle) {
    rep.depth = oracle_depth(translated_rows(points, p), points.dim);
  } else {
    const auto inst = build_instance(points, p);
    const auto params = make_params(inst, cfg.base_params());
    if (algorithm == Algorithm::kHeuristic) {
      const auto c = chinneck_cover(inst, params);
      rep.depth = c.weight + inst.forced_count;
      rep.cover = hsdepth::detail::expand_cover(inst, c.cover);
      rep.direction = c.witness;
      rep.status = "Heuristic";
    } else {
      const auto res = algorithm == Algorithm::kBnc ? solve_depth(inst, params) : binary_search_depth(inst, params);
      rep.depth = res.depth;
      rep.cover = res.cover;
      rep.direction = res.direction;
      rep.status = std::string(to_string(res.status));
      rep.limit_hit = res.status != SolveStatus::kProven;
      rep.nodes = res.stats.nodes;
      rep.cuts = res.stats.cuts;
      rep.epsilon_star = res.epsilon_star;
    }
  }
  rep.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace detail {

// Splits the query off the data.  With --point-index the point is removed
// and *removed is set to its index.
inline Vector resolve_query(PointSet& points, const RunConfig& cfg, std::optional<std::size_t>* removed) {
  if (cfg.point_index) {
    if (*cfg.point_index < 0) throw InputError("--point-index must be non-negative");
    const auto i = static_cast<std::size_t>(*cfg.point_index);
    Vector q = take_query_point(points, i);
    if (removed) *removed = i;
    return q;
  }
  if (cfg.point) {
    Vector q = parse_point_literal(*cfg.point);
    if (static_cast<int>(q.size()) != points.dim) {
      throw InputError("--point has " + std::to_string(q.size()) + " coordinates, expected " +
                       std::to_string(points.dim));
    }
    return q;
  }
  throw InputError("a query point is required: --point-index or --point");
}

inline std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path);
  if (!file) throw InputError("cannot write " + path);
  return file;
}

inline std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

}  // namespace detail

inline int cmd_depth(const RunConfig& cfg, std::ostream& out) {
  auto points = read_point_set(cfg.input);
  std::optional<std::size_t> removed;
  const Vector p = detail::resolve_query(points, cfg, &removed);
  auto rep = solve_with(points, p, cfg, cfg.algorithm);
  if (removed) {
    for (auto& i : rep.cover) i += i >= *removed;
  }
  if (cfg.output == OutputFormat::kJson) out << to_json(rep).dump() << '\n';
  else print_text(out, rep);
  return rep.limit_hit ? kExitLimit : kExitOk;
}

inline int cmd_median(const RunConfig& cfg, std::ostream& out) {
  const auto points = read_point_set(cfg.input);
  const std::size_t n = points.size();
  if (n == 0) throw InputError("median needs at least one point");
  std::vector<Report> reports(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        PointSet rest = points;
        const Vector p = take_query_point(rest, i);
        reports[i] = solve_with(rest, p, cfg, cfg.algorithm);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw InputError(e);
  }

  int best = -1;
  bool limit = false;
  for (const auto& r : reports) {
    best = std::max(best, r.depth);
    limit = limit || r.limit_hit;
  }
  std::vector<std::size_t> median;
  for (std::size_t i = 0; i < n; ++i) {
    if (reports[i].depth == best) median.push_back(i);
  }
  if (cfg.output == OutputFormat::kJson) {
    nlohmann::json j;
    j["depths"] = nlohmann::json::array();
    for (const auto& r : reports) j["depths"].push_back(r.depth);
    j["median"] = median;
    j["max_depth"] = best;
    j["status"] = limit ? "LimitHit" : "Proven";
    out << j.dump() << '\n';
  } else {
    for (std::size_t i = 0; i < n; ++i) out << i << ' ' << reports[i].depth << ' ' << reports[i].status << '\n';
    out << "median";
    for (auto i : median) out << ' ' << i;
    out << "\nmax_depth " << best << '\n';
  }
  return limit ? kExitLimit : kExitOk;
}

inline Vector read_theta(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Vector theta;
  for (std::string tok; in >> tok;) theta.push_back(hsdepth::detail::parse_number(tok, 0));
  if (theta.size() != expected) {
    throw InputError("theta file has " + std::to_string(theta.size()) + " values, expected " +
                     std::to_string(expected));
  }
  return theta;
}

inline int cmd_gen_random(const RunConfig& cfg, std::ostream& out) {
  const auto ps = random_points(cfg.n, cfg.d, cfg.range, cfg.seed);
  std::ofstream file;
  write_point_set(detail::open_output(cfg.output_path, file, out), ps);
  return kExitOk;
}

inline int cmd_gen_anova(const RunConfig& cfg, std::ostream& out) {
  AnovaNoise noise;
  noise.stddev = cfg.stddev;
  auto spec = gen_random_anova(cfg.n, cfg.m, cfg.r, cfg.seed, noise);
  if (!cfg.theta_file.empty()) spec.theta = read_theta(cfg.theta_file, static_cast<std::size_t>(cfg.n + cfg.m));
  std::ofstream file;
  write_point_set(detail::open_output(cfg.output_path, file, out), sign_gradients(spec));
  return kExitOk;
}

inline int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(cfg.dir)) throw InputError("not a directory: " + cfg.dir);
  std::vector<Algorithm> algorithms;
  for (const auto& a : cfg.algorithms) algorithms.push_back(parse_algorithm(a));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cfg.dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::ofstream file;
  std::ostream& csv = detail::open_output(cfg.output_path, file, out);
  csv << "instance,algorithm,n,d,depth,status,nodes,cuts,time_ms,error\n";
  for (const auto& path : files) {
    for (auto algorithm : algorithms) {
      csv << detail::csv_field(path.filename().string()) << ',' << to_string(algorithm) << ',';
      try {
        auto points = read_point_set(path.string());
        const Vector p = cfg.point_index || cfg.point ? detail::resolve_query(points, cfg, nullptr)
                                                      : Vector(points.dim, 0.0);
        const auto rep = solve_with(points, p, cfg, algorithm);
        csv << points.size() << ',' << points.dim << ',' << rep.depth << ',' << rep.status << ',' << rep.nodes
            << ',' << rep.cuts << ',' << rep.time_ms << ",\n";
      } catch (const std::exception& e) {
        csv << ",,,Error,,,," << detail::csv_field(e.what()) << '\n';
      }
    }
  }
  return kExitOk;
}

/// Parses argv and runs the selected command.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Halfspace depth by branch-and-cut"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string algorithm = "bnc";
  std::string branching;
  std::string cuts;
  bool json = false;

  const std::map<std::string, Branching> branch_names{{"greedy", Branching::kGreedy}, {"strong", Branching::kStrong}};
  const std::map<std::string, CutMode> cut_names{
      {"bis", CutMode::kBis}, {"bis-knapsack", CutMode::kBisKnapsack}, {"none", CutMode::kNone}};

  auto solver_flags = [&](CLI::App* sub, bool with_algorithm) {
    sub->add_option("input", cfg.input, "Point-set file")->required()->check(CLI::ExistingFile);
    if (with_algorithm) {
      sub->add_option("--algorithm", algorithm, "bnc, binsearch, heuristic or oracle")
          ->check(CLI::IsMember({"bnc", "binsearch", "heuristic", "oracle"}));
    }
    sub->add_option("--branching", branching, "greedy or strong")->check(CLI::IsMember({"greedy", "strong"}));
    sub->add_option("--cuts", cuts, "bis, bis-knapsack or none")->check(CLI::IsMember({"bis", "bis-knapsack", "none"}));
    sub->add_option("--epsilon", cfg.epsilon, "Separation margin");
    sub->add_option("--box", cfg.box_bound, "Bound c on |x_i|");
    sub->add_option("--time-limit", cfg.time_limit, "Seconds per solve");
    sub->add_option("--node-limit", cfg.node_limit, "Nodes per solve");
    sub->add_flag("--json", json, "JSON output");
  };
  auto query_flags = [&](CLI::App* sub) {
    sub->add_option("--point-index", cfg.point_index, "Query is this point of the file (removed from the data)");
    sub->add_option("--point", cfg.point, "Query coordinates, comma separated");
  };

  auto* depth = app.add_subcommand("depth", "Depth of one query point");
  solver_flags(depth, true);
  query_flags(depth);
  auto* heuristic = app.add_subcommand("heuristic", "Heuristic upper bound on the depth");
  solver_flags(heuristic, false);
  query_flags(heuristic);
  auto* oracle = app.add_subcommand("oracle", "Exact depth by enumeration (small inputs)");
  solver_flags(oracle, false);
  query_flags(oracle);
  auto* median = app.add_subcommand("median", "Depth of every point and the maximizers");
  solver_flags(median, true);
  median->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  auto* gen_random = app.add_subcommand("gen-random", "Random integer point set");
  gen_random->add_option("--n", cfg.n, "Points")->check(CLI::PositiveNumber);
  gen_random->add_option("--d", cfg.d, "Dimension")->check(CLI::PositiveNumber);
  gen_random->add_option("--range", cfg.range, "Coordinates in [-range, range]")->check(CLI::PositiveNumber);
  gen_random->add_option("--seed", cfg.seed, "Random seed");
  gen_random->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");

  auto* gen_anova = app.add_subcommand("gen-anova", "Sign gradients of a two-factor ANOVA fit");
  gen_anova->add_option("--n", cfg.n, "Levels of the first factor")->check(CLI::PositiveNumber);
  gen_anova->add_option("--m", cfg.m, "Levels of the second factor")->check(CLI::PositiveNumber);
  gen_anova->add_option("--r", cfg.r, "Replicates per cell")->check(CLI::PositiveNumber);
  gen_anova->add_option("--seed", cfg.seed, "Random seed");
  gen_anova->add_option("--stddev", cfg.stddev, "Noise standard deviation")->check(CLI::PositiveNumber);
  gen_anova->add_option("--theta", cfg.theta_file, "File with the n + m fitted effects")->check(CLI::ExistingFile);
  gen_anova->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");

  auto* bench = app.add_subcommand("bench", "CSV benchmark over a directory of instances");
  bench->add_option("dir", cfg.dir, "Directory of point-set files")->required();
  bench->add_option("--algorithms", cfg.algorithms, "Algorithms to run")->delimiter(',');
  bench->add_option("--branching", branching, "greedy or strong")->check(CLI::IsMember({"greedy", "strong"}));
  bench->add_option("--cuts", cuts, "bis, bis-knapsack or none")->check(CLI::IsMember({"bis", "bis-knapsack", "none"}));
  bench->add_option("--epsilon", cfg.epsilon, "Separation margin");
  bench->add_option("--time-limit", cfg.time_limit, "Seconds per solve");
  bench->add_option("--node-limit", cfg.node_limit, "Nodes per solve");
  query_flags(bench);
  bench->add_option("-o,--output", cfg.output_path, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.algorithm = parse_algorithm(algorithm);
    if (cfg.command == "heuristic") cfg.algorithm = Algorithm::kHeuristic;
    if (cfg.command == "oracle") cfg.algorithm = Algorithm::kOracle;
    if (!branching.empty()) cfg.branching = branch_names.at(branching);
    if (!cuts.empty()) cfg.cuts = cut_names.at(cuts);
    cfg.output = json ? OutputFormat::kJson : OutputFormat::kText;
    cfg.validate();

    if (cfg.command == "median") return cmd_median(cfg, out);
    if (cfg.command == "gen-random") return cmd_gen_random(cfg, out);
    if (cfg.command == "gen-anova") return cmd_gen_anova(cfg, out);
    if (cfg.command == "bench") return cmd_bench(cfg, out);
    return cmd_depth(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hsdepth::cli
