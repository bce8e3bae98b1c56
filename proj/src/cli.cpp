#include "opmatch/cli.h"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "opmatch/attack.h"
#include "opmatch/datagen.h"
#include "opmatch/dataio.h"
#include "opmatch/errors.h"
#include "opmatch/metrics.h"
#include "opmatch/rng.h"
#include "opmatch/selfcheck.h"

namespace opmatch::cli {

namespace {

namespace fs = std::filesystem;

struct GenerateArgs {
  std::string kind = "subset";
  std::size_t r = 60;
  std::size_t dim = 2;
  std::vector<Coord> extent{1000};
  std::string beta = "0.6";
  std::string pbion = "0.7";
  std::int64_t fmin = 1, fmax = 100;
  std::size_t block_size = 3;
  std::optional<std::size_t> block_index;
  std::string out_dir = ".";
};

struct AttackArgs {
  std::string p_path, q_path, truth_path, out_path;
  std::string algo = "monotone-mix";
  std::string weight = "unit";
  std::string kappa;
  std::string index = "range-tree";
  std::uint64_t k = 0;
  std::string eps = "0.5";
  std::string oned_kappa = "1";
  int scale = 0;
  bool merge = false;
  std::size_t max_points = 16;
  std::uint64_t max_nodes = 200'000'000;
  std::optional<double> time_limit;
  std::string exact_objective;
};

struct EvalArgs {
  std::string result_path, p_path, q_path, truth_path, out_path, exact_objective;
  int scale = 0;
};

struct BenchArgs {
  std::vector<std::size_t> sizes{50, 100};
  std::size_t seeds = 3;
  std::vector<std::string> algos{"monotone-mix", "minconflict", "oned"};
  std::string kind = "subset";
  std::string weight = "kappa-diff";
  std::string index = "range-tree";
  std::string beta = "0.6", pbion = "0.7";
  std::string out_path;
};

struct OracleArgs {
  std::size_t size_cap = 7;
  std::size_t trials = 100;
};

datagen::GenParams gen_params(const GenerateArgs& a, std::uint64_t seed) {
  datagen::GenParams p;
  p.superset_size = a.r;
  p.dim = a.dim;
  p.extent = a.extent.size() == 1 ? std::vector<Coord>(a.dim, a.extent[0]) : a.extent;
  p.f_min = a.fmin;
  p.f_max = a.fmax;
  p.beta = parse_rational(a.beta);
  p.p_bion = parse_rational(a.pbion);
  p.seed = seed;
  return p;
}

datagen::Sample make_sample(const std::string& kind, const datagen::GenParams& p) {
  datagen::validate(p);
  const Dataset R = datagen::generate_superset(p);
  if (kind == "subset") return datagen::sample_case1(R, p.beta, p.p_bion, p.seed);
  if (kind == "intersect") return datagen::sample_case2(R, p.beta, p.p_bion, p.seed);
  throw ConfigError("unknown case '" + kind + "'");
}

int cmd_generate(const GenerateArgs& a, std::uint64_t seed, std::ostream& out) {
  fs::create_directories(a.out_dir);
  Dataset P, Q;
  Truth truth;
  std::ostringstream note;
  if (a.kind == "blocks") {
    std::size_t fact = 1;
    for (std::size_t i = 2; i <= a.block_size; ++i) fact *= i;
    const std::size_t index =
        a.block_index ? *a.block_index
                      : static_cast<std::size_t>(Rng::stream(seed, "generate.block").below(fact));
    datagen::BlockInstance b = datagen::permutation_blocks(a.block_size, index);
    P = std::move(b.P);
    Q = std::move(b.Q);
    truth = std::move(b.truth);
    note << " block " << index;
  } else {
    datagen::Sample s = make_sample(a.kind, gen_params(a, seed));
    P = std::move(s.P);
    Q = std::move(s.Q);
    truth = std::move(s.truth);
  }
  const fs::path dir(a.out_dir);
  io::save_dataset((dir / "P.csv").string(), P);
  io::save_dataset((dir / "Q.csv").string(), Q);
  io::save_truth((dir / "truth.csv").string(), Q, truth);
  out << "wrote " << (dir / "P.csv").string() << " (" << P.size() << " points), "
      << (dir / "Q.csv").string() << " (" << Q.size() << " points), " << (dir / "truth.csv").string()
      << note.str() << "\n";
  return ok;
}

WeightSpec weight_spec(const std::string& kind, const std::string& kappa) {
  WeightSpec w{parse_weight_kind(kind), std::nullopt};
  if (!kappa.empty()) {
    if (w.kind != WeightKind::kappa_diff) throw ConfigError("--kappa only applies to --weight kappa-diff");
    w.kappa = parse_rational(kappa);
  }
  return w;
}

std::optional<Rational> optional_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_rational(s);
}

int cmd_attack(const AttackArgs& a, std::uint64_t seed, unsigned threads, std::ostream& out) {
  const Dataset P = io::load_dataset(a.p_path, a.scale, a.merge);
  const Dataset Q = io::load_dataset(a.q_path, a.scale, a.merge);
  attack::Config c;
  c.algorithm = attack::parse_algorithm(a.algo);
  c.weight = resolve(weight_spec(a.weight, a.kappa), P, Q);
  c.index = rangeindex::parse_index_kind(a.index);
  c.k = a.k;
  c.eps = parse_rational(a.eps);
  c.seed = seed;
  c.threads = threads;
  c.budget = exact::SearchBudget{a.max_points, a.max_nodes, a.time_limit};
  c.oned_kappa = parse_rational(a.oned_kappa);
  attack::validate(c);

  const attack::Outcome o = attack::run(P, Q, c);

  io::ResultRecord r;
  r.algorithm = a.algo;
  r.weight = c.weight;
  if (c.algorithm == attack::Algorithm::monotone_inc || c.algorithm == attack::Algorithm::monotone_dec ||
      c.algorithm == attack::Algorithm::monotone_mix) {
    r.index = rangeindex::to_string(c.index);
  }
  r.seed = seed;
  switch (c.algorithm) {
    case attack::Algorithm::minconflict_sampled: r.parameters["k"] = std::to_string(c.k); break;
    case attack::Algorithm::minconflict_scaled: r.parameters["eps"] = format_rational(c.eps); break;
    case attack::Algorithm::oned: r.parameters["kappa_1d"] = format_rational(c.oned_kappa); break;
    case attack::Algorithm::exact:
      r.parameters["max_points"] = std::to_string(a.max_points);
      r.parameters["max_nodes"] = std::to_string(a.max_nodes);
      r.parameters["nodes"] = std::to_string(o.nodes);
      break;
    default: break;
  }
  r.scale = Q.scale();
  for (const Point& q : Q) r.q_points.push_back(q.coords);
  r.assignment = o.assignment;
  r.objective = o.objective;
  r.proof_of_optimality = o.proof_of_optimality;
  if (!a.truth_path.empty()) {
    const Truth truth = io::load_truth(a.truth_path, Q);
    std::optional<Rational> exact = optional_rational(a.exact_objective);
    if (!exact && o.proof_of_optimality && *o.proof_of_optimality) exact = o.objective;
    r.metrics = metrics::evaluate(P, Q, truth, o.assignment, o.objective, exact);
  }
  r.runtime_seconds = o.runtime_seconds;
  const std::string text = io::result_to_json(r);
  if (a.out_path.empty()) {
    out << text;
  } else {
    io::write_file(a.out_path, text);
  }
  if (o.proof_of_optimality && !*o.proof_of_optimality) {
    throw SizeLimitError("search budget exhausted before optimality was proven; best found was written");
  }
  return ok;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const io::ResultRecord r = io::result_from_json(io::read_file(a.result_path));
  const Dataset P = io::load_dataset(a.p_path, a.scale, true);
  const Dataset Q = io::load_dataset(a.q_path, a.scale, true);
  const Truth truth = io::load_truth(a.truth_path, Q);
  Assignment assign(Q.size());
  for (std::size_t i = 0; i < r.q_points.size(); ++i) {
    auto j = Q.find(r.q_points[i]);
    if (!j) throw ValidationError("result names a Q point that is not in the Q file");
    assign[*j] = r.assignment[i];
  }
  std::optional<Rational> exact = optional_rational(a.exact_objective);
  if (!exact && r.proof_of_optimality && *r.proof_of_optimality) exact = r.objective;
  const std::string text = io::metrics_to_json(metrics::evaluate(P, Q, truth, assign, r.objective, exact));
  if (a.out_path.empty()) {
    out << text;
  } else {
    io::write_file(a.out_path, text);
  }
  return ok;
}

std::string opt_string(const std::optional<Rational>& r) {
  if (!r) return "";
  std::ostringstream s;
  s << to_double(*r);
  return s.str();
}

int cmd_bench(BenchArgs a, std::uint64_t seed, unsigned threads, std::ostream& out) {
  std::sort(a.sizes.begin(), a.sizes.end());
  std::vector<attack::Algorithm> algos;
  for (const auto& name : a.algos) algos.push_back(attack::parse_algorithm(name));
  std::ostringstream csv;
  csv << "size,seed,algorithm,p_points,q_points,objective,point_recovery,normalized_point_recovery,"
         "runtime_seconds\n";
  for (std::size_t size : a.sizes) {
    for (std::size_t s = 0; s < a.seeds; ++s) {
      GenerateArgs g;
      g.r = size;
      g.beta = a.beta;
      g.pbion = a.pbion;
      const std::uint64_t run_seed = seed + s;
      const datagen::Sample sample = make_sample(a.kind, gen_params(g, run_seed));
      for (attack::Algorithm algo : algos) {
        attack::Config c;
        c.algorithm = algo;
        c.weight = weight_spec(a.weight, "");
        c.index = rangeindex::parse_index_kind(a.index);
        c.seed = run_seed;
        c.threads = threads;
        c.k = 16;
        const attack::Outcome o = attack::run(sample.P, sample.Q, c);
        const metrics::MetricsReport m = metrics::evaluate(sample.P, sample.Q, sample.truth, o.assignment);
        csv << size << ',' << run_seed << ',' << attack::to_string(algo) << ',' << sample.P.size() << ','
            << sample.Q.size() << ',' << to_double(o.objective) << ',' << to_double(m.point_recovery) << ','
            << opt_string(m.normalized_point_recovery) << ',' << o.runtime_seconds << '\n';
      }
    }
  }
  if (a.out_path.empty()) {
    out << csv.str();
  } else {
    io::write_file(a.out_path, csv.str());
  }
  return ok;
}

int cmd_oracle_check(const OracleArgs& a, std::uint64_t seed, std::ostream& out) {
  bool all = true;
  for (const selfcheck::SuiteReport& r : selfcheck::run_all(a.size_cap, a.trials, seed)) {
    out << (r.ok() ? "pass " : "FAIL ") << r.name << ": " << r.checks << " checks";
    if (!r.ok()) out << ", " << r.mismatches << " mismatches, first at " << r.first_mismatch;
    out << "\n";
    all = all && r.ok();
  }
  return all ? ok : mismatch;
}

int code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::size_limit: return budget;
    default: return invalid;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order-preserving matching attacks on order-revealing encrypted datasets"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  unsigned threads = 1;
  app.add_option("--seed", seed, "seed for every random stream")->capture_default_str();
  app.add_option("--threads", threads, "worker cap")->capture_default_str()->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "synthetic instance: P.csv, Q.csv, truth.csv");
  g->add_option("--case", gen.kind, "subset | intersect | blocks")
      ->check(CLI::IsMember({"subset", "intersect", "blocks"}))
      ->capture_default_str();
  g->add_option("--r", gen.r, "superset size")->capture_default_str();
  g->add_option("--dim", gen.dim, "dimension")->capture_default_str();
  g->add_option("--extent", gen.extent, "grid size per axis (one value applies to all)")->delimiter(',');
  g->add_option("--beta", gen.beta, "sampling probability")->capture_default_str();
  g->add_option("--pbion", gen.pbion, "binomial retention probability")->capture_default_str();
  g->add_option("--fmin", gen.fmin)->capture_default_str();
  g->add_option("--fmax", gen.fmax)->capture_default_str();
  g->add_option("--block-size", gen.block_size, "permutation size for --case blocks")->capture_default_str();
  g->add_option("--block-index", gen.block_index, "which block Q holds (default: drawn from the seed)");
  g->add_option("--out", gen.out_dir, "output directory")->capture_default_str();

  AttackArgs att;
  auto* at = app.add_subcommand("attack", "run one matcher and write the result JSON");
  at->add_option("--p", att.p_path, "auxiliary plaintext dataset CSV")->required();
  at->add_option("--q", att.q_path, "target dataset CSV")->required();
  at->add_option("--truth", att.truth_path, "truth CSV; adds metrics to the result");
  at->add_option("--out", att.out_path, "result path (default stdout)");
  at->add_option("--algo", att.algo,
                 "oned | minconflict | minconflict-sampled | minconflict-scaled | monotone-inc | "
                 "monotone-dec | monotone-mix | exact")
      ->capture_default_str();
  at->add_option("--weight", att.weight, "unit | min | kappa-diff")->capture_default_str();
  at->add_option("--kappa", att.kappa, "kappa for kappa-diff (default: max frequency)");
  at->add_option("--index", att.index, "range-tree | kd-tree | naive")->capture_default_str();
  at->add_option("--k", att.k, "expected sample size for minconflict-sampled");
  at->add_option("--eps", att.eps, "level ratio minus one for minconflict-scaled")->capture_default_str();
  at->add_option("--kappa-1d", att.oned_kappa, "kappa of the per-axis 1-D weights")->capture_default_str();
  at->add_option("--scale", att.scale, "decimal digits kept when reading coordinates")->capture_default_str();
  at->add_flag("--merge", att.merge, "sum duplicate coordinate rows instead of rejecting them");
  at->add_option("--max-points", att.max_points, "exact: cap on min(|P|,|Q|)")->capture_default_str();
  at->add_option("--max-nodes", att.max_nodes, "exact: search node budget")->capture_default_str();
  at->add_option("--time-limit", att.time_limit, "exact: seconds");
  at->add_option("--exact-objective", att.exact_objective, "known optimum, for the normalized objective");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "metrics of a result file against the truth");
  e->add_option("--result", ev.result_path)->required();
  e->add_option("--p", ev.p_path)->required();
  e->add_option("--q", ev.q_path)->required();
  e->add_option("--truth", ev.truth_path)->required();
  e->add_option("--scale", ev.scale)->capture_default_str();
  e->add_option("--exact-objective", ev.exact_objective);
  e->add_option("--out", ev.out_path);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "runtime and quality over generated instances, as CSV");
  b->add_option("--sizes", bench.sizes, "superset sizes")->delimiter(',');
  b->add_option("--seeds", bench.seeds, "seeds per size")->capture_default_str();
  b->add_option("--algos", bench.algos)->delimiter(',');
  b->add_option("--case", bench.kind)->check(CLI::IsMember({"subset", "intersect"}))->capture_default_str();
  b->add_option("--weight", bench.weight)->capture_default_str();
  b->add_option("--index", bench.index)->capture_default_str();
  b->add_option("--beta", bench.beta)->capture_default_str();
  b->add_option("--pbion", bench.pbion)->capture_default_str();
  b->add_option("--out", bench.out_path);

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle-check", "cross-check every fast algorithm against brute force");
  o->add_option("--size-cap", orc.size_cap)->capture_default_str();
  o->add_option("--trials", orc.trials)->capture_default_str();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return invalid;
  }

  try {
    if (g->parsed()) return cmd_generate(gen, seed, out);
    if (at->parsed()) return cmd_attack(att, seed, threads, out);
    if (e->parsed()) return cmd_eval(ev, out);
    if (b->parsed()) return cmd_bench(bench, seed, threads, out);
    if (o->parsed()) return cmd_oracle_check(orc, seed, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return code_for(ex);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return failure;
  }
  return failure;
}

}  // namespace opmatch::cli
