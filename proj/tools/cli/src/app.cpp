#include "snc_cli/app.hpp"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "snc/errors.hpp"
#include "snc/extremal.hpp"
#include "snc/gamma_core.hpp"
#include "snc/moments.hpp"
#include "snc/sncp_mc.hpp"
#include "snc_cli/output.hpp"
#include "snc_cli/pairs.hpp"
#include "snc_cli/verify.hpp"

namespace snc::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  std::optional<unsigned> threads;
  std::string format = "json";
  std::string out_path;
  bool no_timestamp = false;

  unsigned resolved_threads() const { return threads ? *threads : threads_from_env(); }
  McConfig mc(std::uint64_t seed_override) const { return {samples, seed_override, resolved_threads()}; }
};

void add_common(CLI::App* cmd, Common& c, bool mc_flags) {
  if (mc_flags) {
    cmd->add_option("--samples", c.samples, "Monte Carlo sample count")->check(CLI::Range(std::uint64_t{10000}, std::uint64_t{1} << 40));
    cmd->add_option("--seed", c.seed, "Master seed (default 42)");
    cmd->add_option("--threads", c.threads, "Worker threads; 0 = all (default: SNC_THREADS or all)");
  }
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out_path, "Write output to this file instead of stdout");
  cmd->add_flag("--no-timestamp", c.no_timestamp, "Leave out timestamp and runtime fields");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void stamp(Json& record, const Common& c, Clock::time_point start) {
  if (c.no_timestamp) return;
  record["runtime_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  record["timestamp"] = utc_timestamp();
}

// Flattens nested objects into dotted keys; arrays are kept as JSON text.
void flatten(const Json& v, const std::string& prefix, std::vector<std::string>& keys,
             std::vector<std::string>& values) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), keys, values);
    }
    return;
  }
  keys.push_back(prefix);
  if (v.is_string()) {
    values.push_back(v.get<std::string>());
  } else if (v.is_null()) {
    values.emplace_back();
  } else {
    values.push_back(dump_json(v, -1));
  }
}

void emit_record(const Json& record, const Common& c, std::ostream& out) {
  if (c.format == "csv") {
    std::vector<std::string> keys, values;
    flatten(record, "", keys, values);
    write_csv_row(out, keys);
    write_csv_row(out, values);
  } else {
    out << dump_json(record) << '\n';
  }
}

Json pair_json(const OrthoPair& pair) {
  return Json{{"n", pair.n()}, {"mode", to_string(pair.mode())}, {"eta1", pair.eta1()}, {"eta2", pair.eta2()}};
}

// ---------------------------------------------------------------------------

struct MomentsArgs {
  double p = 2.0;
  double alpha = 2.0;
  std::optional<int> m;
};

Json cmd_moments(const MomentsArgs& a) {
  Json params{{"p", a.p}, {"alpha", a.alpha}};
  Json rec{{"command", "moments"}};
  const double abs_g = moment_abs_g(a.p, a.alpha);
  if (a.m) {
    params["m"] = *a.m;
    const double s = moment_S(a.p, *a.m, a.alpha);
    rec["params"] = params;
    rec["value"] = s;
    rec["moment_S"] = s;
  } else {
    rec["params"] = params;
    rec["value"] = abs_g;
  }
  rec["moment_abs_g"] = abs_g;
  return rec;
}

struct FArgs {
  double p = 2.0;
  int n = 4;
  std::string mode = "sphere";
  std::optional<std::string> method;
  PairRequest pair;
};

Json cmd_f(const FArgs& a, const Common& c) {
  const PairMode mode = parse_pair_mode(a.mode);
  const LpSpace space{a.p, a.n};
  space.validate(mode == PairMode::diagonal ? kMinDiagonalDimension : 2);
  const OrthoPair pair = resolve_pair(a.pair, a.n, mode);
  if (pair.n() != a.n) {
    throw ValidationError("pair dimension " + std::to_string(pair.n()) + " differs from --n " + std::to_string(a.n));
  }
  const std::string method = a.method.value_or(mode == PairMode::sphere ? "exact" : "mc-weighted");
  const double t = overlap_t(pair);

  Json params{{"p", a.p}, {"n", a.n}, {"mode", a.mode}, {"method", method}};
  if (a.pair.named) params["pair"] = *a.pair.named;
  if (a.pair.t) params["t"] = *a.pair.t;
  if (a.pair.file) params["pair_file"] = *a.pair.file;

  Json rec{{"command", "f"}, {"params", params}, {"t", t}};
  if (method == "exact") {
    if (mode != PairMode::sphere) throw PreconditionError("--method exact is available in sphere mode only");
    const double v = f_ball(space, t);
    rec["value"] = v;
    rec["std_error"] = 0.0;
    rec["sign"] = to_string(sign_verdict(v));
    rec["samples"] = 0;
  } else {
    McEstimate est;
    if (mode == PairMode::sphere) {
      const BallBackend backend = method == "mc-uniform" ? BallBackend::uniform : BallBackend::weighted;
      est = f_ball_mc(a.p, pair, c.mc(c.seed), backend);
      rec["exact"] = f_ball(space, t);
    } else {
      if (method != "mc-weighted") throw PreconditionError("diagonal mode supports --method mc-weighted only");
      est = f_diag_mc(a.p, pair, c.mc(c.seed));
    }
    rec["value"] = est.mean;
    rec["std_error"] = est.std_error;
    rec["sign"] = to_string(sign_verdict(est));
    rec["samples"] = est.samples;
  }
  rec["seed"] = c.seed;
  rec["pair"] = pair_json(pair);
  return rec;
}

struct SweepArgs {
  std::string variable = "t";
  double p = 2.0;
  int n = 4;
  double t = 0.0;
  std::string mode = "sphere";
  std::string quantity = "f";
  std::optional<std::string> method;
  std::vector<double> grid;
  std::optional<double> from, to;
  int steps = 11;
};

std::vector<double> sweep_grid(const SweepArgs& a) {
  if (!a.grid.empty()) return a.grid;
  if (!a.from || !a.to) throw PreconditionError("sweep needs --grid or both --from and --to");
  if (a.steps < 1) throw PreconditionError("--steps must be >= 1");
  std::vector<double> g;
  for (int k = 0; k < a.steps; ++k) {
    g.push_back(a.steps == 1 ? *a.from : *a.from + (*a.to - *a.from) * k / (a.steps - 1));
  }
  return g;
}

void cmd_sweep(const SweepArgs& a, const Common& c, std::ostream& out) {
  const PairMode mode = parse_pair_mode(a.mode);
  const std::string method = a.method.value_or("exact");
  if (a.variable != "p" && a.variable != "n" && a.variable != "t") {
    throw PreconditionError("--variable must be p, n or t");
  }
  if (mode == PairMode::diagonal && (method == "exact" || a.quantity != "f")) {
    throw PreconditionError("diagonal sweeps need --method mc-weighted and --quantity f");
  }
  const bool mc_on = method != "exact";
  if (mc_on && a.quantity != "f") throw PreconditionError("Monte Carlo columns need --quantity f");

  struct Row {
    double p;
    int n;
    double t;
    std::optional<double> exact, f_mc, se;
  };
  std::vector<Row> rows;
  std::uint64_t index = 0;
  for (double x : sweep_grid(a)) {
    Row row{a.p, a.n, a.t, {}, {}, {}};
    if (a.variable == "p") row.p = x;
    if (a.variable == "n") {
      if (x != std::floor(x)) throw PreconditionError("n grid values must be integers");
      row.n = static_cast<int>(x);
    }
    if (a.variable == "t") row.t = x;
    const LpSpace space{row.p, row.n};
    if (a.quantity == "gurland") {
      row.exact = gurland_F_minus_3(1.0 / row.p);
    } else if (a.quantity == "f_canonical") {
      row.t = 0.0;
      row.exact = f_canonical(space);
    } else if (a.quantity == "f_rotated") {
      row.t = 0.5;
      row.exact = f_rotated(space);
    } else if (a.quantity == "f") {
      if (mode == PairMode::sphere) row.exact = f_ball(space, row.t);
    } else {
      throw PreconditionError("--quantity must be f, f_canonical, f_rotated or gurland");
    }
    if (mc_on) {
      const McConfig cfg = c.mc(derive_seed(c.seed, index));
      McEstimate est;
      if (mode == PairMode::sphere) {
        est = f_ball_mc(row.p, OrthoPair::sphere_with_overlap(row.n, row.t), cfg,
                        method == "mc-uniform" ? BallBackend::uniform : BallBackend::weighted);
      } else {
        est = f_diag_mc(row.p, OrthoPair::diagonal_with_overlap(row.n, row.t), cfg);
      }
      row.f_mc = est.mean;
      row.se = est.std_error;
    }
    rows.push_back(row);
    ++index;
  }

  if (c.format == "csv") {
    auto num = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    write_csv_row(out, {"p", "n", "t", "f_exact", "f_mc", "stderr"});
    for (const auto& r : rows) {
      write_csv_row(out, {format_double(r.p), std::to_string(r.n), format_double(r.t), num(r.exact), num(r.f_mc), num(r.se)});
    }
    return;
  }
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"p", r.p}, {"n", r.n}, {"t", r.t}, {"f_exact", opt(r.exact)}, {"f_mc", opt(r.f_mc)}, {"stderr", opt(r.se)}});
  }
  Json rec{{"command", "sweep"},
           {"params", Json{{"variable", a.variable}, {"quantity", a.quantity}, {"mode", a.mode}, {"method", method}, {"seed", c.seed}}},
           {"rows", arr}};
  out << dump_json(rec) << '\n';
}

struct ExtremalArgs {
  int n = 6;
  std::string mode = "diagonal";
  int restarts = 32;
  int brute_force_density = 0;
};

Json cmd_extremal(const ExtremalArgs& a, const Common& c) {
  const PairMode mode = parse_pair_mode(a.mode);
  const ExtremalResult res = maximize_overlap(a.n, mode, a.restarts, c.seed);
  Json rec{{"command", "extremal"},
           {"params", Json{{"n", a.n}, {"mode", a.mode}, {"restarts", a.restarts}, {"seed", c.seed}}},
           {"best_value", res.best_value},
           {"bound", overlap_bound(mode)},
           {"excess_over_bound", res.best_value - overlap_bound(mode)},
           {"stationarity_residual", res.stationarity_residual},
           {"best_restart", res.best_restart},
           {"iterations", res.iterations}};
  if (mode == PairMode::diagonal) rec["supremum_one_half_minus_one_over_n"] = diagonal_overlap_supremum(a.n);
  rec["magnitudes_eta1"] = magnitude_clusters(res.best_pair.eta1(), 1e-6, 1e-5);
  rec["magnitudes_eta2"] = magnitude_clusters(res.best_pair.eta2(), 1e-6, 1e-5);
  if (a.brute_force_density > 0) rec["brute_force"] = brute_force_overlap_max(a.n, mode, a.brute_force_density, c.seed);
  rec["pair"] = pair_json(res.best_pair);
  return rec;
}

struct VerifyArgs {
  std::string suite = "all";
  std::vector<double> p_grid;
  std::vector<int> n_grid;
  std::optional<std::uint64_t> samples;
};

void emit_verify(const std::vector<CheckResult>& results, const VerifyOptions& o, const Common& c, std::ostream& out) {
  if (c.format == "csv") {
    std::vector<std::string> header{"criterion", "name", "passed", "margin", "margin_unit"};
    if (!c.no_timestamp) header.insert(header.end(), {"runtime_s", "runtime_limit_s"});
    write_csv_row(out, header);
    for (const auto& r : results) {
      std::vector<std::string> row{std::to_string(r.criterion), r.name, r.passed ? "true" : "false",
                                   format_double(r.margin), r.margin_unit};
      if (!c.no_timestamp) row.insert(row.end(), {format_double(r.runtime_s), format_double(r.runtime_limit_s)});
      write_csv_row(out, row);
    }
    return;
  }
  Json rep = verify_report(results, o, !c.no_timestamp);
  if (!c.no_timestamp) rep["timestamp"] = utc_timestamp();
  out << dump_json(rep) << '\n';
}

}  // namespace

unsigned threads_from_env() {
  const char* env = std::getenv("SNC_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(env, &used);
    if (used == std::strlen(env)) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Square negative correlation on l_p^n balls: exact values, Monte Carlo and checks", "snc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "snc 0.1.0");

  Common common;
  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "E|g|^alpha, or E S^alpha with --m");
  moments->add_option("--p", ma.p, "Exponent p >= 1")->required();
  moments->add_option("--alpha", ma.alpha, "Moment order alpha >= 0")->required();
  moments->add_option("--m", ma.m, "Number of summands of S");
  add_common(moments, common, false);

  FArgs fa;
  auto* f = app.add_subcommand("f", "Value and sign of f(eta1, eta2)");
  f->add_option("--p", fa.p, "Exponent p >= 1")->required();
  f->add_option("--n", fa.n, "Dimension")->required();
  f->add_option("--mode", fa.mode, "sphere (ball B_p^n) or diagonal (projection onto the diagonal hyperplane)")
      ->check(CLI::IsMember({"sphere", "diagonal"}));
  f->add_option("--method", fa.method, "exact | mc-weighted | mc-uniform")
      ->check(CLI::IsMember({"exact", "mc-weighted", "mc-uniform"}));
  auto* pf = f->add_option("--pair-file", fa.pair.file, "JSON pair file");
  auto* pn = f->add_option("--pair", fa.pair.named, "Named pair")->check(CLI::IsMember({"e", "xi", "xi_bar"}));
  auto* pt = f->add_option("--t", fa.pair.t, "Build a pair with this overlap");
  pf->excludes(pn)->excludes(pt);
  pn->excludes(pt);
  f->add_option("--indices", fa.pair.indices, "One-based coordinates of a named pair")->delimiter(',');
  add_common(f, common, true);

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "CSV/JSON table over a grid of p, n or t");
  sweep->add_option("--variable", sa.variable, "p | n | t")->required()->check(CLI::IsMember({"p", "n", "t"}));
  sweep->add_option("--p", sa.p, "Fixed p");
  sweep->add_option("--n", sa.n, "Fixed n");
  sweep->add_option("--t", sa.t, "Fixed overlap t");
  sweep->add_option("--mode", sa.mode, "sphere | diagonal")->check(CLI::IsMember({"sphere", "diagonal"}));
  sweep->add_option("--quantity", sa.quantity, "f | f_canonical | f_rotated | gurland (F(1/p) - 3)")
      ->check(CLI::IsMember({"f", "f_canonical", "f_rotated", "gurland"}));
  sweep->add_option("--method", sa.method, "exact | mc-weighted | mc-uniform")
      ->check(CLI::IsMember({"exact", "mc-weighted", "mc-uniform"}));
  sweep->add_option("--grid", sa.grid, "Explicit grid values")->delimiter(',');
  sweep->add_option("--from", sa.from, "Grid start");
  sweep->add_option("--to", sa.to, "Grid end");
  sweep->add_option("--steps", sa.steps, "Grid points between --from and --to");
  add_common(sweep, common, true);

  ExtremalArgs ea;
  auto* extremal = app.add_subcommand("extremal", "Maximize the overlap sum_i eta1(i)^2 eta2(i)^2");
  extremal->add_option("--n", ea.n, "Dimension")->required();
  extremal->add_option("--mode", ea.mode, "sphere | diagonal")->check(CLI::IsMember({"sphere", "diagonal"}));
  extremal->add_option("--restarts", ea.restarts, "Random starts")->check(CLI::PositiveNumber);
  extremal->add_option("--brute-force", ea.brute_force_density, "Also run the n <= 6 brute-force search with this many random pairs");
  add_common(extremal, common, true);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run acceptance checks; exit 3 on any failure");
  verify->add_option("--suite", va.suite, "gamma | ball | diagonal | extremal | all")
      ->check(CLI::IsMember({"gamma", "ball", "diagonal", "extremal", "all"}));
  verify->add_option("--p-grid", va.p_grid, "p values of the ball sampler check")->delimiter(',');
  verify->add_option("--n-grid", va.n_grid, "n values of the ball sampler check")->delimiter(',');
  add_common(verify, common, true);
  // For verify, --samples only applies when given explicitly.
  verify->get_option("--samples")->each([&va](const std::string& s) { va.samples = std::stoull(s); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "snc 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (sweep->parsed() && !sweep->get_option("--format")->count()) common.format = "csv";

  std::ofstream file;
  std::ostream* sink = &out;
  if (!common.out_path.empty()) {
    file.open(common.out_path);
    if (!file) {
      err << "error: cannot write " << common.out_path << '\n';
      return kExitUsage;
    }
    sink = &file;
  }

  const auto start = Clock::now();
  try {
    if (moments->parsed()) {
      Json rec = cmd_moments(ma);
      stamp(rec, common, start);
      emit_record(rec, common, *sink);
    } else if (f->parsed()) {
      Json rec = cmd_f(fa, common);
      stamp(rec, common, start);
      emit_record(rec, common, *sink);
    } else if (sweep->parsed()) {
      cmd_sweep(sa, common, *sink);
    } else if (extremal->parsed()) {
      Json rec = cmd_extremal(ea, common);
      stamp(rec, common, start);
      emit_record(rec, common, *sink);
    } else if (verify->parsed()) {
      VerifyOptions o;
      o.suite = parse_suite(va.suite);
      o.seed = common.seed;
      o.threads = common.resolved_threads();
      o.samples = va.samples;
      if (!va.p_grid.empty()) o.p_grid = va.p_grid;
      if (!va.n_grid.empty()) o.n_grid = va.n_grid;
      const auto results = run_verify(o);
      emit_verify(results, o, common, *sink);
      for (const auto& r : results) {
        if (!r.passed) return kExitVerificationFailed;
      }
    }
  } catch (const UnstableEstimateError& e) {
    err << "error: unstable estimate: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // ValidationError, DomainError
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace snc::cli
