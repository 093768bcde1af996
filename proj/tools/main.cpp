#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "mprk/operators.hpp"
#include "mprk/stability.hpp"
#include "mprk/stepper.hpp"
#include "mprk/tableau.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw mprk::Error("cannot open output file: " + out_path);
  f << text;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw mprk::Error("malformed number in list: " + item);
    out.push_back(v);
  }
  return out;
}

struct CommonOpts {
  std::string eq = "heat";
  std::string method;
  int n = 16;
  double tau = 0.025;
  double tend = 0.1;
  double tol = 1e-6;
  std::string prec = "f64";
  std::string out;
  int threads = 0;
  bool force = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--eq", o.eq, "problem: heat or advection")
      ->check(CLI::IsMember({"heat", "advection"}));
  cmd->add_option("--method", o.method, "4s3pA, 4s3pB, 4s3pC or midpointP (P = corrector count)")
      ->required();
  cmd->add_option("--n", o.n, "grid points per direction")->check(CLI::PositiveNumber);
  cmd->add_option("--tau", o.tau, "time step")->check(CLI::PositiveNumber);
  cmd->add_option("--tend", o.tend, "final time")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--prec", o.prec, "implicit-stage precision")
      ->check(CLI::IsMember({"f32", "f64"}));
  cmd->add_option("--out", o.out, "write output here instead of stdout");
  cmd->add_option("--threads", o.threads, "kernel threads, 0 = all available")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--force", o.force, "run method/problem combinations excluded by default");
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

mprk::ButcherTableau tableau_for(const std::string& name) {
  if (name.rfind("midpoint", 0) == 0) {
    const std::string suffix = name.substr(8);
    int p = 0;
    const auto res = std::from_chars(suffix.data(), suffix.data() + suffix.size(), p);
    if (res.ec != std::errc{} || res.ptr != suffix.data() + suffix.size() || p < 0)
      throw mprk::Error("bad corrector count in method name: " + name);
    return mprk::midpoint_corrected(p);
  }
  return mprk::builtin_tableau(mprk::method_from_name(name));
}

mprk::Equation parse_eq(const std::string& s) {
  return s == "heat" ? mprk::Equation::Heat : mprk::Equation::Advection;
}

mprk::Precision parse_prec(const std::string& s) {
  return s == "f32" ? mprk::Precision::F32 : mprk::Precision::F64;
}

/// Exits with a usage error when 4s3pA is pointed at the heat problem
/// without --force; it is unstable there.
bool refuse_unstable(const CommonOpts& o, const mprk::ButcherTableau& t) {
  if (o.eq == "heat" && t.name == "4s3pA" && !o.force) {
    std::cerr << "4s3pA is unstable on the heat problem; pass --force to run it anyway\n";
    return true;
  }
  return false;
}

mprk::IntegrationConfig make_config(const CommonOpts& o, mprk::ButcherTableau t) {
  mprk::IntegrationConfig cfg;
  cfg.tableau = std::move(t);
  cfg.tau = o.tau;
  cfg.t_end = o.tend;
  cfg.tol = o.tol;
  cfg.policy.implicit = parse_prec(o.prec);
  return cfg;
}

ordered_json timings_json(const mprk::TimingRegistry& reg) {
  ordered_json tm = ordered_json::object();
  for (const auto& [label, e] : reg.entries())
    tm[label] = {{"count", e.count},
                 {"total_seconds", e.seconds},
                 {"seconds_per_call", e.seconds_per_call()}};
  return tm;
}

int cmd_run(const CommonOpts& o) {
  const mprk::ButcherTableau t = tableau_for(o.method);
  if (refuse_unstable(o, t)) return 1;
  apply_threads(o.threads);

  const mprk::ProblemSpec problem = mprk::make_problem(parse_eq(o.eq), o.n);
  const mprk::IntegrationResult res = mprk::integrate(problem, make_config(o, t));

  ordered_json rec;
  rec["method"] = t.name;
  rec["equation"] = o.eq;
  rec["n"] = o.n;
  rec["tau"] = o.tau;
  rec["tend"] = o.tend;
  rec["tol"] = o.tol;
  rec["implicit_precision"] = o.prec;
  rec["failed"] = res.solver_failure;
  rec["final_error_max"] = res.error_max ? ordered_json(*res.error_max) : ordered_json(nullptr);
  rec["final_error_l2"] = res.error_l2 ? ordered_json(*res.error_l2) : ordered_json(nullptr);
  rec["mean_iterations"] = res.mean_iterations;
  rec["total_iterations"] = res.total_iterations;
  rec["steps"] = res.steps;
  rec["wall_seconds"] = res.wall_seconds;
  rec["timings"] = timings_json(res.timings);
  emit(rec.dump(2) + "\n", o.out);
  return res.solver_failure ? 2 : 0;
}

int cmd_convergence(const CommonOpts& o, const std::string& taus_csv) {
  const mprk::ButcherTableau t = tableau_for(o.method);
  if (refuse_unstable(o, t)) return 1;
  apply_threads(o.threads);

  std::vector<double> taus;
  if (!taus_csv.empty()) {
    taus = parse_doubles(taus_csv);
  } else {
    for (int k = 0; k < 4; ++k) taus.push_back(o.tau / std::pow(2.0, k));
  }
  if (taus.empty()) {
    std::cerr << "convergence: the tau list is empty\n";
    return 1;
  }

  const mprk::ProblemSpec problem = mprk::make_problem(parse_eq(o.eq), o.n);
  const mprk::TemporalOrderResult sweep = mprk::temporal_order(problem, make_config(o, t), taus);

  std::string csv = "tau,error_max,error_l2,order_running\n";
  for (std::size_t i = 0; i < sweep.taus.size(); ++i) {
    const double order =
        i == 0 ? std::nan("")
               : std::log(sweep.errors_max[i - 1] / sweep.errors_max[i]) /
                     std::log(sweep.taus[i - 1] / sweep.taus[i]);
    csv += fmt(sweep.taus[i]) + "," + fmt(sweep.errors_max[i]) + "," + fmt(sweep.errors_l2[i]) +
           "," + fmt(order) + "\n";
  }
  emit(csv, o.out);
  return sweep.solver_failure ? 2 : 0;
}

int cmd_stability(const std::string& method, const std::string& tableau_path,
                  const std::string& window, int res, const std::string& truncate,
                  const std::string& out) {
  mprk::ButcherTableau t;
  if (!tableau_path.empty()) {
    std::ifstream f(tableau_path);
    if (!f) throw mprk::Error("cannot open tableau file: " + tableau_path);
    std::stringstream buf;
    buf << f.rdbuf();
    t = mprk::tableau_from_json(buf.str());
  } else if (!method.empty()) {
    t = tableau_for(method);
  } else {
    std::cerr << "stability: pass --method or --tableau\n";
    return 1;
  }

  if (truncate == "f16")
    t = mprk::truncate_eps(t, mprk::FloatFormat::Binary16);
  else if (truncate == "f32")
    t = mprk::truncate_eps(t, mprk::FloatFormat::Binary32);

  const std::vector<double> w = parse_doubles(window);
  if (w.size() != 4) throw mprk::Error("--window needs exactly four numbers: re0,re1,im0,im1");

  const mprk::StabilityGrid grid = mprk::region_scan(t, w[0], w[1], w[2], w[3], res, res);

  std::string csv = "re,im,abs_r,stable\n";
  for (int ix = 0; ix < grid.nx; ++ix)
    for (int iy = 0; iy < grid.ny; ++iy) {
      const std::size_t at = static_cast<std::size_t>(ix) * grid.ny + iy;
      csv += fmt(grid.re_at(ix)) + "," + fmt(grid.im_at(iy)) + "," + fmt(grid.values[at]) + "," +
             (grid.stable[at] ? "1" : "0") + "\n";
    }
  emit(csv, out);
  return 0;
}

int cmd_bench(const CommonOpts& o, int repeat) {
  const mprk::ButcherTableau t = tableau_for(o.method);
  if (refuse_unstable(o, t)) return 1;
  apply_threads(o.threads);

  const mprk::ProblemSpec problem = mprk::make_problem(parse_eq(o.eq), o.n);
  const mprk::IntegrationConfig cfg = make_config(o, t);

  mprk::TimingRegistry agg;
  long long iterations = 0;
  double wall = 0.0;
  bool failed = false;
  for (int r = 0; r < repeat; ++r) {
    const mprk::IntegrationResult res = mprk::integrate(problem, cfg);
    agg.merge(res.timings);
    iterations += res.total_iterations;
    wall += res.wall_seconds;
    failed = failed || res.solver_failure;
  }

  std::string csv = "label,count,total_seconds,seconds_per_call\n";
  for (const auto& [label, e] : agg.entries())
    csv += label + "," + std::to_string(e.count) + "," + fmt(e.seconds) + "," +
           fmt(e.seconds_per_call()) + "\n";
  // Run time normalized over the total number of solver iterations.
  csv += "iterations," + std::to_string(iterations) + "," + fmt(wall) + "," +
         fmt(iterations > 0 ? wall / static_cast<double>(iterations) : 0.0) + "\n";
  emit(csv, o.out);
  return failed ? 2 : 0;
}

int cmd_verify(bool corrupt) {
  struct Check {
    std::string name;
    bool pass;
  };
  std::vector<Check> checks;

  {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> re_dist(-10.0, 0.0), im_dist(-10.0, 10.0);
    double worst = 0.0;
    for (int p = 0; p <= 8; ++p) {
      const mprk::ButcherTableau t = mprk::midpoint_corrected(p);
      for (int s = 0; s < 200; ++s) {
        std::complex<double> z{re_dist(rng), im_dist(rng)};
        while (std::abs(z) > 10.0) z = {re_dist(rng), im_dist(rng)};
        const double err =
            std::abs(mprk::stability_function(t, z) - mprk::corrected_midpoint_reference(z));
        worst = std::max(worst, err);
      }
    }
    checks.push_back({"midpoint-closed-form", worst <= 1e-12});
  }

  {
    bool ok = true;
    for (const mprk::Method m :
         {mprk::Method::M4s3pA, mprk::Method::M4s3pB, mprk::Method::M4s3pC}) {
      mprk::ButcherTableau t = mprk::builtin_tableau(m);
      if (corrupt && m == mprk::Method::M4s3pB) t.b[0] += 1e-3;
      ok = ok && mprk::validate(t).empty();
    }
    checks.push_back({"tableau-validate", ok});
  }

  {
    const int n = 3, nn = n * n * n;
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    bool ok = true;
    for (const mprk::Stencil1D stencil :
         {mprk::Stencil1D::DirichletLaplace1D, mprk::Stencil1D::PeriodicCentralDiff1D}) {
      std::vector<std::vector<double>> k1(n, std::vector<double>(n, 0.0));
      if (stencil == mprk::Stencil1D::DirichletLaplace1D) {
        for (int i = 0; i < n; ++i) {
          k1[i][i] = 2.0;
          if (i > 0) k1[i][i - 1] = -1.0;
          if (i + 1 < n) k1[i][i + 1] = -1.0;
        }
      } else {
        for (int i = 0; i < n; ++i) {
          k1[i][(i + 1) % n] += 1.0;
          k1[i][(i + n - 1) % n] -= 1.0;
        }
      }

      mprk::KronSumOperator op{n, stencil, dist(rng), dist(rng)};
      std::vector<double> x(nn), got(nn), want(nn, 0.0);
      for (double& v : x) v = dist(rng);
      op.apply(x, got);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            const int row = i + n * j + n * n * k;
            want[row] += op.sigma * x[row];
            for (int c = 0; c < n; ++c) {
              want[row] += op.gamma * k1[k][c] * x[i + n * j + n * n * c];
              want[row] += op.gamma * k1[j][c] * x[i + n * c + n * n * k];
              want[row] += op.gamma * k1[i][c] * x[c + n * j + n * n * k];
            }
          }
      double err = 0.0, ref = 0.0;
      for (int r = 0; r < nn; ++r) {
        err = std::max(err, std::abs(got[r] - want[r]));
        ref = std::max(ref, std::abs(want[r]));
      }
      ok = ok && err <= 1e-12 * std::max(1.0, ref);
    }
    checks.push_back({"kronecker-oracle", ok});
  }

  bool all = true;
  for (const Check& c : checks) {
    std::printf("%-24s %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL");
    all = all && c.pass;
  }
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-precision Runge-Kutta benchmark harness"};
  app.require_subcommand(1);

  CommonOpts run_o, conv_o, bench_o;
  std::string conv_taus;
  int bench_repeat = 1;

  CLI::App* run = app.add_subcommand("run", "integrate once and emit a JSON run record");
  add_common(run, run_o);

  CLI::App* conv = app.add_subcommand("convergence", "tau sweep against a tiny-tau reference");
  add_common(conv, conv_o);
  conv->add_option("--taus", conv_taus, "comma-separated tau list (default: 4 halvings of --tau)");

  std::string st_method, st_tableau, st_window = "-10,4,-7,7", st_truncate, st_out;
  int st_res = 201;
  CLI::App* st = app.add_subcommand("stability", "scan |R| over a complex-plane window");
  st->add_option("--method", st_method, "4s3pA, 4s3pB, 4s3pC or midpointP");
  st->add_option("--tableau", st_tableau, "JSON tableau file instead of a builtin method");
  st->add_option("--window", st_window, "re0,re1,im0,im1 scan window");
  st->add_option("--res", st_res, "lattice points per axis")->check(CLI::Range(2, 3162));
  st->add_option("--truncate", st_truncate, "round A_eps to f16 or f32 first")
      ->check(CLI::IsMember({"f16", "f32"}));
  st->add_option("--out", st_out, "write output here instead of stdout");

  CLI::App* bench = app.add_subcommand("bench", "integrate and emit per-kernel timings as CSV");
  add_common(bench, bench_o);
  bench->add_option("--repeat", bench_repeat, "number of integrate runs to aggregate")
      ->check(CLI::PositiveNumber);

  bool corrupt = false;
  CLI::App* verify = app.add_subcommand("verify", "self-checks; exit 0 iff all pass");
  verify->add_flag("--corrupt", corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_o);
    if (conv->parsed()) return cmd_convergence(conv_o, conv_taus);
    if (st->parsed())
      return cmd_stability(st_method, st_tableau, st_window, st_res, st_truncate, st_out);
    if (bench->parsed()) return cmd_bench(bench_o, bench_repeat);
    if (verify->parsed()) return cmd_verify(corrupt);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 1;
}
