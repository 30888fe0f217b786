// Command-line front end: one subcommand per experiment, tables on stdout or
// --out, CSV by default.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "t1cp/clocks.hpp"
#include "t1cp/experiments.hpp"
#include "t1cp/graphs.hpp"
#include "t1cp/moments.hpp"
#include "t1cp/report.hpp"
#include "t1cp/walk.hpp"

using namespace t1cp;

namespace {

constexpr int kExitInvariant = 2;
constexpr int kExitUsage = 1;

struct Output {
  std::string path;
  std::string format = "csv";

  void emit(const Table& table) const {
    const auto f = parse_format(format);
    if (path.empty() || path == "-") {
      write_table(std::cout, table, f);
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_table(out, table, f);
  }
};

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "Output file (default stdout)");
  cmd->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_reals(text)) {
    if (v != std::floor(v)) throw std::invalid_argument("expected integers in '" + text + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// "a:b:step", inclusive of b up to rounding.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw std::invalid_argument("lambda grid must be a:b:step with a <= b and step > 0");
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(parts[0] + i * parts[2]);
  return grid;
}

SurvivalMethod parse_method(const std::string& s) {
  if (s == "auto") return SurvivalMethod::automatic;
  if (s == "forward") return SurvivalMethod::forward;
  if (s == "clocks") return SurvivalMethod::clocks;
  if (s == "dual") return SurvivalMethod::dual;
  throw std::invalid_argument("unknown method " + s);
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-one contact process toolkit"};
  app.require_subcommand(1);
  int status = 0;

  // simulate
  struct {
    std::string graph, method = "auto", dump;
    double lambda = 0.0, t = 1.0, horizon = -1.0;
    std::int64_t replicas = 10000;
    std::uint64_t seed = 1;
    Output out;
  } sim;
  auto* simulate = app.add_subcommand("simulate", "Survival probability P(eta_t(x) = 1) from all ones");
  simulate->add_option("--graph", sim.graph, "torus:d=..,L=.. or tree:n=..,depth=..[,root=..]")->required();
  simulate->add_option("--lambda", sim.lambda)->required();
  simulate->add_option("--t", sim.t)->required();
  simulate->add_option("--replicas", sim.replicas);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--method", sim.method, "auto, forward, clocks or dual");
  simulate->add_option("--dump-schedule", sim.dump, "Write the clock schedule of replica 0 to this file");
  simulate->add_option("--horizon", sim.horizon, "Horizon of the dumped schedule (default: --t)");
  add_output(simulate, sim.out);
  simulate->callback([&] {
    const auto g = build_graph(parse_graph_spec(sim.graph));
    SurvivalOptions so;
    so.method = parse_method(sim.method);
    const auto x = default_observed_vertex(g);
    const auto method = resolve_method(g, sim.lambda, sim.t, so);
    const auto e = survival_probability(g, sim.lambda, sim.t, x, sim.replicas, sim.seed, so);
    if (!sim.dump.empty()) {
      std::ofstream f(sim.dump, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + sim.dump);
      const double horizon = sim.horizon < 0.0 ? sim.t : sim.horizon;
      write_schedule(f, build_schedule(g, sim.lambda, horizon, replica_seed(sim.seed, 0)));
    }
    Table t{{"graph", "lambda", "t", "vertex", "replicas", "seed", "method", "survival", "std_error"}, {}};
    t.add({g.describe(), sim.lambda, sim.t, std::int64_t{x}, e.replicas, static_cast<std::int64_t>(sim.seed),
           to_string(method), e.value, e.std_error});
    sim.out.emit(t);
  });

  // duality
  struct {
    std::string graph;
    double lambda = 0.0, t = 1.0;
    std::int64_t replicas = 10000;
    std::uint64_t seed = 1;
    Output out;
  } dua;
  auto* duality = app.add_subcommand("duality", "Compare P(eta_t(x) = 1) with P(A_t != empty)");
  duality->add_option("--graph", dua.graph)->required();
  duality->add_option("--lambda", dua.lambda)->required();
  duality->add_option("--t", dua.t)->required();
  duality->add_option("--replicas", dua.replicas);
  duality->add_option("--seed", dua.seed);
  add_output(duality, dua.out);
  duality->callback([&] {
    const auto g = build_graph(parse_graph_spec(dua.graph));
    const auto x = default_observed_vertex(g);
    const auto r = duality_check(g, x, dua.lambda, dua.t, dua.replicas, dua.seed);
    Table t{{"graph", "lambda", "t", "vertex", "replicas", "p_eta", "se_eta", "p_dual", "se_dual", "z"}, {}};
    t.add({g.describe(), dua.lambda, dua.t, std::int64_t{x}, dua.replicas, r.p_eta.value, r.p_eta.std_error,
           r.p_dual.value, r.p_dual.std_error, r.z});
    dua.out.emit(t);
    if (r.z >= 4.0) status = kExitInvariant;
  });

  // scan
  struct {
    std::string graph, grid;
    double t = 1.0;
    std::int64_t replicas = 2000;
    std::uint64_t seed = 1;
    Output out;
  } sc;
  auto* scan = app.add_subcommand("scan", "Survival over a lambda grid on thinned shared clocks");
  scan->add_option("--graph", sc.graph)->required();
  scan->add_option("--lambda-grid", sc.grid, "a:b:step")->required();
  scan->add_option("--t", sc.t)->required();
  scan->add_option("--replicas", sc.replicas);
  scan->add_option("--seed", sc.seed);
  add_output(scan, sc.out);
  scan->callback([&] {
    const auto g = build_graph(parse_graph_spec(sc.graph));
    const auto grid = parse_grid(sc.grid);
    const auto r = lambda_scan(g, grid, sc.t, default_observed_vertex(g), sc.replicas, sc.seed);
    Table t{{"lambda", "survival", "std_error", "replicas", "monotonicity_violations"}, {}};
    for (const auto& row : r.rows)
      t.add({row.lambda, row.survival.value, row.survival.std_error, row.survival.replicas,
             r.monotonicity_violations});
    sc.out.emit(t);
    if (r.monotonicity_violations > 0) status = kExitInvariant;
  });

  // critical
  struct {
    std::string graph, bracket, method = "auto";
    CriticalOptions o;
    Output out;
  } cr;
  auto* critical = app.add_subcommand("critical", "Bisection for the survival threshold crossing");
  critical->add_option("--graph", cr.graph)->required();
  critical->add_option("--bracket", cr.bracket, "lo,hi")->required();
  critical->add_option("--threshold", cr.o.threshold);
  critical->add_option("--tol", cr.o.tol);
  critical->add_option("--t", cr.o.t);
  critical->add_option("--replicas", cr.o.replicas);
  critical->add_option("--seed", cr.o.seed);
  critical->add_option("--method", cr.method, "auto, forward, clocks or dual");
  critical->add_option("--dual-cap", cr.o.survival.dual_cap, "Dual population counted as surviving (0 = off)");
  add_output(critical, cr.out);
  critical->callback([&] {
    const auto g = build_graph(parse_graph_spec(cr.graph));
    const auto b = parse_reals(cr.bracket);
    if (b.size() != 2) throw std::invalid_argument("bracket must be lo,hi");
    cr.o.survival.method = parse_method(cr.method);
    const auto r = critical_estimate(g, b[0], b[1], cr.o);
    Table t{{"graph", "lo", "hi", "estimate", "threshold", "t", "replicas", "method", "note"}, {}};
    t.add({g.describe(), r.lo, r.hi, r.estimate, r.threshold, r.t, cr.o.replicas, to_string(r.method),
           r.disclaimer});
    cr.out.emit(t);
  });

  // green
  struct {
    std::string d = "3";
    int terms = kDefaultGreenTerms;
    std::string mode = "local_clt";
    Output out;
  } gr;
  auto* green = app.add_subcommand("green", "Green function G_d(0,0) and F_d(e_1)");
  green->add_option("--d", gr.d, "Dimension or comma list")->required();
  green->add_option("--terms", gr.terms, "Series truncation N");
  green->add_option("--tail", gr.mode, "local_clt or block_bounds")->check(CLI::IsMember({"local_clt", "block_bounds"}));
  add_output(green, gr.out);
  green->callback([&] {
    const auto mode = gr.mode == "block_bounds" ? TailMode::block_bounds : TailMode::local_clt;
    Table t{{"d", "N", "G", "tail", "uncertainty", "F_e1", "2d_F_e1"}, {}};
    for (int d : parse_ints(gr.d)) {
      const auto g = green_function(d, gr.terms, mode);
      const double f = (g.value - 1.0) / g.value;
      t.add({std::int64_t{d}, std::int64_t{gr.terms}, g.value, g.tail, g.uncertainty, f, 2.0 * d * f});
    }
    gr.out.emit(t);
  });

  // moments
  struct {
    int d = 5, radius = 4;
    double lambda = 0.3;
    std::string times = "0,0.5,1,2,5";
    Output out;
  } mo;
  auto* moments = app.add_subcommand("moments", "Truncated second moment G_t(0) against the harmonic bound");
  moments->add_option("--d", mo.d)->required();
  moments->add_option("--lambda", mo.lambda)->required();
  moments->add_option("--radius", mo.radius);
  moments->add_option("--times", mo.times, "Comma list");
  add_output(moments, mo.out);
  moments->callback([&] {
    const auto q = build_q(mo.d, mo.lambda, mo.radius);
    std::optional<double> bound;
    if (mo.d >= 3) {
      try {
        bound = second_moment_bound(build_h(mo.d, mo.lambda, hitting_table(mo.d, mo.radius), mo.radius));
      } catch (const HypothesisError& e) {
        std::cerr << "note: " << e.what() << "; bound column left empty\n";
      }
    }
    const auto times = parse_reals(mo.times);
    Table t{{"t", "G_t0", "bound", "leakage"}, {}};
    bool ok = true;
    for (const auto& row : integrate_second_moment(q, times)) {
      t.add({row.t, row.g_origin, opt_cell(bound), row.leakage});
      if (bound && row.g_origin > *bound + row.leakage) ok = false;
    }
    mo.out.emit(t);
    if (!ok) status = kExitInvariant;
  });

  // bounds
  struct {
    std::string lattice, tree;
    Output out;
  } bo;
  auto* bounds = app.add_subcommand("bounds", "Analytic bounds on the critical value");
  auto* lat = bounds->add_option("--lattice", bo.lattice, "Comma list of d");
  auto* tre = bounds->add_option("--tree", bo.tree, "Comma list of n");
  lat->excludes(tre);
  add_output(bounds, bo.out);
  bounds->callback([&] {
    if (bo.lattice.empty() && bo.tree.empty()) throw CLI::ValidationError("bounds", "give --lattice or --tree");
    const auto ds = bo.lattice.empty() ? std::vector<int>{} : parse_ints(bo.lattice);
    const auto ns = bo.tree.empty() ? std::vector<int>{} : parse_ints(bo.tree);
    Table t{{"family", "parameter", "degree", "lower", "upper", "scaled_lower", "scaled_upper", "F_e1", "note"}, {}};
    bool ok = true;
    for (const auto& r : bounds_report(ds, ns)) {
      t.add({r.family, std::int64_t{r.parameter}, std::int64_t{r.degree}, r.lower, opt_cell(r.upper), r.scaled_lower,
             opt_cell(r.scaled_upper), opt_cell(r.f_e1), r.upper_note});
      if (r.upper && r.lower > *r.upper) ok = false;
    }
    bo.out.emit(t);
    if (!ok) status = kExitInvariant;
  });

  // qcheck
  struct {
    int d = 2, radius = 6;
    double lambda = 0.3;
    Output out;
  } qc;
  auto* qcheck = app.add_subcommand("qcheck", "Invariant checks on the truncated moment matrix");
  qcheck->add_option("--d", qc.d)->required();
  qcheck->add_option("--lambda", qc.lambda)->required();
  qcheck->add_option("--radius", qc.radius);
  add_output(qcheck, qc.out);
  qcheck->callback([&] {
    const auto q = build_q(qc.d, qc.lambda, qc.radius);
    const auto& box = q.box();
    const double d = qc.d, lam = qc.lambda;
    Table t{{"check", "pass", "value"}, {}};
    bool all = true;
    auto add = [&](const std::string& name, bool pass, double value) {
      t.add({name, pass, value});
      all = all && pass;
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (i != box.origin() && box.sup_norm(i) < box.radius()) worst = std::max(worst, std::fabs(q.row_sum(i)));
    add("interior_row_sums_zero", worst == 0.0, worst);
    const double r0 = q.row_sum(box.origin());
    add("origin_row_sum", std::fabs(r0 - (1.0 + 4.0 * lam * d * d)) <= 1e-12, r0);
    bool nonneg = true;
    for (std::size_t i = 0; i < q.size(); ++i)
      q.for_each_in_row(i, [&](std::size_t c, double v) {
        if (c != i && v < 0.0) nonneg = false;
        if (c == i && v < -q.shift()) nonneg = false;
      });
    add("off_diagonal_nonnegative", nonneg, 0.0);
    std::vector<double> v(q.size(), 1.0);
    for (int n = 1; n <= 5; ++n) {
      v = q.apply(v);
      double sup = 0.0;
      for (double x : v) sup = std::max(sup, std::fabs(x));
      add("norm_growth_n" + std::to_string(n), sup <= std::pow(q.norm_bound(), n), sup);
    }
    const std::size_t stride = std::max<std::size_t>(1, q.size() / 400);
    for (double tt : {0.1, 0.5, 1.0}) {
      double low = 0.0;
      std::vector<double> e(q.size(), 0.0);
      for (std::size_t c = 0; c < q.size(); c += stride) {
        e[c] = 1.0;
        for (double x : expm_apply(q, e, tt)) low = std::min(low, x);
        e[c] = 0.0;
      }
      std::ostringstream name;
      name << "expm_nonnegative_t" << tt;
      add(name.str(), low >= -1e-10, low);
    }
    qc.out.emit(t);
    if (!all) status = kExitInvariant;
  });

  // branch
  struct {
    int n = 5, depth = 12;
    double lambda = 0.5, t = 20.0;
    std::int64_t replicas = 10000;
    std::uint64_t seed = 1;
    std::uint64_t cap = 0;
    Output out;
  } br;
  auto* branch = app.add_subcommand("branch", "Survival of the branching process S_t on the son-only tree");
  branch->add_option("--n", br.n)->required();
  branch->add_option("--lambda", br.lambda)->required();
  branch->add_option("--t", br.t);
  branch->add_option("--depth", br.depth, "Truncation depth");
  branch->add_option("--replicas", br.replicas);
  branch->add_option("--seed", br.seed);
  branch->add_option("--untruncated-cap", br.cap, "Also run the untruncated tree with this population cap");
  add_output(branch, br.out);
  branch->callback([&] {
    Table t{{"n", "depth", "lambda", "t", "replicas", "survival", "std_error", "offspring_mean", "offspring_se",
             "offspring_expected", "leaf_removals", "capped"},
            {}};
    auto add = [&](const BranchingReport& r) {
      t.add({std::int64_t{r.n}, r.depth < 0 ? Cell{} : Cell{std::int64_t{r.depth}}, r.lambda, r.t, r.survival.replicas,
             r.survival.value, r.survival.std_error, r.offspring_mean, r.offspring_se, r.offspring_expected,
             static_cast<std::int64_t>(r.leaf_removals), r.capped});
    };
    add(branching_survival(br.n, br.lambda, br.t, br.depth, br.replicas, br.seed));
    if (br.cap > 0) add(branching_survival_untruncated(br.n, br.lambda, br.t, br.replicas, br.seed, br.cap));
    br.out.emit(t);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return status;
}
