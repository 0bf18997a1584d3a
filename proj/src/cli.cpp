#include "sharpbmo/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

#include "sharpbmo/errors.hpp"
#include "sharpbmo/serialize.hpp"

namespace sharpbmo {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Shared {
  std::optional<double> p, r;
  double eps = 1.0;
  std::optional<double> tol;
  std::string format = "json";
  std::uint64_t seed = 1;
};

struct PointArgs {
  std::optional<double> x1, x2, x3;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

// One command's output before formatting.
struct Document {
  std::string command;
  json params = json::object();
  json result = json::object();
  json warnings = json::array();
  std::optional<Table> table;  // preferred csv layout
};

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, j);
  }
}

void emit(const Document& doc, const std::string& format, std::ostream& out) {
  if (format == "json") {
    json j = {{"command", doc.command},
              {"params", doc.params},
              {"result", doc.result},
              {"diagnostics", {{"warnings", doc.warnings}}}};
    out << j.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    Table t;
    if (doc.table) {
      t = *doc.table;
    } else {
      std::vector<std::pair<std::string, json>> flat;
      flatten(doc.result, "", flat);
      t.rows.emplace_back();
      for (auto& [k, v] : flat) {
        t.header.push_back(k);
        t.rows.back().push_back(v);
      }
    }
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell(row[i]);
      out << "\n";
    }
    return;
  }
  std::vector<std::pair<std::string, json>> flat;
  flatten(doc.result, "", flat);
  out << doc.command << "\n";
  for (auto& [k, v] : flat) out << "  " << k << ": " << cell(v) << "\n";
}

QuadCtx make_ctx(const Shared& s) {
  QuadCtx ctx;
  if (s.tol) {
    if (!(*s.tol > 0)) throw UsageError("--tol must be positive");
    ctx.rel_tol = *s.tol;
  }
  return ctx;
}

double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  return *v;
}

Params make_params(const Shared& s) {
  Params prm{need(s.p, "--p"), need(s.r, "--r"), s.eps, make_ctx(s)};
  prm.validate(false);
  return prm;
}

Point3 make_point(const PointArgs& a) {
  return {need(a.x1, "--x1"), need(a.x2, "--x2"), need(a.x3, "--x3")};
}

Extremum parse_which(const std::string& w) { return w == "min" ? Extremum::Min : Extremum::Max; }

Document cmd_constant(const Shared& s) {
  Document d;
  d.command = "constant";
  const double p = need(s.p, "--p"), r = need(s.r, "--r");
  d.params = {{"p", p}, {"r", r}};
  const ConstantResult c = constant(p, r, make_ctx(s));
  d.result = to_json(c);
  if (c.near_two_fallback)
    d.warnings.push_back("r is within 1e-6 of 2; returned the gamma formula limit");
  return d;
}

Document cmd_eval(const Shared& s, const PointArgs& pa, const std::string& which,
                  const std::string& cand) {
  Document d;
  d.command = "eval";
  const Params prm = make_params(s);
  const Point3 x = make_point(pa);
  d.params = to_json(prm);
  d.params["point"] = to_json(x);
  Candidate c = Candidate::B2;
  if (!which.empty()) c = candidate_for(prm, parse_which(which));
  if (!cand.empty()) {
    const Candidate asked = cand == "b1" ? Candidate::B1 : Candidate::B2;
    if (!which.empty() && asked != c) throw UsageError("--candidate disagrees with --which");
    c = asked;
  }
  const Evaluation e = c == Candidate::B2 ? evaluate_b2(x, prm) : evaluate_b1(x, prm);
  d.result = {{"candidate", c == Candidate::B2 ? "b2" : "b1"},
              {"value", e.value},
              {"label", to_string(e.label)},
              {"leaf", to_json(e.leaf)},
              {"gradient", nullptr}};
  if (c == Candidate::B2) {
    const Gradient g = grad_b2(x, prm);
    d.result["gradient"] = to_json(g);
    if (g.finite_difference) d.warnings.push_back("gradient from finite differences");
  }
  return d;
}

Document cmd_classify(const Shared& s, const PointArgs& pa) {
  Document d;
  d.command = "classify";
  const Params prm = make_params(s);
  const Point3 x = make_point(pa);
  d.params = to_json(prm);
  d.params["point"] = to_json(x);
  const bool b2_ok = prm.p != 2 && prm.r != 2;
  d.result = {{"label_b1", to_string(classify_b1(x, prm))},
              {"label_b2", b2_ok ? json(to_string(classify_b2(x, prm))) : json(nullptr)},
              {"omega", omega_region(x.xy(), prm.eps)}};
  if (!b2_ok) d.warnings.push_back("B2 is not defined for p = 2 or r = 2");
  return d;
}

Document cmd_optimizer(const Shared& s, const PointArgs& pa, int n_grid) {
  Document d;
  d.command = "optimizer";
  const Params prm = make_params(s);
  prm.validate(true);
  const Point3 x = make_point(pa);
  d.params = to_json(prm);
  d.params["point"] = to_json(x);
  d.params["n_grid"] = n_grid;
  const TestFunction f = optimizer_for(x, prm);
  const double b = eval_b2(x, prm);
  const double m1 = moment(f, 1, true, prm.ctx), m2 = moment(f, 2, false, prm.ctx);
  const double mp = moment(f, prm.p, false, prm.ctx), mr = moment(f, prm.r, false, prm.ctx);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  const double err = std::max({rel(m1, x.x1), rel(m2, x.x2), rel(mp, x.x3), rel(mr, b)});
  d.result = {{"label", to_string(classify_b2(x, prm))},
              {"test_function", to_json(f)},
              {"target", {{"x1", x.x1}, {"x2", x.x2}, {"x3", x.x3}, {"b", b}}},
              {"moments", {{"x1", m1}, {"x2", m2}, {"x3", mp}, {"b", mr}}},
              {"max_rel_error", err},
              {"bmo_norm", bmo_norm(f, n_grid)}};
  Table t{{"t_start", "t_end", "kind", "value", "sign", "scale", "arg_start", "arg_end"}, {}};
  for (const auto& seg : d.result["test_function"]["segments"])
    t.rows.push_back({seg["t_start"], seg["t_end"], seg["kind"], seg.value("value", json()),
                      seg.value("sign", json()), seg.value("scale", json()),
                      seg.value("arg_start", json()), seg.value("arg_end", json())});
  d.table = std::move(t);
  return d;
}

Document cmd_profile(const Shared& s, int n) {
  Document d;
  d.command = "profile";
  const double p = need(s.p, "--p"), r = need(s.r, "--r");
  d.params = {{"p", p}, {"r", r}, {"n", n}};
  const auto rows = ratio_profile(p, r, n, make_ctx(s));
  json arr = json::array();
  Table t{{"x3", "ratio"}, {}};
  for (const auto& row : rows) {
    arr.push_back({{"x3", row.x3}, {"ratio", row.ratio}});
    t.rows.push_back({row.x3, row.ratio});
  }
  d.result = {{"rows", std::move(arr)}};
  d.table = std::move(t);
  return d;
}

Document cmd_verify(const Shared& s, const std::string& suite, int n, const std::string& which) {
  Document d;
  d.command = "verify";
  const Params prm = make_params(s);
  prm.validate(true);
  d.params = to_json(prm);
  d.params["suite"] = suite;
  d.params["seed"] = s.seed;
  std::vector<ProbeReport> reps;
  const bool all = suite == "all";
  if (all || suite == "concavity") reps.push_back(concavity_probe(prm, n > 0 ? n : 10000, s.seed));
  if (all || suite == "smooth")
    for (auto& r : smoothness_probe(prm, n > 0 ? n : 50, 1e-5, 1e-4, s.seed)) reps.push_back(r);
  if (all || suite == "envelope") {
    const Extremum w = parse_which(which.empty() ? "max" : which);
    const double h = 6.0 * prm.eps / 199;
    const int halo = static_cast<int>(std::ceil(4 * prm.eps / h));
    const Grid2 g = make_envelope_grid(-3 * prm.eps, 3 * prm.eps, 200, prm.eps, halo);
    const EnvelopeResult env = envelope_oracle_2d(prm.p, g, w, n > 0 ? n : 40);
    reps.push_back(envelope_compare(env, prm.p, w, -3 * prm.eps, 3 * prm.eps, 10));
    if (!env.converged) d.warnings.push_back("envelope iteration stopped before the change fell below 1e-8");
  }
  if (all || suite == "mc")
    reps.push_back(inequality_monte_carlo(prm.p, prm.r, n > 0 ? n : 1000, s.seed, prm.ctx));
  json arr = json::array();
  Table t{{"name", "n_samples", "worst_violation", "threshold", "passed", "statistic"}, {}};
  bool ok = true;
  for (const auto& r : reps) {
    arr.push_back(to_json(r));
    t.rows.push_back({r.name, r.n_samples, number(r.worst_violation), r.threshold, r.passed,
                      number(r.statistic)});
    ok = ok && r.passed;
  }
  d.result = {{"reports", std::move(arr)}, {"all_passed", ok}};
  d.table = std::move(t);
  return d;
}

Document cmd_scan(const Shared& s, double p_lo, double p_hi, int np, double r_lo, double r_hi,
                  int nr) {
  Document d;
  d.command = "scan";
  if (np < 1 || nr < 1) throw UsageError("--np and --nr must be positive");
  d.params = {{"p_min", p_lo}, {"p_max", p_hi}, {"np", np},
              {"r_min", r_lo}, {"r_max", r_hi}, {"nr", nr}};
  auto grid = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nr; ++j) {
      const double p = grid(p_lo, p_hi, np, i), r = grid(r_lo, r_hi, nr, j);
      if (r > p && p >= 1) pairs.emplace_back(p, r);
    }
  const QuadCtx ctx = make_ctx(s);
  std::vector<ConstantResult> res(pairs.size());
  std::vector<std::string> errors(pairs.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), pairs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < pairs.size(); k += workers) {
        try {
          res[k] = constant(pairs[k].first, pairs[k].second, ctx);
        } catch (const std::exception& e) {
          errors[k] = e.what();
        }
      }
    });
  for (auto& t : pool) t.join();
  json arr = json::array();
  Table t{{"p", "r", "C", "branch", "xi_star"}, {}};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [p, r] = pairs[k];
    if (!errors[k].empty()) {
      d.warnings.push_back("p=" + json(p).dump() + " r=" + json(r).dump() + ": " + errors[k]);
      continue;
    }
    const json xi = res[k].xi_star ? json(*res[k].xi_star) : json(nullptr);
    arr.push_back({{"p", p}, {"r", r}, {"c", res[k].c}, {"branch", to_string(res[k].branch)}, {"xi_star", xi}});
    t.rows.push_back({p, r, res[k].c, to_string(res[k].branch), xi});
  }
  d.result = {{"rows", std::move(arr)}};
  d.table = std::move(t);
  return d;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp BMO interpolation constants and Bellman functions", "bmo_cli"};
  app.require_subcommand(1);
  Shared sh;
  PointArgs pa;
  std::string which, cand, suite = "all";
  int n_grid = 4000, n_rows = 101, n_samples = 0;
  double p_lo = 1, p_hi = 3, r_lo = 1.1, r_hi = 4;
  int np = 9, nr = 9;
  bool format_given = false;

  auto shared = [&](CLI::App* c) {
    c->add_option("--p", sh.p, "exponent p >= 1");
    c->add_option("--r", sh.r, "exponent r > p");
    c->add_option("--eps", sh.eps, "BMO scale")->capture_default_str();
    c->add_option("--tol", sh.tol, "relative quadrature tolerance");
    c->add_option_function<std::string>(
         "--format", [&](const std::string& f) { sh.format = f; format_given = true; },
         "json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    c->add_option("--seed", sh.seed, "random seed")->capture_default_str();
  };
  auto point = [&](CLI::App* c) {
    c->add_option("--x1", pa.x1);
    c->add_option("--x2", pa.x2);
    c->add_option("--x3", pa.x3);
  };
  auto* c_const = app.add_subcommand("constant", "sharp constant C(p, r)");
  auto* c_eval = app.add_subcommand("eval", "evaluate a Bellman candidate");
  auto* c_class = app.add_subcommand("classify", "subdomain labels of a point");
  auto* c_opt = app.add_subcommand("optimizer", "extremal test function at a point");
  auto* c_prof = app.add_subcommand("profile", "B(0, 1, x3) / x3 across the central interval");
  auto* c_ver = app.add_subcommand("verify", "numerical probes");
  auto* c_scan = app.add_subcommand("scan", "C(p, r) over a grid");
  for (auto* c : {c_const, c_eval, c_class, c_opt, c_prof, c_ver, c_scan}) shared(c);
  for (auto* c : {c_eval, c_class, c_opt}) point(c);
  c_eval->add_option("--which", which)->check(CLI::IsMember({"max", "min"}));
  c_eval->add_option("--candidate", cand)->check(CLI::IsMember({"b1", "b2"}));
  c_opt->add_option("--n-grid", n_grid, "BMO mesh size")->capture_default_str()->check(CLI::Range(2, 1000000));
  c_prof->add_option("--n", n_rows)->capture_default_str()->check(CLI::Range(3, 1000000));
  c_ver->add_option("--suite", suite)->capture_default_str()
      ->check(CLI::IsMember({"all", "concavity", "smooth", "envelope", "mc"}));
  c_ver->add_option("--n", n_samples, "samples per probe (0 = default)")->check(CLI::NonNegativeNumber);
  c_ver->add_option("--which", which)->check(CLI::IsMember({"max", "min"}));
  c_scan->add_option("--p-min", p_lo)->capture_default_str();
  c_scan->add_option("--p-max", p_hi)->capture_default_str();
  c_scan->add_option("--np", np)->capture_default_str();
  c_scan->add_option("--r-min", r_lo)->capture_default_str();
  c_scan->add_option("--r-max", r_hi)->capture_default_str();
  c_scan->add_option("--nr", nr)->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Document doc;
    if (c_const->parsed()) doc = cmd_constant(sh);
    else if (c_eval->parsed()) doc = cmd_eval(sh, pa, which, cand);
    else if (c_class->parsed()) doc = cmd_classify(sh, pa);
    else if (c_opt->parsed()) doc = cmd_optimizer(sh, pa, n_grid);
    else if (c_prof->parsed()) doc = cmd_profile(sh, n_rows);
    else if (c_ver->parsed()) doc = cmd_verify(sh, suite, n_samples, which);
    else {
      if (!format_given) sh.format = "csv";
      doc = cmd_scan(sh, p_lo, p_hi, np, r_lo, r_hi, nr);
    }
    for (const auto& w : doc.warnings) err << "warning: " << w.get<std::string>() << "\n";
    emit(doc, sh.format, out);
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace sharpbmo
