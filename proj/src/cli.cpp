#include "inls/cli.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "inls/csv.hpp"
#include "inls/evolve.hpp"
#include "inls/exponents.hpp"
#include "inls/functionals.hpp"
#include "inls/groundstate.hpp"

namespace inls {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kCommands = {"params", "pairs", "groundstate", "classify", "evolve", "sweep"};

void allow_keys(const json& obj, const std::string& where, const std::set<std::string>& keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!keys.count(it.key())) throw ConfigError("unknown key " + (where.empty() ? "" : where + ".") + it.key());
}

// Numbers keep their JSON text so that 0.3 parses as 3/10 exactly.
Rational rational_of(const json& v, const std::string& key) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
  } catch (const std::exception&) {
  }
  throw ConfigError(key + " must be a number or rational string");
}

double real_of(const json& v, const std::string& key) {
  const double x = to_double(rational_of(v, key));
  if (!std::isfinite(x)) throw ConfigError(key + " must be finite");
  return x;
}

long long int_of(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
  return v.get<long long>();
}

bool bool_of(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key + " must be a boolean");
  return v.get<bool>();
}

std::string string_of(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + " must be a string");
  return v.get<std::string>();
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  c.raw = j;
  allow_keys(j, "", {"model", "grid", "solver", "evolve", "pairs", "probe", "field", "sweep", "output", "seed"});

  if (!j.contains("model")) throw ConfigError("model section is required");
  const json& m = j["model"];
  allow_keys(m, "model", {"N", "alpha", "b", "test_mode"});
  for (const char* k : {"N", "alpha", "b"})
    if (!m.contains(k)) throw ConfigError(std::string("model.") + k + " is required");
  const long long N = int_of(m["N"], "model.N");
  if (N < 1 || N > 64) throw ConfigError("model.N must satisfy 1 <= N <= 64");
  c.N = static_cast<int>(N);
  c.alpha_q = rational_of(m["alpha"], "model.alpha");
  c.b_q = rational_of(m["b"], "model.b");
  if (!(c.alpha_q > 0)) throw ConfigError("model.alpha must be > 0");
  if (!(c.b_q >= 0)) throw ConfigError("model.b must be >= 0");
  if (!(c.b_q < c.N)) throw ConfigError("model.b must be < N");
  if (m.contains("test_mode")) c.test_mode = bool_of(m["test_mode"], "model.test_mode");
  c.params = ModelParams::make(c.N, to_double(c.alpha_q), to_double(c.b_q));

  if (j.contains("grid")) {
    const json& g = j["grid"];
    allow_keys(g, "grid", {"J", "h"});
    if (g.contains("J")) {
      const long long J = int_of(g["J"], "grid.J");
      if (J < 16 || J > 50000000) throw ConfigError("grid.J must satisfy 16 <= J <= 5e7");
      c.J = static_cast<int>(J);
    }
    if (g.contains("h")) {
      c.h = real_of(g["h"], "grid.h");
      if (!(*c.h > 0.0)) throw ConfigError("grid.h must be > 0");
    }
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    allow_keys(s, "solver", {"method", "tol", "max_iter"});
    if (s.contains("method")) {
      c.method = string_of(s["method"], "solver.method");
      if (c.method != "shooting" && c.method != "fixedpoint" && c.method != "both")
        throw ConfigError("solver.method must be shooting, fixedpoint or both");
    }
    if (s.contains("tol")) {
      c.tol = real_of(s["tol"], "solver.tol");
      if (!(c.tol > 0.0)) throw ConfigError("solver.tol must be > 0");
    }
    if (s.contains("max_iter")) {
      const long long k = int_of(s["max_iter"], "solver.max_iter");
      if (k < 1 || k > 10000000) throw ConfigError("solver.max_iter must be >= 1");
      c.max_iter = static_cast<int>(k);
    }
  }

  if (j.contains("evolve")) {
    const json& e = j["evolve"];
    allow_keys(e, "evolve", {"dt", "t_end", "record_every", "virial_R", "linear", "J", "h", "dt_safety"});
    auto& ev = c.evolve;
    if (e.contains("dt")) ev.dt = real_of(e["dt"], "evolve.dt");
    if (e.contains("t_end")) ev.t_end = real_of(e["t_end"], "evolve.t_end");
    if (e.contains("record_every")) {
      const long long k = int_of(e["record_every"], "evolve.record_every");
      if (k < 1 || k > 100000000) throw ConfigError("evolve.record_every must be >= 1");
      ev.record_every = static_cast<int>(k);
    }
    if (e.contains("virial_R")) ev.virial_R = real_of(e["virial_R"], "evolve.virial_R");
    if (e.contains("linear")) ev.linear = bool_of(e["linear"], "evolve.linear");
    if (e.contains("J")) {
      const long long J = int_of(e["J"], "evolve.J");
      if (J < 16 || J > 50000000) throw ConfigError("evolve.J must satisfy 16 <= J <= 5e7");
      ev.J = static_cast<int>(J);
    }
    if (e.contains("h")) ev.h = real_of(e["h"], "evolve.h");
    if (e.contains("dt_safety")) ev.dt_safety = real_of(e["dt_safety"], "evolve.dt_safety");
    if (!(ev.dt_safety > 0.0)) throw ConfigError("evolve.dt_safety must be > 0");
    if (!(ev.dt > 0.0)) throw ConfigError("evolve.dt must be > 0");
    if (!(ev.t_end > 0.0)) throw ConfigError("evolve.t_end must be > 0");
    if (ev.t_end / ev.dt > 1e9) throw ConfigError("evolve.t_end/dt must be <= 1e9");
    if (ev.h && !(*ev.h > 0.0)) throw ConfigError("evolve.h must be > 0");
  }

  if (j.contains("pairs")) {
    const json& p = j["pairs"];
    allow_keys(p, "pairs", {"theta", "eps", "family_eps"});
    if (p.contains("theta")) c.pairs.theta = rational_of(p["theta"], "pairs.theta");
    if (p.contains("eps")) c.pairs.eps = rational_of(p["eps"], "pairs.eps");
    if (p.contains("family_eps")) c.pairs.family_eps = rational_of(p["family_eps"], "pairs.family_eps");
    if (!(c.pairs.eps > 0 && c.pairs.eps < Rational(1, 100)))
      throw ConfigError("pairs.eps must satisfy 0 < eps < 1/100");
    if (!(c.pairs.family_eps > 0)) throw ConfigError("pairs.family_eps must be > 0");
  }

  if (j.contains("probe")) {
    allow_keys(j["probe"], "probe", {"trials"});
    if (j["probe"].contains("trials")) {
      const long long t = int_of(j["probe"]["trials"], "probe.trials");
      if (t < 1 || t > 1000000) throw ConfigError("probe.trials must satisfy 1 <= trials <= 1e6");
      c.probe_trials = static_cast<int>(t);
    }
  }

  if (j.contains("field")) c.field = string_of(j["field"], "field");

  if (j.contains("output")) {
    const json& o = j["output"];
    allow_keys(o, "output", {"directory", "precision"});
    if (o.contains("directory")) c.out_dir = string_of(o["directory"], "output.directory");
    if (o.contains("precision")) {
      const long long p = int_of(o["precision"], "output.precision");
      if (p < 1 || p > 17) throw ConfigError("output.precision must satisfy 1 <= precision <= 17");
      c.precision = static_cast<int>(p);
    }
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      throw ConfigError("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    allow_keys(s, "sweep", {"command", "parameters"});
    SweepSection sw;
    if (!s.contains("command")) throw ConfigError("sweep.command is required");
    sw.command = string_of(s["command"], "sweep.command");
    if (!kCommands.count(sw.command) || sw.command == "sweep")
      throw ConfigError("sweep.command must name a non-sweep subcommand");
    if (!s.contains("parameters") || !s["parameters"].is_object() || s["parameters"].empty())
      throw ConfigError("sweep.parameters must be a non-empty object");
    for (auto it = s["parameters"].begin(); it != s["parameters"].end(); ++it) {
      if (!it.value().is_array() || it.value().empty())
        throw ConfigError("sweep.parameters." + it.key() + " must be a non-empty list");
      if (it.key().find('.') == std::string::npos || it.key().rfind("sweep.", 0) == 0)
        throw ConfigError("sweep.parameters." + it.key() + " must be a dotted key outside sweep");
      sw.parameters[it.key()] = std::vector<json>(it.value().begin(), it.value().end());
    }
    c.sweep = sw;
  }
  return c;
}

namespace {

struct Context {
  RunConfig cfg;
  std::string out_dir;
  std::optional<std::string> field;
  std::ostream& out;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  ensure_dir(dir);
  const fs::path p = fs::path(dir) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write " + p.string());
  return f;
}

void close_checked(std::ofstream& f, const std::string& name) {
  f.close();
  if (!f) throw IoError("write failed for " + name);
}

void write_csv(const std::string& dir, const std::string& name, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto f = open_out(dir, name);
  f << join_csv(header) << '\n';
  for (const auto& r : rows) f << join_csv(r) << '\n';
  close_checked(f, name);
}

std::string fmt(const RunConfig& c, double v) { return std::isfinite(v) ? format_real(v, c.precision) : "nan"; }
std::string yes(bool b) { return b ? "true" : "false"; }

GridPtr model_grid(const RunConfig& c) {
  if (!c.J || !c.h) throw ConfigError("grid.J and grid.h are required for this command");
  return RadialGrid::create(c.N, *c.J, *c.h);
}

GroundState solve(const RunConfig& c, GridPtr g, const std::string& method) {
  if (method == "shooting") {
    ShootingOptions o;
    o.allow_out_of_scope = c.test_mode;
    return solve_shooting(c.params, std::move(g), o);
  }
  FixedPointOptions o;
  o.allow_out_of_scope = c.test_mode;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  return solve_fixedpoint(c.params, std::move(g), o);
}

void require_model_scope(const RunConfig& c) {
  if (c.test_mode) return;
  if (!validate_scope(c.params).global_scope)
    throw ConfigError("model parameters outside global scope ((4-2b)/N < alpha < 2^*, 0 < b < min(2,N)); "
                      "set model.test_mode to override");
}

int cmd_params(Context& x) {
  const auto& c = x.cfg;
  const auto& p = c.params;
  auto& o = x.out;
  o << "N=" << p.N << '\n';
  o << "alpha=" << to_string(c.alpha_q) << '\n';
  o << "b=" << to_string(c.b_q) << '\n';
  o << "s_c=" << fmt(c, p.s_c) << '\n';
  o << "sigma=" << (p.sigma ? fmt(c, *p.sigma) : std::string("undefined")) << '\n';
  if (p.N >= 2) {
    const auto u = upper_exponents(p.N, p.b);
    o << "two_star=" << u.two_star.to_string() << '\n';
    o << "two_lower_star=" << u.two_lower_star.to_string() << '\n';
  } else {
    o << "two_star=undefined\ntwo_lower_star=undefined\n";
  }
  const auto s = validate_scope(p);
  o << "mass_supercritical=" << yes(s.mass_supercritical) << '\n';
  o << "energy_subcritical=" << yes(s.energy_subcritical) << '\n';
  o << "below_two_lower_star=" << yes(s.below_two_lower_star) << '\n';
  o << "b_theorem_ok=" << yes(s.b_theorem_ok) << '\n';
  o << "b_global_ok=" << yes(s.b_global_ok) << '\n';
  o << "sc_in_unit=" << yes(s.sc_in_unit) << '\n';
  o << "theorem_scope=" << yes(s.theorem_scope) << '\n';
  o << "global_scope=" << yes(s.global_scope) << '\n';
  return 0;
}

int cmd_pairs(Context& x) {
  const auto& c = x.cfg;
  const ExactParams ep{c.N, c.alpha_q, c.b_q};
  if (auto v = theorem_scope_violation(ep)) throw ConfigError("pairs: theorem scope violated: " + *v);
  const EpsilonPolicy policy(c.pairs.eps);
  const Rational theta = c.pairs.theta.value_or(default_theta(ep));
  std::vector<FamilyCertificate> certs;
  try {
    if (c.N == 3) certs.push_back(family_lemma43(c.alpha_q, c.b_q, theta, policy).cert);
    certs.push_back(family_claim1(c.alpha_q, c.b_q, theta, c.N, policy).cert);
    certs.push_back(family_claim2(c.alpha_q, c.b_q, theta, c.N, c.pairs.family_eps, policy).cert);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::vector<std::string>> rows;
  bool all = true;
  for (const auto& cert : certs) {
    for (auto& r : certificate_rows(cert)) rows.push_back(std::move(r));
    all = all && cert.all_hold();
  }
  write_csv(x.out_dir, "certificate.csv", certificate_header(), rows);

  std::vector<std::vector<std::string>> ranges;
  for (const auto& cert : certs)
    for (const auto& r : cert.ranges) ranges.push_back({cert.family, r.name, yes(r.holds)});
  write_csv(x.out_dir, "ranges.csv", {"family", "check", "holds"}, ranges);

  std::vector<std::vector<std::string>> app;
  for (const auto& e : appendix_checks(c.N, c.alpha_q, c.b_q, theta, c.pairs.family_eps)) {
    app.push_back({e.name, yes(e.applicable), yes(e.lhs), yes(e.rhs), yes(e.holds())});
    all = all && e.holds();
  }
  write_csv(x.out_dir, "appendix.csv", {"check", "applicable", "lhs", "rhs", "holds"}, app);

  write_csv(x.out_dir, "certificate_meta.csv", {"key", "value"},
            {{"eps", to_string(c.pairs.eps)},
             {"endpoint_convention", "eps-shifted endpoints closed; unshifted endpoints open"},
             {"family_eps", to_string(c.pairs.family_eps)},
             {"theta", to_string(theta)}});
  x.out << "families=" << certs.size() << '\n';
  x.out << "pairs=" << rows.size() << '\n';
  x.out << "theta=" << to_string(theta) << '\n';
  x.out << "all_hold=" << yes(all) << '\n';
  return 0;
}

int cmd_groundstate(Context& x) {
  const auto& c = x.cfg;
  require_model_scope(c);
  const auto g = model_grid(c);
  std::vector<std::string> methods;
  if (c.method == "both")
    methods = {"shooting", "fixedpoint"};
  else
    methods = {c.method};

  std::vector<std::vector<std::string>> ids, sharp, probes, summary;
  for (const auto& m : methods) {
    const GroundState gs = solve(c, g, m);
    {
      auto f = open_out(x.out_dir, "profile_" + m + ".csv");
      write_field_csv(f, gs.profile, c.precision);
      close_checked(f, "profile_" + m + ".csv");
    }
    for (const auto& r : verify_identities(gs).rows)
      ids.push_back({r.name + "/" + m, fmt(c, r.lhs), fmt(c, r.rhs), fmt(c, r.rel_residual)});
    summary.push_back({m, fmt(c, gs.amplitude), fmt(c, gs.mass2), fmt(c, gs.grad2), fmt(c, gs.potential),
                       fmt(c, gs.energy), fmt(c, gs.residual), std::to_string(gs.iterations)});
    if (c.params.s_c > 0.0 && c.params.s_c < 1.0) {
      const auto s = sharp_constant(gs);
      sharp.push_back({m, fmt(c, s.cgn_formula), fmt(c, s.cgn_direct), fmt(c, s.rel_gap)});
      const auto pr = gn_maximality_probe(gs, c.probe_trials, c.seed);
      probes.push_back({m, std::to_string(pr.trials), std::to_string(c.seed), fmt(c, pr.max_quotient),
                        fmt(c, pr.cgn_direct), fmt(c, pr.tol), yes(pr.holds)});
    }
  }
  write_csv(x.out_dir, "identities.csv", {"identity", "lhs", "rhs", "rel_residual"}, ids);
  write_csv(x.out_dir, "summary.csv",
            {"method", "amplitude", "mass2", "grad2", "potential", "energy", "residual", "iterations"}, summary);
  if (!sharp.empty()) {
    write_csv(x.out_dir, "sharp_constant.csv", {"method", "cgn_formula", "cgn_direct", "rel_gap"}, sharp);
    write_csv(x.out_dir, "gn_probe.csv", {"method", "trials", "seed", "max_quotient", "cgn_direct", "tol", "holds"},
              probes);
  }
  x.out << join_csv({"method", "amplitude", "mass2", "grad2", "potential", "energy", "residual", "iterations"})
        << '\n';
  for (const auto& r : summary) x.out << join_csv(r) << '\n';
  return 0;
}

RadialField load_field(const Context& x, GridPtr grid) {
  const auto spec = x.field ? x.field : x.cfg.field;
  if (!spec) throw ConfigError("a field is required (--field <csv> or gaussian(amplitude,width))");
  static const std::regex gauss(R"(\s*gaussian\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*)");
  std::smatch mm;
  if (std::regex_match(*spec, mm, gauss)) {
    double amp, width;
    try {
      amp = to_double(parse_rational(mm[1].str()));
      width = to_double(parse_rational(mm[2].str()));
    } catch (const std::exception&) {
      throw ConfigError("gaussian(amplitude,width): arguments must be numbers");
    }
    if (!(width > 0.0) || !std::isfinite(amp)) throw ConfigError("gaussian(amplitude,width): width must be > 0");
    return RadialField::sample(std::move(grid), [&](double r) { return amp * std::exp(-r * r / (width * width)); });
  }
  std::ifstream in(*spec);
  if (!in) throw IoError("cannot read field file " + *spec);
  try {
    return read_field_csv(in, x.cfg.N);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field file ") + *spec + ": " + e.what());
  }
}

std::string solver_for_thresholds(const RunConfig& c) { return c.method == "fixedpoint" ? "fixedpoint" : "shooting"; }

int cmd_classify(Context& x) {
  const auto& c = x.cfg;
  require_model_scope(c);
  const auto g = model_grid(c);
  const auto u0 = load_field(x, g);
  const auto gs = solve(c, g, solver_for_thresholds(c));
  const auto rep = classify(u0, gs);
  x.out << join_csv(threshold_header()) << '\n' << join_csv(threshold_row(rep, c.precision)) << '\n';
  return 0;
}

int cmd_evolve(Context& x) {
  const auto& c = x.cfg;
  require_model_scope(c);
  const auto gq = model_grid(c);
  const int J = c.evolve.J.value_or(*c.J);
  const double h = c.evolve.h.value_or(*c.h);
  const auto ge = RadialGrid::create(c.N, J, h);
  const auto u0 = load_field(x, ge);
  if (!(u0.grid() == *ge)) throw ConfigError("field grid does not match the evolution grid (evolve.J, evolve.h)");

  const auto gs = solve(c, gq, solver_for_thresholds(c));
  const auto rep = classify(u0, gs);
  EvolutionConfig ec{c.params, J, h, c.evolve.dt, c.evolve.t_end, c.evolve.record_every,
                     c.evolve.virial_R.value_or(std::min(12.0, 0.25 * ge->r_max()))};
  ec.nonlinear = !c.evolve.linear;
  ec.dt_safety = c.evolve.dt_safety;
  try {
    ec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto res = run(u0, ec, &rep);
  const auto& tr = res.trace;
  write_csv(x.out_dir, "trace.csv", trace_header(), trace_rows(tr, c.precision));

  std::vector<std::vector<std::string>> meta = {
      {"verdict", to_string(rep.verdict)},
      {"exploratory", yes(tr.exploratory)},
      {"nonlinear", yes(ec.nonlinear)},
      {"max_step_mass_drift", fmt(c, tr.max_step_mass_drift)},
      {"boundary_leak", yes(tr.boundary_leak)},
      {"gr_checked", yes(tr.gr_checked)},
      {"gr_holds", yes(tr.gr_holds)},
      {"gr_initial_margin", fmt(c, tr.gr_initial_margin)},
      {"gr_min_margin", fmt(c, tr.gr_min_margin)},
      {"gm_threshold", fmt(c, rep.gm_threshold)},
      {"em_threshold", fmt(c, rep.em_threshold)}};
  write_csv(x.out_dir, "run.csv", {"key", "value"}, meta);

  if (!tr.exploratory && rep.A) {
    const auto rg = rigidity_check(tr, rep);
    write_csv(x.out_dir, "rigidity.csv",
              {"status", "virial_R", "lower_bound", "max_budget", "min_margin", "min_direct_gap",
               "integrated_min_margin"},
              {{to_string(rg.status), fmt(c, ec.virial_R), fmt(c, rg.lower_bound), fmt(c, rg.max_budget),
                fmt(c, rg.min_margin), fmt(c, rg.min_direct_gap), fmt(c, rg.integrated_min_margin)}});
  }
  if (tr.times.size() >= 3) {
    const auto d = scattering_diagnostic(tr);
    write_csv(x.out_dir, "scattering.csv",
              {"potential_ratio", "potential_decays", "decay_exponent", "grad_relative_change", "grad_converges",
               "scattering_like", "exploratory"},
              {{fmt(c, d.potential_ratio), yes(d.potential_decays), fmt(c, d.decay_exponent),
                fmt(c, d.grad_relative_change), yes(d.grad_converges), yes(d.scattering_like), yes(tr.exploratory)}});
  }
  for (const auto& r : meta) x.out << r[0] << '=' << r[1] << '\n';
  return 0;
}

int dispatch(const std::string& cmd, Context& x);

// Sets a dotted key such as "model.alpha" in a JSON object.
void set_dotted(json& j, const std::string& key, const json& v) {
  json* cur = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (dot == std::string::npos) {
      (*cur)[part] = v;
      return;
    }
    if (!cur->contains(part)) (*cur)[part] = json::object();
    cur = &(*cur)[part];
    start = dot + 1;
  }
}

std::string cell_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

struct PointResult {
  int exit_code = 0;
  std::string message;
};

int cmd_sweep(Context& x) {
  const auto& c = x.cfg;
  if (!c.sweep) throw ConfigError("sweep section is required for the sweep command");
  const auto& sw = *c.sweep;
  std::vector<std::string> keys;
  std::vector<std::size_t> sizes;
  std::size_t total = 1;
  for (const auto& [k, vals] : sw.parameters) {
    keys.push_back(k);
    sizes.push_back(vals.size());
    total *= vals.size();
    if (total > 100000) throw ConfigError("sweep has more than 100000 points");
  }
  std::vector<json> configs(total);
  std::vector<std::vector<std::string>> cells(total);
  for (std::size_t i = 0; i < total; ++i) {
    json pj = c.raw;
    pj.erase("sweep");
    std::size_t rem = i;
    // last key varies fastest
    std::vector<std::size_t> idx(keys.size());
    for (std::size_t k = keys.size(); k-- > 0;) {
      idx[k] = rem % sizes[k];
      rem /= sizes[k];
    }
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const json& v = sw.parameters.at(keys[k])[idx[k]];
      set_dotted(pj, keys[k], v);
      cells[i].push_back(cell_text(v));
    }
    configs[i] = pj;
    parse_config(pj);  // reject bad points before any work starts
  }

  ensure_dir(x.out_dir);
  auto point_dir = [&](std::size_t i) {
    std::ostringstream s;
    s << "point_" << std::setw(4) << std::setfill('0') << i;
    return s.str();
  };
  std::vector<PointResult> results(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::string dir = (fs::path(x.out_dir) / point_dir(i)).string();
      std::ostringstream out;
      PointResult& pr = results[i];
      try {
        ensure_dir(dir);
        {
          auto f = open_out(dir, "config.json");
          f << configs[i].dump(2) << '\n';
          close_checked(f, "config.json");
        }
        Context px{parse_config(configs[i]), dir, x.field, out};
        px.cfg.out_dir = dir;
        pr.exit_code = dispatch(sw.command, px);
      } catch (const ConfigError& e) {
        pr.exit_code = 2;
        pr.message = e.what();
      } catch (const IoError& e) {
        pr.exit_code = 3;
        pr.message = e.what();
      } catch (const std::exception& e) {
        pr.exit_code = 1;
        pr.message = e.what();
      }
      try {
        auto f = open_out(dir, "stdout.txt");
        f << out.str();
        if (!pr.message.empty()) f << "error: " << pr.message << '\n';
        close_checked(f, "stdout.txt");
      } catch (const IoError& e) {
        if (pr.exit_code == 0) {
          pr.exit_code = 3;
          pr.message = e.what();
        }
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nworkers = std::min<std::size_t>(hw, total);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<std::string> header = {"index", "directory", "command"};
  for (const auto& k : keys) header.push_back(k);
  header.push_back("exit_code");
  std::vector<std::vector<std::string>> rows;
  int failures = 0;
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<std::string> r = {std::to_string(i), point_dir(i), sw.command};
    for (const auto& cell : cells[i]) r.push_back(cell.find(',') == std::string::npos ? cell : "\"" + cell + "\"");
    r.push_back(std::to_string(results[i].exit_code));
    rows.push_back(std::move(r));
    if (results[i].exit_code != 0) ++failures;
  }
  write_csv(x.out_dir, "manifest.csv", header, rows);
  x.out << "points=" << total << '\n' << "failures=" << failures << '\n';
  return failures == 0 ? 0 : 1;
}

int dispatch(const std::string& cmd, Context& x) {
  if (cmd == "params") return cmd_params(x);
  if (cmd == "pairs") return cmd_pairs(x);
  if (cmd == "groundstate") return cmd_groundstate(x);
  if (cmd == "classify") return cmd_classify(x);
  if (cmd == "evolve") return cmd_evolve(x);
  if (cmd == "sweep") return cmd_sweep(x);
  throw ConfigError("unknown command " + cmd);
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial INLS laboratory"};
  app.require_subcommand(1);
  std::string config_path, out_dir, field;
  std::optional<std::uint64_t> seed;
  for (const auto& name : kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--field", field, "field CSV or gaussian(amplitude,width)");
    sub->add_option("--seed", seed, "seed for randomized probes");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot read config " + config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    Context x{parse_config(j), "", std::nullopt, out};
    if (seed) {
      x.cfg.seed = *seed;
      x.cfg.raw["seed"] = *seed;
    }
    x.out_dir = out_dir.empty() ? x.cfg.out_dir : out_dir;
    if (!field.empty()) x.field = field;
    return dispatch(cmd, x);
  } catch (const ConfigError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace inls
