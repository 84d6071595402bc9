#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dnev/charfn.hpp"
#include "dnev/clunie.hpp"
#include "dnev/eqparse.hpp"
#include "dnev/error.hpp"
#include "dnev/growth.hpp"
#include "dnev/modelspec.hpp"
#include "dnev/poleprop.hpp"
#include "dnev/profile.hpp"

namespace dnev {

using ojson = nlohmann::ordered_json;

struct RunConfig {
  std::string subcommand;
  std::string input;  // equation, polynomial or model spec
  std::string c = "1";
  double r_min = NAN, r_max = NAN, ratio = NAN;
  double delta = 0.25, eps = 1.0;
  double max_log_measure = 1.0;  // logdiff-check pass threshold
  double threshold = 0.05;  // growth-scan lower-density threshold
  std::string growth = "power:2";
  int levels = 2;
  long k0 = 1;
  long steps = 20;
  std::vector<long> blacklist;
  std::string format;
  std::uint64_t seed = 0;
  std::string out;
};

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

inline std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "subcommand = " << c.subcommand << "\n";
  os << "input = " << c.input << "\n";
  os << "c = " << c.c << "\n";
  os << "r_min = " << fmt(c.r_min) << "\n";
  os << "r_max = " << fmt(c.r_max) << "\n";
  os << "ratio = " << fmt(c.ratio) << "\n";
  os << "delta = " << fmt(c.delta) << "\n";
  os << "eps = " << fmt(c.eps) << "\n";
  os << "max_log_measure = " << fmt(c.max_log_measure) << "\n";
  os << "threshold = " << fmt(c.threshold) << "\n";
  os << "growth = " << c.growth << "\n";
  os << "levels = " << c.levels << "\n";
  os << "k0 = " << c.k0 << "\n";
  os << "steps = " << c.steps << "\n";
  os << "blacklist = ";
  for (std::size_t i = 0; i < c.blacklist.size(); ++i) os << (i ? "," : "") << c.blacklist[i];
  os << "\n";
  os << "format = " << c.format << "\n";
  os << "seed = " << c.seed << "\n";
  os << "out = " << c.out << "\n";
  return os.str();
}

/// Plain `key = value` lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read config file '" + path + "'");
  auto trim = [](std::string s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::SyntaxError, path + ":" + std::to_string(no) + ": expected key = value");
    std::string k = trim(line.substr(0, eq));
    for (char& ch : k)
      if (ch == '_') ch = '-';
    kv.emplace_back(k, trim(line.substr(eq + 1)));
  }
  return kv;
}

/// Rows of a numeric report, rendered as csv, json or aligned text.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<ojson>> rows;
  ojson summary = ojson::object();
};

namespace detail {

inline std::string cell(const ojson& v) {
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void render(const Table& t, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    ojson j;
    j["subcommand"] = cfg.subcommand;
    j["input"] = cfg.input;
    j["columns"] = t.columns;
    j["rows"] = ojson::array();
    for (const auto& r : t.rows) {
      ojson o;
      for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
      j["rows"].push_back(o);
    }
    j["summary"] = t.summary;
    out << j.dump(2) << "\n";
    return;
  }
  const char* sep = cfg.format == "text" ? " " : ",";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? sep : "") << t.columns[i];
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? sep : "") << cell(r[i]);
    out << "\n";
  }
  if (cfg.format == "text")
    for (const auto& [k, v] : t.summary.items()) out << "# " << k << ": " << cell(v) << "\n";
}

/// "a.b: value" lines, one per leaf, in document order.
inline void flatten(const ojson& j, const std::string& prefix, std::vector<std::string>& lines) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, lines);
  } else if (j.is_array() && !j.empty()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), lines);
  } else {
    lines.push_back(prefix + ": " + cell(j));
  }
}

inline void render_doc(const ojson& j, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    out << j.dump(2) << "\n";
    return;
  }
  std::vector<std::string> lines;
  flatten(j, "", lines);
  for (const auto& l : lines) out << l << "\n";
}

inline bool rejection(ErrorKind k) {
  return k == ErrorKind::NotAdmissible || k == ErrorKind::HypothesesViolated || k == ErrorKind::WrongBenchmark;
}

inline void defaults(RunConfig& c, double lo, double hi, double ratio) {
  if (std::isnan(c.r_min)) c.r_min = lo;
  if (std::isnan(c.r_max)) c.r_max = hi;
  if (std::isnan(c.ratio)) c.ratio = ratio;
}

inline DiffPolynomial poly_or_benchmark(const RunConfig& c) {
  return c.input.empty() ? benchmark_polynomial() : parse_polynomial(c.input);
}

// ---- subcommand bodies; each returns the exit code ----

inline int do_classify(const RunConfig& cfg, std::ostream& out) {
  ClunieEquation eq = validate_no_common_factors(parse_equation(cfg.input));
  ojson j;
  j["equation"] = to_canonical_text(eq);
  j["coprimality"] = std::string(to_string(eq.coprimality));
  if (!eq.caveat.empty()) j["caveat"] = eq.caveat;
  auto hyp = check_hypotheses(eq);
  if (!hyp.empty()) {
    j["hypotheses"] = ojson::array();
    for (auto v : hyp) j["hypotheses"].push_back(std::string(to_string(v)));
    render_doc(j, cfg, out);
    return 2;
  }
  DegreeProfile p = degree_profile(eq);
  Admissibility a = admissible(p);
  j["profile"] = to_json(p);
  j["admissibility"] = {{"kappa_hat", a.kappa_hat}, {"q_term", a.q_term},     {"u_term", a.u_term},
                        {"deg_R", a.deg_R},         {"crude_bound", a.crude_bound}, {"crude_ok", a.crude_ok}};
  Verdict v = assess(p);
  j["verdict"] = to_json(v);
  render_doc(j, cfg, out);
  return v.admissible ? 0 : 2;
}

inline int do_families(const RunConfig& cfg, std::ostream& out, bool reduce) {
  DiffPolynomial P = poly_or_benchmark(cfg);
  auto fams = enumerate_families(functionals(P));
  std::vector<FamilySpec> shown = fams, removed;
  if (reduce) {
    Reduction r = reduce_families(P, fams);
    shown = r.kept;
    removed = r.removed;
  }
  if (cfg.format == "json") {
    ojson j;
    j["P"] = to_canonical_text(P);
    j["families"] = ojson::array();
    for (const auto& s : shown) j["families"].push_back(to_json(s));
    if (reduce) {
      j["removed"] = ojson::array();
      for (const auto& s : removed) j["removed"].push_back(to_json(s));
    }
    out << j.dump(2) << "\n";
  } else {
    for (const auto& s : shown) out << family_line(P, s) << "\n";
  }
  return 0;
}

inline int do_characteristic(RunConfig& cfg, std::ostream& out) {
  defaults(cfg, 1, 100, 1.5);
  Model m = parse_model(cfg.input, cfg.seed);
  Table t{{"r", "m", "N", "T", "err"}, {}, {}};
  for (double r : geometric_grid(cfg.r_min, cfg.r_max, cfg.ratio)) {
    auto s = characteristic_T(m, r);
    t.rows.push_back({s.r, s.m, s.N, s.T, s.quadrature_error_estimate});
  }
  render(t, cfg, out);
  return 0;
}

inline int do_shift_check(RunConfig& cfg, std::ostream& out) {
  defaults(cfg, 20, 2000, 1.05);
  Model m = parse_model(cfg.input, cfg.seed);
  cplx c = parse_complex(cfg.c);
  ShiftConstants k = shift_constants(m, c);
  Table t{{"r", "lhs_N", "rhs_N", "lhs_T", "rhs_T", "tol_T", "slack_N", "slack_T", "pass"}, {}, {}};
  std::size_t fails = 0;
  for (double r : geometric_grid(cfg.r_min, cfg.r_max, cfg.ratio)) {
    auto s = shift_inequality_check(m, c, r, k);
    fails += !s.pass();
    t.rows.push_back({s.r, s.lhs_N, s.rhs_N, s.lhs_T, s.rhs_T, s.tol_T, s.slack_used_N, s.slack_used_T, s.pass()});
  }
  t.summary = {{"r0", k.r0}, {"C_N", k.C_N}, {"C_T", k.C_T}, {"failures", fails}};
  render(t, cfg, out);
  return fails ? 2 : 0;
}

inline int do_logdiff_check(RunConfig& cfg, std::ostream& out) {
  defaults(cfg, 10, 1e4, 1.05);
  Model m = parse_model(cfg.input, cfg.seed);
  auto rep = verify_logdiff_bound(m, parse_complex(cfg.c), cfg.delta, cfg.eps, cfg.r_min, cfg.r_max, cfg.ratio);
  Table t{{"r", "m", "rhs", "pass", "skipped"}, {}, {}};
  for (const auto& row : rep.rows) t.rows.push_back({row.r, row.lhs, row.rhs, row.pass, row.skipped});
  bool ok = rep.density.log_measure <= cfg.max_log_measure;
  t.summary = {{"log_measure", rep.density.log_measure},
               {"lower_density", rep.density.lower_density},
               {"upper_density", rep.density.upper_density},
               {"guarded", rep.guarded},
               {"negative_control", rep.negative_control}};
  render(t, cfg, out);
  return ok || rep.negative_control ? 0 : 2;
}

inline int do_growth_scan(RunConfig& cfg, std::ostream& out) {
  defaults(cfg, 1, 1e4, 1.01);
  GrowthFunction T = parse_growth(cfg.growth);
  if (cfg.r_min != 1) throw Error(ErrorKind::InvalidArgument, "growth-scan starts at r = 1");
  auto rep = scan_step(T, cfg.delta, cfg.r_max, cfg.ratio, cfg.threshold);
  Table t{{"r", "lhs", "rhs", "pass"}, {}, {}};
  for (const auto& row : rep.rows) t.rows.push_back({row.r, row.lhs, row.rhs, row.pass});
  t.summary = {{"growth", T.name()},
               {"lower_density", rep.density.lower_density},
               {"upper_density", rep.density.upper_density},
               {"log_measure", rep.density.log_measure},
               {"hypothesis_ok", rep.hypothesis_ok},
               {"certified", rep.certified}};
  render(t, cfg, out);
  return rep.certified ? 0 : 2;
}

inline int do_product_example(RunConfig& cfg, std::ostream& out) {
  if (cfg.levels < 1) throw Error(ErrorKind::InvalidArgument, "--levels must be positive");
  auto ex = build_example_product(cfg.levels);
  Table t{{"r", "T_f", "T_fc", "m_ratio", "ratio_m", "ratio_T", "err"}, {}, {}};
  for (const auto& row : example_product_report(ex.model, cfg.levels, parse_complex(cfg.c)))
    t.rows.push_back({row.r, row.T_f, row.T_fc, row.m_ratio, row.ratio_m, row.ratio_T, row.err});
  ojson cert = ojson::array();
  for (const auto& l : ex.certificate) cert.push_back({{"k", l.k}, {"r", l.r}, {"n", l.n}});
  t.summary = {{"levels", cert}};
  if (cfg.format != "json") {
    std::ostringstream os;
    for (const auto& l : ex.certificate) os << (l.k > 1 ? " " : "") << l.r << "^" << l.n;
    t.summary = {{"levels", os.str()}};
  }
  render(t, cfg, out);
  return 0;
}

inline int do_polechain(const RunConfig& cfg, std::ostream& out) {
  if (cfg.steps < 0) throw Error(ErrorKind::InvalidArgument, "--steps must be non-negative");
  std::set<std::size_t> bl;
  for (long b : cfg.blacklist) {
    if (b < 0) throw Error(ErrorKind::InvalidArgument, "blacklist entries must be non-negative");
    bl.insert(static_cast<std::size_t>(b));
  }
  PoleChain ch = chain(BigInt(cfg.k0), static_cast<std::size_t>(cfg.steps), bl);
  GrowthBound g = growth_lower_bound(ch);
  Table t{{"n", "bound", "ceiling", "cumulative"}, {}, {}};
  for (std::size_t n = 0; n < ch.size(); ++n)
    t.rows.push_back({n, to_string(ch.bounds[n]), ch.ceilings[n].str(), g.counting[n]});
  t.summary = {{"D", g.D}, {"K", g.K}};
  render(t, cfg, out);
  return 0;
}

inline void validate(const RunConfig& c) {
  if (!std::isnan(c.ratio) && !(c.ratio > 1)) throw Error(ErrorKind::InvalidArgument, "grid ratio must exceed 1");
  if (!std::isnan(c.r_min) && !(c.r_min > 0)) throw Error(ErrorKind::InvalidArgument, "r_min must be positive");
  if (!std::isnan(c.r_max) && !std::isnan(c.r_min) && !(c.r_max > c.r_min))
    throw Error(ErrorKind::InvalidArgument, "r_max must exceed r_min");
  if (!(c.max_log_measure > 0) || !(c.threshold > 0) || !(c.eps > 0))
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
}

}  // namespace detail

/// Entry point shared by the executable and the tests. Returns the process exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  bool json = false, dry = false;
  std::string config_path;
  CLI::App app{"Degree calculus and Nevanlinna numerics for difference equations", "dnev"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* s) {
    s->add_flag("--json", json, "Shorthand for --format json");
    s->add_option("--format", cfg.format, "csv | json | text")->check(CLI::IsMember({"csv", "json", "text"}));
    s->add_option("--out", cfg.out, "Write the report to this path");
    s->add_option("--config", config_path, "key = value defaults");
    s->add_flag("--dry-run", dry, "Print the resolved configuration and stop");
    s->add_option("--seed", cfg.seed, "Seed for random models");
  };
  auto grid = [&](CLI::App* s) {
    s->add_option("--r-min", cfg.r_min);
    s->add_option("--r-max", cfg.r_max);
    s->add_option("--ratio", cfg.ratio);
  };

  auto* classify = app.add_subcommand("classify", "Degree profile and verdict for U*P = Q");
  classify->add_option("equation", cfg.input)->required();
  common(classify);

  auto* enumerate = app.add_subcommand("enumerate", "Admissible right-hand-side families for P");
  auto* reduce = app.add_subcommand("reduce", "Families left after the growth-based exclusions");
  for (auto* s : {enumerate, reduce}) {
    s->add_option("--poly", cfg.input, "P(z, w); defaults to the benchmark");
    common(s);
  }

  auto* charT = app.add_subcommand("characteristic", "r, m, N, T on a geometric grid");
  auto* shift = app.add_subcommand("shift-check", "Shift inequalities for N and T");
  auto* logdiff = app.add_subcommand("logdiff-check", "Logarithmic difference bound scan");
  for (auto* s : {charT, shift, logdiff}) {
    s->add_option("--model", cfg.input, "Model spec")->required();
    grid(s);
    common(s);
  }
  for (auto* s : {shift, logdiff}) s->add_option("--c", cfg.c, "Shift, e.g. 1, i, 2+i");
  logdiff->add_option("--delta", cfg.delta);
  logdiff->add_option("--eps", cfg.eps);
  logdiff->add_option("--max-log-measure", cfg.max_log_measure);

  auto* gscan = app.add_subcommand("growth-scan", "Shift-step exception set on [1, R]");
  gscan->add_option("--growth", cfg.growth, "power:<rho> | exproot:<alpha> | exp");
  gscan->add_option("--delta", cfg.delta);
  gscan->add_option("--threshold", cfg.threshold);
  grid(gscan);
  common(gscan);

  auto* product = app.add_subcommand("product-example", "Two-sided shift table for the lacunary product");
  product->add_option("--levels", cfg.levels);
  product->add_option("--c", cfg.c);
  common(product);

  auto* pole = app.add_subcommand("polechain", "Pole-order chain and growth constant");
  pole->add_option("--k0", cfg.k0)->check(CLI::PositiveNumber);
  pole->add_option("--steps", cfg.steps);
  pole->add_option("--blacklist", cfg.blacklist)->delimiter(',');
  common(pole);

  // Config file entries become flags of the chosen subcommand unless already given there.
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    std::vector<std::pair<std::string, std::string>> kv;
    try {
      kv = read_config_file(args[i + 1]);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
    std::set<std::string> given;
    for (const auto& a : args)
      if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
    CLI::App* target = args.empty() ? nullptr : app.get_subcommand_no_throw(args[0]);
    for (const auto& [k, v] : kv)
      if (!given.count("--" + k) && target && target->get_option_no_throw("--" + k)) {
        args.push_back("--" + k);
        args.push_back(v);
      }
    break;
  }

  std::vector<const char*> argv{"dnev"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  if (product->parsed() && product->get_option("--c")->count() == 0) cfg.c = "3";
  if (json) cfg.format = "json";
  if (cfg.format.empty()) {
    bool doc = classify->parsed() || enumerate->parsed() || reduce->parsed();
    cfg.format = doc ? "text" : "csv";
  }

  std::ofstream file;
  std::ostream* os = &out;
  try {
    detail::validate(cfg);
    if (dry) {
      if (charT->parsed()) detail::defaults(cfg, 1, 100, 1.5);
      if (shift->parsed()) detail::defaults(cfg, 20, 2000, 1.05);
      if (logdiff->parsed()) detail::defaults(cfg, 10, 1e4, 1.05);
      if (gscan->parsed()) detail::defaults(cfg, 1, 1e4, 1.01);
      out << to_config_text(cfg);
      return 0;
    }
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write '" + cfg.out + "'");
      os = &file;
    }
    if (classify->parsed()) return detail::do_classify(cfg, *os);
    if (enumerate->parsed()) return detail::do_families(cfg, *os, false);
    if (reduce->parsed()) return detail::do_families(cfg, *os, true);
    if (charT->parsed()) return detail::do_characteristic(cfg, *os);
    if (shift->parsed()) return detail::do_shift_check(cfg, *os);
    if (logdiff->parsed()) return detail::do_logdiff_check(cfg, *os);
    if (gscan->parsed()) return detail::do_growth_scan(cfg, *os);
    if (product->parsed()) return detail::do_product_example(cfg, *os);
    return detail::do_polechain(cfg, *os);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::InvalidArgument && std::string(e.what()).find("unknown model spec") != std::string::npos)
      err << "usage: " << sub->get_name() << " --model <rational:{num}/{den} | product:s=K,n1=N | exp:<poly> | "
          << "expexp | shift:<c>:<spec> | pow:<k>:<spec> | random:<d>>\n";
    return detail::rejection(e.kind()) ? 2 : 1;
  }
}

}  // namespace dnev
