#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsg/galerkin.hpp"
#include "wsg/moments.hpp"
#include "wsg/poly2.hpp"
#include "wsg/weight.hpp"

namespace wsg::cli {

using nlohmann::json;

namespace {

constexpr const char* kOutputDirEnv = "WSG_OUTPUT_DIR";

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d{
      {"alpha", "0"},
      {"beta", "0"},
      {"gamma", "0"},
      {"phi11", "x1*(1-x1)"},
      {"phi12", "-x1*x2"},
      {"phi22", "x2*(1-x2)"},
      {"factors", ""},
      {"edges", ""},
      {"mode", "exact"},
      {"degree", "4"},
      {"f", "2+x1^2+x2^2"},
      {"min_degree", "0"},
      {"max_degree", "12"},
      {"count", "10"},
      {"max_order", "6"},
      {"nodes", "4"},
      {"format", ""},
      {"output", ""},
      {"threads", "1"},
  };
  return d;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

std::string csv_number(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

QPoly config_poly(const RunConfig& cfg, const std::string& key) {
  try {
    return parse_poly(cfg.get(key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

Rational config_rational(const std::string& key, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

TriangleWeight config_weight(const RunConfig& cfg) {
  try {
    return TriangleWeight(config_rational("alpha", cfg.get("alpha")), config_rational("beta", cfg.get("beta")),
                          config_rational("gamma", cfg.get("gamma")));
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

QMatPoly2 config_phi(const RunConfig& cfg) {
  const QPoly p12 = config_poly(cfg, "phi12");
  return QMatPoly2::symmetric(config_poly(cfg, "phi11"), p12, config_poly(cfg, "phi22"));
}

QWeightSpec config_factors(const RunConfig& cfg) {
  const std::string& text = cfg.get("factors");
  if (text.empty()) return triangle_weight_spec(config_weight(cfg));
  QWeightSpec spec;
  for (const auto& item : split(text, ';')) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw ConfigError("factors: expected 'form:exponent' in '" + item + "'");
    QPoly form;
    try {
      form = parse_poly(item.substr(0, colon));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("factors: ") + e.what());
    }
    spec.factors.push_back({form, config_rational("factors", trim(item.substr(colon + 1)))});
  }
  return spec;
}

DomainEdges config_edges(const RunConfig& cfg) {
  const std::string& text = cfg.get("edges");
  if (text.empty()) return DomainEdges::triangle();
  DomainEdges domain;
  for (const auto& item : split(text, ';')) {
    const auto colon = item.rfind(':');
    Edge edge;
    try {
      edge.form = parse_poly(colon == std::string::npos ? item : item.substr(0, colon));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("edges: ") + e.what());
    }
    if (colon == std::string::npos) {
      // Outward for a form that is nonnegative inside: -grad(form).
      edge.nx = -edge.form.coeff(1, 0);
      edge.ny = -edge.form.coeff(0, 1);
    } else {
      const auto comps = split(item.substr(colon + 1), ',');
      if (comps.size() != 2) throw ConfigError("edges: expected 'form:nx,ny' in '" + item + "'");
      edge.nx = config_rational("edges", comps[0]);
      edge.ny = config_rational("edges", comps[1]);
    }
    if (sgn(edge.nx) == 0 && sgn(edge.ny) == 0) throw ConfigError("edges: zero normal in '" + item + "'");
    domain.edges.push_back(std::move(edge));
  }
  return domain;
}

std::string format_of(const RunConfig& cfg) {
  std::string f = cfg.get("format");
  if (f.empty()) {
    const std::string& sub = cfg.subcommand();
    f = (sub == "moments" || sub == "quadrature" || sub == "converge") ? "csv" : "json";
  }
  if (f != "json" && f != "csv") throw ConfigError("format must be json or csv (got '" + f + "')");
  return f;
}

json config_json(const RunConfig& cfg, const std::string& format) {
  json c = json::object();
  for (const auto& [k, v] : cfg.values()) c[k] = v;
  c["format"] = format;
  if (c["factors"] == "") {
    c["factors"] = "x1:" + cfg.get("alpha") + "; x2:" + cfg.get("beta") + "; 1 - x1 - x2:" + cfg.get("gamma");
  }
  if (c["edges"] == "") c["edges"] = "x1:-1,0; x2:0,-1; 1 - x1 - x2:1,1";
  return c;
}

std::string csv_header_comment(const json& config) {
  std::string out;
  for (const auto& [k, v] : config.items()) out += "# " + k + "=" + v.get<std::string>() + "\n";
  return out;
}

template <class C>
json poly_matrix_json(const BasicMatPoly2<C>& m) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) rows.push_back(json::array({to_string(m(r, 0)), to_string(m(r, 1))}));
  return rows;
}

template <class C>
json scalar_json(const C& v) {
  if constexpr (std::is_same_v<C, Rational>) {
    return to_string(v);
  } else {
    return v;
  }
}

template <class C>
std::pair<json, bool> verify_report(const BasicMatPoly2<C>& phi, const WeightSpec<C>& weight,
                                    const DomainEdges& domain) {
  json report;
  const PearsonOutcome<C> pearson = pearson_check(phi, weight);
  json p;
  p["pass"] = pearson.ok();
  if (pearson.ok()) {
    const auto& d = *pearson.data;
    p["psi1"] = to_string(d.psi1);
    p["psi2"] = to_string(d.psi2);
    p["detD"] = to_double(d.det());
    p["detD_exact"] = scalar_json(d.det());
    p["D"] = json::array({json::array({scalar_json(d.directions[0][0]), scalar_json(d.directions[0][1])}),
                          json::array({scalar_json(d.directions[1][0]), scalar_json(d.directions[1][1])})});
    p["E"] = json::array({scalar_json(d.constants[0]), scalar_json(d.constants[1])});
  } else {
    p["stage"] = to_string(pearson.failed_stage);
    p["component"] = pearson.component + 1;
    p["numerator"] = to_string(pearson.numerator);
  }
  report["pearson"] = p;

  const BoundaryOutcome boundary = boundary_check(phi, domain);
  json b;
  b["pass"] = boundary.ok();
  json edges = json::array();
  for (std::size_t k = 0; k < domain.edges.size(); ++k) {
    const auto [nx, ny] = domain.edges[k].unit_normal();
    edges.push_back({{"edge", k + 1},
                     {"form", to_string(domain.edges[k].form)},
                     {"normal", json::array({nx, ny})},
                     {"pass", static_cast<bool>(boundary.edge_pass[k])}});
  }
  b["edges"] = edges;
  if (boundary.first_failure) {
    b["first_failure"] = {{"edge", boundary.first_failure->edge + 1},
                          {"component", boundary.first_failure->component + 1}};
  }
  report["boundary"] = b;

  json compat;
  for (Orientation o : {Orientation::A, Orientation::B}) {
    const CompatOutcome<C> c = compat_system_check(phi, o);
    compat[to_string(o)] = {{"pass", c.pass},
                            {"residuals", json::array({poly_matrix_json(c.residuals[0]),
                                                       poly_matrix_json(c.residuals[1])})}};
  }
  report["compat"] = compat;
  const bool classical = pearson.ok() && boundary.ok();
  report["classical"] = classical;
  return {report, classical};
}

struct Output {
  std::string body;
  int status = kOk;
};

Output run_verify(const RunConfig& cfg, const json& config) {
  const QMatPoly2 phi = config_phi(cfg);
  const QWeightSpec weight = config_factors(cfg);
  const DomainEdges domain = config_edges(cfg);
  try {
    validate_weight_on(weight, domain);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("weight: ") + e.what());
  }
  const std::string& mode = cfg.get("mode");
  std::pair<json, bool> result;
  if (mode == "exact") {
    result = verify_report(phi, weight, domain);
  } else if (mode == "float") {
    result = verify_report(to_floating(phi), to_floating(weight), domain);
  } else {
    throw ConfigError("mode must be exact or float (got '" + mode + "')");
  }
  if (format_of(cfg) != "json") throw ConfigError("verify-weight only writes json");
  json report = std::move(result.first);
  report["command"] = "verify-weight";
  report["config"] = config;
  return {report.dump(2) + "\n", result.second ? kOk : kVerificationFailed};
}

Output run_moments(const RunConfig& cfg, const json& config) {
  const TriangleWeight w = config_weight(cfg);
  const auto order = static_cast<unsigned>(cfg.get_int("max_order", 0));
  const MomentTable table(w, 2 * order);
  if (format_of(cfg) == "csv") {
    std::string out = csv_header_comment(config) + "m,n,moment\n";
    for (unsigned m = 0; m <= order; ++m)
      for (unsigned n = 0; n <= order; ++n)
        out += std::to_string(m) + "," + std::to_string(n) + "," + csv_number(table(m, n)) + "\n";
    return {out};
  }
  json rows = json::array();
  for (unsigned m = 0; m <= order; ++m)
    for (unsigned n = 0; n <= order; ++n) rows.push_back({{"m", m}, {"n", n}, {"value", table(m, n)}});
  json report{{"command", "moments"}, {"config", config}, {"mass", table.mass()}, {"moments", rows}};
  return {report.dump(2) + "\n"};
}

Output run_quadrature(const RunConfig& cfg, const json& config) {
  const TriangleWeight w = config_weight(cfg);
  const auto n = static_cast<unsigned>(cfg.get_int("nodes", 1));
  const QuadratureRule rule = triangle_rule(n, w);
  if (format_of(cfg) == "csv") {
    std::string out = csv_header_comment(config) + "x1,x2,weight\n";
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      out += csv_number(rule.nodes[k].first) + "," + csv_number(rule.nodes[k].second) + "," +
             csv_number(rule.weights[k]) + "\n";
    return {out};
  }
  json nodes = json::array();
  for (const auto& [x1, x2] : rule.nodes) nodes.push_back(json::array({x1, x2}));
  json report{{"command", "quadrature"},
              {"config", config},
              {"nodes", nodes},
              {"weights", rule.weights},
              {"exactness_degree", rule.exactness_degree}};
  return {report.dump(2) + "\n"};
}

Output run_solve(const RunConfig& cfg, const json& config) {
  const TriangleWeight w = config_weight(cfg);
  const auto degree = static_cast<unsigned>(cfg.get_int("degree", 0));
  const QPoly f = config_poly(cfg, "f");
  const WeakSolution sol = solve_weak(f, degree, w);

  // Residual of the discrete weak form a(u_h, b_k) - <f, b_k>, recomputed independently.
  const GramSet gram = assemble(sol.basis, triangle_phi(), w);
  const SymMatrix a = gram.operator_matrix();
  double residual = 0.0;
  for (std::size_t k = 0; k < sol.basis.size(); ++k) {
    double r = -integrate_poly(to_floating(f) * sol.basis.functions[k], w);
    for (std::size_t j = 0; j < sol.basis.size(); ++j) r += a(k, j) * sol.coefficients[j];
    residual = std::max(residual, std::abs(r));
  }

  if (format_of(cfg) == "csv") {
    std::string out = csv_header_comment(config) + "index,i,j,basis_coefficient,monomial_coefficient\n";
    for (std::size_t k = 0; k < sol.basis.size(); ++k) {
      const Exponent e = sol.basis.monomials[k];
      out += std::to_string(k) + "," + std::to_string(e.i) + "," + std::to_string(e.j) + "," +
             csv_number(sol.coefficients[k]) + "," + csv_number(sol.solution.coeff(e.i, e.j)) + "\n";
    }
    return {out};
  }
  json mono = json::array();
  for (const Exponent e : sol.basis.monomials)
    mono.push_back({{"i", e.i}, {"j", e.j}, {"value", sol.solution.coeff(e.i, e.j)}});
  json report{{"command", "solve"},
              {"config", config},
              {"degree", degree},
              {"dimension", sol.basis.size()},
              {"coefficients", sol.coefficients},
              {"monomial_coefficients", mono},
              {"solution", to_string(sol.solution)},
              {"weak_residual", residual}};
  return {report.dump(2) + "\n"};
}

Output run_eig(const RunConfig& cfg, const json& config) {
  const TriangleWeight w = config_weight(cfg);
  const auto degree = static_cast<unsigned>(cfg.get_int("degree", 0));
  const auto count = static_cast<std::size_t>(cfg.get_int("count", 1));
  const BasisSet basis = build_basis(degree, w);
  const GramSet gram = assemble(basis, triangle_phi(), w);
  const EigResult eig = solve_eig(gram, degree, EigPath::standard);
  const EigDiagnostics diag = diagnose(gram, eig);
  const std::size_t shown = std::min(count, eig.values.size());

  if (format_of(cfg) == "csv") {
    std::string out = csv_header_comment(config) + "index,i,j";
    for (std::size_t k = 0; k < shown; ++k) out += ",vector" + std::to_string(k);
    out += "\n";
    for (std::size_t r = 0; r < basis.size(); ++r) {
      out += std::to_string(r) + "," + std::to_string(basis.monomials[r].i) + "," +
             std::to_string(basis.monomials[r].j);
      for (std::size_t k = 0; k < shown; ++k) out += "," + csv_number(eig.vectors(r, k));
      out += "\n";
    }
    return {out};
  }
  json vectors = json::array();
  for (std::size_t k = 0; k < shown; ++k) {
    std::vector<double> col(basis.size());
    for (std::size_t r = 0; r < basis.size(); ++r) col[r] = eig.vectors(r, k);
    vectors.push_back(col);
  }
  json report{{"command", "eig"},
              {"config", config},
              {"degree", degree},
              {"dimension", basis.size()},
              {"values", eig.values},
              {"inverse_values", eig.inverse_values()},
              {"vectors", vectors},
              {"orthogonality_defect", diag.orthogonality_defect},
              {"max_residual", diag.max_residual},
              {"bound_margin", eig.values.front() - 2.0}};
  return {report.dump(2) + "\n"};
}

Output run_converge(const RunConfig& cfg, const json& config) {
  const TriangleWeight w = config_weight(cfg);
  const auto lo = static_cast<unsigned>(cfg.get_int("min_degree", 0));
  const auto hi = static_cast<unsigned>(cfg.get_int("max_degree", 0));
  if (lo > hi) throw ConfigError("min_degree must not exceed max_degree");
  const auto count = static_cast<std::size_t>(cfg.get_int("count", 1));
  const auto threads = static_cast<unsigned>(cfg.get_int("threads", 1));
  const auto rows = convergence_study(lo, hi, w, count, threads);

  if (format_of(cfg) == "csv") {
    std::string out = csv_header_comment(config) + "degree";
    for (std::size_t k = 0; k < count; ++k) out += ",nu" + std::to_string(k);
    out += ",orthogonality_defect,bound_margin\n";
    for (const auto& row : rows) {
      out += std::to_string(row.degree);
      for (std::size_t k = 0; k < count; ++k) out += "," + (k < row.values.size() ? csv_number(row.values[k]) : "");
      out += "," + csv_number(row.orthogonality_defect) + "," + csv_number(row.bound_margin) + "\n";
    }
    return {out};
  }
  json table = json::array();
  for (const auto& row : rows) {
    table.push_back({{"degree", row.degree},
                     {"values", row.values},
                     {"orthogonality_defect", row.orthogonality_defect},
                     {"bound_margin", row.bound_margin}});
  }
  json report{{"command", "converge"}, {"config", config}, {"rows", table}};
  return {report.dump(2) + "\n"};
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& format) {
  const char* dir = std::getenv(kOutputDirEnv);
  std::filesystem::path p = cfg.get("output");
  if (p.empty()) {
    if (dir == nullptr || *dir == '\0') return {};
    p = cfg.subcommand() + "." + format;
  }
  if (p.is_relative() && dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
  return p;
}

const char* module_of(const std::string& subcommand) {
  if (subcommand == "verify-weight") return "weight-verify";
  if (subcommand == "moments" || subcommand == "quadrature") return "moments-quad";
  return "galerkin";
}

}  // namespace

RunConfig::RunConfig(const std::string& subcommand) : subcommand_(subcommand), values_(defaults()) {
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), subcommand) == subs.end()) {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  }
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, v] : defaults()) k.push_back(key);
    return k;
  }();
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = trim(value);
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  merge_text(buf.str(), path);
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

long RunConfig::get_int(const std::string& key, long min_value) const {
  const std::string& text = get(key);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer (got '" + text + "')");
  }
  if (used != text.size()) throw ConfigError(key + ": expected an integer (got '" + text + "')");
  if (v < min_value) throw ConfigError(key + " must be >= " + std::to_string(min_value));
  return v;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& sub = cfg.subcommand();
  try {
    const std::string format = format_of(cfg);
    const json config = config_json(cfg, format);
    Output result;
    if (sub == "verify-weight") {
      result = run_verify(cfg, config);
    } else if (sub == "moments") {
      result = run_moments(cfg, config);
    } else if (sub == "quadrature") {
      result = run_quadrature(cfg, config);
    } else if (sub == "solve") {
      result = run_solve(cfg, config);
    } else if (sub == "eig") {
      result = run_eig(cfg, config);
    } else {
      result = run_converge(cfg, config);
    }

    const auto path = output_path(cfg, format);
    if (path.empty()) {
      out << result.body;
    } else {
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      std::ofstream file(path, std::ios::binary);
      if (!file) throw ConfigError("cannot write output file '" + path.string() + "'");
      file << result.body;
    }
    if (result.status == kVerificationFailed) err << "wsg: weight-verify: weight is not classical for this Phi\n";
    return result.status;
  } catch (const ConfigError& e) {
    err << "wsg: config: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "wsg: " << module_of(sub) << ": " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::domain_error& e) {
    err << "wsg: config: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "wsg: config: " << e.what() << "\n";
    return kConfigError;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical-weight verification and weighted spectral Galerkin solver on the unit triangle"};
  app.require_subcommand(1);
  std::map<std::string, std::string> config_files;
  std::map<std::string, std::map<std::string, std::string>> overrides;
  for (const auto& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_files[name], "flat key = value config file");
    for (const auto& key : RunConfig::known_keys()) {
      sub->add_option("--" + key, overrides[name][key], "override config key '" + key + "'");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg(name);
    if (!config_files[name].empty()) cfg.merge_file(config_files[name]);
    CLI::App* sub = app.get_subcommand(name);
    for (const auto& key : RunConfig::known_keys()) {
      if (sub->count("--" + key) > 0) cfg.set(key, overrides[name][key]);
    }
    return run(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "wsg: config: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace wsg::cli
