#include "cencov/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "cencov/error.hpp"

namespace cencov::io {

namespace {

using Index = FiniteGroupoid::Index;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::Schema, msg); }

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) schema(what + ": missing \"" + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) schema(what + ": expected a number");
  return j.get<double>();
}

std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) schema(what + ": expected a string");
  return j.get<std::string>();
}

std::map<std::string, std::string> string_map(const json& j, const std::string& what) {
  if (!j.is_object()) schema(what + ": expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = text(v, what + "." + k);
  return out;
}

std::map<std::string, double> number_map(const json& j, const std::string& what) {
  if (!j.is_object()) schema(what + ": expected an object");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = number(v, what + "." + k);
  return out;
}

Index element_index(const FiniteGroupoid& g, const std::string& id, const std::string& what) {
  const auto i = g.find_element(id);
  if (!i) schema(what + ": unknown element '" + id + "'");
  return *i;
}

std::vector<std::vector<double>> real_rows(const json& j, const std::string& what) {
  if (!j.is_array()) schema(what + ": expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) schema(what + ": expected an array of rows");
    std::vector<double> row;
    for (const auto& v : r) row.push_back(number(v, what));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix(const json& j, const std::string& what) {
  const auto re = real_rows(field(j, "re", what), what + ".re");
  std::vector<std::vector<double>> im;
  if (j.contains("im")) im = real_rows(j.at("im"), what + ".im");
  if (re.empty() || re.front().empty()) schema(what + ": empty matrix");
  const std::size_t r = re.size();
  const std::size_t c = re.front().size();
  if (!im.empty() && im.size() != r) schema(what + ": re/im shapes differ");
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (re[i].size() != c || (!im.empty() && im[i].size() != c)) schema(what + ": ragged matrix");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = {re[i][k], im.empty() ? 0.0 : im[i][k]};
  }
  return m;
}

json matrix_rows(const ComplexMatrix& m, bool imag) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(imag ? m(i, k).imag() : m(i, k).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t parse_size(const std::string& s, const std::string& id) {
  std::size_t n = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc{} || p != s.data() + s.size() || n == 0) schema("bad built-in groupoid id '" + id + "'");
  return n;
}

}  // namespace

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    schema(path.string() + ": " + e.what());
  }
  return j;
}

void save_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void require_format(const json& j, const std::string& what) {
  if (!j.is_object()) schema(what + ": top level must be an object");
  if (!j.contains("fmt")) schema(what + ": missing \"fmt\"");
  if (j.at("fmt") != kFormat) schema(what + ": unsupported format " + j.at("fmt").dump());
}

FileKind detect_kind(const json& j) {
  if (!j.is_object()) schema("top level must be an object");
  if (j.contains("elements")) return FileKind::Groupoid;
  if (j.contains("phi_re")) return FileKind::State;
  if (j.contains("coeff_re")) return FileKind::Element;
  if (j.contains("pi_re")) return FileKind::Kernel;
  if (j.contains("K")) return FileKind::Classical;
  if (j.contains("kraus")) return FileKind::Kraus;
  if (j.contains("s0")) return FileKind::Model;
  if (j.contains("kernels")) return FileKind::Pipeline;
  schema("unrecognized file type");
}

std::string to_string(FileKind k) {
  switch (k) {
    case FileKind::Groupoid: return "groupoid";
    case FileKind::State: return "state";
    case FileKind::Element: return "element";
    case FileKind::Kernel: return "kernel";
    case FileKind::Classical: return "classical_kernel";
    case FileKind::Kraus: return "kraus";
    case FileKind::Model: return "model";
    case FileKind::Pipeline: return "pipeline";
  }
  return "unknown";
}

GroupoidPtr builtin_groupoid(const std::string& id) {
  const auto colon = id.find(':');
  if (colon == std::string::npos) return nullptr;
  const std::string kind = id.substr(0, colon);
  const std::string arg = id.substr(colon + 1);
  if (kind == "pair") return pair_groupoid(parse_size(arg, id));
  if (kind == "trivial") return trivial_groupoid(parse_size(arg, id));
  if (kind == "cyclic") return cyclic_group(parse_size(arg, id));
  return nullptr;
}

GroupoidRef resolve_groupoid(const json& ref, const fs::path& base_dir) {
  const std::string id = text(ref, "groupoid reference");
  if (GroupoidPtr g = builtin_groupoid(id)) return {g, id};
  fs::path p = id;
  if (p.is_relative()) p = base_dir / p;
  GroupoidRef r = read_groupoid(p);
  return r;
}

GroupoidSpec spec_from_json(const json& j) {
  const std::string what = "groupoid";
  GroupoidSpec s;
  try {
    s.outcomes = field(j, "outcomes", what).get<std::vector<std::string>>();
    s.elements = field(j, "elements", what).get<std::vector<std::string>>();
  } catch (const json::type_error&) {
    schema(what + ": outcomes and elements must be string arrays");
  }
  s.source = string_map(field(j, "source", what), "source");
  s.target = string_map(field(j, "target", what), "target");
  s.inverse = string_map(field(j, "inverse", what), "inverse");
  s.units = string_map(field(j, "units", what), "units");
  s.P = number_map(field(j, "P", what), "P");
  if (j.contains("fiber_weight")) s.fiber_weight = number_map(j.at("fiber_weight"), "fiber_weight");
  const json& comp = field(j, "compose", what);
  if (!comp.is_array()) schema("compose: expected an array of triples");
  for (const auto& t : comp) {
    if (!t.is_array() || t.size() != 3) schema("compose: expected [beta, alpha, result] triples");
    s.compose.push_back({text(t[0], "compose"), text(t[1], "compose"), text(t[2], "compose")});
  }
  return s;
}

json groupoid_to_json(const FiniteGroupoid& g) {
  const GroupoidSpec s = to_spec(g);
  json j;
  j["fmt"] = kFormat;
  j["outcomes"] = s.outcomes;
  j["elements"] = s.elements;
  j["source"] = s.source;
  j["target"] = s.target;
  j["inverse"] = s.inverse;
  j["units"] = s.units;
  j["P"] = s.P;
  json comp = json::array();
  for (const auto& t : s.compose) comp.push_back({t[0], t[1], t[2]});
  j["compose"] = std::move(comp);
  if (!g.counting_measure()) j["fiber_weight"] = s.fiber_weight;
  return j;
}

GroupoidRef read_groupoid(const fs::path& path) {
  const json j = load_json(path);
  require_format(j, path.string());
  return {validate(spec_from_json(j)), fs::absolute(path).lexically_normal().string()};
}

FunctionFile function_from_json(const json& j, const fs::path& base_dir, const std::string& prefix) {
  FunctionFile f;
  f.groupoid = resolve_groupoid(field(j, "groupoid", prefix), base_dir);
  const FiniteGroupoid& g = *f.groupoid.groupoid;
  f.values.assign(g.size(), cplx{});
  for (const auto& [id, v] : number_map(field(j, (prefix + "_re").c_str(), prefix), prefix + "_re")) {
    f.values[element_index(g, id, prefix + "_re")].real(v);
  }
  if (j.contains(prefix + "_im")) {
    for (const auto& [id, v] : number_map(j.at(prefix + "_im"), prefix + "_im")) {
      f.values[element_index(g, id, prefix + "_im")].imag(v);
    }
  }
  return f;
}

FunctionFile read_state(const fs::path& path) {
  const json j = load_json(path);
  require_format(j, path.string());
  return function_from_json(j, path.parent_path(), "phi");
}

FunctionFile read_element(const fs::path& path) {
  const json j = load_json(path);
  require_format(j, path.string());
  return function_from_json(j, path.parent_path(), "coeff");
}

json function_to_json(const GroupoidRef& g, std::span<const cplx> values, const std::string& prefix) {
  json j;
  j["fmt"] = kFormat;
  j["groupoid"] = g.ref;
  json re = json::object();
  json im = json::object();
  for (Index a = 0; a < values.size(); ++a) {
    const std::string& id = g.groupoid->element_id(a);
    re[id] = values[a].real();
    if (values[a].imag() != 0.0) im[id] = values[a].imag();
  }
  j[prefix + "_re"] = std::move(re);
  j[prefix + "_im"] = std::move(im);
  return j;
}

KernelFile read_kernel(const fs::path& path) {
  const json j = load_json(path);
  const std::string what = path.string();
  require_format(j, what);
  const fs::path dir = path.parent_path();
  KernelFile k;
  k.source = resolve_groupoid(field(j, "source_groupoid", what), dir);
  k.target = resolve_groupoid(field(j, "target_groupoid", what), dir);
  const FiniteGroupoid& g1 = *k.source.groupoid;
  const FiniteGroupoid& g2 = *k.target.groupoid;
  k.kernel = {k.source.groupoid, k.target.groupoid, ComplexMatrix(g1.size(), g2.size())};
  auto fill = [&](const char* key, bool imag) {
    for (const auto& [pair, v] : number_map(j.at(key), key)) {
      const auto bar = pair.find('|');
      if (bar == std::string::npos) schema(std::string(key) + ": key '" + pair + "' is not 'a1|a2'");
      const Index a1 = element_index(g1, pair.substr(0, bar), key);
      const Index a2 = element_index(g2, pair.substr(bar + 1), key);
      if (imag) {
        k.kernel.pi(a1, a2).imag(v);
      } else {
        k.kernel.pi(a1, a2).real(v);
      }
    }
  };
  field(j, "pi_re", what);
  fill("pi_re", false);
  if (j.contains("pi_im")) fill("pi_im", true);
  return k;
}

json kernel_to_json(const GroupoidRef& source, const GroupoidRef& target, const QuantumKernel& k) {
  json j;
  j["fmt"] = kFormat;
  j["source_groupoid"] = source.ref;
  j["target_groupoid"] = target.ref;
  json re = json::object();
  json im = json::object();
  for (Index a1 = 0; a1 < k.pi.rows(); ++a1) {
    for (Index a2 = 0; a2 < k.pi.cols(); ++a2) {
      const cplx v = k.pi(a1, a2);
      if (v == cplx{}) continue;
      const std::string key = k.source->element_id(a1) + "|" + k.target->element_id(a2);
      if (v.real() != 0.0) re[key] = v.real();
      if (v.imag() != 0.0) im[key] = v.imag();
    }
  }
  j["pi_re"] = std::move(re);
  j["pi_im"] = std::move(im);
  return j;
}

std::vector<std::vector<double>> read_classical(const fs::path& path) {
  const json j = load_json(path);
  require_format(j, path.string());
  return real_rows(field(j, "K", path.string()), "K");
}

json classical_to_json(const std::vector<std::vector<double>>& k) {
  return {{"fmt", kFormat}, {"K", k}};
}

std::vector<ComplexMatrix> read_kraus(const fs::path& path) {
  const json j = load_json(path);
  require_format(j, path.string());
  const json& list = field(j, "kraus", path.string());
  if (!list.is_array() || list.empty()) schema("kraus: expected a non-empty array");
  std::vector<ComplexMatrix> out;
  for (const auto& a : list) out.push_back(complex_matrix(a, "kraus"));
  return out;
}

json kraus_to_json(const std::vector<ComplexMatrix>& kraus) {
  json list = json::array();
  for (const auto& a : kraus) list.push_back({{"re", matrix_rows(a, false)}, {"im", matrix_rows(a, true)}});
  return {{"fmt", kFormat}, {"kraus", std::move(list)}};
}

ModelFile read_model(const fs::path& path) {
  const json j = load_json(path);
  const std::string what = path.string();
  require_format(j, what);
  const fs::path dir = path.parent_path();
  ModelFile m;
  m.groupoid = resolve_groupoid(field(j, "groupoid", what), dir);
  const double s0 = number(field(j, "s0", what), "s0");
  const json& interval = field(j, "interval", what);
  if (!interval.is_array() || interval.size() != 2) schema("interval: expected [lo, hi]");
  const double lo = number(interval[0], "interval");
  const double hi = number(interval[1], "interval");
  if (j.contains("grid")) {
    if (!j.at("grid").is_array()) schema("grid: expected an array");
    for (const auto& s : j.at("grid")) m.audit_grid.push_back(number(s, "grid"));
  }
  const json& states = field(j, "states", what);
  if (!states.is_object()) schema("states: expected an object");
  std::vector<std::pair<double, CVector>> knots;
  for (const auto& [key, ref] : states.items()) {
    double s = 0.0;
    try {
      std::size_t used = 0;
      s = std::stod(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      schema("states: key '" + key + "' is not a number");
    }
    FunctionFile f;
    if (ref.is_string()) {
      fs::path p = ref.get<std::string>();
      if (p.is_relative()) p = dir / p;
      f = read_state(p);
    } else {
      require_format(ref, "inline state");
      f = function_from_json(ref, dir, "phi");
    }
    if (!same_groupoid(*f.groupoid.groupoid, *m.groupoid.groupoid)) {
      throw Error(ErrorKind::GroupoidMismatch, "state at s = " + key + " lives on another groupoid");
    }
    // Every knot must itself be a state.
    (void)State::make(m.groupoid.groupoid, f.values);
    knots.emplace_back(s, std::move(f.values));
  }
  std::sort(knots.begin(), knots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CVector> phis;
  for (auto& [s, phi] : knots) {
    m.knots.push_back(s);
    phis.push_back(std::move(phi));
  }
  m.model = interpolated_model(m.groupoid.groupoid, m.knots, std::move(phis), s0, lo, hi);
  return m;
}

PipelineFile read_pipeline(const fs::path& path) {
  const json j = load_json(path);
  const std::string what = path.string();
  require_format(j, what);
  const fs::path dir = path.parent_path();
  auto resolve = [&dir](const json& v, const std::string& w) {
    fs::path p = text(v, w);
    return p.is_relative() ? dir / p : p;
  };
  PipelineFile pf;
  pf.state = resolve(field(j, "state", what), "state");
  const json& ks = field(j, "kernels", what);
  if (!ks.is_array() || ks.empty()) schema("kernels: expected a non-empty array of paths");
  for (const auto& k : ks) pf.kernels.push_back(resolve(k, "kernels"));
  return pf;
}

}  // namespace cencov::io
