#include "oblab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace oblab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, const std::string& block,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail("block \"" + block + "\" must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      std::ostringstream msg;
      msg << "unknown key \"" << item.key() << "\" in block \"" << block
          << "\" (allowed:";
      for (const auto& k : allowed) msg << " " << k;
      msg << ")";
      fail(msg.str());
    }
  }
}

const json& require(const json& j, const std::string& block,
                    const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) {
    fail("missing key \"" + key + "\" in block \"" + block + "\"");
  }
  return *it;
}

double as_number(const json& v, const std::string& block,
                 const std::string& key) {
  if (!v.is_number()) {
    fail("key \"" + key + "\" in block \"" + block + "\" must be a number");
  }
  return v.get<double>();
}

long as_integer(const json& v, const std::string& block,
                const std::string& key) {
  if (!v.is_number_integer()) {
    fail("key \"" + key + "\" in block \"" + block + "\" must be an integer");
  }
  return v.get<long>();
}

std::string as_string(const json& v, const std::string& block,
                      const std::string& key) {
  if (!v.is_string()) {
    fail("key \"" + key + "\" in block \"" + block + "\" must be a string");
  }
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& block, const std::string& key) {
  if (!v.is_boolean()) {
    fail("key \"" + key + "\" in block \"" + block + "\" must be a boolean");
  }
  return v.get<bool>();
}

std::vector<double> as_number_list(const json& v, const std::string& block,
                                   const std::string& key) {
  if (!v.is_array() || v.empty()) {
    fail("key \"" + key + "\" in block \"" + block +
         "\" must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, block, key));
  return out;
}

double opt_number(const json& j, const std::string& block,
                  const std::string& key, double dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : as_number(*it, block, key);
}

GridConfig parse_grid(const json& j) {
  check_keys(j, "grid", {"dim", "half_width", "nodes_per_axis"});
  GridConfig g;
  g.dim = static_cast<int>(as_integer(require(j, "grid", "dim"), "grid", "dim"));
  g.nodes_per_axis = static_cast<int>(as_integer(
      require(j, "grid", "nodes_per_axis"), "grid", "nodes_per_axis"));
  g.half_width = opt_number(j, "grid", "half_width", 1.0);
  if (g.dim < 1 || g.dim > 3) fail("key \"dim\" in block \"grid\" must be 1, 2 or 3");
  return g;
}

CoeffSpec parse_coeff(const json& j) {
  const std::string block = "coefficients";
  const std::string family = as_string(require(j, block, "family"), block, "family");
  CoeffSpec c;
  if (family == "identity") {
    check_keys(j, block, {"family"});
    c.family = CoeffFamily::identity;
  } else if (family == "constant") {
    check_keys(j, block, {"family", "matrix"});
    c.family = CoeffFamily::constant;
    const json& m = require(j, block, "matrix");
    if (!m.is_array() || m.size() < 1 || m.size() > 3) {
      fail("key \"matrix\" in block \"coefficients\" must be a 1x1, 2x2 or 3x3 "
           "array of rows");
    }
    const std::size_t n = m.size();
    for (std::size_t r = 0; r < n; ++r) {
      if (!m[r].is_array() || m[r].size() != n) {
        fail("key \"matrix\" in block \"coefficients\" must be square");
      }
      for (std::size_t s = 0; s < n; ++s) {
        const double v = as_number(m[r][s], block, "matrix");
        if (s >= r) c.matrix.set_entry(static_cast<int>(r), static_cast<int>(s), v);
        else if (std::abs(v - c.matrix.entry(static_cast<int>(s),
                                             static_cast<int>(r))) > 1e-14) {
          fail("key \"matrix\" in block \"coefficients\" must be symmetric");
        }
      }
    }
  } else if (family == "smooth_oscillation") {
    check_keys(j, block, {"family", "t", "k"});
    c.family = CoeffFamily::smooth_oscillation;
    c.t = as_number(require(j, block, "t"), block, "t");
    c.k = opt_number(j, block, "k", 1.0);
  } else if (family == "log_oscillation") {
    check_keys(j, block, {"family", "amplitude"});
    c.family = CoeffFamily::log_oscillation;
    c.amplitude = as_number(require(j, block, "amplitude"), block, "amplitude");
  } else if (family == "checkerboard") {
    check_keys(j, block, {"family", "t", "k"});
    c.family = CoeffFamily::checkerboard;
    c.t = as_number(require(j, block, "t"), block, "t");
    c.k = opt_number(j, block, "k", 1.0);
  } else {
    fail("key \"family\" in block \"coefficients\" must be one of identity, "
         "constant, smooth_oscillation, log_oscillation, checkerboard");
  }
  return c;
}

RhsSpec parse_rhs(const json& j) {
  const std::string block = "f";
  const std::string family = as_string(require(j, block, "family"), block, "family");
  RhsSpec r;
  if (family == "constant") {
    check_keys(j, block, {"family", "value"});
    r.family = RhsFamily::constant;
    r.value = as_number(require(j, block, "value"), block, "value");
  } else if (family == "cosine") {
    check_keys(j, block, {"family", "value", "t", "k"});
    r.family = RhsFamily::cosine;
    r.value = as_number(require(j, block, "value"), block, "value");
    r.t = as_number(require(j, block, "t"), block, "t");
    r.k = opt_number(j, block, "k", 1.0);
  } else {
    fail("key \"family\" in block \"f\" must be one of constant, cosine");
  }
  return r;
}

BoundaryConfig parse_boundary(const json& j) {
  const std::string block = "boundary";
  const std::string profile =
      as_string(require(j, block, "profile"), block, "profile");
  BoundaryConfig b;
  b.profile = profile;
  if (profile == "zero") {
    check_keys(j, block, {"profile"});
  } else if (profile == "half_space") {
    check_keys(j, block, {"profile", "c"});
    b.c = opt_number(j, block, "c", 1.0);
    if (!(b.c > 0.0)) fail("key \"c\" in block \"boundary\" must be positive");
  } else if (profile == "radial") {
    check_keys(j, block, {"profile", "r0"});
    b.r0 = as_number(require(j, block, "r0"), block, "r0");
    if (!(b.r0 > 0.0)) fail("key \"r0\" in block \"boundary\" must be positive");
  } else if (profile == "file") {
    check_keys(j, block, {"profile", "file"});
    b.file = as_string(require(j, block, "file"), block, "file");
  } else {
    fail("key \"profile\" in block \"boundary\" must be one of zero, "
         "half_space, radial, file");
  }
  return b;
}

SolverConfig parse_solver(const json& j) {
  check_keys(j, "solver", {"method", "tol", "max_iter"});
  SolverConfig s;
  auto it = j.find("method");
  if (it != j.end()) {
    const std::string m = as_string(*it, "solver", "method");
    if (m == "psor") s.method = SolveMethod::psor;
    else if (m == "active_set") s.method = SolveMethod::active_set;
    else fail("key \"method\" in block \"solver\" must be psor or active_set");
  }
  s.tol = opt_number(j, "solver", "tol", 1e-10);
  if (!(s.tol > 0.0)) fail("key \"tol\" in block \"solver\" must be positive");
  auto mi = j.find("max_iter");
  if (mi != j.end()) s.max_iter = as_integer(*mi, "solver", "max_iter");
  if (s.max_iter <= 0) {
    fail("key \"max_iter\" in block \"solver\" must be positive");
  }
  return s;
}

SyntheticConfig parse_synthetic(const json& j) {
  check_keys(j, "synthetic", {"family"});
  SyntheticConfig s;
  s.enabled = true;
  s.family = as_string(require(j, "synthetic", "family"), "synthetic", "family");
  if (s.family != "line_contact" && s.family != "quartic") {
    fail("key \"family\" in block \"synthetic\" must be line_contact or quartic");
  }
  return s;
}

ReferenceConfig parse_reference(const json& j) {
  ReferenceConfig r;
  r.enabled = true;
  const std::string family =
      as_string(require(j, "reference", "family"), "reference", "family");
  r.family = family;
  if (family == "half_line") {
    check_keys(j, "reference", {"family"});
  } else if (family == "radial") {
    check_keys(j, "reference", {"family", "r0"});
    r.r0 = as_number(require(j, "reference", "r0"), "reference", "r0");
    if (!(r.r0 > 0.0)) fail("key \"r0\" in block \"reference\" must be positive");
  } else {
    fail("key \"family\" in block \"reference\" must be half_line or radial");
  }
  return r;
}

Point parse_point(const json& v, const std::string& block) {
  if (!v.is_array() || v.empty() || v.size() > 3) {
    fail("key \"point\" in block \"" + block +
         "\" must be an array of 1 to 3 numbers");
  }
  Point p{0.0, 0.0, 0.0};
  for (std::size_t d = 0; d < v.size(); ++d) {
    p[d] = as_number(v[d], block, "point");
  }
  return p;
}

void parse_point_policy(const json& j, const std::string& block, SuiteConfig& s) {
  auto pp = j.find("point_policy");
  auto pt = j.find("point");
  if (pp != j.end()) {
    s.point_policy = as_string(*pp, block, "point_policy");
    if (s.point_policy != "auto" && s.point_policy != "explicit") {
      fail("key \"point_policy\" in block \"" + block +
           "\" must be auto or explicit");
    }
  } else if (pt != j.end()) {
    s.point_policy = "explicit";
  }
  if (s.point_policy == "explicit") {
    if (pt == j.end()) {
      fail("block \"" + block + "\" uses point_policy explicit but has no "
           "\"point\" key");
    }
    s.point = parse_point(*pt, block);
    s.has_point = true;
  } else if (pt != j.end()) {
    fail("block \"" + block + "\" sets \"point\" but point_policy is auto");
  }
}

SuiteConfig parse_suite(const json& j, std::size_t index) {
  const std::string name_key = "suites[" + std::to_string(index) + "]";
  if (!j.is_object()) fail("entries of \"suites\" must be objects");
  const std::string name = as_string(require(j, name_key, "name"), name_key, "name");
  SuiteConfig s;
  s.name = name;
  const std::string block = name_key + " (" + name + ")";

  auto common = [&](std::set<std::string> extra) {
    extra.insert("name");
    extra.insert("asserted");
    check_keys(j, block, extra);
    auto it = j.find("asserted");
    if (it != j.end()) s.asserted = as_bool(*it, block, "asserted");
  };

  if (name == "optimal_regularity" || name == "nondegeneracy") {
    common({"radii", "point", "point_policy"});
    s.radii = as_number_list(require(j, block, "radii"), block, "radii");
    parse_point_policy(j, block, s);
  } else if (name == "alternative") {
    common({"radii", "sample_stride"});
    s.radii = as_number_list(require(j, block, "radii"), block, "radii");
    auto it = j.find("sample_stride");
    if (it != j.end()) {
      s.sample_stride = static_cast<int>(as_integer(*it, block, "sample_stride"));
    }
    if (s.sample_stride < 1) {
      fail("key \"sample_stride\" in block \"" + block + "\" must be >= 1");
    }
  } else if (name == "measure_stability") {
    common({"t_levels", "vary_rhs", "k", "mu_policy", "mu_value"});
    s.t_levels = as_number_list(require(j, block, "t_levels"), block, "t_levels");
    auto vr = j.find("vary_rhs");
    if (vr != j.end()) s.vary_rhs = as_bool(*vr, block, "vary_rhs");
    s.k = opt_number(j, block, "k", 1.0);
    auto mp = j.find("mu_policy");
    if (mp != j.end()) {
      s.mu_policy = as_string(*mp, block, "mu_policy");
      if (s.mu_policy != "mean_f" && s.mu_policy != "value") {
        fail("key \"mu_policy\" in block \"" + block +
             "\" must be mean_f or value");
      }
    }
    s.mu_value = opt_number(j, block, "mu_value", 1.0);
  } else if (name == "blowup") {
    common({"eps", "point", "point_policy", "target_nodes"});
    s.eps = as_number_list(require(j, block, "eps"), block, "eps");
    parse_point_policy(j, block, s);
    auto tn = j.find("target_nodes");
    if (tn != j.end()) {
      s.target_nodes = static_cast<int>(as_integer(*tn, block, "target_nodes"));
    }
    if (s.target_nodes < 9) {
      fail("key \"target_nodes\" in block \"" + block + "\" must be >= 9");
    }
  } else if (name == "reifenberg") {
    common({"radii", "sample_stride", "theta_cap"});
    s.radii = as_number_list(require(j, block, "radii"), block, "radii");
    auto it = j.find("sample_stride");
    if (it != j.end()) {
      s.sample_stride = static_cast<int>(as_integer(*it, block, "sample_stride"));
    }
    if (s.sample_stride < 1) {
      fail("key \"sample_stride\" in block \"" + block + "\" must be >= 1");
    }
    s.theta_cap = opt_number(j, block, "theta_cap", 0.1);
  } else {
    fail("unknown suite name \"" + name + "\" in block \"" + name_key +
         "\"; must be one of " + suite_list());
  }
  return s;
}

json serialize_coeff(const CoeffSpec& c) {
  json j;
  switch (c.family) {
    case CoeffFamily::identity:
      j["family"] = "identity";
      break;
    case CoeffFamily::constant: {
      j["family"] = "constant";
      // serialized as 3x3; parse accepts any square size, entries beyond the
      // grid dimension are ignored by the assembler
      json rows = json::array();
      for (int r = 0; r < 3; ++r) {
        json row = json::array();
        for (int s = 0; s < 3; ++s) row.push_back(c.matrix.entry(r, s));
        rows.push_back(row);
      }
      j["matrix"] = rows;
      break;
    }
    case CoeffFamily::smooth_oscillation:
      j["family"] = "smooth_oscillation";
      j["t"] = c.t;
      j["k"] = c.k;
      break;
    case CoeffFamily::log_oscillation:
      j["family"] = "log_oscillation";
      j["amplitude"] = c.amplitude;
      break;
    case CoeffFamily::checkerboard:
      j["family"] = "checkerboard";
      j["t"] = c.t;
      j["k"] = c.k;
      break;
  }
  return j;
}

json serialize_rhs(const RhsSpec& r) {
  json j;
  switch (r.family) {
    case RhsFamily::constant:
      j["family"] = "constant";
      j["value"] = r.value;
      break;
    case RhsFamily::cosine:
      j["family"] = "cosine";
      j["value"] = r.value;
      j["t"] = r.t;
      j["k"] = r.k;
      break;
  }
  return j;
}

json serialize_suite(const SuiteConfig& s) {
  json j;
  j["name"] = s.name;
  j["asserted"] = s.asserted;
  if (s.name == "optimal_regularity" || s.name == "nondegeneracy") {
    j["radii"] = s.radii;
    j["point_policy"] = s.point_policy;
    if (s.has_point) {
      j["point"] = std::vector<double>{s.point.begin(), s.point.end()};
    }
  } else if (s.name == "alternative") {
    j["radii"] = s.radii;
    j["sample_stride"] = s.sample_stride;
  } else if (s.name == "measure_stability") {
    j["t_levels"] = s.t_levels;
    j["vary_rhs"] = s.vary_rhs;
    j["k"] = s.k;
    j["mu_policy"] = s.mu_policy;
    j["mu_value"] = s.mu_value;
  } else if (s.name == "blowup") {
    j["eps"] = s.eps;
    j["point_policy"] = s.point_policy;
    if (s.has_point) {
      j["point"] = std::vector<double>{s.point.begin(), s.point.end()};
    }
    j["target_nodes"] = s.target_nodes;
  } else if (s.name == "reifenberg") {
    j["radii"] = s.radii;
    j["sample_stride"] = s.sample_stride;
    j["theta_cap"] = s.theta_cap;
  }
  return j;
}

}  // namespace

RunConfig parse_config(const json& j) {
  check_keys(j, "<root>",
             {"grid", "coefficients", "f", "boundary", "solver", "synthetic",
              "reference", "suites", "output", "seed"});
  RunConfig c;
  c.grid = parse_grid(require(j, "<root>", "grid"));
  c.coeff = parse_coeff(require(j, "<root>", "coefficients"));
  c.rhs = parse_rhs(require(j, "<root>", "f"));
  c.boundary = parse_boundary(require(j, "<root>", "boundary"));
  if (auto it = j.find("solver"); it != j.end()) c.solver = parse_solver(*it);
  if (auto it = j.find("synthetic"); it != j.end()) {
    c.synthetic = parse_synthetic(*it);
  }
  if (auto it = j.find("reference"); it != j.end()) {
    c.reference = parse_reference(*it);
  }
  if (auto it = j.find("suites"); it != j.end()) {
    if (!it->is_array()) fail("key \"suites\" must be an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      c.suites.push_back(parse_suite((*it)[k], k));
    }
  }
  if (auto it = j.find("output"); it != j.end()) {
    c.output_dir = as_string(*it, "<root>", "output");
  }
  if (auto it = j.find("seed"); it != j.end()) {
    const long s = as_integer(*it, "<root>", "seed");
    if (s < 0) fail("key \"seed\" must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(s);
  }

  if (c.boundary.profile == "radial" && c.grid.dim != 2) {
    fail("boundary profile \"radial\" requires a 2-dimensional grid");
  }
  if (c.reference.enabled) {
    if (c.reference.family == "half_line" && c.grid.dim != 1) {
      fail("reference family \"half_line\" requires a 1-dimensional grid");
    }
    if (c.reference.family == "radial" && c.grid.dim != 2) {
      fail("reference family \"radial\" requires a 2-dimensional grid");
    }
  }
  if (c.synthetic.enabled && c.synthetic.family == "line_contact" &&
      c.grid.dim < 2) {
    fail("synthetic family \"line_contact\" requires dimension >= 2");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

json serialize_config(const RunConfig& c) {
  json j;
  j["grid"] = {{"dim", c.grid.dim},
               {"half_width", c.grid.half_width},
               {"nodes_per_axis", c.grid.nodes_per_axis}};
  j["coefficients"] = serialize_coeff(c.coeff);
  j["f"] = serialize_rhs(c.rhs);
  json b;
  b["profile"] = c.boundary.profile;
  if (c.boundary.profile == "half_space") b["c"] = c.boundary.c;
  if (c.boundary.profile == "radial") b["r0"] = c.boundary.r0;
  if (c.boundary.profile == "file") b["file"] = c.boundary.file;
  j["boundary"] = b;
  j["solver"] = {{"method", method_name(c.solver.method)},
                 {"tol", c.solver.tol},
                 {"max_iter", c.solver.max_iter}};
  if (c.synthetic.enabled) j["synthetic"] = {{"family", c.synthetic.family}};
  if (c.reference.enabled) {
    json r;
    r["family"] = c.reference.family;
    if (c.reference.family == "radial") r["r0"] = c.reference.r0;
    j["reference"] = r;
  }
  if (!c.suites.empty()) {
    json arr = json::array();
    for (const auto& s : c.suites) arr.push_back(serialize_suite(s));
    j["suites"] = arr;
  }
  j["output"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

std::string suite_list() {
  return "optimal_regularity, nondegeneracy, alternative, measure_stability, "
         "blowup, reifenberg";
}

}  // namespace oblab
