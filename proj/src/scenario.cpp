#include "jetham/scenario.hpp"

#include <cmath>
#include <fstream>

namespace jetham {

namespace {

using nlohmann::json;

std::vector<std::string> flatten_matrix(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw ScenarioError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(rows) * cols);
  for (const json& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ScenarioError(std::string(what) + ": expected " + std::to_string(cols) +
                          " columns per row");
    for (const json& e : row) {
      if (!e.is_string()) throw ScenarioError(std::string(what) + ": entries must be strings");
      out.push_back(e.get<std::string>());
    }
  }
  return out;
}

/// Flattens an arbitrarily nested array of expression strings; the caller
/// checks the total count against the documented layout.
void flatten_nested(const json& j, std::vector<std::string>& out, const char* what) {
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
    return;
  }
  if (!j.is_array()) throw ScenarioError(std::string(what) + ": expected nested arrays of strings");
  for (const json& e : j) flatten_nested(e, out, what);
}

std::vector<std::string> family(const json& j, size_t count, const char* what) {
  std::vector<std::string> out;
  flatten_nested(j, out, what);
  if (out.size() != count)
    throw ScenarioError(std::string(what) + ": expected " + std::to_string(count) +
                        " expressions, got " + std::to_string(out.size()));
  return out;
}

json nest_matrix(const std::vector<std::string>& flat, int rows, int cols) {
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) row.push_back(flat[static_cast<size_t>(r) * cols + c]);
    out.push_back(row);
  }
  return out;
}

json point_to_json(const Point& pt) {
  json out;
  json t = json::array(), x = json::array(), p = json::array();
  for (int a = 0; a < pt.dims.m; ++a) t.push_back(pt.t(a));
  for (int i = 0; i < pt.dims.n; ++i) x.push_back(pt.x(i));
  for (int i = 0; i < pt.dims.n; ++i) {
    json row = json::array();
    for (int a = 0; a < pt.dims.m; ++a) row.push_back(pt.p(i, a));
    p.push_back(row);
  }
  out["t"] = t;
  out["x"] = x;
  out["p"] = p;
  return out;
}

Point point_from_json(const json& j, Dims dims) {
  Point pt(dims);
  if (!j.contains("t") || !j.contains("x") || !j.contains("p"))
    throw ScenarioError("eval point needs t, x and p entries");
  if (static_cast<int>(j["t"].size()) != dims.m || static_cast<int>(j["x"].size()) != dims.n ||
      static_cast<int>(j["p"].size()) != dims.n)
    throw ScenarioError("eval point arity does not match dims");
  for (int a = 0; a < dims.m; ++a) pt.t(a) = j["t"][a].get<double>();
  for (int i = 0; i < dims.n; ++i) pt.x(i) = j["x"][i].get<double>();
  for (int i = 0; i < dims.n; ++i) {
    if (static_cast<int>(j["p"][i].size()) != dims.m)
      throw ScenarioError("eval point p rows must have m entries");
    for (int a = 0; a < dims.m; ++a) pt.p(i, a) = j["p"][i][a].get<double>();
  }
  for (double v : pt.c)
    if (!std::isfinite(v)) throw ScenarioError("eval point coordinates must be finite");
  return pt;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  try {
    if (!j.contains("dims")) throw ScenarioError("missing dims");
    s.dims.m = j["dims"].value("m", 0);
    s.dims.n = j["dims"].value("n", 0);
    if (s.dims.m < 1 || s.dims.n < 1) throw ScenarioError("dims must be positive");
    const int m = s.dims.m, n = s.dims.n;

    if (!j.contains("temporal_metric") || !j.contains("spatial_metric"))
      throw ScenarioError("missing temporal_metric or spatial_metric");
    s.temporal_metric = flatten_matrix(j["temporal_metric"], m, m, "temporal_metric");
    s.spatial_metric = flatten_matrix(j["spatial_metric"], n, n, "spatial_metric");

    if (j.contains("hamiltonian")) s.hamiltonian = j["hamiltonian"].get<std::string>();

    std::string mode = j.value("connection_mode", "canonical-berwald");
    if (mode == "canonical-berwald") {
      s.mode = Scenario::Mode::CanonicalBerwald;
    } else if (mode == "custom") {
      s.mode = Scenario::Mode::Custom;
    } else {
      throw ScenarioError("connection_mode must be 'canonical-berwald' or 'custom'");
    }

    size_t mm = static_cast<size_t>(m), nn = static_cast<size_t>(n);
    if (j.contains("linear_connection")) {
      const json& lc = j["linear_connection"];
      if (lc.contains("temporal"))
        s.chi = family(lc["temporal"], mm * mm * mm, "linear_connection.temporal");
      if (lc.contains("spatial"))
        s.gamma = family(lc["spatial"], nn * nn * nn, "linear_connection.spatial");
    }
    if (j.contains("nonlinear_connection")) {
      const json& nc = j["nonlinear_connection"];
      if (!nc.contains("N1") || !nc.contains("N2"))
        throw ScenarioError("nonlinear_connection needs N1 and N2");
      s.n1 = family(nc["N1"], mm * nn * mm, "nonlinear_connection.N1");
      s.n2 = family(nc["N2"], mm * nn * nn, "nonlinear_connection.N2");
    }
    if (j.contains("nlinear_coefficients")) {
      const json& c = j["nlinear_coefficients"];
      auto get = [&](const char* key, size_t count) -> std::optional<std::vector<std::string>> {
        if (!c.contains(key)) return std::nullopt;
        return family(c[key], count, key);
      };
      s.a_tt = get("A_t", mm * mm * mm);
      s.a_ss = get("A_s", nn * nn * mm);
      s.a_pp = get("A_p", mm * nn * nn * mm * mm);
      s.h_tt = get("H_t", mm * mm * nn);
      s.h_ss = get("H_s", nn * nn * nn);
      s.h_pp = get("H_p", mm * nn * nn * mm * nn);
      s.c_tt = get("C_t", mm * mm * nn * mm);
      s.c_ss = get("C_s", nn * nn * nn * mm);
      s.c_pp = get("C_p", mm * nn * nn * mm * nn * mm);
    }

    if (!j.contains("eval_points") || !j["eval_points"].is_array() || j["eval_points"].empty())
      throw ScenarioError("at least one eval point is required");
    for (const json& p : j["eval_points"]) s.eval_points.push_back(point_from_json(p, s.dims));
    s.seed = j.value("seed", static_cast<std::uint64_t>(0));
    s.mutation = j.value("mutation", 0.0);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  json j;
  j["dims"] = {{"m", s.dims.m}, {"n", s.dims.n}};
  j["temporal_metric"] = nest_matrix(s.temporal_metric, s.dims.m, s.dims.m);
  j["spatial_metric"] = nest_matrix(s.spatial_metric, s.dims.n, s.dims.n);
  if (s.hamiltonian) j["hamiltonian"] = *s.hamiltonian;
  j["connection_mode"] =
      s.mode == Scenario::Mode::CanonicalBerwald ? "canonical-berwald" : "custom";
  if (s.chi || s.gamma) {
    json lc;
    if (s.chi) lc["temporal"] = *s.chi;
    if (s.gamma) lc["spatial"] = *s.gamma;
    j["linear_connection"] = lc;
  }
  if (s.n1 && s.n2) j["nonlinear_connection"] = {{"N1", *s.n1}, {"N2", *s.n2}};
  json c;
  auto put = [&](const char* key, const std::optional<std::vector<std::string>>& v) {
    if (v) c[key] = *v;
  };
  put("A_t", s.a_tt);
  put("A_s", s.a_ss);
  put("A_p", s.a_pp);
  put("H_t", s.h_tt);
  put("H_s", s.h_ss);
  put("H_p", s.h_pp);
  put("C_t", s.c_tt);
  put("C_s", s.c_ss);
  put("C_p", s.c_pp);
  if (!c.is_null()) j["nlinear_coefficients"] = c;
  json pts = json::array();
  for (const Point& pt : s.eval_points) pts.push_back(point_to_json(pt));
  j["eval_points"] = pts;
  j["seed"] = s.seed;
  if (s.mutation != 0.0) j["mutation"] = s.mutation;
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ScenarioError("scenario is not valid JSON (" + path + "): " + e.what());
  }
  return scenario_from_json(j);
}

namespace {

std::vector<Field> parse_family(const std::vector<std::string>& texts, Dims dims,
                                const char* what) {
  std::vector<Field> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    try {
      out.push_back(Field::from_field(parse(t, dims)));
    } catch (const Error& e) {
      throw ScenarioError(std::string(what) + ": bad expression '" + t + "': " + e.what());
    }
  }
  return out;
}

void validate_metric(std::span<const Field> g, int side, std::span<const Point> pts,
                     const char* what) {
  for (const Point& pt : pts) {
    Mat<double> gm(side);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) gm(r, c) = g[static_cast<size_t>(r) * side + c](pt.coords());
    for (int r = 0; r < side; ++r)
      for (int c = r + 1; c < side; ++c)
        if (std::abs(gm(r, c) - gm(c, r)) > 1e-12)
          throw ScenarioError(std::string(what) + " is not symmetric at an eval point");
    double dv = det(gm);
    if (std::abs(dv) <= 1e-10) throw SingularMetricError(std::abs(dv));
  }
}

}  // namespace

CompiledScenario compile_scenario(const Scenario& s) {
  CompiledScenario cs;
  cs.dims = s.dims;
  cs.mode = s.mode;
  cs.seed = s.seed;
  cs.mutation = s.mutation;
  cs.points = s.eval_points;

  try {
    cs.h = make_temporal_metric(s.dims, s.temporal_metric);
    cs.phi = make_spatial_metric(s.dims, s.spatial_metric);
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(std::string("metric: ") + e.what());
  }
  validate_metric(cs.h.h, s.dims.m, cs.points, "temporal_metric");
  validate_metric(cs.phi.phi, s.dims.n, cs.points, "spatial_metric");

  if (s.hamiltonian) {
    try {
      cs.hamiltonian = Field::from_field(parse(*s.hamiltonian, s.dims));
    } catch (const Error& e) {
      throw ScenarioError(std::string("hamiltonian: ") + e.what());
    }
  }

  if (s.mode == Scenario::Mode::CanonicalBerwald) {
    if (s.chi && s.gamma) {
      cs.linear = {s.dims, parse_family(*s.chi, s.dims, "linear_connection.temporal"),
                   parse_family(*s.gamma, s.dims, "linear_connection.spatial")};
    } else if (s.chi || s.gamma) {
      throw ScenarioError("linear_connection needs both temporal and spatial parts");
    } else {
      cs.linear = christoffel(cs.h, cs.phi);
    }
    cs.conn = berwald_connection(cs.linear);
  } else {
    if (!s.n1 || !s.n2)
      throw ScenarioError("custom connection_mode requires nonlinear_connection");
    cs.conn = zero_connection(s.dims);
    cs.conn.nlc.n1 = parse_family(*s.n1, s.dims, "N1");
    cs.conn.nlc.n2 = parse_family(*s.n2, s.dims, "N2");
    auto fill = [&](std::vector<Field>& dst, const std::optional<std::vector<std::string>>& src,
                    const char* what) {
      if (src) dst = parse_family(*src, s.dims, what);
    };
    fill(cs.conn.a_tt, s.a_tt, "A_t");
    fill(cs.conn.a_ss, s.a_ss, "A_s");
    fill(cs.conn.a_pp, s.a_pp, "A_p");
    fill(cs.conn.h_tt, s.h_tt, "H_t");
    fill(cs.conn.h_ss, s.h_ss, "H_s");
    fill(cs.conn.h_pp, s.h_pp, "H_p");
    fill(cs.conn.c_tt, s.c_tt, "C_t");
    fill(cs.conn.c_ss, s.c_ss, "C_s");
    fill(cs.conn.c_pp, s.c_pp, "C_p");
  }
  return cs;
}

CompiledScenario transform_scenario(const CompiledScenario& cs, const CoordinateChange& chg) {
  CompiledScenario out;
  out.dims = cs.dims;
  out.mode = cs.mode;
  out.seed = cs.seed;
  out.mutation = cs.mutation;
  out.h = transform_temporal_metric(cs.h, chg);
  out.phi = transform_spatial_metric(cs.phi, chg);
  if (cs.hamiltonian) out.hamiltonian = pullback_scalar(*cs.hamiltonian, chg);
  out.points.reserve(cs.points.size());
  for (const Point& pt : cs.points) out.points.push_back(push_point(chg, pt));
  if (cs.mode == Scenario::Mode::CanonicalBerwald) {
    out.linear = transform_linear_coeffs(cs.linear, chg);
    out.conn = berwald_connection(out.linear);
  } else {
    out.conn = transform_connection_by_rules(cs.conn, chg);
  }
  return out;
}

}  // namespace jetham
