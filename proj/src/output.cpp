#include "jetham/output.hpp"

namespace jetham {

namespace {

using nlohmann::json;

json point_json(const Point& pt) {
  json t = json::array(), x = json::array(), p = json::array();
  for (int a = 0; a < pt.dims.m; ++a) t.push_back(pt.t(a));
  for (int i = 0; i < pt.dims.n; ++i) x.push_back(pt.x(i));
  for (int i = 0; i < pt.dims.n; ++i) {
    json row = json::array();
    for (int a = 0; a < pt.dims.m; ++a) row.push_back(pt.p(i, a));
    p.push_back(row);
  }
  return json{{"t", t}, {"x", x}, {"p", p}};
}

json matrix_json(const Mat<double>& m) {
  json rows = json::array();
  for (int r = 0; r < m.n; ++r) {
    json row = json::array();
    for (int c = 0; c < m.n; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json family_json(const TensorFamily& fam) {
  json out;
  out["name"] = fam.name;
  out["block"] = fam.block;
  json kinds = json::array();
  for (IndexKind k : fam.value.kinds()) kinds.push_back(kind_name(k));
  out["kinds"] = kinds;
  out["indices"] = fam.index_names;
  out["entries"] = tensor_to_json(fam.value);
  return out;
}

}  // namespace

json tensor_to_json(const DTensor& t) {
  const Dims& d = t.dims();
  json entries = json::array();
  std::vector<int> idx(static_cast<size_t>(t.rank()));
  for (size_t flat = 0; flat < t.size(); ++flat) {
    t.unflatten(flat, idx);
    json tuple = json::array();
    for (int ax = 0; ax < t.rank(); ++ax) {
      switch (t.kinds()[ax]) {
        case IndexKind::PVec:
          tuple.push_back(d.pair_a(idx[ax]) + 1);  // upper temporal index first
          tuple.push_back(d.pair_i(idx[ax]) + 1);
          break;
        case IndexKind::PForm:
          tuple.push_back(d.pair_i(idx[ax]) + 1);  // upper spatial index first
          tuple.push_back(d.pair_a(idx[ax]) + 1);
          break;
        default:
          tuple.push_back(idx[ax] + 1);
      }
    }
    entries.push_back(json{{"i", tuple}, {"v", t[flat]}});
  }
  return entries;
}

json compute_document(const Scenario& s, const CompiledScenario& cs, const std::string& what,
                      ExecMode mode) {
  json doc;
  doc["schema"] = "jetham/1";
  doc["what"] = what;
  doc["scenario"] = scenario_to_json(s);

  const auto& pts = cs.points;
  json out_points = json::array();

  auto emit_families = [&](const std::vector<std::vector<TensorFamily>>& per_point) {
    for (size_t k = 0; k < pts.size(); ++k) {
      json entry;
      entry["point"] = point_json(pts[k]);
      json fams = json::array();
      for (const TensorFamily& f : per_point[k]) fams.push_back(family_json(f));
      entry["families"] = fams;
      out_points.push_back(entry);
    }
  };

  if (what == "torsion") {
    std::vector<TorsionTable> tables = torsion_tables(cs.conn, pts, mode);
    std::vector<std::vector<TensorFamily>> fams;
    for (auto& t : tables) fams.push_back(std::move(t.families));
    emit_families(fams);
  } else if (what == "curvature") {
    std::vector<CurvatureTable> tables = curvature_tables(cs.conn, pts, mode);
    std::vector<std::vector<TensorFamily>> fams;
    for (auto& t : tables) fams.push_back(std::move(t.families));
    emit_families(fams);
  } else if (what == "brackets") {
    std::vector<std::vector<TensorFamily>> fams(pts.size());
    parallel_for(static_cast<int>(pts.size()), mode, [&](int k) {
      BracketCoefficients bc = bracket_coefficients(cs.conn.nlc, pts[k]);
      fams[k] = {
          {"R^(a)_(i)bc", "[dt,dt]", std::move(bc.r_tt), {"a", "i", "b", "c"}},
          {"R^(a)_(i)bk", "[dt,dx]", std::move(bc.r_tx), {"a", "i", "b", "k"}},
          {"R^(a)_(i)jk", "[dx,dx]", std::move(bc.r_xx), {"a", "i", "j", "k"}},
          {"B^(a)(k)_(i)b(c)", "[dt,dp]", std::move(bc.b_t), {"a", "i", "b", "k", "c"}},
          {"B^(a)(k)_(i)j(c)", "[dx,dp]", std::move(bc.b_x), {"a", "i", "j", "k", "c"}},
      };
    });
    emit_families(fams);
  } else if (what == "deflection") {
    std::vector<std::vector<TensorFamily>> fams(pts.size());
    parallel_for(static_cast<int>(pts.size()), mode, [&](int k) {
      DeflectionTensors dt = deflection_tensors(cs.conn, pts[k]);
      fams[k] = {
          {"Delta^(a)_(i)b", "hT deflection", std::move(dt.delta_t), {"a", "i", "b"}},
          {"Delta^(a)_(i)j", "hM deflection", std::move(dt.delta_x), {"a", "i", "j"}},
          {"theta^(a)(j)_(i)(b)", "w deflection", std::move(dt.theta), {"a", "i", "j", "b"}},
      };
    });
    emit_families(fams);
  } else if (what == "fundamental-metric") {
    if (!cs.hamiltonian)
      throw ScenarioError("fundamental-metric requires a hamiltonian in the scenario");
    std::vector<std::vector<TensorFamily>> fams(pts.size());
    parallel_for(static_cast<int>(pts.size()), mode, [&](int k) {
      DTensor g = fundamental_metric(*cs.hamiltonian, pts[k]);
      fams[k] = {{"G^(i)(j)_(a)(b)", "vertical metrical d-tensor", std::move(g),
                  {"i", "a", "j", "b"}}};
    });
    emit_families(fams);
  } else if (what == "frames") {
    for (const Point& pt : pts) {
      AdaptedFrame fr = adapted_frame(cs.conn.nlc, pt);
      json entry;
      entry["point"] = point_json(pt);
      entry["frame"] = matrix_json(fr.frame);
      entry["coframe"] = matrix_json(fr.coframe);
      out_points.push_back(entry);
    }
  } else if (what == "almost-product") {
    for (const Point& pt : pts) {
      AlmostProduct ap = almost_product(cs.conn.nlc, pt);
      json entry;
      entry["point"] = point_json(pt);
      entry["natural"] = matrix_json(ap.natural);
      entry["adapted_diag"] = ap.adapted_diag;
      entry["plus_multiplicity"] = ap.plus_multiplicity;
      entry["minus_multiplicity"] = ap.minus_multiplicity;
      out_points.push_back(entry);
    }
  } else {
    throw ScenarioError("unknown table '" + what +
                        "' (expected frames, brackets, torsion, curvature, deflection, "
                        "fundamental-metric or almost-product)");
  }

  doc["points"] = out_points;
  return doc;
}

std::string render_document(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace jetham
