#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sailforge/sail.hpp"
#include "sailforge/verifier.hpp"

namespace sailforge {

using json = nlohmann::json;

namespace io {

[[noreturn]] inline void field_error(const std::string& path, const std::string& what) {
  throw InputError("invalid field " + (path.empty() ? std::string("/") : path) + ": " + what);
}

inline const json& at(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(path + "/" + key, "missing");
  return *it;
}

inline Int read_int(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_int(j.get<std::string>());
    } catch (const InputError&) {
      field_error(path, "not a decimal integer");
    }
  }
  if (j.is_number_integer()) return Int(j.get<long long>());
  field_error(path, "expected an integer as a decimal string");
}

inline std::size_t read_index(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    field_error(path, "expected a nonnegative index");
  return j.get<std::size_t>();
}

inline const json& read_array(const json& j, const std::string& path, std::size_t size = 0) {
  if (!j.is_array()) field_error(path, "expected an array");
  if (size && j.size() != size) field_error(path, "expected " + std::to_string(size) + " entries");
  return j;
}

inline json write(const Int& v) { return to_string(v); }

inline json write(const IntVec3& v) { return json::array({write(v[0]), write(v[1]), write(v[2])}); }

inline IntVec3 read_vec(const json& j, const std::string& path) {
  read_array(j, path, 3);
  return {read_int(j[0], path + "/0"), read_int(j[1], path + "/1"), read_int(j[2], path + "/2")};
}

inline json write(const IntMat3& m) { return json::array({write(m.row(0)), write(m.row(1)), write(m.row(2))}); }

inline IntMat3 read_matrix(const json& j, const std::string& path) {
  read_array(j, path, 3);
  return IntMat3::from_rows(read_vec(j[0], path + "/0"), read_vec(j[1], path + "/1"), read_vec(j[2], path + "/2"));
}

inline json write_points(const std::vector<IntVec3>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(write(p));
  return a;
}

inline std::vector<IntVec3> read_points(const json& j, const std::string& path) {
  read_array(j, path);
  std::vector<IntVec3> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_vec(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline json write_indices(const std::vector<std::size_t>& v) { return json(v); }

inline std::vector<std::size_t> read_indices(const json& j, const std::string& path) {
  read_array(j, path);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_index(j[i], path + "/" + std::to_string(i)));
  return out;
}

}  // namespace io

struct OperatorFile {
  IntMat3 matrix;
  std::string label;
};

inline json operator_to_json(const OperatorFile& op) {
  json j{{"matrix", io::write(op.matrix)}};
  if (!op.label.empty()) j["label"] = op.label;
  return j;
}

inline OperatorFile operator_from_json(const json& j) {
  OperatorFile op;
  op.matrix = io::read_matrix(io::at(j, "matrix", ""), "/matrix");
  if (j.contains("label")) {
    if (!j["label"].is_string()) io::field_error("/label", "expected a string");
    op.label = j["label"].get<std::string>();
  }
  return op;
}

inline json pair_to_json(const DirichletPair& p) {
  json j{{"B1", io::write(p.B1)}, {"B2", io::write(p.B2)}};
  j["provenance"] = p.provenance == Provenance::searched ? "searched" : "user";
  if (p.provenance == Provenance::searched) j["coeffBound"] = io::write(p.search_bound);
  return j;
}

inline DirichletPair pair_from_json(const json& j) {
  DirichletPair p;
  p.B1 = io::read_matrix(io::at(j, "B1", ""), "/B1");
  p.B2 = io::read_matrix(io::at(j, "B2", ""), "/B2");
  if (j.contains("provenance") && j["provenance"] == "searched") {
    p.provenance = Provenance::searched;
    if (j.contains("coeffBound")) p.search_bound = io::read_int(j["coeffBound"], "/coeffBound");
  }
  return p;
}

inline json word_to_json(const Word& w) {
  json a = json::array();
  for (const auto& [g, e] : w.letters) a.push_back(json::array({g == 0 ? "B1" : "B2", e}));
  return a;
}

inline Word word_from_json(const json& j, const std::string& path) {
  io::read_array(j, path);
  Word w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    io::read_array(j[i], p, 2);
    if (!j[i][0].is_string() || (j[i][0] != "B1" && j[i][0] != "B2")) io::field_error(p + "/0", "expected \"B1\" or \"B2\"");
    if (!j[i][1].is_number_integer()) io::field_error(p + "/1", "expected an integer exponent");
    long e = j[i][1].get<long>();
    if (e == 0) io::field_error(p + "/1", "exponent must be nonzero");
    w.letters.emplace_back(j[i][0] == "B1" ? 0 : 1, e);
  }
  return w;
}

inline json candidate_to_json(const DomainCandidate& d) {
  json j;
  j["vertices"] = io::write_points(d.vertices);
  json edges = json::array();
  for (const auto& [u, v] : d.edges) edges.push_back(json::array({u, v}));
  j["edges"] = edges;
  json faces = json::array();
  for (const auto& f : d.faces) faces.push_back({{"cycle", f}});
  j["faces"] = faces;
  j["owned"] = {{"vertices", d.owned_vertices}, {"edges", d.owned_edges}, {"faces", d.owned_faces}};
  json gl = json::array();
  for (const auto& g : d.gluing) gl.push_back({{"from", g.from}, {"to", g.to}, {"word", word_to_json(g.word)}});
  j["gluing"] = gl;
  return j;
}

inline DomainCandidate candidate_from_json(const json& j) {
  DomainCandidate d;
  d.vertices = io::read_points(io::at(j, "vertices", ""), "/vertices");
  const auto& edges = io::read_array(io::at(j, "edges", ""), "/edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto ix = io::read_indices(edges[i], "/edges/" + std::to_string(i));
    if (ix.size() != 2) io::field_error("/edges/" + std::to_string(i), "expected 2 entries");
    d.edges.emplace_back(ix[0], ix[1]);
  }
  const auto& faces = io::read_array(io::at(j, "faces", ""), "/faces");
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string p = "/faces/" + std::to_string(i);
    d.faces.push_back(io::read_indices(io::at(faces[i], "cycle", p), p + "/cycle"));
  }
  if (j.contains("owned")) {
    const auto& o = j["owned"];
    d.owned_vertices = io::read_indices(io::at(o, "vertices", "/owned"), "/owned/vertices");
    d.owned_edges = io::read_indices(io::at(o, "edges", "/owned"), "/owned/edges");
    d.owned_faces = io::read_indices(io::at(o, "faces", "/owned"), "/owned/faces");
  }
  if (j.contains("gluing")) {
    const auto& gl = io::read_array(j["gluing"], "/gluing");
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const std::string p = "/gluing/" + std::to_string(i);
      Gluing g;
      g.from = io::read_index(io::at(gl[i], "from", p), p + "/from");
      g.to = io::read_index(io::at(gl[i], "to", p), p + "/to");
      g.word = word_from_json(io::at(gl[i], "word", p), p + "/word");
      d.gluing.push_back(g);
    }
  }
  return d;
}

/// Checks index ranges and shape, reporting the first bad field.
inline void check_candidate_fields(const DomainCandidate& d) {
  const std::size_t nv = d.vertices.size(), ne = d.edges.size(), nf = d.faces.size();
  for (std::size_t i = 0; i < ne; ++i) {
    if (d.edges[i].first >= nv) io::field_error("/edges/" + std::to_string(i) + "/0", "unknown vertex index");
    if (d.edges[i].second >= nv) io::field_error("/edges/" + std::to_string(i) + "/1", "unknown vertex index");
  }
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t k = 0; k < d.faces[i].size(); ++k)
      if (d.faces[i][k] >= nv)
        io::field_error("/faces/" + std::to_string(i) + "/cycle/" + std::to_string(k), "unknown vertex index");
  auto check = [](const std::vector<std::size_t>& v, std::size_t n, const std::string& path) {
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] >= n) io::field_error(path + "/" + std::to_string(k), "index out of range");
  };
  check(d.owned_vertices, nv, "/owned/vertices");
  check(d.owned_edges, ne, "/owned/edges");
  check(d.owned_faces, nf, "/owned/faces");
  for (std::size_t i = 0; i < d.gluing.size(); ++i) {
    if (d.gluing[i].from >= ne) io::field_error("/gluing/" + std::to_string(i) + "/from", "unknown edge index");
    if (d.gluing[i].to >= ne) io::field_error("/gluing/" + std::to_string(i) + "/to", "unknown edge index");
  }
}

inline json mesh_to_json(const ApproxMesh& m, const std::vector<int>& classes) {
  json j;
  j["vertices"] = io::write_points(m.mesh.vertices);
  json faces = json::array();
  for (std::size_t f = 0; f < m.mesh.faces.size(); ++f)
    faces.push_back({{"cycle", m.mesh.faces[f]}, {"orbitClass", classes.at(f)}, {"trusted", bool(m.trusted[f])}});
  j["faces"] = faces;
  j["m"] = m.m;
  j["range"] = to_string(m.range);
  return j;
}

inline ExponentRange parse_range(const std::string& s) {
  if (s == "paper") return ExponentRange::paper;
  if (s == "symmetric") return ExponentRange::symmetric;
  throw InputError("unknown exponent range '" + s + "' (paper or symmetric)");
}

/// Mesh with face planes recomputed; the result carries classes separately.
inline std::pair<ApproxMesh, std::vector<int>> mesh_from_json(const json& j) {
  ApproxMesh m;
  std::vector<int> classes;
  m.mesh.vertices = io::read_points(io::at(j, "vertices", ""), "/vertices");
  const auto& faces = io::read_array(io::at(j, "faces", ""), "/faces");
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string p = "/faces/" + std::to_string(i);
    auto cyc = io::read_indices(io::at(faces[i], "cycle", p), p + "/cycle");
    if (cyc.size() < 3) io::field_error(p + "/cycle", "a face needs at least 3 vertices");
    for (auto v : cyc)
      if (v >= m.mesh.vertices.size()) io::field_error(p + "/cycle", "unknown vertex index");
    const auto& oc = io::at(faces[i], "orbitClass", p);
    if (!oc.is_number_integer()) io::field_error(p + "/orbitClass", "expected an integer");
    const auto& tr = io::at(faces[i], "trusted", p);
    if (!tr.is_boolean()) io::field_error(p + "/trusted", "expected a boolean");
    m.mesh.faces.push_back(cyc);
    const auto& v = m.mesh.vertices;
    IntVec3 n = cross(v[cyc[1]] - v[cyc[0]], v[cyc[2]] - v[cyc[1]]);
    if (n.is_zero()) io::field_error(p + "/cycle", "collinear vertices");
    n = primitive(n);
    m.mesh.planes.push_back({n, dot(n, v[cyc[0]])});
    classes.push_back(oc.get<int>());
    m.trusted.push_back(tr.get<bool>());
  }
  if (j.contains("m")) m.m = j["m"].get<long>();
  if (j.contains("range")) m.range = parse_range(j["range"].get<std::string>());
  return {m, classes};
}

inline StageStatus parse_status(const std::string& s) {
  if (s == "pass") return StageStatus::pass;
  if (s == "fail") return StageStatus::fail;
  if (s == "indeterminate") return StageStatus::indeterminate;
  throw InputError("unknown stage status '" + s + "'");
}

inline Verdict parse_verdict(const std::string& s) {
  if (s == "fundamental") return Verdict::fundamental;
  if (s == "rejected") return Verdict::rejected;
  if (s == "indeterminate") return Verdict::indeterminate;
  throw InputError("unknown verdict '" + s + "'");
}

inline json report_to_json(const VerificationReport& r) {
  json j;
  json stages = json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"id", s.id},
                      {"name", s.name},
                      {"pass", s.passed()},
                      {"status", to_string(s.status)},
                      {"witness", s.witness},
                      {"millis", s.millis}});
  j["stages"] = stages;
  j["verdict"] = to_string(r.verdict);
  j["ops"] = std::to_string(r.ops);
  j["millis"] = r.millis;
  json dist = json::array();
  for (const auto& d : r.distances) dist.push_back(io::write(d));
  j["distances"] = dist;
  json pyr = json::array();
  for (const auto& p : r.pyramids) {
    json e{{"face", p.face}, {"distance", io::write(p.distance)}};
    if (p.classification) {
      e["family"] = p.classification->family;
      e["params"] = p.classification->params;
      if (p.classification->family) e["transition"] = io::write(p.classification->transition);
    }
    if (p.empty) e["empty"] = *p.empty;
    pyr.push_back(e);
  }
  j["pyramids"] = pyr;
  json dih = json::array();
  for (const auto& d : r.dihedral)
    dih.push_back({{"edge", d.edge},
                   {"face", io::write_points(d.face)},
                   {"partner", io::write_points(d.partner)},
                   {"vertex", io::write(d.vertex)},
                   {"product", io::write(d.product)}});
  j["dihedral"] = dih;
  json stars = json::array();
  for (const auto& s : r.stars) {
    json cells = json::array();
    for (const auto& c : s.cells) {
      json conds = json::array();
      for (const auto& [c0, c1] : c.conditions) conds.push_back(json::array({io::write(c0), io::write(c1)}));
      cells.push_back(
          {{"dim", c.dim}, {"points", io::write_points(c.points)}, {"conditions", conds}, {"qualifies", c.qualifies}});
    }
    stars.push_back({{"vertex", io::write(s.vertex)},
                     {"direction", io::write(s.direction)},
                     {"qualifying", s.qualifying},
                     {"cells", cells}});
  }
  j["stars"] = stars;
  return j;
}

inline VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  const auto& stages = io::read_array(io::at(j, "stages", ""), "/stages", 7);
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& s = stages[i];
    auto& out = r.stages[i];
    out.id = s.at("id").get<int>();
    out.name = s.at("name").get<std::string>();
    out.status = parse_status(s.at("status").get<std::string>());
    out.witness = s.at("witness").get<std::vector<std::string>>();
    out.millis = s.value("millis", 0.0);
  }
  r.verdict = parse_verdict(io::at(j, "verdict", "").get<std::string>());
  r.ops = std::stoull(j.value("ops", std::string("0")));
  r.millis = j.value("millis", 0.0);
  for (const auto& d : j.value("distances", json::array())) r.distances.push_back(io::read_int(d, "/distances"));
  for (const auto& p : j.value("pyramids", json::array())) {
    PyramidRecord rec;
    rec.face = p.at("face").get<std::size_t>();
    rec.distance = io::read_int(p.at("distance"), "/pyramids/distance");
    if (p.contains("family")) {
      FaceClass c;
      c.family = p["family"].get<int>();
      c.params = p.at("params").get<std::vector<long>>();
      if (p.contains("transition")) c.transition = io::read_matrix(p["transition"], "/pyramids/transition");
      rec.classification = c;
    }
    if (p.contains("empty")) rec.empty = p["empty"].get<bool>();
    r.pyramids.push_back(rec);
  }
  for (const auto& d : j.value("dihedral", json::array()))
    r.dihedral.push_back({d.at("edge").get<std::size_t>(), io::read_points(d.at("face"), "/dihedral/face"),
                          io::read_points(d.at("partner"), "/dihedral/partner"),
                          io::read_vec(d.at("vertex"), "/dihedral/vertex"),
                          io::read_int(d.at("product"), "/dihedral/product")});
  for (const auto& s : j.value("stars", json::array())) {
    StarRecord rec;
    rec.vertex = io::read_vec(s.at("vertex"), "/stars/vertex");
    rec.direction = io::read_vec(s.at("direction"), "/stars/direction");
    rec.qualifying = s.at("qualifying").get<std::size_t>();
    for (const auto& c : s.at("cells")) {
      FanCell cell;
      cell.dim = c.at("dim").get<int>();
      cell.points = io::read_points(c.at("points"), "/stars/cells/points");
      for (const auto& k : c.at("conditions"))
        cell.conditions.emplace_back(io::read_int(k.at(0), "/stars/cells/conditions"),
                                     io::read_int(k.at(1), "/stars/cells/conditions"));
      cell.qualifies = c.at("qualifies").get<bool>();
      rec.cells.push_back(cell);
    }
    r.stars.push_back(rec);
  }
  return r;
}

/// Human-readable summary of a report.
inline std::string report_text(const VerificationReport& r) {
  std::ostringstream os;
  for (const auto& s : r.stages) {
    os << "stage " << s.id << " " << s.name << ": " << to_string(s.status) << "\n";
    for (const auto& w : s.witness) os << "    " << w << "\n";
  }
  os << "verdict: " << to_string(r.verdict) << "\n";
  return os.str();
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace sailforge
