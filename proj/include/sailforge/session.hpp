#pragma once

#include <optional>
#include <string>

#include "sailforge/io.hpp"
#include "sailforge/sail.hpp"
#include "sailforge/verifier.hpp"

namespace sailforge {

/// A sail vertex in the orbit cone of the first basis-like point off the eigenplanes.
inline IntVec3 default_vertex(const EigenData& e) {
  for (const auto& p : {IntVec3(0, 0, 1), IntVec3(1, 0, 0), IntVec3(0, 1, 0), IntVec3(1, 1, 1)}) {
    auto s = orthant_sign_vector(e, p);
    if (s[0] && s[1] && s[2]) return find_sail_vertex(e, orthant_of(e, p), p);
  }
  SignVector plus{1, 1, 1};
  IntVec3 p = find_orthant_point(e, plus);
  return find_sail_vertex(e, {plus, p}, p);
}

/// Operator, generators and the artifacts derived from them.
struct Session {
  IntMat3 A;
  EigenData eigen;
  DirichletPair pair;
  IntVec3 vertex;
  std::optional<std::pair<ApproxMesh, std::vector<int>>> mesh;
  std::optional<DomainCandidate> candidate;
  std::optional<VerificationReport> report;

  Session(const IntMat3& a, const DirichletPair& p) : A(a), eigen(eigen_data(a)), pair(p) {
    if (p.B1 * a != a * p.B1 || p.B2 * a != a * p.B2) throw InputError("generators do not commute with the operator");
    vertex = default_vertex(eigen);
  }

  Session(const IntMat3& a, const DirichletPair& p, const IntVec3& v) : A(a), eigen(eigen_data(a)), pair(p), vertex(v) {
    if (p.B1 * a != a * p.B1 || p.B2 * a != a * p.B2) throw InputError("generators do not commute with the operator");
  }

  const std::pair<ApproxMesh, std::vector<int>>& build_mesh(long m, ExponentRange range) {
    auto approx = special_approximation(seed_hull(vertex, pair), pair, m, range);
    auto classes = orbit_classes(approx.mesh, pair);
    mesh = std::make_pair(std::move(approx), std::move(classes));
    return *mesh;
  }

  const DomainCandidate& conjecture(long m, ExponentRange range) {
    build_mesh(m, range);
    candidate = extract_candidate(mesh->first, mesh->second, pair);
    return *candidate;
  }
};

inline json eigen_to_json(const EigenData& e) {
  json a = json::array();
  for (auto r : e.roots) {
    r.refine_to(Rat(1, Int(1) << 40));
    std::ostringstream os;
    os.precision(12);
    os << r.approx();
    a.push_back({{"lo", to_string(r.lo)}, {"hi", to_string(r.hi)}, {"approx", os.str()}});
  }
  return a;
}

inline json session_to_json(const Session& s) {
  json j;
  j["operator"] = io::write(s.A);
  j["pair"] = pair_to_json(s.pair);
  j["eigenvalues"] = eigen_to_json(s.eigen);
  j["vertex"] = io::write(s.vertex);
  j["hasMesh"] = s.mesh.has_value();
  j["hasCandidate"] = s.candidate.has_value();
  if (s.report) j["verdict"] = to_string(s.report->verdict);
  return j;
}

}  // namespace sailforge
