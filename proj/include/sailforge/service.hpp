#pragma once

#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>

#include <httplib.h>

#include "sailforge/session.hpp"

namespace sailforge {

struct Reply {
  int status = 200;
  json body;
};

/// JSON endpoints over one session; usable without a socket via handle().
class Service {
 public:
  explicit Service(Session s) : session_(std::move(s)) {}

  Reply handle(const std::string& method, const std::string& path, const std::map<std::string, std::string>& query,
               const std::string& body) {
    try {
      if (method == "GET" && path == "/api/session") return get_session();
      if (method == "GET" && path == "/api/mesh") return get_mesh(query);
      if (method == "POST" && path == "/api/candidate") return post_candidate(body);
      if (method == "POST" && path == "/api/verify") return post_verify(body);
      return {404, {{"error", "no endpoint " + method + " " + path}}};
    } catch (const StructuralError& e) {
      return {400, {{"error", e.what()}, {"kind", "structural"}}};
    } catch (const InputError& e) {
      return {400, {{"error", e.what()}, {"kind", "input"}}};
    } catch (const DomainError& e) {
      return {400, {{"error", e.what()}, {"kind", "domain"}}};
    } catch (const json::exception& e) {
      return {400, {{"error", e.what()}, {"kind", "input"}}};
    }
  }

  /// Binds the endpoints; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port) {
    auto route = [this](const char* method) {
      return [this, method](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> q;
        for (const auto& [k, v] : req.params) q[k] = v;
        Reply r = handle(method, req.path, q, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
      };
    };
    srv_.Get("/api/session", route("GET"));
    srv_.Get("/api/mesh", route("GET"));
    srv_.Post("/api/candidate", route("POST"));
    srv_.Post("/api/verify", route("POST"));
    int bound = port == 0 ? srv_.bind_to_any_port(host) : (srv_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw InputError("cannot bind " + host + ":" + std::to_string(port));
    return bound;
  }

  void listen() { srv_.listen_after_bind(); }
  void wait_until_ready() const { srv_.wait_until_ready(); }
  void stop() { srv_.stop(); }

  const Session& session() const { return session_; }

 private:
  Reply get_session() {
    std::shared_lock lock(state_);
    return {200, session_to_json(session_)};
  }

  Reply get_mesh(const std::map<std::string, std::string>& query) {
    long m = 2;
    ExponentRange range = ExponentRange::symmetric;
    if (auto it = query.find("m"); it != query.end()) {
      try {
        m = std::stol(it->second);
      } catch (const std::exception&) {
        throw InputError("invalid field m: not an integer");
      }
      if (m < 1 || m > 12) throw InputError("invalid field m: expected 1..12");
    }
    if (auto it = query.find("range"); it != query.end()) range = parse_range(it->second);
    std::unique_lock lock(state_);
    const auto& [mesh, classes] = session_.build_mesh(m, range);
    return {200, mesh_to_json(mesh, classes)};
  }

  Reply post_candidate(const std::string& body) {
    json j = parse_json_text(body);
    if (j.contains("operator")) {
      IntMat3 a = io::read_matrix(j["operator"], "/operator");
      if (a != session_.A) return {409, {{"error", "candidate was built for a different operator"}}};
    }
    const json& cj = j.contains("candidate") ? j["candidate"] : j;
    DomainCandidate d = candidate_from_json(cj);
    check_candidate_fields(d);
    std::unique_lock lock(state_);
    if (session_.mesh) {
      const auto& verts = session_.mesh->first.mesh.vertices;
      for (std::size_t i = 0; i < d.vertices.size(); ++i)
        if (std::find(verts.begin(), verts.end(), d.vertices[i]) == verts.end())
          return {409,
                  {{"error", "vertex " + std::to_string(i) + " is not a vertex of the current mesh"},
                   {"field", "/vertices/" + std::to_string(i)}}};
    }
    json advisories = json::array();
    if (d.gluing.empty() || d.owned_faces.empty()) {
      std::vector<std::vector<IntVec3>> polys;
      for (std::size_t f = 0; f < d.faces.size(); ++f) polys.push_back(d.face_points(f));
      d = build_candidate(polys, session_.pair);
      advisories.push_back("gluing words and ownership inferred from the face list");
    }
    validate_structure(d);
    for (auto& s : disk_failures(d)) advisories.push_back(s);
    session_.candidate = d;
    return {200, {{"candidate", candidate_to_json(d)}, {"advisories", advisories}}};
  }

  Reply post_verify(const std::string& body) {
    Stage4Mode mode = Stage4Mode::both;
    std::optional<DomainCandidate> d;
    if (!body.empty()) {
      json j = parse_json_text(body);
      if (j.contains("stage4Mode")) mode = parse_stage4_mode(j["stage4Mode"].get<std::string>());
      if (j.contains("candidate")) {
        d = candidate_from_json(j["candidate"]);
        check_candidate_fields(*d);
      } else if (j.contains("vertices")) {
        d = candidate_from_json(j);
        check_candidate_fields(*d);
      }
    }
    std::lock_guard one(verify_);
    std::unique_lock lock(state_);
    if (!d) {
      if (!session_.candidate) throw InputError("no candidate in the session; POST /api/candidate first");
      d = session_.candidate;
    }
    auto rep = verify(session_.A, session_.pair, *d, mode);
    session_.candidate = d;
    session_.report = rep;
    return {200, report_to_json(rep)};
  }

  Session session_;
  std::shared_mutex state_;
  std::mutex verify_;
  httplib::Server srv_;
};

}  // namespace sailforge
