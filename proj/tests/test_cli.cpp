#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <thread>

#include "sailforge/cli.hpp"

using namespace sailforge;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sailforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("sailforge_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

void write(const std::filesystem::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

}  // namespace

TEST(Io, OperatorAndPairRoundTrip) {
  auto s = sylvester_case(2, 3);
  OperatorFile op{s.A, "x"};
  auto j = operator_to_json(op);
  EXPECT_EQ(operator_from_json(j).matrix, s.A);
  EXPECT_EQ(operator_to_json(operator_from_json(j)).dump(), j.dump());
  auto pj = pair_to_json(s.pair);
  auto p = pair_from_json(pj);
  EXPECT_EQ(p.B1, s.pair.B1);
  EXPECT_EQ(p.B2, s.pair.B2);
  EXPECT_EQ(pair_to_json(p).dump(), pj.dump());
  // integers travel as decimal strings
  EXPECT_TRUE(j["matrix"][2][2].is_string());
}

TEST(Io, BigIntegersSurvive) {
  IntMat3 big = IntMat3::identity();
  big(0, 1) = parse_int("123456789012345678901234567890");
  auto back = operator_from_json(operator_to_json({big, ""})).matrix;
  EXPECT_EQ(back, big);
}

TEST(Io, CandidateRoundTrip) {
  auto s = sylvester_case(1, 1);
  auto j = candidate_to_json(s.candidate);
  auto d = candidate_from_json(j);
  EXPECT_EQ(d.vertices, s.candidate.vertices);
  EXPECT_EQ(d.edges, s.candidate.edges);
  EXPECT_EQ(d.faces, s.candidate.faces);
  EXPECT_EQ(d.owned_edges, s.candidate.owned_edges);
  ASSERT_EQ(d.gluing.size(), 2u);
  EXPECT_EQ(d.gluing[1].word, s.candidate.gluing[1].word);
  EXPECT_EQ(candidate_to_json(d).dump(), j.dump());
}

TEST(Io, ReportAndMeshRoundTrip) {
  auto s = sylvester_case(0, 0);
  auto rep = verify(s.A, s.pair, s.candidate);
  auto j = report_to_json(rep);
  EXPECT_EQ(j["stages"].size(), 7u);
  EXPECT_EQ(j["verdict"], "fundamental");
  EXPECT_EQ(report_to_json(report_from_json(j)).dump(), j.dump());

  Session session(s.A, s.pair, s.candidate.vertices[1]);
  const auto& [mesh, classes] = session.build_mesh(2, ExponentRange::symmetric);
  auto mj = mesh_to_json(mesh, classes);
  auto [m2, c2] = mesh_from_json(mj);
  EXPECT_EQ(m2.mesh.faces, mesh.mesh.faces);
  EXPECT_EQ(c2, classes);
  EXPECT_EQ(mesh_to_json(m2, c2).dump(), mj.dump());
}

TEST(Io, FieldErrorsCarryPointers) {
  auto s = sylvester_case(0, 0);
  auto j = candidate_to_json(s.candidate);
  j["faces"][1]["cycle"][2] = "x";
  try {
    candidate_from_json(j);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("/faces/1/cycle/2"), std::string::npos) << e.what();
  }
  auto k = candidate_to_json(s.candidate);
  k["vertices"][0][1] = "1.5";
  EXPECT_THROW(candidate_from_json(k), InputError);
  auto g = candidate_to_json(s.candidate);
  g["gluing"][0]["word"][0][0] = "B3";
  EXPECT_THROW(candidate_from_json(g), InputError);
}

TEST(Cli, ExampleVerifyExitCodes) {
  auto r = run({"example", "sylvester", "--a", "0", "--b", "0", "--verify"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("verdict: fundamental"), std::string::npos);
  auto j = run({"example", "sylvester", "--a", "1", "--b", "2", "--verify", "--json"});
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(json::parse(j.out)["verdict"], "fundamental");
  EXPECT_EQ(run({"example", "sylvester", "--a", "-1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, VerifyMutatedDomain) {
  auto dir = scratch("mut");
  auto w = run({"example", "sylvester", "--a", "0", "--b", "0", "--write", dir.string()});
  ASSERT_EQ(w.code, 0) << w.err;
  std::vector<std::string> base{"verify", "--operator", (dir / "operator.json").string(), "--generators",
                                (dir / "generators.json").string(), "--domain"};
  auto ok = base;
  ok.push_back((dir / "candidate.json").string());
  EXPECT_EQ(run(ok).code, 0);

  auto cj = read_json_file((dir / "candidate.json").string());
  cj["vertices"][0][0] = "2";
  write(dir / "mutated.json", cj);
  auto bad = base;
  bad.push_back((dir / "mutated.json").string());
  auto r = run(bad);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find(": fail"), std::string::npos);

  auto broken = read_json_file((dir / "candidate.json").string());
  broken["faces"][0]["cycle"] = json::array({0, 1});
  write(dir / "broken.json", broken);
  auto st = base;
  st.push_back((dir / "broken.json").string());
  EXPECT_EQ(run(st).code, 2);

  std::ofstream(dir / "garbage.json") << "{ not json";
  auto gb = base;
  gb.push_back((dir / "garbage.json").string());
  EXPECT_EQ(run(gb).code, 2);
}

TEST(Cli, PipelineSubcommands) {
  auto dir = scratch("pipe");
  ASSERT_EQ(run({"example", "sylvester", "--write", dir.string()}).code, 0);
  const std::string op = (dir / "operator.json").string(), gen = (dir / "generators.json").string();
  auto v = run({"validate", "--operator", op});
  EXPECT_EQ(v.code, 0);
  EXPECT_TRUE(json::parse(v.out)["ok"].get<bool>());
  auto c = run({"commutant", "--operator", op});
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(json::parse(c.out)["indexOverZA"], "1");
  auto u = run({"units", "--operator", op, "--coeff-bound", "3"});
  EXPECT_EQ(u.code, 0) << u.err;
  auto x = run({"vertex", "--operator", op, "--point", "1,1,1", "--normal", "-1,1,1"});
  EXPECT_EQ(x.code, 0) << x.err;
  EXPECT_EQ(json::parse(x.out)["vertex"], json::array({"0", "0", "1"}));
  auto m = run({"approx", "--operator", op, "--generators", gen, "--m", "2"});
  EXPECT_EQ(m.code, 0) << m.err;
  EXPECT_FALSE(json::parse(m.out)["faces"].empty());
  auto cj = run({"conjecture", "--operator", op, "--generators", gen, "--m", "2"});
  ASSERT_EQ(cj.code, 0) << cj.err;
  auto cand = candidate_from_json(json::parse(cj.out));
  EXPECT_EQ(cand.p2(), 2u);
  write(dir / "auto.json", json::parse(cj.out));
  EXPECT_EQ(run({"verify", "--operator", op, "--generators", gen, "--domain", (dir / "auto.json").string()}).code, 0);

  write(dir / "flat.json", {{"matrix", json::array({json::array({"1", "0", "0"}), json::array({"0", "1", "0"}),
                                                    json::array({"0", "0", "1"})})}});
  EXPECT_EQ(run({"validate", "--operator", (dir / "flat.json").string()}).code, 2);
  EXPECT_EQ(run({"units", "--operator", (dir / "flat.json").string()}).code, 2);
}

TEST(Service, Endpoints) {
  auto s = sylvester_case(0, 0);
  Service svc(Session(s.A, s.pair, s.candidate.vertices[1]));
  auto info = svc.handle("GET", "/api/session", {}, "");
  EXPECT_EQ(info.status, 200);
  EXPECT_EQ(info.body["eigenvalues"].size(), 3u);
  EXPECT_TRUE(info.body["eigenvalues"][0]["lo"].is_string());

  auto mesh = svc.handle("GET", "/api/mesh", {{"m", "2"}}, "");
  ASSERT_EQ(mesh.status, 200);
  auto [m, classes] = mesh_from_json(mesh.body);
  auto has_face = [&](std::vector<IntVec3> pts) {
    std::sort(pts.begin(), pts.end());
    for (std::size_t f = 0; f < m.mesh.faces.size(); ++f) {
      auto q = m.mesh.face_points(f);
      std::sort(q.begin(), q.end());
      if (q == pts) return true;
    }
    return false;
  };
  EXPECT_TRUE(has_face({IntVec3(1, 0, 2), IntVec3(0, 0, 1), IntVec3(1, 1, 1)}));
  EXPECT_TRUE(has_face({IntVec3(0, 0, 1), IntVec3(1, 1, 1), IntVec3(-1, 1, 0)}));
  EXPECT_EQ(svc.handle("GET", "/api/mesh", {{"m", "x"}}, "").status, 400);

  auto cj = candidate_to_json(s.candidate);
  auto post = svc.handle("POST", "/api/candidate", {}, cj.dump());
  EXPECT_EQ(post.status, 200) << post.body.dump();
  auto bad = cj;
  bad["edges"][0][1] = 17;
  auto r400 = svc.handle("POST", "/api/candidate", {}, bad.dump());
  EXPECT_EQ(r400.status, 400);
  EXPECT_NE(r400.body["error"].get<std::string>().find("/edges/0/1"), std::string::npos);
  json other{{"operator", io::write(sylvester(Int(0), Int(4)))}, {"candidate", cj}};
  EXPECT_EQ(svc.handle("POST", "/api/candidate", {}, other.dump()).status, 409);
  EXPECT_EQ(svc.handle("POST", "/api/candidate", {}, "{").status, 400);

  auto rep = svc.handle("POST", "/api/verify", {}, json{{"candidate", cj}}.dump());
  ASSERT_EQ(rep.status, 200);
  EXPECT_EQ(rep.body["verdict"], "fundamental");
  EXPECT_EQ(rep.body["stages"].size(), 7u);

  // one face only: ownership and gluing are inferred, the boundary stays unpaired
  json one = cj;
  one["faces"] = json::array({cj["faces"][0]});
  one["edges"] = json::array({json::array({0, 1}), json::array({0, 3}), json::array({1, 3})});
  one["vertices"] = json::array({cj["vertices"][0], cj["vertices"][1], cj["vertices"][2], cj["vertices"][3]});
  one["owned"] = {{"vertices", json::array()}, {"edges", json::array()}, {"faces", json::array()}};
  one["gluing"] = json::array();
  auto single = svc.handle("POST", "/api/candidate", {}, one.dump());
  ASSERT_EQ(single.status, 200) << single.body.dump();
  auto rep1 = svc.handle("POST", "/api/verify", {}, "");
  ASSERT_EQ(rep1.status, 200);
  EXPECT_NE(rep1.body["verdict"], "fundamental");
}

TEST(Service, OverHttp) {
  auto s = sylvester_case(0, 0);
  Service svc(Session(s.A, s.pair, s.candidate.vertices[1]));
  int port = svc.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { svc.listen(); });
  svc.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/api/verify", json{{"candidate", candidate_to_json(s.candidate)}}.dump(),
                         "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["verdict"], "fundamental");
  auto info = client.Get("/api/session");
  ASSERT_TRUE(info);
  EXPECT_EQ(info->status, 200);
  svc.stop();
  t.join();
}
