#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sailforge/io.hpp"
#include "sailforge/service.hpp"
#include "sailforge/session.hpp"
#include "sailforge/sylvester.hpp"

namespace sailforge {

enum ExitCode { exit_ok = 0, exit_rejected = 1, exit_input = 2 };

inline int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::fundamental: return exit_ok;
    case Verdict::rejected: return exit_rejected;
    default: return exit_input;
  }
}

namespace cli {

struct Inputs {
  std::string operator_file;
  std::string generators_file;
  long coeff_bound = 4;
};

inline void add_operator(CLI::App* sub, Inputs& in) {
  sub->add_option("--operator", in.operator_file, "operator JSON file")->required()->check(CLI::ExistingFile);
}

inline void add_pair(CLI::App* sub, Inputs& in) {
  sub->add_option("--generators", in.generators_file, "generator pair JSON file {B1, B2}")->check(CLI::ExistingFile);
  sub->add_option("--coeff-bound", in.coeff_bound, "coefficient bound for the unit search")->check(CLI::Range(1, 50));
}

inline IntMat3 load_operator(const Inputs& in) { return operator_from_json(read_json_file(in.operator_file)).matrix; }

inline DirichletPair load_pair(const Inputs& in, const IntMat3& a) {
  if (!in.generators_file.empty()) {
    auto p = pair_from_json(read_json_file(in.generators_file));
    return make_user_pair(a, p.B1, p.B2);
  }
  return select_pair(unit_search(a, in.coeff_bound), a, in.coeff_bound);
}

inline std::optional<IntVec3> parse_point(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::vector<Int> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(parse_int(part));
  if (v.size() != 3) throw InputError("expected a point as x,y,z");
  return IntVec3(v[0], v[1], v[2]);
}

inline void write_file(const std::filesystem::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write " + p.string());
  f << j.dump(2) << "\n";
}

}  // namespace cli

/// Runs the command line; returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"sailforge: sails of SL(3,Z) operators and verification of fundamental domains"};
  app.require_subcommand(1);
  cli::Inputs in;

  auto* validate = app.add_subcommand("validate", "check that the operator is irreducible and hyperbolic");
  cli::add_operator(validate, in);

  long ball = 0;
  auto* commutant = app.add_subcommand("commutant", "integer basis of the commutant lattice");
  cli::add_operator(commutant, in);
  commutant->add_option("--ball", ball, "also enumerate the commutant ball of this radius");

  auto* units = app.add_subcommand("units", "pair of independent positive units");
  cli::add_operator(units, in);
  cli::add_pair(units, in);

  std::string point, slice;
  auto* vertex = app.add_subcommand("vertex", "a vertex of the sail in the orthant of a point");
  cli::add_operator(vertex, in);
  vertex->add_option("--point", point, "point x,y,z fixing the orthant and the slice bound");
  vertex->add_option("--normal", slice, "slice normal x,y,z");

  long m = 2;
  std::string range = "symmetric", seed;
  auto* approx = app.add_subcommand("approx", "hull of group images of the seed vertices");
  cli::add_operator(approx, in);
  cli::add_pair(approx, in);
  approx->add_option("--m", m, "exponent bound")->check(CLI::Range(1, 12));
  approx->add_option("--range", range, "exponent range: paper (1..m) or symmetric (-m..m)");
  approx->add_option("--vertex", seed, "seed vertex x,y,z");

  auto* conjecture = app.add_subcommand("conjecture", "extract a candidate fundamental domain");
  cli::add_operator(conjecture, in);
  cli::add_pair(conjecture, in);
  conjecture->add_option("--m", m, "exponent bound")->check(CLI::Range(1, 12));
  conjecture->add_option("--range", range, "exponent range: paper (1..m) or symmetric (-m..m)");
  conjecture->add_option("--vertex", seed, "seed vertex x,y,z");

  std::string domain, mode = "both";
  bool as_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "run the seven-stage test on a candidate");
  cli::add_operator(verify_cmd, in);
  cli::add_pair(verify_cmd, in);
  verify_cmd->add_option("--domain", domain, "candidate JSON file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--stage4-mode", mode, "classification, bruteforce or both");
  verify_cmd->add_flag("--json", as_json, "print the report as JSON");

  long a = 0, b = 0;
  bool run_verify = false;
  std::string write_dir;
  auto* example = app.add_subcommand("example", "built-in examples");
  example->require_subcommand(1);
  auto* sylv = example->add_subcommand("sylvester", "two-triangle domain of A_{b-a-1,(a+2)(b+1)}");
  sylv->add_option("--a", a, "parameter a >= 0")->check(CLI::NonNegativeNumber);
  sylv->add_option("--b", b, "parameter b >= 0")->check(CLI::NonNegativeNumber);
  sylv->add_flag("--verify", run_verify, "verify the candidate");
  sylv->add_flag("--json", as_json, "print the report as JSON");
  sylv->add_option("--write", write_dir, "write operator.json, generators.json and candidate.json here");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::vector<long> serve_example;
  auto* serve = app.add_subcommand("serve", "HTTP/JSON service for the workbench");
  serve->add_option("--operator", in.operator_file, "operator JSON file")->check(CLI::ExistingFile);
  cli::add_pair(serve, in);
  serve->add_option("--example", serve_example, "load the Sylvester example a,b instead of files")
      ->expected(2)
      ->delimiter(',');
  serve->add_option("--port", port, "port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_input;
  }

  try {
    if (*validate) {
      IntMat3 op = cli::load_operator(in);
      auto d = diagnose_operator(op);
      json j{{"det", to_string(d.det)},
             {"irreducible", d.irreducible},
             {"hyperbolic", d.hyperbolic},
             {"ok", d.ok()}};
      json chi = json::array();
      for (const auto& c : d.chi.coeffs()) chi.push_back(to_string(c));
      j["charpoly"] = chi;
      if (!d.message.empty()) j["message"] = d.message;
      out << j.dump(2) << "\n";
      return d.ok() ? exit_ok : exit_input;
    }
    if (*commutant) {
      IntMat3 op = cli::load_operator(in);
      auto c = commutant_lattice(op);
      json j{{"basis", json::array({io::write(c.basis[0]), io::write(c.basis[1]), io::write(c.basis[2])})},
             {"indexOverZA", to_string(c.index_over_za)}};
      if (ball > 0) {
        json pts = json::array();
        for (const auto& x : enumerate_commutant_ball(op, Int(ball))) pts.push_back(io::write(x));
        j["ball"] = pts;
      }
      out << j.dump(2) << "\n";
      return exit_ok;
    }
    if (*units) {
      IntMat3 op = cli::load_operator(in);
      out << pair_to_json(cli::load_pair(in, op)).dump(2) << "\n";
      return exit_ok;
    }
    if (*vertex) {
      IntMat3 op = cli::load_operator(in);
      auto e = eigen_data(op);
      IntVec3 v;
      if (auto p = cli::parse_point(point)) {
        auto ref = orthant_of(e, *p);
        if (auto w = cli::parse_point(slice)) v = find_sail_vertex(e, ref, *p, *w);
        else v = find_sail_vertex(e, ref, *p);
      } else {
        v = default_vertex(e);
      }
      json j{{"vertex", io::write(v)}, {"orthant", to_string(orthant_sign_vector(e, v))}};
      out << j.dump(2) << "\n";
      return exit_ok;
    }
    if (*approx || *conjecture) {
      IntMat3 op = cli::load_operator(in);
      auto pair = cli::load_pair(in, op);
      std::optional<IntVec3> v = cli::parse_point(seed);
      Session s = v ? Session(op, pair, *v) : Session(op, pair);
      if (*approx) {
        const auto& [mesh, classes] = s.build_mesh(m, parse_range(range));
        out << mesh_to_json(mesh, classes).dump(2) << "\n";
      } else {
        out << candidate_to_json(s.conjecture(m, parse_range(range))).dump(2) << "\n";
      }
      return exit_ok;
    }
    if (*verify_cmd) {
      IntMat3 op = cli::load_operator(in);
      auto pair = cli::load_pair(in, op);
      auto d = candidate_from_json(read_json_file(domain));
      check_candidate_fields(d);
      auto rep = verify(op, pair, d, parse_stage4_mode(mode));
      out << (as_json ? report_to_json(rep).dump(2) + "\n" : report_text(rep));
      return verdict_exit(rep.verdict);
    }
    if (*sylv) {
      auto s = sylvester_case(a, b);
      if (!write_dir.empty()) {
        std::filesystem::create_directories(write_dir);
        cli::write_file(std::filesystem::path(write_dir) / "operator.json", operator_to_json({s.A, "sylvester"}));
        cli::write_file(std::filesystem::path(write_dir) / "generators.json", pair_to_json(s.pair));
        cli::write_file(std::filesystem::path(write_dir) / "candidate.json", candidate_to_json(s.candidate));
      }
      if (!run_verify) {
        json j{{"operator", io::write(s.A)}, {"pair", pair_to_json(s.pair)}, {"candidate", candidate_to_json(s.candidate)}};
        out << j.dump(2) << "\n";
        return exit_ok;
      }
      auto rep = verify(s.A, s.pair, s.candidate);
      out << (as_json ? report_to_json(rep).dump(2) + "\n" : report_text(rep));
      return verdict_exit(rep.verdict);
    }
    if (*serve) {
      std::optional<Session> s;
      if (!serve_example.empty()) {
        auto c = sylvester_case(serve_example[0], serve_example[1]);
        s.emplace(c.A, c.pair, c.candidate.vertices[1]);
        s->candidate = c.candidate;
      } else {
        if (in.operator_file.empty()) throw InputError("serve needs --operator or --example");
        IntMat3 op = cli::load_operator(in);
        s.emplace(op, cli::load_pair(in, op));
      }
      Service svc(std::move(*s));
      int bound = svc.bind(host, port);
      out << "listening on " << host << ":" << bound << std::endl;
      svc.listen();
      return exit_ok;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}

}  // namespace sailforge
