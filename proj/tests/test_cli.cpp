#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/app.hpp"
#include "cli/gallery.hpp"
#include "ncspace/diffspace.hpp"

namespace fs = std::filesystem;
using namespace ncspace;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("ncspace_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gallery lists three loadable configs") {
  auto names = cli::gallery_names();
  CHECK(names == std::vector<std::string>{"total_type_3pt", "grid_2x2", "hausdorff_line_5pt"});
  for (const auto& n : names) CHECK_NOTHROW(build_space(parse_space_spec(std::string(*cli::gallery_config(n)))));
  Result r = run({"gallery", "list"});
  CHECK(r.code == 0);
  CHECK(r.out == "total_type_3pt\ngrid_2x2\nhausdorff_line_5pt\n");
  CHECK(run({"gallery", "show", "grid_2x2"}).out.find("pi1") != std::string::npos);
  CHECK(run({"gallery", "show", "nope"}).code == 2);
}

TEST_CASE("space analyze on the grid") {
  auto dir = scratch("analyze");
  Result r = run({"space", "analyze", "--space", "grid_2x2", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("INFO  space.classes  value=2") != std::string::npos);
  CHECK(r.out.find("PASS  space.consistent[pi1]") != std::string::npos);
  CHECK(r.out.find("sha256=") != std::string::npos);
  CHECK(fs::exists(dir / "report.txt"));
  CHECK(slurp(dir / "classes.csv") == "point_id,class\n0,0\n1,0\n2,1\n3,1\n");
  CHECK(slurp(dir / "quotient.csv") == "id,weight,pi1\n0,2,0\n2,2,1\n");
}

TEST_CASE("malformed config exits 2 naming the field") {
  auto dir = scratch("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"dimension": 1, "points": [{"id": 0, "coords": [0], "weight": "heavy"}], "generators": []})";
  Result r = run({"space", "analyze", "--space", (dir / "bad.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("points[0].weight") != std::string::npos);

  CHECK(run({"space", "analyze", "--space", "no_such_space"}).code == 2);
  CHECK(run({"space", "analyze"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"groupoid", "build", "--space", "grid_2x2", "--partition", "odd", "--out", dir.string()}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("failed checks exit 1") {
  auto dir = scratch("fail");
  Result r = run({"calculus", "leibniz", "--space", "grid_2x2", "--tol", "-1", "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL  calculus.leibniz") != std::string::npos);
}

TEST_CASE("every subcommand passes on the gallery") {
  const std::vector<std::vector<std::string>> commands = {
      {"space", "analyze"},
      {"groupoid", "build"},
      {"algebra", "conv", "--a", "x1 + y1", "--b", "1", "--b-im", "x1*y1"},
      {"algebra", "check-laws"},
      {"calculus", "leibniz"},
      {"calculus", "commutator"},
      {"rep", "build", "--a", "1"},
      {"rep", "check"},
      {"vn", "commutant"},
      {"vn", "state-check"},
      {"vn", "expect", "--a", "1"},
      {"deform", "sweep"},
  };
  for (const auto& name : cli::gallery_names()) {
    for (auto cmd : commands) {
      auto dir = scratch("all");
      cmd.insert(cmd.end(), {"--space", name, "--out", dir.string(), "--samples", "5"});
      Result r = run(cmd);
      INFO(name, " ", cmd[0], " ", cmd[1], "\n", r.out, r.err);
      CHECK(r.code == 0);
    }
  }
}

TEST_CASE("calculus with explicit data") {
  auto dir = scratch("explicit");
  Result r = run({"calculus", "leibniz", "--space", "grid_2x2", "--field", "x2", "--field", "1", "--a", "x1*y2", "--b",
                  "y1^2", "--out", dir.string()});
  CHECK(r.code == 0);
  r = run({"calculus", "commutator", "--space", "total_type_3pt", "--field", "x1*x2", "--field", "1", "--f", "x1^2",
           "--a", "x1 - y2", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS  calculus.heisenberg[x2]") != std::string::npos);
  CHECK(run({"calculus", "leibniz", "--space", "grid_2x2", "--field", "1", "--out", dir.string()}).code == 2);
}

TEST_CASE("verify all passes") {
  auto dir = scratch("verify");
  Result r = run({"verify", "all", "--out", dir.string(), "--samples", "5"});
  INFO(r.out);
  CHECK(r.code == 0);
  for (const auto& name : cli::gallery_names()) CHECK(r.out.find("input: " + name) != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("CSV outputs are deterministic") {
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> cases = {
      {{"deform", "sweep", "--space", "grid_2x2"}, {"deform.csv"}},
      {{"vn", "commutant", "--space", "total_type_3pt"}, {"commutant.csv", "bicommutant.csv"}},
      {{"algebra", "conv", "--space", "hausdorff_line_5pt", "--a", "sin(x1)", "--b", "y1"}, {"conv.csv"}},
      {{"rep", "build", "--space", "total_type_3pt", "--a", "x1 - y2"}, {"rep.csv"}},
      {{"groupoid", "build", "--space", "grid_2x2"}, {"arrows.csv", "orbits.csv"}},
  };
  for (const auto& [args, files] : cases) {
    auto d1 = scratch("det1"), d2 = scratch("det2");
    auto a1 = args, a2 = args;
    a1.insert(a1.end(), {"--out", d1.string()});
    a2.insert(a2.end(), {"--out", d2.string()});
    REQUIRE(run(a1).code == 0);
    REQUIRE(run(a2).code == 0);
    for (const auto& f : files) {
      CHECK(fs::exists(d1 / f));
      CHECK(slurp(d1 / f) == slurp(d2 / f));
    }
  }
}

TEST_CASE("density files are read and validated") {
  auto dir = scratch("density");
  fs::create_directories(dir);
  std::ofstream(dir / "rho.csv") << "point_id,row,col,re,im\n0,0,0,0.25,0\n1,0,0,0.25,0\n2,0,0,0.25,0\n3,0,0,0.25,0\n";
  Result ok = run({"vn", "state-check", "--space", "grid_2x2", "--partition", "discrete", "--density",
                   (dir / "rho.csv").string(), "--out", dir.string()});
  CHECK(ok.code == 0);

  std::ofstream(dir / "neg.csv") << "point_id,row,col,re,im\n0,0,0,-0.25,0\n1,0,0,0.75,0\n2,0,0,0.25,0\n3,0,0,0.25,0\n";
  Result neg = run({"vn", "state-check", "--space", "grid_2x2", "--partition", "discrete", "--density",
                    (dir / "neg.csv").string(), "--out", dir.string()});
  CHECK(neg.code == 1);
  CHECK(neg.out.find("FAIL  state.positive") != std::string::npos);

  std::ofstream(dir / "junk.csv") << "point_id,row,col,re,im\n0,0,zero,1,0\n";
  CHECK(run({"vn", "state-check", "--space", "grid_2x2", "--density", (dir / "junk.csv").string(), "--out",
             dir.string()})
            .code == 2);
}
