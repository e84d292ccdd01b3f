#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "acomm/json_io.hpp"

using namespace acomm;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ACOMM_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json output_of(const Run& r) { return parse_json(r.out).at("output"); }

std::string data(const std::string& name) { return std::string(ACOMM_DATA_DIR) + "/" + name; }

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "acomm_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("census") {
  const Run a = run("census 3 2 --oracle");
  REQUIRE(a.code == 0);
  const Json o = output_of(a);
  CHECK(o["total"] == "8");
  CHECK(o["oracle"]["total"] == "8");
  CHECK(o["match"] == true);

  CHECK(output_of(run("census 2 1"))["total"] == "1");

  const Run b = run("census 4 4 --oracle --jobs 2");
  REQUIRE(b.code == 0);
  CHECK(output_of(b)["total"] == output_of(b)["oracle"]["total"]);

  const Run csv = run("census 3 2 --oracle --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("source,orders,count\nformula,,8\n", 0) == 0);
  CHECK(csv.out.find("match,,MATCH") != std::string::npos);

  CHECK(run("census 6 100 --oracle").code == 3);
  CHECK(run("census 3 8 --oracle --cap 100").code == 3);
  CHECK(run("census 1 2").code == 2);
  CHECK(run("census 3").code == 2);
}

TEST_CASE("normal-form") {
  const Run a = run("normal-form " + data("d5_half_third.json"));
  REQUIRE(a.code == 0);
  CHECK(output_of(a)["sigma"] == "6");
  CHECK(output_of(a)["t"] == 1);
  CHECK(output_of(a)["orders"] == Json::array({6}));

  const std::string zero = scratch("zero.json");
  write(zero, R"({"n":3,"entries":[[[0,1],[0,1],[0,1]],[[0,1],[0,1],[0,1]],[[0,1],[0,1],[0,1]]]})");
  const Json z = output_of(run("normal-form " + zero));
  CHECK(z["t"] == 0);
  CHECK(z["sigma"] == "1");

  const std::string bad = scratch("bad.json");
  write(bad, R"({"n":2,"entries":[[[0,1],[1,3]],[[1,3],[0,1]]]})");
  CHECK(run("normal-form " + bad).code == 2);
  write(bad, "{not json");
  CHECK(run("normal-form " + bad).code == 2);

  const std::string w = scratch("w.json");
  write(w, R"({"n":4,"entries":[[0,0,2,0],[0,0,0,6],[-2,0,0,0],[0,-6,0,0]]})");
  const Run zr = run("normal-form --ring z " + w);
  REQUIRE(zr.code == 0);
  CHECK(output_of(zr)["cs"] == Json::array({2, 6}));
}

TEST_CASE("tuples") {
  const std::string t = scratch("t.json");
  const Run built = run("build-tuple --ds 1/2,1/3 --n 5 > " + t);
  CHECK(built.code == 0);
  const Json tuple = read_json_file(t).at("output");
  CHECK(tuple["n"] == 5);
  CHECK(tuple["m"] == 6);
  CHECK(tuple["mats"].size() == 5);

  CHECK(run("verify-tuple " + t + " --ds 1/2,1/3").code == 0);
  CHECK(run("verify-tuple " + t + " --matrix " + data("d5_half_third.json")).code == 0);
  const Run bad = run("verify-tuple " + t + " --ds 1/2,1/5");
  CHECK(bad.code == 1);
  CHECK(output_of(bad)["passed"] == false);

  const std::string c = scratch("c.json");
  CHECK(run("build-tuple --ds 1/2,1/3 --n 5 --random-angles --conjugate --seed 11 > " + c).code == 0);
  const Json d = output_of(run("classify " + c));
  CHECK(decode<SkewQZ>(d) == decode<SkewQZ>(read_json_file(data("d5_half_third.json"))));

  const Run ex = run("extract " + c + " --ds 1/2,1/3");
  REQUIRE(ex.code == 0);
  CHECK(output_of(ex)["params"]["l"] == 1);

  const std::string commuting = scratch("commuting.json");
  CHECK(run("build-tuple --ds \"\" --n 3 --l 2 --random-angles --conjugate > " + commuting).code == 0);
  CHECK(decode<SkewQZ>(output_of(run("classify " + commuting))).is_zero());

  const std::string r1 = scratch("r1.json");
  const std::string r2 = scratch("r2.json");
  run("build-tuple --ds 1/2 --n 3 --random-angles --conjugate --seed 5 > " + r1);
  run("build-tuple --ds 1/2 --n 3 --random-angles --conjugate --seed 5 > " + r2);
  CHECK(read_json_file(r1).at("output") == read_json_file(r2).at("output"));
  CHECK(read_json_file(r1).at("inputs").at("seed") == 5);

  const std::string realized = scratch("realized.json");
  CHECK(run("build-tuple --matrix " + data("d5_half_third.json") + " --m 12 > " + realized).code == 0);
  CHECK(run("verify-tuple " + realized + " --matrix " + data("d5_half_third.json")).code == 0);
  CHECK(run("build-tuple --matrix " + data("d5_half_third.json") + " --m 4").code == 2);
  CHECK(run("classify " + t + " --format csv").code == 2);
}

TEST_CASE("gamma") {
  CHECK(output_of(run("gamma --rank1 1,1 5 --count"))["count"] == "13");
  const Json polys = output_of(run("gamma --rank1 1,1 3 --enumerate"));
  CHECK(polys["count"] == 4);
  CHECK(polys["polynomials"].size() == 4);
  const Json mod = output_of(run("gamma --rank1 1,1 2 --moduli"));
  CHECK(mod["polynomials"][1]["moduli"][0]["torus_dim"] == 2);

  const Json om = output_of(run("gamma --ext " + data("worked_example_ext.json") + " --omega"));
  CHECK(om["analysis"]["B"] == "12");
  CHECK(om["analysis"]["C"] == "3");
  CHECK(om["analysis"]["P"] == "4");
  CHECK(om["analysis"]["nullity"] == 2);

  CHECK(run("gamma --rank1 1,1 3").code == 2);
  CHECK(run("gamma --rank1 2,2,3 3 --count").code == 2);
  CHECK(run("gamma --rank1 1,1 --count").code == 2);
  CHECK(run("gamma --rank1 1,1 30 --enumerate --cap 5").code == 3);
}
