#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace rht::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "rht4");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("rht4_test_" + name + ".json");
  std::ofstream(path) << body;
  return path.string();
}

bool has_row(const std::string& text, int r, long long v) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream l(line);
    long long a = -1, b = -1;
    if ((l >> a >> b) && a == r && b == v) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("ranks tables") {
  const auto k3 = call({"ranks", "--b2", "22"});
  CHECK(k3.code == kOk);
  CHECK(has_row(k3.out, 2, 22));
  CHECK(has_row(k3.out, 3, 252));
  CHECK(has_row(k3.out, 4, 3520));
  CHECK(k3.out.find("π_r") != std::string::npos);

  const auto s4 = call({"ranks", "--b2", "0"});
  CHECK(has_row(s4.out, 4, 1));
  CHECK(has_row(s4.out, 7, 1));
  CHECK(s4.out.find("elliptic") != std::string::npos);

  const auto small = call({"ranks", "--b2", "3", "--engine", "--max-degree", "5", "--format", "json"});
  CHECK(small.code == kOk);
  const auto doc = nlohmann::json::parse(small.out);
  CHECK(doc["engine"]["ranks"]["5"] == 10);
  CHECK(doc["formula"]["ranks"]["5"] == 10);
  CHECK(doc["engine"]["agree"]["5"] == true);
}

TEST_CASE("model output") {
  const auto one = call({"model", "--b2", "1"});
  CHECK(one.code == kOk);
  CHECK(one.out.find("dv5_1 = x1^3") != std::string::npos);

  const auto zero = call({"model", "--b2", "0", "--max-degree", "7"});
  CHECK(zero.out.find("du4_1 = 0") != std::string::npos);
  CHECK(zero.out.find("dv7_1 = u4_1^2") != std::string::npos);

  const auto split = call({"model", "--split", "1,1", "--format", "json"});
  const auto doc = nlohmann::json::parse(split.out);
  CHECK(doc["meta"]["sigma"] == 0);
  CHECK(doc["meta"]["b2plus"] == 1);
  int deg3 = 0;
  for (const auto& g : doc["generators"]) deg3 += g["degree"] == 3;
  CHECK(deg3 == 2);
}

TEST_CASE("model JSON round-trips byte for byte") {
  for (const char* split : {"3,0", "2,1", "1,1", "0,0"}) {
    const auto r = call({"model", "--split", split, "--format", "json"});
    REQUIRE(r.code == kOk);
    const auto again = nlohmann::json::parse(r.out).dump(2) + "\n";
    CHECK(again == r.out);
    for (const auto& g : nlohmann::json::parse(r.out)["generators"])
      for (const auto& t : g["differential"]) CHECK(t["coeff"].is_string());
  }
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"model", "--split", "2,2", "--format", "json"};
  CHECK(call(args).out == call(args).out);
  const std::vector<std::string> v = {"verify", "--b2", "3", "--all-splits"};
  CHECK(call(v).out == call(v).out);
}

TEST_CASE("classification from form files") {
  const auto d11 = write_temp("d1m1", R"({"name": "CP2#-CP2", "matrix": [[1,0],[0,-1]]})");
  const auto hyp = write_temp("hyp", R"({"name": "S2xS2", "matrix": [[0,1],[1,0]]})");
  const auto d2 = write_temp("d2", R"({"matrix": [[1,0],[0,1]]})");
  const auto e8 = write_temp("e8", R"({"name": "E8", "matrix": [
    [2,0,-1,0,0,0,0,0],[0,2,0,-1,0,0,0,0],[-1,0,2,-1,0,0,0,0],[0,-1,-1,2,-1,0,0,0],
    [0,0,0,-1,2,-1,0,0],[0,0,0,0,-1,2,-1,0],[0,0,0,0,0,-1,2,-1],[0,0,0,0,0,0,-1,2]]})");
  const auto d8 = write_temp("d8", R"({"matrix": [[1,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0],
    [0,0,1,0,0,0,0,0],[0,0,0,1,0,0,0,0],[0,0,0,0,1,0,0,0],[0,0,0,0,0,1,0,0],
    [0,0,0,0,0,0,1,0],[0,0,0,0,0,0,0,1]]})");

  const auto a = call({"classify", d11, hyp});
  CHECK(a.code == kOk);
  CHECK(a.out.find("\nEQUIVALENT") != std::string::npos);
  CHECK(a.out.find("(1,1)") != std::string::npos);

  const auto b = call({"classify", e8, d8, "--format", "json"});
  const auto doc = nlohmann::json::parse(b.out);
  CHECK(doc["equivalent"] == true);
  CHECK(doc["forms"][0]["connected_sum"]["p"] == 8);

  const auto c = call({"classify", d2, hyp});
  CHECK(c.out.find("NOT EQUIVALENT") != std::string::npos);

  const auto f = call({"ranks", "--form", e8});
  CHECK(f.code == kOk);
  CHECK(has_row(f.out, 4, 160));
}

TEST_CASE("examples") {
  const auto s3 = call({"examples", "hypersurface", "3"});
  CHECK(s3.code == kOk);
  CHECK(s3.out.find("b₂ = 7") != std::string::npos);
  CHECK(has_row(s3.out, 2, 7));
  CHECK(has_row(s3.out, 3, 27));
  CHECK(has_row(s3.out, 4, 105));

  const auto ci = call({"examples", "ci", "2,2"});
  CHECK(ci.out.find("b₂ = 6") != std::string::npos);

  const auto k3 = call({"examples", "k3"});
  CHECK(has_row(k3.out, 3, 252));
  CHECK(k3.out.find("σ = -16") != std::string::npos);

  CHECK(call({"examples", "connected-sum", "2,1", "--engine"}).code == kOk);
}

TEST_CASE("verify") {
  const auto all = call({"verify"});
  CHECK(all.code == kOk);
  CHECK(all.out.find("FAIL") == std::string::npos);

  const auto splits = call({"verify", "--b2", "3", "--max-degree", "5", "--all-splits"});
  CHECK(splits.code == kOk);
  int lines = 0;
  std::istringstream in(splits.out);
  for (std::string line; std::getline(in, line);)
    if (line.find("PASS  ranks 2:3 3:5 4:5 5:10") != std::string::npos) ++lines;
  CHECK(lines == 4);

  const auto broken = call({"verify", "--b2", "3", "--inject-fault", "d2"});
  CHECK(broken.code == kVerificationFailed);
  CHECK(broken.out.find("d_squared") != std::string::npos);

  const auto linear = call({"verify", "--b2", "2", "--inject-fault", "linear"});
  CHECK(linear.code == kVerificationFailed);
  CHECK(linear.out.find("minimality") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(call({"--help"}).code == kOk);
  CHECK(call({}).code == kInputError);
  CHECK(call({"frobnicate"}).code == kInputError);
  CHECK(call({"ranks"}).code == kInputError);
  CHECK(call({"ranks", "--b2", "x"}).code == kInputError);
  CHECK(call({"ranks", "--b2", "-1"}).code == kInputError);
  CHECK(call({"ranks", "--b2", "3", "--split", "1,1"}).code == kInputError);
  CHECK(call({"ranks", "--split", "1"}).code == kInputError);
  CHECK(call({"ranks", "--b2", "2", "--format", "xml"}).code == kInputError);
  CHECK(call({"examples", "hypersurface", "0"}).code == kInputError);
  CHECK(call({"examples", "torus"}).code == kInputError);
  CHECK(call({"verify", "--inject-fault", "bogus"}).code == kInputError);

  const auto bad = write_temp("bad", R"({"matrix": [[2,0],[0,1]]})");
  const auto asym = write_temp("asym", R"({"matrix": [[1,1],[0,1]]})");
  const auto junk = write_temp("junk", "{not json");
  const auto frac = write_temp("frac", R"({"matrix": [[0.5]]})");
  CHECK(call({"ranks", "--form", bad}).code == kInputError);
  CHECK(call({"ranks", "--form", asym}).code == kInputError);
  CHECK(call({"ranks", "--form", junk}).code == kInputError);
  CHECK(call({"ranks", "--form", frac}).code == kInputError);
  CHECK(call({"ranks", "--form", "/nonexistent/form.json"}).code == kInputError);
  CHECK(call({"classify", bad}).code == kInputError);

  const auto guard = call({"ranks", "--b2", "8", "--engine", "--guard", "100"});
  CHECK(guard.code == kGuardExceeded);
  CHECK(has_row(guard.out, 3, 35));
  CHECK(call({"model", "--b2", "8", "--guard", "100"}).code == kGuardExceeded);
}

TEST_CASE("form parsing") {
  const auto f = parse_form(nlohmann::json::parse(R"({"name": "H", "matrix": [[0,1],[1,0]]})"));
  CHECK(f.name() == "H");
  CHECK(f.signature() == 0);
  CHECK_THROWS_AS(parse_form(nlohmann::json::parse("[1]")), rht::fourfold::FormError);
  CHECK_THROWS_AS(parse_form(nlohmann::json::parse(R"({"matrix": [["a"]]})")),
                  rht::fourfold::FormError);
}
