#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kReference =
    R"({"rho": 0.3333333333333333, "sigma1": 0.38, "sigma2": 1.9, "lambda1": 1.7, "lambda2": 0.44,
        "c": 0.5, "cost": {"type": "exp", "gamma": 0.3333333333333333}})";
const char* kSwapped =
    R"({"rho": 0.3333333333333333, "sigma1": 1.9, "sigma2": 0.38, "lambda1": 0.44, "lambda2": 1.7,
        "c": 0.5, "cost": {"type": "exp", "gamma": 0.3333333333333333}})";
const char* kEqual =
    R"({"rho": 0.5, "sigma1": 1.0, "sigma2": 1.0, "lambda1": 0.3, "lambda2": 0.6,
        "c": 1.0, "cost": {"type": "quad", "alpha": 1.0, "beta": 1.0}})";

struct Sandbox {
  static inline int counter = 0;
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("regext_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "regime-extract");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = regext::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> v;
  for (std::string s; std::getline(in, s);) v.push_back(s);
  return v;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check and solve") {
    Sandbox box;
    const auto config = box.write("reference.json", kReference);
    auto r = run({"check", "-c", config});
    CHECK(r.code == 0);
    CHECK(r.j()["case"] == "A");

    r = run({"solve", "--config", config});
    REQUIRE(r.code == 0);
    const json j = r.j();
    CHECK(j["case"] == "A");
    CHECK(j["relabeled"] == false);
    CHECK(j["z1"].get<double>() == doctest::Approx(1.3078217229809847).epsilon(1e-10));
    CHECK(j["z2"].get<double>() == doctest::Approx(0.9070362850103081).epsilon(1e-10));
    CHECK(std::abs(j["residuals"]["G1"].get<double>()) < 1e-10);
    CHECK(std::abs(j["residuals"]["G2"].get<double>()) < 1e-10);

    r = run({"solve", "-c", box.write("swapped.json", kSwapped)});
    REQUIRE(r.code == 0);
    CHECK(r.j()["relabeled"] == true);
    CHECK(r.j()["z1"].get<double>() == doctest::Approx(j["z1"].get<double>()).epsilon(1e-12));

    r = run({"solve", "-c", box.write("equal.json", kEqual)});
    REQUIRE(r.code == 0);
    CHECK(r.j()["case"] == "B");
    CHECK(r.j()["z1"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.j()["z2"].get<double>() == 0.0);
  }

  TEST_CASE("input errors exit with 2") {
    Sandbox box;
    auto r = run({"solve", "-c", box.write("bad.json", R"({"rho": 0.3,, "sigma1": 1})")});
    CHECK(r.code == 2);
    CHECK(r.err.find("byte offset") != std::string::npos);

    std::string neg = kReference;
    neg.replace(neg.find("0.38"), 4, "-0.1");
    CHECK(run({"solve", "-c", box.write("neg.json", neg)}).code == 2);

    std::string extra = kReference;
    extra.replace(extra.rfind('}'), 1, R"(, "colour": "red"})");
    CHECK(run({"solve", "-c", box.write("extra.json", extra)}).code == 2);

    CHECK(run({"solve", "-c", box.path("missing.json")}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"solve"}).code == 2);

    const auto config = box.write("reference.json", kReference);
    CHECK(run({"value", "-c", config, "--x", "0", "--y", "1.5", "--regime", "1"}).code == 2);
    CHECK(run({"value", "-c", config, "--x", "0", "--y", "0.5", "--regime", "3"}).code == 2);
    CHECK(run({"simulate", "-c", config, "--x", "0", "--y", "0.5", "--regime", "1", "--paths", "7"}).code == 2);
    CHECK(run({"scan-region", "--rho", "0.3", "--lambda1", "1", "--lambda2", "1", "--sigma1-range", "2,1",
               "--sigma2-range", "0.1,1"})
              .code == 2);
  }

  TEST_CASE("boundary tables") {
    Sandbox box;
    const auto config = box.write("reference.json", kReference);
    const auto csv = box.path("b.csv");
    auto r = run({"boundary", "-c", config, "--grid", "2", "--out", csv, "--svg", box.path("b.svg")});
    REQUIRE(r.code == 0);
    const auto main = lines(csv);
    REQUIRE(main.size() == 3);
    CHECK(main[0] == "x,b1_star,b2_star,bhash_sigma1,bhash_sigma2");
    const auto ys = lines(box.path("b_y.csv"));
    REQUIRE(ys.size() == 3);
    CHECK(ys[0] == "y,x1_star,x2_star,xhash_sigma1,xhash_sigma2");
    CHECK(fs::exists(box.path("b.svg")));
    CHECK(fs::exists(csv + ".manifest.json"));

    const json m = json::parse(std::ifstream(csv + ".manifest.json"));
    CHECK(m["subcommand"] == "boundary");
    CHECK(m["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(m["outputs"].size() >= 2);

    r = run({"boundary", "-c", config, "--out", box.path("b2.csv")});
    CHECK(lines(box.path("b2.csv")).size() == 1002);
    CHECK(run({"boundary", "-c", config, "--out", "/nonexistent/dir/b.csv"}).code == 3);
    CHECK(run({"boundary", "-c", config, "--grid", "1", "--out", csv}).code == 2);
  }

  TEST_CASE("value at empty reserve is zero") {
    Sandbox box;
    const auto config = box.write("reference.json", kReference);
    const auto r = run({"value", "-c", config, "--x", "0.65", "--y", "0", "--regime", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.j()["value"]["U"].get<double>() == 0.0);
    const auto s = run({"value", "-c", config, "--x", "0.65", "--y", "0.5", "--regime", "2"});
    CHECK(s.j()["value"]["U"].get<double>() == doctest::Approx(0.1322080566338375764).epsilon(1e-9));
  }

  TEST_CASE("verify flags an injected boundary error") {
    Sandbox box;
    const auto config = box.write("reference.json", kReference);
    const std::initializer_list<std::string> small = {"--x-points", "60", "--y-points", "10", "--fbp-points", "2000"};
    std::vector<std::string> args = {"verify", "-c", config};
    args.insert(args.end(), small);
    CHECK(run(args).code == 0);
    args.insert(args.end(), {"--inject-z2-error", "1e-3"});
    const auto r = run(args);
    CHECK(r.code == 1);
  }

  TEST_CASE("simulate is reproducible") {
    Sandbox box;
    const auto config = box.write("reference.json", kReference);
    const std::vector<std::string> args = {"simulate", "-c", config, "--x", "0.65", "--y", "0.5", "--regime", "2",
                                           "--paths", "200", "--dt", "0.01", "--seed", "42"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.j()["mean"] == b.j()["mean"]);
    CHECK(a.j()["n_units"] == 100);

    auto traced = args;
    traced.insert(traced.end(), {"--trace", box.path("trace.csv")});
    REQUIRE(run(traced).code == 0);
    const auto tr = lines(box.path("trace.csv"));
    REQUIRE(tr.size() > 1);
    CHECK(tr[0] == "t,regime,X,Y,dnu,discounted_increment");
  }

  TEST_CASE("scan-region") {
    auto r = run({"scan-region", "--rho", "0.333333", "--lambda1", "1.7", "--lambda2", "0.44", "--sigma1-range",
                  "0.1,2", "--sigma2-range", "0.1:2", "--steps", "4"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "sigma1,sigma2,feasible");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 16);

    r = run({"scan-region", "--rho", "0.3", "--lambda1", "1", "--lambda2", "1", "--sigma1-range", "1,1.5",
             "--sigma2-range", "1,1.5", "--steps", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("1.25,1.25,B") != std::string::npos);
  }
}
