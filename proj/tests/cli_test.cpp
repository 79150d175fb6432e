#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

namespace {

using nlohmann::json;
using stroh::support::data_path;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "stroh");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = stroh::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, RayleighPoisson) {
  const Result r = run({"rayleigh", "--material", data_path("poisson.json"), "--eta", "1", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_NEAR(doc["speed"].get<double>(), 0.91940, 1e-4);
  // Speed is tau_R / |eta| for any |eta|.
  const Result s = run({"rayleigh", "--material", data_path("poisson.json"), "--eta", "0", "2.5"});
  ASSERT_EQ(s.code, 0);
  const json d2 = json::parse(s.out);
  EXPECT_NEAR(d2["speed"].get<double>(), doc["speed"].get<double>(), 1e-12);
  EXPECT_NEAR(d2["tau_R"].get<double>(), 2.5 * doc["tau_R"].get<double>(), 1e-10);
}

TEST(Cli, BadMaterialIsValidationError) {
  const Result r = run({"material", "--validate", data_path("bad.json")});
  EXPECT_EQ(r.code, stroh::cli::kExitValidation);
  const json e = json::parse(r.err);
  EXPECT_EQ(e["error"], "AsymmetricVoigtMatrix");
  EXPECT_EQ(e["category"], "validation");
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MissingFileAndUsage) {
  EXPECT_EQ(run({"material", "--validate", "/nonexistent.json"}).code, stroh::cli::kExitValidation);
  EXPECT_EQ(run({"rayleigh", "--eta", "1", "0"}).code, stroh::cli::kExitValidation);
  EXPECT_EQ(run({}).code, stroh::cli::kExitValidation);
  EXPECT_EQ(run({"impedance", "--material", data_path("iso.json"), "--eta", "1", "0", "--tau", "0"}).code,
            stroh::cli::kExitValidation);
}

TEST(Cli, EllipticImpedanceIsHermitian) {
  const Result r = run({"impedance", "--material", data_path("iso.json"), "--eta", "1", "0", "--tau", "-0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["region"], "elliptic");
  EXPECT_LE(doc["hermiticity_residual_ec"].get<double>(), 1e-9);
  const auto& re = doc["z"]["re"];
  const auto& im = doc["z"]["im"];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(re[i][j].get<double>(), re[j][i].get<double>(), 1e-12);
      EXPECT_NEAR(im[i][j].get<double>(), -im[j][i].get<double>(), 1e-12);
    }
}

TEST(Cli, GlancingIsNumericalError) {
  const Result r = run({"factorize", "--material", data_path("poisson.json"), "--eta", "1", "0", "--tau", "-1"});
  EXPECT_EQ(r.code, stroh::cli::kExitNumerical);
  EXPECT_EQ(json::parse(r.err)["category"], "numerical");
}

TEST(Cli, FactorizeReportsResiduals) {
  const Result r = run({"factorize", "--material", data_path("ti.json"), "--eta", "0.7", "0.2", "--tau", "-0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_LE(doc["residuals"]["solvency"].get<double>(), 1e-10);
  EXPECT_LE(doc["residuals"]["factorization_max"].get<double>(), 1e-9);
  EXPECT_LE(doc["residuals"]["contour"].get<double>(), 1e-8);
  EXPECT_EQ(doc["sigma"].size(), 3u);
}

TEST(Cli, ClassifyCsv) {
  const Result r = run({"classify", "--material", data_path("poisson.json"), "--eta", "1", "0", "--tau", "-3",
                        "--grid", "6", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], "eta_x[1/length],eta_y[1/length],tau[1/time],label,margin[1]");
  EXPECT_NE(rows[1].find("elliptic"), std::string::npos);
  EXPECT_NE(rows[6].find("hyperbolic"), std::string::npos);
}

TEST(Cli, SlownessCsvHeader) {
  const Result r = run({"slowness", "--material", data_path("ti.json"), "--grid", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows[0].rfind("direction_x", 0), 0u);
}

TEST(Cli, ReflectBalances) {
  const Result r = run({"reflect", "--material", data_path("poisson.json"), "--material-minus", data_path("iso.json"),
                        "--eta", "1", "0", "--tau", "-3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  for (const auto& row : doc["results"]) EXPECT_LE(row["balance_residual"].get<double>(), 1e-8);
}

TEST(Cli, TraceIsByteIdentical) {
  const std::vector<std::string> args{"trace", "--stack", data_path("stack.json"), "--eta", "0.3", "0", "--tau", "-1"};
  const Result a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Result arr = run({"arrivals", "--stack", data_path("stack.json"), "--eta", "0.3", "0", "--tau", "-1"});
  ASSERT_EQ(arr.code, 0) << arr.err;
  EXPECT_EQ(lines(arr.out).at(0), "time[time],layer[index],mode[time/length],amplitude[trace],flux[flux]");
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "stroh_cli_out.json";
  const Result r = run({"material", data_path("poisson.json"), "--decompose", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const json doc = json::parse(in);
  EXPECT_NEAR(doc["decomposition"]["lambda"].get<double>(), 1.0, 1e-14);
  std::filesystem::remove(path);
}

TEST(Cli, ToleranceOverride) {
  const std::vector<std::string> base{"classify", "--material", data_path("poisson.json"), "--eta", "1", "0", "--tau",
                                      "-1.0001"};
  const Result d = run(base);
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_NE(lines(d.out).at(1).find("mixed"), std::string::npos);
  auto loose = base;
  loose.insert(loose.end(), {"--tol-glancing", "5e-2"});
  const Result r = run(loose);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(lines(r.out).at(1).find("glancing"), std::string::npos);
  EXPECT_EQ(run({"classify", "--material", data_path("poisson.json"), "--eta", "1", "0", "--tol-glancing", "-1"}).code,
            stroh::cli::kExitValidation);
}
