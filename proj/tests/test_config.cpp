#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "abcomm/config.hpp"
#include "abcomm/error.hpp"
#include "abcomm/experiment.hpp"
#include "abcomm/units.hpp"

using namespace abcomm;
using nlohmann::json;

namespace {

json small_config(const std::filesystem::path& out) {
  return json{{"name", "small"},
              {"seed", 7},
              {"trials", 500},
              {"output_dir", out.string()},
              {"traffic", {{"source", "synthetic"}, {"num_pus", 12}, {"observations", 10}}},
              {"classifier", json::array({"oracle", "mean_shift"})},
              {"link_budget", {{"rho_b_dbm", -36}, {"pu_gain_dbi", 6}}},
              {"sweep", {{"axis", "path_loss"}, {"values", json::array({3.5, 4})}}}};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("abcomm_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(units::dbm_to_watt(-36.0) == doctest::Approx(2.512e-7).epsilon(1e-4));
  CHECK(units::db_to_linear(6.0) == doctest::Approx(3.981).epsilon(1e-4));
  const auto c = validate_config(small_config("out"));
  CHECK(c.budget.activation == doctest::Approx(2.512e-7).epsilon(1e-4));
  CHECK(c.budget.pu_gain == doctest::Approx(3.981).epsilon(1e-4));
  CHECK(c.budget.wavelength == doctest::Approx(299792458.0 / 1.8e9));
}

TEST_CASE("path loss of 2 is rejected with the field name") {
  auto raw = small_config("out");
  raw["path_loss"] = 2;
  raw["sweep"] = {{"axis", "alpha"}, {"values", json::array({0, -1})}};
  try {
    validate_config(raw);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    REQUIRE(e.issues().size() == 1);
    CHECK(e.issues()[0].rfind("path_loss", 0) == 0);
    CHECK(e.issues()[0].find("exceed 2") != std::string::npos);
  }
}

TEST_CASE("every invalid field is listed") {
  auto raw = small_config("out");
  raw["alpha"] = -0.3;
  raw["trials"] = 0;
  raw["classifier"] = json::array({"kmeans"});
  raw["sweep"]["values"] = json::array({4, 1.5});
  try {
    validate_config(raw);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() >= 4);
  }
}

TEST_CASE("densities are normalized to portions") {
  auto raw = small_config("out");
  raw["traffic"]["patterns"] = json::array(
      {{{"name", "A"}, {"mean_length_bytes", 100}, {"mean_interarrival_us", 50}, {"density_per_m2", 0.01}},
       {{"name", "B"}, {"mean_length_bytes", 200}, {"mean_interarrival_us", 80}, {"density_per_m2", 0.03}}});
  const auto c = validate_config(raw);
  REQUIRE(c.patterns.size() == 2);
  CHECK(c.patterns[0].portion == doctest::Approx(0.25));
  CHECK(c.patterns[1].mean_interarrival == doctest::Approx(80e-6));
}

TEST_CASE("config hash is stable and sensitive") {
  const auto a = validate_config(small_config("out"));
  const auto b = validate_config(small_config("out"));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(hash_hex(config_hash(a)).size() == 16);
  auto raw = small_config("out");
  raw["seed"] = 8;
  CHECK(config_hash(validate_config(raw)) != config_hash(a));
}

TEST_CASE("rerun with the same seed is byte-identical") {
  const auto dir = scratch("rerun");
  const auto c = validate_config(small_config(dir));
  const auto first = run_experiment(c);
  const auto text = slurp(first.table);
  CHECK(first.rows > 0);
  const auto second = run_experiment(c);
  CHECK(slurp(second.table) == text);
  CHECK(std::filesystem::exists(dir / "config.normalized.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "results.csv.partial"));

  std::istringstream lines(text);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header.rfind("config_hash,seed,sweep_axis,sweep_value", 0) == 0);
  const auto hash = hash_hex(config_hash(c));
  std::size_t rows = 0;
  while (std::getline(lines, row)) {
    CHECK(row.rfind(hash + ",7,path_loss,", 0) == 0);
    ++rows;
  }
  CHECK(rows == first.rows);
  std::filesystem::remove_all(dir);
}

TEST_CASE("single sweep value gives one row group") {
  const auto dir = scratch("single");
  auto raw = small_config(dir);
  raw["classifier"] = "oracle";
  raw["sweep"]["values"] = json::array({4});
  const auto c = validate_config(raw);
  const auto res = run_experiment(c, {true, false, "t.csv"});
  const auto classes = classify(build_trace(c), c, Classifier::oracle);
  // one row per class under each of the two selection rules
  CHECK(res.rows == 2 * static_cast<std::size_t>(classes.clusters));
  std::filesystem::remove_all(dir);
}

TEST_CASE("oracle on an unlabelled trace fails and keeps the partial table") {
  const auto dir = scratch("partial");
  std::filesystem::create_directories(dir);
  {
    std::ofstream trace(dir / "trace.csv");
    trace << "pu_id,timestamp,length\n";
    for (int pu = 0; pu < 3; ++pu) {
      for (int i = 0; i < 20; ++i) trace << pu << ',' << 0.001 * i << ",200\n";
    }
  }
  auto raw = small_config(dir);
  raw["traffic"] = {{"source", "file"}, {"path", (dir / "trace.csv").string()}, {"observations", 10}};
  raw["classifier"] = "oracle";
  const auto c = validate_config(raw);
  try {
    run_experiment(c);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("sweep value 3.5") != std::string::npos);
    CHECK(what.find("true_pattern") != std::string::npos);
  }
  CHECK(std::filesystem::exists(dir / "results.csv.partial"));
  CHECK_FALSE(std::filesystem::exists(dir / "results.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("load_config reports a missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}
