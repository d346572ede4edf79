#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mondrian/config.hpp"

using namespace mondrian;

TEST(Config, Defaults) {
  Config c;
  EXPECT_DOUBLE_EQ(c.cluster.alpha, 1.0);
  EXPECT_DOUBLE_EQ(c.cluster.beta, 0.5);
  EXPECT_DOUBLE_EQ(c.cluster.gamma, 1.0);
  EXPECT_DOUBLE_EQ(c.cluster.epsilon, 1.5);
  EXPECT_EQ(c.cluster.min_points, 1);
  EXPECT_DOUBLE_EQ(c.thresholds.tau_r, 0.75);
  EXPECT_DOUBLE_EQ(c.thresholds.tau_f, 0.99);
  EXPECT_DOUBLE_EQ(c.flood.stop_threshold, 0.1);
  EXPECT_EQ(c.flood.max_iterations, 10);
  EXPECT_EQ(c.dialect.delimiter, ',');
  EXPECT_EQ(c.dialect.quote, '"');
  EXPECT_EQ(kPruneBound, 0.7);
}

TEST(Config, JsonRoundTripAndOverrides) {
  Config c;
  apply_json(c, {{"alpha", 2.0}, {"radius", 3.5}, {"tau_f", 0.9}, {"delimiter", ";"}});
  EXPECT_DOUBLE_EQ(c.cluster.alpha, 2.0);
  EXPECT_DOUBLE_EQ(c.cluster.epsilon, 3.5);
  EXPECT_DOUBLE_EQ(c.thresholds.tau_f, 0.9);
  EXPECT_EQ(c.dialect.delimiter, ';');
  EXPECT_DOUBLE_EQ(c.cluster.beta, 0.5);  // untouched

  Config copy;
  apply_json(copy, to_json(c));
  EXPECT_EQ(to_json(copy), to_json(c));
}

TEST(Config, RejectsBadInput) {
  Config c;
  EXPECT_THROW(apply_json(c, {{"colour", 1}}), Error);
  EXPECT_THROW(apply_json(c, {{"alpha", "big"}}), Error);
  EXPECT_THROW(apply_json(c, {{"radius", 0.0}}), Error);
  EXPECT_THROW(apply_json(c, {{"beta", -1.0}}), Error);
  EXPECT_THROW(apply_json(c, {{"quote", "''"}}), Error);
  EXPECT_THROW(apply_json(c, nlohmann::json::array()), Error);
}

TEST(Config, LoadFromFile) {
  auto path = std::filesystem::temp_directory_path() / "mondrian_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"gamma": 0, "tau_r": 0.8, "flood_max_iterations": 4})";
  }
  Config c = load_config(path);
  EXPECT_DOUBLE_EQ(c.cluster.gamma, 0.0);
  EXPECT_DOUBLE_EQ(c.thresholds.tau_r, 0.8);
  EXPECT_EQ(c.flood.max_iterations, 4);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_config(path), Error);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), Error);
}
