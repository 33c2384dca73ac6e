#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fairpay/config.hpp"

using namespace fairpay;

TEST(Config, ParsesFlatMapping) {
  const auto cfg = parse_config(R"(
scheme: fair_payments
instance: classic
means: [0.9, 0.7, 0.5]
delta: 0.1
T: 2500
seed: 7
width: confidence_width
count_warm_start: true
horizons: [100, 400]
)");
  EXPECT_EQ(cfg.scheme, SchemeKind::kFairPayments);
  EXPECT_EQ(cfg.means, (std::vector<double>{0.9, 0.7, 0.5}));
  EXPECT_EQ(cfg.delta, 0.1);
  EXPECT_EQ(cfg.horizon, 2500u);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.width, ClassicWidth::kConfidenceWidth);
  EXPECT_TRUE(cfg.count_warm_start);
  EXPECT_EQ(cfg.horizons, (std::vector<std::size_t>{100, 400}));
}

TEST(Config, EmptyTextKeepsDefaults) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg.delta, RunConfig{}.delta);
}

TEST(Config, UnknownKeysAreErrors) {
  EXPECT_THROW(parse_config("shceme: zero\n"), ConfigError);
}

TEST(Config, WrongTypesAreErrors) {
  EXPECT_THROW(parse_config("delta: [1, 2]\n"), ConfigError);
  EXPECT_THROW(parse_config("T: lots\n"), ConfigError);
  EXPECT_THROW(parse_config("T: -3\n"), ConfigError);
  EXPECT_THROW(parse_config("means: 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config("scheme: greedy\n"), ConfigError);
  EXPECT_THROW(parse_config("instance: {kind: classic}\n"), ConfigError);
  EXPECT_THROW(parse_config("- a\n- b\n"), ConfigError);
  EXPECT_THROW(parse_config("a: [\n"), ConfigError);
}

TEST(Config, ErrorsNameTheKey) {
  try {
    parse_config("scheme: greedy\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("scheme"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("greedy"), std::string::npos);
  }
}

TEST(Config, TextSettingsOverride) {
  RunConfig cfg;
  apply_setting(cfg, "means", std::string("[0.4, 0.2]"));
  apply_setting(cfg, "m", std::string("2.5"));
  apply_setting(cfg, "tol_p", std::string("1e-6"));
  EXPECT_EQ(cfg.means, (std::vector<double>{0.4, 0.2}));
  EXPECT_EQ(cfg.noise_scale, 2.5);
  EXPECT_EQ(cfg.tolerance.probability, 1e-6);
  EXPECT_THROW(apply_setting(cfg, "nope", std::string("1")), ConfigError);
}

TEST(Config, EveryKeyIsListedOnce) {
  std::set<std::string_view> names;
  for (const auto& k : config_keys()) EXPECT_TRUE(names.insert(k.name).second) << k.name;
  EXPECT_TRUE(names.count("T"));
  EXPECT_TRUE(names.count("output"));
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "fairpay_config_test.yaml";
  {
    std::ofstream out(path);
    out << "scheme: two_arm\nmeans: [0.8, 0.6]\n";
  }
  const auto cfg = load_config(path.string());
  EXPECT_EQ(cfg.scheme, SchemeKind::kTwoArm);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
}
