#include <gtest/gtest.h>

#include "radmine/config.h"
#include "radmine/text_util.h"
#include "testing.h"

namespace radmine {
namespace {

Config parse(const char* text) { return Config::from_json(Json::parse(text)); }

TEST(Config, DefaultsRoundTrip) {
  Config c;
  Json j = c.to_json();
  EXPECT_EQ(Config::from_json(j).to_json(), j);
  EXPECT_EQ(Config::from_json(Json::object()).to_json(), j);
  EXPECT_EQ(j["seed"], 2020);
  EXPECT_EQ(j["bootstrap"]["queue_size"], 100);
  EXPECT_EQ(j["bootstrap"]["fp_quota"], 400);
  EXPECT_EQ(j["report"]["min_freq"], 3);
  EXPECT_EQ(j["corpus"]["min_date"], "2019-11-30");
  EXPECT_FALSE(j["classifier"].contains("seed"));
}

TEST(Config, SectionsOverrideDefaults) {
  Config c = parse(R"({"seed": 7, "corpus": {"min_date": "2020-01", "threads": 2},
      "classifier": {"split_ratio": 0.8, "features": {"dimension": 4096},
                     "hyper": {"epochs": 9}},
      "bootstrap": {"queue_size": 10, "fp_quota": 5, "auto_open": false},
      "extract": {"threshold": 0.7}, "report": {"min_freq": 2},
      "service": {"host": "0.0.0.0", "port": 9000},
      "synth": {"pool_size": 100, "noise": 0.1}})");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.corpus.filter.min_publish_date, (Date{2020, 1, 1}));
  EXPECT_EQ(c.corpus.threads, 2u);
  EXPECT_EQ(c.classifier.split_ratio, 0.8);
  EXPECT_EQ(c.classifier.features.dimension, 4096u);
  EXPECT_EQ(c.classifier.hyper.epochs, 9u);
  EXPECT_EQ(c.bootstrap.queue_size, 10u);
  EXPECT_FALSE(c.auto_open);
  EXPECT_EQ(c.extract_threshold, 0.7);
  EXPECT_EQ(c.report_min_freq, 2u);
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.synth.pool_size, 100u);
  EXPECT_EQ(c.synth_noise, 0.1);
  EXPECT_EQ(Config::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(Config, SeedFlowsEverywhere) {
  Config c = parse(R"({"seed": 99})");
  EXPECT_EQ(c.train_options().seed, 99u);
  EXPECT_EQ(c.bootstrap_config().retrain.seed, 99u);
  EXPECT_EQ(c.synth_config().seed, 99u);
  EXPECT_EQ(c.bootstrap_config().retrain.features, c.classifier.features);
}

TEST(Config, RejectsUnknownKeys) {
  for (const char* bad : {R"({"sed": 1})", R"({"corpus": {"mindate": "2020"}})",
                          R"({"classifier": {"seed": 3}})",
                          R"({"classifier": {"features": {"dim": 1024}}})",
                          R"({"classifier": {"hyper": {"lr": 1}}})",
                          R"({"bootstrap": {"k": 1}})", R"({"synth": {"size": 1}})"}) {
    EXPECT_THROW(parse(bad), ConfigError) << bad;
  }
}

TEST(Config, RejectsBadValues) {
  for (const char* bad : {R"({"seed": "x"})", R"({"corpus": {"min_date": "soon"}})",
                          R"({"classifier": {"features": {"dimension": 1000}}})",
                          R"({"bootstrap": {"queue_size": 0}})",
                          R"({"synth": {"noise": 2}})", R"({"service": {"port": 70000}})",
                          R"({"corpus": []})", R"([])"}) {
    EXPECT_THROW(parse(bad), ConfigError) << bad;
  }
}

TEST(Config, LoadFromFile) {
  testing::TempDir dir;
  write_file_atomic(dir.file("c.json"), R"({"seed": 5})");
  EXPECT_EQ(Config::load(dir.file("c.json")).seed, 5u);
  write_file_atomic(dir.file("bad.json"), "{");
  EXPECT_THROW(Config::load(dir.file("bad.json")), ConfigError);
  EXPECT_THROW(Config::load(dir.file("absent.json")), ConfigError);
}

}  // namespace
}  // namespace radmine
