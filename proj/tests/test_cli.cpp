#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "costsense/checkpoint.hpp"
#include "costsense/cli.hpp"
#include "costsense/datasets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace costsense;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("costsense_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Small dga train/test pair plus a checkpoint trained on it.
  void make_model(const std::string& preset = "cnn") {
    ASSERT_EQ(run({"gen-data", "--use-case", "dga", "--legit", "150", "--malicious", "150", "--seed", "3", "--out",
                   path("train.csv")})
                  .code,
              0);
    ASSERT_EQ(run({"gen-data", "--use-case", "dga", "--legit", "60", "--malicious", "60", "--seed", "3", "--split",
                   "test", "--out", path("test.csv")})
                  .code,
              0);
    const auto r = run({"train", "--train", path("train.csv"), "--preset", preset, "--epochs", "3", "--max-len", "32",
                        "--use-case", "dga", "--out", path("model.ckpt")});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

const std::map<std::string, std::vector<std::string>> documented_flags = {
    {"gen-data", {"--use-case", "--legit", "--malicious", "--seed", "--split", "--out"}},
    {"weights", {"--train", "--manifest", "--gamma", "--raw"}},
    {"train",
     {"--train", "--out", "--config", "--use-case", "--preset", "--gamma", "--epochs", "--lr", "--seed", "--batch-size",
      "--max-len", "--raw-weights", "--eval", "--eval-every", "--alpha", "--ngram-lo", "--ngram-hi"}},
    {"evaluate", {"--model", "--test", "--use-case"}},
    {"predict", {"--model", "--text"}},
    {"gradcheck", {"--preset"}},
};

}  // namespace

TEST(Cli, TopLevelHelpListsEveryCommand) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const auto& [cmd, _] : documented_flags) EXPECT_NE(r.out.find(cmd), std::string::npos) << cmd;
}

TEST(Cli, CommandHelpListsEveryFlag) {
  for (const auto& [cmd, flags] : documented_flags) {
    const auto r = run({cmd, "--help"});
    EXPECT_EQ(r.code, 0) << cmd;
    EXPECT_TRUE(r.err.empty()) << cmd;
    for (const auto& f : flags) EXPECT_NE(r.out.find(f), std::string::npos) << cmd << ' ' << f;
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gen-data", "--use-case", "dga", "--legit", "3"}).code, 2);  // missing --malicious
  EXPECT_EQ(run({"gen-data", "--use-case", "dga", "--legit", "3", "--malicious", "3", "--bogus"}).code, 2);
  EXPECT_EQ(run({"gen-data", "--use-case", "sms", "--legit", "3", "--malicious", "3"}).code, 2);
  EXPECT_EQ(run({"gen-data", "--use-case", "dga", "--legit", "x", "--malicious", "3"}).code, 2);
  EXPECT_EQ(run({"weights", "--manifest", "dga", "--gamma", "1.5"}).code, 2);
  EXPECT_EQ(run({"weights", "--gamma", "1"}).code, 2);
  EXPECT_EQ(run({"weights", "--manifest", "dga", "--train", "x.csv"}).code, 2);
  EXPECT_EQ(run({"gradcheck", "--preset", "transformer"}).code, 2);
  const auto r = run({"gen-data", "--bogus"});
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, DataErrorsExitOne) {
  auto r = run({"weights", "--train", path("missing.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos);

  r = run({"weights", "--train", std::string(COSTSENSE_FIXTURES) + "/bad_label.csv"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);

  {
    std::ofstream f(path("junk.ckpt"), std::ios::binary);
    f << "not a checkpoint";
  }
  EXPECT_EQ(run({"predict", "--model", path("junk.ckpt"), "--text", "abc"}).code, 1);
  EXPECT_EQ(run({"evaluate", "--model", path("missing.ckpt"), "--test", path("missing.csv")}).code, 1);
}

TEST_F(CliTest, GenDataIsByteIdenticalAcrossRuns) {
  const std::vector<std::string> args{"gen-data", "--use-case", "url", "--legit", "40", "--malicious", "25", "--seed", "9"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("text,label\n", 0), 0u);

  auto with_file = args;
  with_file.insert(with_file.end(), {"--out", path("u.csv")});
  ASSERT_EQ(run(with_file).code, 0);
  std::ifstream in(path("u.csv"), std::ios::binary);
  const std::string on_disk((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(on_disk, a.out);

  const auto data = parse_csv(a.out);
  EXPECT_EQ(class_counts(data), (std::array<std::int64_t, 2>{40, 25}));
}

TEST(Cli, WeightsFromDgaManifest) {
  const auto r = run({"weights", "--manifest", "dga", "--gamma", "1", "--raw"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["counts"], json({38276, 53052}));
  EXPECT_EQ(j["raw"][0].get<double>(), 1.0 / 38276);
  EXPECT_EQ(j["raw"][1].get<double>(), 1.0 / 53052);
  EXPECT_EQ(j["effective"], j["raw"]);
  EXPECT_FALSE(j["normalize"].get<bool>());
  const double total = 38276.0 * j["normalized"][0].get<double>() + 53052.0 * j["normalized"][1].get<double>();
  EXPECT_NEAR(total, 38276.0 + 53052.0, 1e-9 * (38276.0 + 53052.0));
}

TEST(Cli, WeightsFromTrainingCsv) {
  const auto r = run({"weights", "--train", std::string(COSTSENSE_FIXTURES) + "/three_rows.csv", "--gamma", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["raw"], json({1.0, 1.0}));
  EXPECT_EQ(j["normalized"], json({1.0, 1.0}));
  EXPECT_TRUE(j["normalize"].get<bool>());
}

TEST_F(CliTest, TrainEvaluatePredictPipeline) {
  make_model();
  auto r = run({"evaluate", "--model", path("model.ckpt"), "--test", path("test.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = json::parse(r.out);
  for (const char* k : {"accuracy", "precision", "recall", "f1", "tn", "fp", "fn", "tp"}) EXPECT_TRUE(m.contains(k)) << k;
  EXPECT_EQ(m["tn"].get<int>() + m["fp"].get<int>() + m["fn"].get<int>() + m["tp"].get<int>(), 120);

  r = run({"predict", "--model", path("model.ckpt"), "--text", "google"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p = json::parse(r.out);
  const double prob = p["probability"].get<double>();
  EXPECT_GE(prob, 0.0);
  EXPECT_LE(prob, 1.0);
  EXPECT_EQ(p["label"].get<int>(), prob >= 0.5 ? 1 : 0);

  r = run({"predict", "--model", path("model.ckpt"), "--text", "google", "--text", "xkqzvbwpjr"});
  ASSERT_EQ(r.code, 0);
  const auto arr = json::parse(r.out);
  ASSERT_TRUE(arr.is_array());
  EXPECT_EQ(arr.size(), 2u);
  EXPECT_EQ(arr[0], p);
}

TEST_F(CliTest, TrainLogsOneLinePerEpochOnStderr) {
  ASSERT_EQ(run({"gen-data", "--use-case", "dga", "--legit", "40", "--malicious", "40", "--out", path("t.csv")}).code, 0);
  const auto r = run({"train", "--train", path("t.csv"), "--epochs", "2", "--max-len", "24", "--preset", "dnn", "--out",
                      path("m.ckpt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("epoch 1/2 loss "), std::string::npos);
  EXPECT_NE(r.err.find("epoch 2/2 loss "), std::string::npos);
}

// Flipping every label maps (pred, y) to (pred, 1 - y): tp and fp trade
// places, as do tn and fn.
TEST_F(CliTest, FlippedLabelsSwapConfusionCells) {
  make_model();
  auto test = load_csv(path("test.csv"));
  for (auto& y : test.labels) y = 1 - y;
  save_csv(test, path("flipped.csv"));

  const auto a = json::parse(run({"evaluate", "--model", path("model.ckpt"), "--test", path("test.csv")}).out);
  const auto b = json::parse(run({"evaluate", "--model", path("model.ckpt"), "--test", path("flipped.csv")}).out);
  EXPECT_EQ(b["tp"], a["fp"]);
  EXPECT_EQ(b["fp"], a["tp"]);
  EXPECT_EQ(b["tn"], a["fn"]);
  EXPECT_EQ(b["fn"], a["tn"]);
  EXPECT_NEAR(b["accuracy"].get<double>(), 100.0 - a["accuracy"].get<double>(), 1e-9);
}

TEST_F(CliTest, UseCaseMismatchWarnsOnStderr) {
  make_model();
  const auto r = run({"evaluate", "--model", path("model.ckpt"), "--test", path("test.csv"), "--use-case", "url"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("trained for dga"), std::string::npos);
  json j;
  EXPECT_NO_THROW(j = json::parse(r.out));
}

TEST_F(CliTest, FlagsOverrideConfigOverridesDefaults) {
  ASSERT_EQ(run({"gen-data", "--use-case", "dga", "--legit", "30", "--malicious", "30", "--out", path("t.csv")}).code, 0);
  {
    std::ofstream f(path("cfg.json"));
    f << R"({"epochs": 2, "learning_rate": 0.005, "gamma": 0.5, "max_len": 20, "preset": "dnn"})";
  }
  ASSERT_EQ(run({"train", "--train", path("t.csv"), "--config", path("cfg.json"), "--epochs", "1", "--out",
                 path("m.ckpt")})
                .code,
            0);
  const auto ck = load(path("m.ckpt"));
  EXPECT_EQ(ck.history.size(), 1u);  // flag beat config
  EXPECT_EQ(ck.hyperparameters["learning_rate"].get<double>(), 0.005);
  EXPECT_EQ(ck.hyperparameters["gamma"].get<double>(), 0.5);
  EXPECT_EQ(ck.max_len, 20u);
  EXPECT_EQ(ck.preset, Preset::dnn);
  EXPECT_EQ(ck.hyperparameters["batch_size"].get<int>(), 64);  // default

  {
    std::ofstream f(path("bad.json"));
    f << R"({"epochz": 2})";
  }
  EXPECT_EQ(run({"train", "--train", path("t.csv"), "--config", path("bad.json"), "--out", path("m2.ckpt")}).code, 2);
  {
    std::ofstream f(path("typed.json"));
    f << R"({"epochs": "two"})";
  }
  EXPECT_EQ(run({"train", "--train", path("t.csv"), "--config", path("typed.json"), "--out", path("m2.ckpt")}).code, 2);
}

TEST_F(CliTest, NaiveBayesThroughTheCli) {
  make_model("naive_bayes");
  const auto ck = load(path("model.ckpt"));
  EXPECT_EQ(ck.kind, ModelKind::naive_bayes);
  const auto r = run({"evaluate", "--model", path("model.ckpt"), "--test", path("test.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(json::parse(r.out)["f1"].get<double>(), 80.0);
  EXPECT_EQ(run({"train", "--train", path("train.csv"), "--preset", "naive_bayes", "--alpha", "0", "--out",
                 path("nb0.ckpt")})
                .code,
            2);
}

TEST(Cli, GradcheckReportsPassAndExitsZero) {
  const auto r = run({"gradcheck", "--preset", "dnn"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  bool saw_preset = false;
  for (const auto& e : j["entries"]) {
    EXPECT_LT(e["max_rel_error"].get<double>(), 1e-4) << e["name"];
    saw_preset = saw_preset || e["name"] == "preset:dnn";
  }
  EXPECT_TRUE(saw_preset);
}
