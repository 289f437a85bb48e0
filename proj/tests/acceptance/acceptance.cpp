// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
//
//   costsense_acceptance [--only 1,4,7] [--allow-fail 3] [--report PATH]
//
// Exit status is 0 only when every selected criterion passes, ignoring
// criteria named in --allow-fail. Those still print FAIL.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "../nb_oracle.hpp"
#include "../reference_tables.hpp"
#include "costsense/cli.hpp"
#include "costsense/errors.hpp"
#include "costsense/gradcheck_suite.hpp"
#include "costsense/trainer.hpp"

using namespace costsense;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double printed_tolerance = 0.1;     // criterion 1
constexpr double sweep_tolerance = 0.2;       // criterion 2
constexpr int imbalance_seeds = 5;            // criterion 3
constexpr int imbalance_required_wins = 4;
constexpr double imbalance_budget_s = 15 * 60;
constexpr double ratio_rel_tol = 4 * 2.220446049250313e-16;  // criterion 4: a few roundings of 1/n
constexpr double normalization_rel_tol = 1e-9;
constexpr double gradcheck_tol = 1e-4;        // criterion 5
constexpr double gradcheck_budget_s = 120;
constexpr double nb_oracle_tol = 1e-12;       // criterion 6
constexpr double adam_first_step_tol = 1e-6;  // criterion 7
constexpr double adam_target = 0.05;
constexpr double smoke_min_f1 = 95.0;         // criterion 9
constexpr double smoke_budget_s = 10 * 60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome metric_arithmetic() {
  struct Case {
    const char* name;
    ConfusionMatrix cm;
    double acc, prec, rec, f1;
  };
  const Case cases[] = {{"email naive bayes", {8122, 31, 5855, 4851}, 68.8, 99.4, 45.3, 62.2},
                        {"url random forest", {1095, 47, 125, 453}, 90.0, 90.6, 78.4, 84.0}};
  Outcome o{true, ""};
  for (const auto& c : cases) {
    const auto s = scores(c.cm);
    const double err = std::max({std::abs(s.accuracy - c.acc), std::abs(s.precision - c.prec),
                                 std::abs(s.recall - c.rec), std::abs(s.f1 - c.f1)});
    o.pass = o.pass && err <= printed_tolerance;
    o.detail += fmt("%s %.2f/%.2f/%.2f/%.2f (max dev %.3f); ", c.name, s.accuracy, s.precision, s.recall, s.f1, err);
  }
  return o;
}

Outcome table_sweep() {
  double worst = 0;
  int checked = 0, skipped = 0;
  std::string worst_row;
  for (const auto& r : test_support::reference_rows()) {
    if (!r.consistent) {
      ++skipped;
      continue;
    }
    ++checked;
    const auto s = scores(ConfusionMatrix{r.tn, r.fp, r.fn, r.tp});
    for (double d : {std::abs(s.accuracy - r.accuracy), std::abs(s.precision - r.precision),
                     std::abs(s.recall - r.recall)}) {
      if (d > worst) {
        worst = d;
        worst_row = std::string(r.use_case) + " " + std::string(r.model) + (r.cost_sensitive ? " (cost-sensitive)" : "");
      }
    }
  }
  return {worst <= sweep_tolerance,
          fmt("%d rows checked, %d flagged rows skipped, max deviation %.3f (%s)", checked, skipped, worst,
              worst_row.c_str())};
}

Outcome imbalance_benchmark() {
  const auto t0 = Clock::now();
  std::vector<double> diffs;
  int wins = 0;
  std::string detail;
  for (int seed = 1; seed <= imbalance_seeds; ++seed) {
    auto g = GeneratorConfig::defaults(UseCase::dga);
    g.seed = static_cast<std::uint64_t>(seed);
    g.n_legit = 10000;
    g.n_malicious = 500;
    const auto train_set = gen_synthetic(g);
    g.n_legit = 1000;
    g.n_malicious = 1000;
    g.split = Split::test;
    const auto test_set = gen_synthetic(g);

    double recall[2];
    for (int k = 0; k < 2; ++k) {
      TrainConfig c;
      c.preset = Preset::cnn;
      c.epochs = 10;
      c.gamma = k == 0 ? 0.0 : 1.0;
      c.seed = static_cast<std::uint64_t>(seed);
      c.max_len = default_max_len(UseCase::dga);
      recall[k] = scores(evaluate(train(train_set, c), test_set).confusion).recall;
    }
    const double d = recall[1] - recall[0];
    diffs.push_back(d);
    if (recall[1] >= recall[0]) ++wins;
    detail += fmt("seed %d recall %.1f->%.1f; ", seed, recall[0], recall[1]);
    std::fprintf(stderr, "  [3] seed %d: gamma 0 recall %.2f, gamma 1 recall %.2f (%.0fs elapsed)\n", seed, recall[0],
                 recall[1], seconds_since(t0));
  }
  std::sort(diffs.begin(), diffs.end());
  const double median = diffs[diffs.size() / 2];
  const double elapsed = seconds_since(t0);
  detail += fmt("wins %d/%d, median diff %+.2f, %.0fs", wins, imbalance_seeds, median, elapsed);
  return {wins >= imbalance_required_wins && median > 0 && elapsed < imbalance_budget_s, detail};
}

Outcome weight_exactness() {
  bool ok = true;
  std::string detail;
  const std::vector<std::array<std::int64_t, 2>> count_sets{
      {10000, 500}, {38276, 53052}, {19337, 24665}, {23374, 11116}, {1, 1000000}, {3, 7}};
  double worst_ratio = 0, worst_sum = 0;
  for (const auto& n : count_sets) {
    const auto w0 = compute_class_weights({n[0], n[1]}, 0.0, true);
    ok = ok && w0.raw == std::vector<double>{1.0, 1.0} && w0.normalized == std::vector<double>{1.0, 1.0};
    const auto w1 = compute_class_weights({n[0], n[1]}, 1.0, true);
    const double want = static_cast<double>(n[0]) / static_cast<double>(n[1]);
    for (const auto* table : {&w1.raw, &w1.normalized}) {
      worst_ratio = std::max(worst_ratio, std::abs((*table)[1] / (*table)[0] - want) / want);
    }
    for (double gamma : {0.0, 0.3, 0.5, 1.0}) {
      const auto w = compute_class_weights({n[0], n[1]}, gamma, true);
      const double total = static_cast<double>(n[0] + n[1]);
      const double sum = static_cast<double>(n[0]) * w.normalized[0] + static_cast<double>(n[1]) * w.normalized[1];
      worst_sum = std::max(worst_sum, std::abs(sum - total) / total);
    }
  }
  ok = ok && worst_ratio <= ratio_rel_tol && worst_sum <= normalization_rel_tol;
  detail += fmt("gamma 0 gives [1,1]: %s; ratio rel err %.2e; sum n*w rel err %.2e; ", ok ? "yes" : "no", worst_ratio,
                worst_sum);

  auto g = GeneratorConfig::defaults(UseCase::dga);
  g.n_legit = 120;
  g.n_malicious = 30;
  g.seed = 4;
  const auto data = gen_synthetic(g);
  TrainConfig c;
  c.epochs = 3;
  c.gamma = 0.0;
  c.max_len = 40;
  const auto a = train(data, c);
  TrainOptions unit;
  unit.weights_override = ClassWeights{{120, 30}, 0.0, {1.0, 1.0}, {1.0, 1.0}, true};
  const auto b = train(data, c, unit);
  const bool same = a.history == b.history && a.params == b.params;
  detail += fmt("gamma 0 history and weights bit-identical to unit weights: %s", same ? "yes" : "no");
  return {ok && same, detail};
}

Outcome gradient_integrity() {
  const auto t0 = Clock::now();
  const auto entries = run_gradcheck_suite();
  const double elapsed = seconds_since(t0);
  double worst = 0;
  std::string worst_name;
  int presets = 0;
  for (const auto& e : entries) {
    if (e.name.rfind("preset:", 0) == 0) ++presets;
    if (e.max_rel_error >= worst) {
      worst = e.max_rel_error;
      worst_name = e.name;
    }
  }
  return {worst < gradcheck_tol && presets == 4 && elapsed < gradcheck_budget_s,
          fmt("%zu entries (%d presets), worst %.2e at %s, %.1fs", entries.size(), presets, worst, worst_name.c_str(),
              elapsed)};
}

// Every corpus of 2 or 3 documents, each document 0-2 tokens over {a..e},
// every labelling with both classes present; every query of 0-2 tokens plus
// an unseen token.
Outcome naive_bayes_oracle() {
  std::vector<std::string> pieces{""};
  const std::string alphabet = "abcde";
  for (char a : alphabet) {
    pieces.emplace_back(1, a);
    for (char b : alphabet) pieces.push_back(std::string{a, b});
  }
  std::vector<std::string> queries{"z", "az"};
  queries.insert(queries.end(), pieces.begin(), pieces.end());
  std::vector<NgramCounts> piece_counts, query_counts;
  for (const auto& p : pieces) piece_counts.push_back(ngram_counts(p, 1, 1));
  for (const auto& q : queries) query_counts.push_back(ngram_counts(q, 1, 1));

  double worst = 0;
  std::size_t corpora = 0, predictions = 0;
  const std::size_t P = pieces.size();
  for (std::size_t n = 2; n <= 3; ++n) {
    const std::size_t combos = n == 2 ? P * P : P * P * P;
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<std::size_t> idx;
      for (std::size_t c = code, d = 0; d < n; ++d, c /= P) idx.push_back(c % P);
      std::vector<std::string> texts;
      std::vector<NgramCounts> docs;
      for (auto i : idx) {
        texts.push_back(pieces[i]);
        docs.push_back(piece_counts[i]);
      }
      for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> labels;
        for (std::size_t d = 0; d < n; ++d) labels.push_back(static_cast<int>((mask >> d) & 1u));
        const double alpha = (code + mask) % 2 ? 1.0 : 0.25;
        NaiveBayesModel m;
        try {
          m = nb_train(docs, labels, alpha);
        } catch (const DataError&) {
          continue;  // every document empty: nothing to estimate
        }
        ++corpora;
        for (std::size_t q = 0; q < queries.size(); ++q) {
          const double expected = test_support::oracle_p_malicious(texts, labels, alpha, queries[q]);
          worst = std::max(worst, std::abs(nb_predict(m, query_counts[q]).p_malicious - expected));
          ++predictions;
        }
      }
    }
  }
  return {worst < nb_oracle_tol,
          fmt("%zu corpora, %zu posteriors, max abs error %.2e", corpora, predictions, worst)};
}

Outcome adam_reference() {
  Tensor<float> theta = Tensor<float>::scalar(1.0f);
  std::vector<Tensor<float>*> params{&theta};
  auto state = AdamState<float>::fresh(params);
  adam_step(params, {Tensor<float>::scalar(1.0f)}, state, 0.01);
  const double first = theta.item();

  Tensor<double> q = Tensor<double>::scalar(1.0);
  std::vector<Tensor<double>*> qp{&q};
  auto qs = AdamState<double>::fresh(qp);
  for (int i = 0; i < 200; ++i) adam_step(qp, {Tensor<double>::scalar(q.item())}, qs, 0.01);  // d/dθ θ²/2
  return {std::abs(first - 0.99) <= adam_first_step_tol && std::abs(q.item()) < adam_target,
          fmt("first step %.8f, |theta| after 200 steps %.4f", first, std::abs(q.item()))};
}

template <typename E>
bool throws_exactly(const std::string& bytes) {
  try {
    (void)deserialize(bytes);
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

Outcome determinism_and_persistence(const fs::path& dir) {
  auto g = GeneratorConfig::defaults(UseCase::dga);
  g.n_legit = 100;
  g.n_malicious = 100;
  g.seed = 8;
  const auto data = gen_synthetic(g);
  bool det = true, reload = true;
  for (auto preset : {Preset::dnn, Preset::cnn, Preset::lstm, Preset::cnn_lstm}) {
    TrainConfig c;
    c.preset = preset;
    c.epochs = 2;
    c.max_len = 24;
    c.dims = PresetDims::tiny();
    const auto a = train(data, c);
    const auto b = train(data, c);
    det = det && serialize(a) == serialize(b);

    const auto path = dir / ("model_" + std::string(preset_name(preset)) + ".ckpt");
    save(a, path);
    const auto back = load(path);
    const auto p0 = predict(a, data.texts);
    const auto p1 = predict(back, data.texts);
    for (std::size_t i = 0; i < p0.size(); ++i) reload = reload && p0[i].probability == p1[i].probability;
  }
  const auto nb = train_naive_bayes(data, {});
  det = det && serialize(nb) == serialize(train_naive_bayes(data, {}));
  save(nb, dir / "nb.ckpt");
  const auto nb_back = load(dir / "nb.ckpt");
  const auto q0 = predict(nb, data.texts), q1 = predict(nb_back, data.texts);
  for (std::size_t i = 0; i < q0.size(); ++i) reload = reload && q0[i].probability == q1[i].probability;

  TrainConfig c;
  c.epochs = 1;
  c.max_len = 24;
  c.dims = PresetDims::tiny();
  const auto bytes = serialize(train(data, c));
  const auto header_end = bytes.find('\0');
  std::string flipped = bytes;
  flipped[header_end + 5] = static_cast<char>(flipped[header_end + 5] ^ 0x40);
  std::string versioned = bytes;
  versioned.replace(versioned.find("\"format_version\":1"), 18, "\"format_version\":7");
  auto header = json::parse(bytes.substr(0, header_end));
  header["max_len"] = 40;  // changes the flattened width feeding the dense layer
  const std::string reshaped = header.dump() + '\0' + bytes.substr(header_end + 1);

  const bool typed = throws_exactly<TruncatedBlobError>(bytes.substr(0, bytes.size() - 3)) &&
                     throws_exactly<FormatError>(flipped) && throws_exactly<VersionError>(versioned) &&
                     throws_exactly<ShapeMismatchError>(reshaped) && throws_exactly<FormatError>("garbage") &&
                     throws_exactly<FormatError>(bytes + "x");
  return {det && reload && typed, fmt("bit-identical retrain: %s; save/load/predict identical: %s; typed errors: %s",
                                      det ? "yes" : "no", reload ? "yes" : "no", typed ? "yes" : "no")};
}

Outcome end_to_end(const fs::path& dir) {
  const auto t0 = Clock::now();
  const auto p = [&](const char* name) { return (dir / name).string(); };
  std::ostringstream out, err;
  auto run = [&](std::vector<std::string> args) {
    out.str("");
    err.str("");
    return cli::run(args, out, err);
  };
  if (run({"gen-data", "--use-case", "dga", "--legit", "2000", "--malicious", "2000", "--seed", "1", "--out",
           p("train.csv")}) != 0 ||
      run({"gen-data", "--use-case", "dga", "--legit", "2000", "--malicious", "2000", "--seed", "1", "--split", "test",
           "--out", p("test.csv")}) != 0) {
    return {false, "gen-data failed: " + err.str()};
  }
  if (run({"train", "--train", p("train.csv"), "--use-case", "dga", "--preset", "cnn", "--epochs", "5", "--out",
           p("model.ckpt")}) != 0) {
    return {false, "train failed: " + err.str()};
  }
  const std::string log = err.str();
  if (run({"evaluate", "--model", p("model.ckpt"), "--test", p("test.csv"), "--use-case", "dga"}) != 0) {
    return {false, "evaluate failed: " + err.str()};
  }
  const auto m = json::parse(out.str());
  const double f1 = m["f1"].get<double>();
  const double elapsed = seconds_since(t0);
  const auto hist = load(p("model.ckpt")).history;
  return {f1 >= smoke_min_f1 && elapsed < smoke_budget_s,
          fmt("F1 %.2f (accuracy %.2f), loss %.4f -> %.4f over %zu epochs, %.0fs", f1, m["accuracy"].get<double>(),
              hist.front().mean_loss, hist.back().mean_loss, hist.size(), elapsed)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks, one PASS/FAIL line per criterion"};
  std::vector<int> only, allowed;
  std::string report;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 9));
  app.add_option("--allow-fail", allowed, "Criteria whose failure does not affect the exit status")
      ->delimiter(',')
      ->check(CLI::Range(1, 9));
  app.add_option("--report", report, "Also write the result lines to this file");
  CLI11_PARSE(app, argc, argv);

  const auto dir = fs::temp_directory_path() / "costsense_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"metric arithmetic on published counts", metric_arithmetic},
      {"table-wide oracle sweep", table_sweep},
      {"synthetic 20:1 imbalance, gamma 1 vs gamma 0 recall", imbalance_benchmark},
      {"class weight exactness", weight_exactness},
      {"gradient integrity", gradient_integrity},
      {"naive bayes oracle equivalence", naive_bayes_oracle},
      {"adam reference steps", adam_reference},
      {"determinism and persistence", [&] { return determinism_and_persistence(dir); }},
      {"end-to-end smoke", [&] { return end_to_end(dir); }},
  };

  std::ostringstream lines;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const bool tolerated = std::find(allowed.begin(), allowed.end(), id) != allowed.end();
    if (!o.pass && !tolerated) ++failed;
    const std::string line = fmt("criterion %d %s: %s", id, o.pass ? "PASS" : (tolerated ? "FAIL (known)" : "FAIL"),
                                 criteria[i].first) +
                             " | " + o.detail;
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    lines << line << '\n';
  }
  fs::remove_all(dir);
  if (!report.empty()) std::ofstream(report) << lines.str();
  return failed == 0 ? 0 : 1;
}
