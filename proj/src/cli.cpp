#include "costsense/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "costsense/errors.hpp"
#include "costsense/gradcheck_suite.hpp"
#include "costsense/trainer.hpp"

namespace costsense::cli {

using nlohmann::json;

namespace {

constexpr double gradcheck_tolerance = 1e-4;

struct GenArgs {
  std::string use_case;
  std::int64_t legit = 0;
  std::int64_t malicious = 0;
  std::uint64_t seed = 1;
  std::string split = "train";
  std::string out;
};

struct WeightsArgs {
  std::string train;
  std::string manifest;
  double gamma = 1.0;
  bool raw = false;
};

struct TrainArgs {
  std::string train;
  std::string out;
  std::string config;
  std::string use_case;
  std::string preset = "cnn";
  double gamma = 1.0;
  int epochs = 100;
  double lr = 0.01;
  std::uint64_t seed = 1;
  std::size_t batch_size = 64;
  std::size_t max_len = 0;  // 0: default for the use case
  bool raw_weights = false;
  std::string eval;
  int eval_every = 0;
  double alpha = 1.0;
  int ngram_lo = 1;
  int ngram_hi = 2;
};

struct EvalArgs {
  std::string model;
  std::string test;
  std::string use_case;
};

struct PredictArgs {
  std::string model;
  std::vector<std::string> texts;
};

struct GradArgs {
  std::string preset;
};

std::optional<UseCase> opt_use_case(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_use_case(s);
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config " + path + " must hold a JSON object");
  return cfg;
}

// Flags given on the command line win; otherwise a value from --config;
// otherwise the built-in default already in the struct.
void merge_config(TrainArgs& a, const CLI::App& sub, const json& cfg) {
  std::set<std::string> known;
  auto take = [&](const char* key, const char* flag, auto& var) {
    known.insert(key);
    if (sub.get_option(flag)->count() > 0 || !cfg.contains(key)) return;
    try {
      var = cfg.at(key).get<std::decay_t<decltype(var)>>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  };
  take("preset", "--preset", a.preset);
  take("use_case", "--use-case", a.use_case);
  take("gamma", "--gamma", a.gamma);
  take("epochs", "--epochs", a.epochs);
  take("learning_rate", "--lr", a.lr);
  take("seed", "--seed", a.seed);
  take("batch_size", "--batch-size", a.batch_size);
  take("max_len", "--max-len", a.max_len);
  take("eval_every", "--eval-every", a.eval_every);
  take("alpha", "--alpha", a.alpha);
  take("ngram_lo", "--ngram-lo", a.ngram_lo);
  take("ngram_hi", "--ngram-hi", a.ngram_hi);
  known.insert("normalize_weights");
  if (sub.get_option("--raw-weights")->count() == 0 && cfg.contains("normalize_weights")) {
    if (!cfg["normalize_weights"].is_boolean()) throw ConfigError("config key 'normalize_weights' must be a boolean");
    a.raw_weights = !cfg["normalize_weights"].get<bool>();
  }
  for (const auto& [key, _] : cfg.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  auto g = GeneratorConfig::defaults(parse_use_case(a.use_case));
  g.n_legit = a.legit;
  g.n_malicious = a.malicious;
  g.seed = a.seed;
  g.split = parse_split(a.split);
  const auto data = gen_synthetic(g);
  if (a.out.empty()) {
    out << to_csv(data);
  } else {
    save_csv(data, a.out);
  }
  return 0;
}

int cmd_weights(const WeightsArgs& a, std::ostream& out) {
  std::array<std::int64_t, 2> counts{};
  if (!a.train.empty()) {
    counts = class_counts(load_csv(a.train));
  } else {
    counts = corpus_manifest(parse_use_case(a.manifest)).train;
  }
  const auto w = compute_class_weights({counts[0], counts[1]}, a.gamma, !a.raw);
  json j{{"counts", w.counts}, {"gamma", w.gamma},         {"raw", w.raw},
         {"normalized", w.normalized}, {"normalize", w.normalize}, {"effective", w.effective()}};
  out << j.dump() << '\n';
  return 0;
}

int cmd_train(TrainArgs a, const CLI::App& sub, std::ostream& err) {
  if (!a.config.empty()) merge_config(a, sub, read_config(a.config));
  const auto use_case = opt_use_case(a.use_case);
  auto data = load_csv(a.train, Split::train, use_case);

  Checkpoint ckpt;
  if (a.preset == "naive_bayes") {
    ckpt = train_naive_bayes(data, {a.alpha, a.ngram_lo, a.ngram_hi});
  } else {
    TrainConfig c;
    c.preset = parse_preset(a.preset);
    c.gamma = a.gamma;
    c.epochs = a.epochs;
    c.learning_rate = a.lr;
    c.seed = a.seed;
    c.batch_size = a.batch_size;
    c.max_len = a.max_len > 0 ? a.max_len : (use_case ? default_max_len(*use_case) : 100);
    c.normalize_weights = !a.raw_weights;
    c.eval_every = a.eval_every;
    validate(c);

    std::optional<LabeledDataset> eval_set;
    TrainOptions opts;
    if (!a.eval.empty()) {
      eval_set = load_csv(a.eval, Split::test, use_case);
      opts.eval_set = &*eval_set;
      if (c.eval_every == 0) c.eval_every = 1;
    } else if (c.eval_every > 0) {
      throw ConfigError("--eval-every needs --eval");
    }
    opts.on_epoch = [&](const EpochRecord& r) {
      err << "epoch " << r.epoch << '/' << c.epochs << " loss " << std::setprecision(6) << r.mean_loss;
      if (r.metrics) err << ' ' << r.metrics->dump();
      err << std::endl;
    };
    ckpt = train(data, c, opts);
  }
  save(ckpt, a.out);
  err << "saved " << model_kind_name(ckpt.kind) << " model to " << a.out << '\n';
  return 0;
}

int cmd_evaluate(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto ckpt = load(a.model);
  const auto data = load_csv(a.test, Split::test, opt_use_case(a.use_case));
  const auto ev = evaluate(ckpt, data);
  for (const auto& w : ev.warnings) err << w << '\n';
  out << ev.metrics.dump() << '\n';
  return 0;
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const auto ckpt = load(a.model);
  const auto preds = predict(ckpt, a.texts);
  auto one = [](const Prediction& p) { return json{{"probability", p.probability}, {"label", p.label}}; };
  if (preds.size() == 1) {
    out << one(preds[0]).dump() << '\n';
  } else {
    json arr = json::array();
    for (const auto& p : preds) arr.push_back(one(p));
    out << arr.dump() << '\n';
  }
  return 0;
}

int cmd_gradcheck(const GradArgs& a, std::ostream& out) {
  std::optional<Preset> only;
  if (!a.preset.empty()) only = parse_preset(a.preset);
  const auto entries = run_gradcheck_suite(only);
  bool all = true;
  json arr = json::array();
  for (const auto& e : entries) {
    const bool ok = e.max_rel_error < gradcheck_tolerance;
    all = all && ok;
    arr.push_back({{"name", e.name}, {"max_rel_error", e.max_rel_error}, {"coordinates", e.coordinates}, {"pass", ok}});
  }
  out << json{{"entries", arr}, {"tolerance", gradcheck_tolerance}, {"pass", all}}.dump() << '\n';
  return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Character-level cost-sensitive sequence classification", "costsense"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a seeded synthetic labelled corpus as CSV");
  gen_cmd->add_option("--use-case", gen.use_case, "dga, email or url")->required();
  gen_cmd->add_option("--legit", gen.legit, "Number of legitimate samples")->required();
  gen_cmd->add_option("--malicious", gen.malicious, "Number of malicious samples")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--split", gen.split, "train or test; the two never share a text")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV (stdout when omitted)");

  WeightsArgs wts;
  auto* w_cmd = app.add_subcommand("weights", "Print the per-class loss weights for a class distribution");
  auto* w_train = w_cmd->add_option("--train", wts.train, "Training CSV to count classes from");
  auto* w_man = w_cmd->add_option("--manifest", wts.manifest, "Use the full-size corpus counts of dga, email or url");
  w_train->excludes(w_man);
  w_cmd->add_option("--gamma", wts.gamma, "Cost exponent in [0, 1]")->capture_default_str();
  w_cmd->add_flag("--raw", wts.raw, "Report unnormalized weights as effective");

  TrainArgs tr;
  auto* t_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  t_cmd->add_option("--train", tr.train, "Training CSV")->required();
  t_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
  t_cmd->add_option("--config", tr.config, "JSON file of defaults; flags override it");
  t_cmd->add_option("--use-case", tr.use_case, "dga, email or url; sets the default max length");
  t_cmd->add_option("--preset", tr.preset, "dnn, cnn, lstm, cnn_lstm or naive_bayes")->capture_default_str();
  t_cmd->add_option("--gamma", tr.gamma, "Cost exponent in [0, 1]; 0 trains cost-insensitively")
      ->capture_default_str();
  t_cmd->add_option("--epochs", tr.epochs, "Training epochs")->capture_default_str();
  t_cmd->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str();
  t_cmd->add_option("--seed", tr.seed, "Initialisation, shuffling and dropout seed")->capture_default_str();
  t_cmd->add_option("--batch-size", tr.batch_size, "Minibatch size")->capture_default_str();
  t_cmd->add_option("--max-len", tr.max_len, "Sequence length (default 100, or 500 for email)");
  t_cmd->add_flag("--raw-weights", tr.raw_weights, "Use unnormalized class weights in the loss");
  t_cmd->add_option("--eval", tr.eval, "CSV to evaluate on during training");
  t_cmd->add_option("--eval-every", tr.eval_every, "Evaluate every K epochs (default 1 with --eval)");
  t_cmd->add_option("--alpha", tr.alpha, "naive_bayes: additive smoothing")->capture_default_str();
  t_cmd->add_option("--ngram-lo", tr.ngram_lo, "naive_bayes: shortest character n-gram")->capture_default_str();
  t_cmd->add_option("--ngram-hi", tr.ngram_hi, "naive_bayes: longest character n-gram")->capture_default_str();

  EvalArgs ev;
  auto* e_cmd = app.add_subcommand("evaluate", "Score a checkpoint on a labelled CSV");
  e_cmd->add_option("--model", ev.model, "Checkpoint path")->required();
  e_cmd->add_option("--test", ev.test, "Labelled CSV")->required();
  e_cmd->add_option("--use-case", ev.use_case, "Declare the data's use case to check it against the model");

  PredictArgs pr;
  auto* p_cmd = app.add_subcommand("predict", "Classify one or more strings");
  p_cmd->add_option("--model", pr.model, "Checkpoint path")->required();
  p_cmd->add_option("--text", pr.texts, "Text to classify (repeatable)")->required();

  GradArgs gc;
  auto* g_cmd = app.add_subcommand("gradcheck", "Compare analytic and finite-difference gradients");
  g_cmd->add_option("--preset", gc.preset, "Only check this preset");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (w_cmd->parsed() && wts.train.empty() && wts.manifest.empty()) {
      throw CLI::RequiredError("--train or --manifest");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (w_cmd->parsed()) return cmd_weights(wts, out);
    if (t_cmd->parsed()) return cmd_train(tr, *t_cmd, err);
    if (e_cmd->parsed()) return cmd_evaluate(ev, out, err);
    if (p_cmd->parsed()) return cmd_predict(pr, out);
    if (g_cmd->parsed()) return cmd_gradcheck(gc, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(args, out, err);
}

}  // namespace costsense::cli
