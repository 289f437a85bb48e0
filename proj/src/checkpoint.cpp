#include "costsense/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "costsense/errors.hpp"

namespace costsense {

using nlohmann::json;

std::string_view model_kind_name(ModelKind k) { return k == ModelKind::neural ? "neural" : "naive_bayes"; }

Model<float> Checkpoint::model() const {
  if (kind != ModelKind::neural) throw ContractError("checkpoint holds a naive bayes model, not a network");
  return Model<float>(make_spec(preset, vocab.size(), max_len, dims), params);
}

namespace {

constexpr double float_exact_limit = 16777216.0;  // 2^24

json dims_json(const PresetDims& d) {
  return {{"embed_dim", d.embed_dim},       {"dnn_units", d.dnn_units},           {"dnn_dropout", d.dnn_dropout},
          {"conv_filters", d.conv_filters}, {"conv_kernel", d.conv_kernel},       {"pool", d.pool},
          {"cnn_dense", d.cnn_dense},       {"cnn_dropout", d.cnn_dropout},       {"lstm_units", d.lstm_units},
          {"lstm_dropout", d.lstm_dropout}, {"cnn_lstm_units", d.cnn_lstm_units}};
}

PresetDims dims_from(const json& j) {
  PresetDims d;
  d.embed_dim = j.at("embed_dim").get<std::size_t>();
  d.dnn_units = j.at("dnn_units").get<std::vector<std::size_t>>();
  d.dnn_dropout = j.at("dnn_dropout").get<double>();
  d.conv_filters = j.at("conv_filters").get<std::size_t>();
  d.conv_kernel = j.at("conv_kernel").get<std::size_t>();
  d.pool = j.at("pool").get<std::size_t>();
  d.cnn_dense = j.at("cnn_dense").get<std::size_t>();
  d.cnn_dropout = j.at("cnn_dropout").get<double>();
  d.lstm_units = j.at("lstm_units").get<std::size_t>();
  d.lstm_dropout = j.at("lstm_dropout").get<double>();
  d.cnn_lstm_units = j.at("cnn_lstm_units").get<std::size_t>();
  return d;
}

json history_json(const std::vector<EpochRecord>& history) {
  json out = json::array();
  for (const auto& r : history) {
    json e = {{"epoch", r.epoch}, {"loss", r.mean_loss}};
    if (r.metrics) e["metrics"] = *r.metrics;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EpochRecord> history_from(const json& j) {
  std::vector<EpochRecord> out;
  for (const auto& e : j) {
    EpochRecord r;
    r.epoch = e.at("epoch").get<int>();
    r.mean_loss = e.at("loss").get<double>();
    if (e.contains("metrics")) r.metrics = e.at("metrics");
    out.push_back(std::move(r));
  }
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

void append_floats(std::string& out, std::span<const float> values) {
  for (float f : values) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    for (int b = 0; b < 4; ++b) out += static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
}

std::vector<float> read_floats(std::string_view bytes) {
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + b])) << (8 * b);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

struct Blob {
  std::string name;
  Shape shape;
  std::vector<float> values;
  bool trainable = true;
};

std::vector<Blob> neural_blobs(const Checkpoint& c) {
  std::vector<Blob> out;
  for (const auto& p : c.params) {
    out.push_back({p.name, p.value.shape(), {p.value.data().begin(), p.value.data().end()}, p.trainable});
  }
  return out;
}

std::vector<float> exact_floats(std::span<const double> counts, const char* what) {
  std::vector<float> out;
  out.reserve(counts.size());
  for (double n : counts) {
    if (!(n >= 0) || n > float_exact_limit || n != std::floor(n)) {
      throw ContractError(std::string("naive bayes ") + what + " count " + std::to_string(n) +
                          " cannot be stored exactly as float32");
    }
    out.push_back(static_cast<float>(n));
  }
  return out;
}

std::vector<Blob> nb_blobs(const NaiveBayesModel& m) {
  const std::array<double, 2> docs{static_cast<double>(m.doc_counts[0]), static_cast<double>(m.doc_counts[1])};
  std::vector<double> tokens(m.token_counts[0]);
  tokens.insert(tokens.end(), m.token_counts[1].begin(), m.token_counts[1].end());
  std::vector<Blob> out;
  out.push_back({"doc_counts", Shape{2}, exact_floats(docs, "document"), false});
  if (!m.vocabulary.empty()) {
    out.push_back({"token_counts", Shape{2, m.vocabulary.size()}, exact_floats(tokens, "token"), false});
  }
  return out;
}

[[noreturn]] void format_error(const std::string& what) { throw FormatError("checkpoint: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) format_error(std::string("header is missing '") + key + "'");
  return j.at(key);
}

}  // namespace

std::string serialize(const Checkpoint& c) {
  json header;
  header["format_version"] = checkpoint_format_version;
  header["kind"] = model_kind_name(c.kind);
  header["use_case"] = c.use_case ? json(use_case_name(*c.use_case)) : json(nullptr);
  header["hyperparameters"] = c.hyperparameters;
  header["history"] = history_json(c.history);

  std::vector<Blob> blobs;
  if (c.kind == ModelKind::neural) {
    header["preset"] = preset_name(c.preset);
    header["max_len"] = c.max_len;
    header["dims"] = dims_json(c.dims);
    json vocab = json::array({nullptr, nullptr});  // PAD, OOV
    for (char32_t ch : c.vocab.chars()) vocab.push_back(encode_utf8(ch));
    header["vocab"] = std::move(vocab);
    blobs = neural_blobs(c);
  } else {
    header["naive_bayes"] = {{"alpha", c.nb.alpha}, {"n_lo", c.nb.n_lo}, {"n_hi", c.nb.n_hi},
                             {"vocabulary", c.nb.vocabulary}};
    blobs = nb_blobs(c.nb);
  }

  std::string payload;
  json manifest = json::array();
  for (const auto& b : blobs) {
    const std::size_t offset = payload.size();
    append_floats(payload, b.values);
    manifest.push_back({{"name", b.name},
                        {"shape", b.shape},
                        {"offset", offset},
                        {"length", payload.size() - offset},
                        {"trainable", b.trainable}});
  }
  header["weights"] = std::move(manifest);
  header["blob_bytes"] = payload.size();
  header["blob_fnv1a"] = hex64(fnv1a(payload));

  std::string out = header.dump();
  out += '\0';
  out += payload;
  return out;
}

Checkpoint deserialize(std::string_view bytes) {
  const auto nul = bytes.find('\0');
  if (nul == std::string_view::npos) format_error("no header terminator");
  json header;
  try {
    header = json::parse(bytes.substr(0, nul));
  } catch (const json::exception& e) {
    format_error(std::string("header is not valid JSON: ") + e.what());
  }
  const auto payload = bytes.substr(nul + 1);

  Checkpoint c;
  try {
    const auto& version = field(header, "format_version");
    if (!version.is_number_integer() || version.get<int>() != checkpoint_format_version) {
      throw VersionError("checkpoint: unsupported format_version " + version.dump() + " (this build reads " +
                         std::to_string(checkpoint_format_version) + ")");
    }
    const auto kind = field(header, "kind").get<std::string>();
    if (kind == "neural") {
      c.kind = ModelKind::neural;
    } else if (kind == "naive_bayes") {
      c.kind = ModelKind::naive_bayes;
    } else {
      format_error("unknown model kind '" + kind + "'");
    }
    const auto& uc = field(header, "use_case");
    if (!uc.is_null()) c.use_case = parse_use_case(uc.get<std::string>());
    c.hyperparameters = field(header, "hyperparameters");
    c.history = history_from(field(header, "history"));

    // manifest and shapes first, then byte counts, then contents
    std::vector<std::pair<std::string, Shape>> expected;
    if (c.kind == ModelKind::neural) {
      c.preset = parse_preset(field(header, "preset").get<std::string>());
      c.max_len = field(header, "max_len").get<std::size_t>();
      c.dims = dims_from(field(header, "dims"));
      const auto& vocab = field(header, "vocab");
      if (!vocab.is_array() || vocab.size() < 2 || !vocab[0].is_null() || !vocab[1].is_null()) {
        format_error("vocab must start with PAD and OOV placeholders");
      }
      std::vector<char32_t> chars;
      for (std::size_t i = 2; i < vocab.size(); ++i) {
        const auto decoded = decode_utf8(vocab[i].get<std::string>());
        if (decoded.size() != 1) format_error("vocab entry " + std::to_string(i) + " is not a single character");
        chars.push_back(decoded[0]);
      }
      c.vocab = CharVocabulary::from_chars(std::move(chars));
      expected = parameter_manifest(make_spec(c.preset, c.vocab.size(), c.max_len, c.dims));
    } else {
      const auto& nb = field(header, "naive_bayes");
      c.nb.alpha = field(nb, "alpha").get<double>();
      c.nb.n_lo = field(nb, "n_lo").get<int>();
      c.nb.n_hi = field(nb, "n_hi").get<int>();
      c.nb.vocabulary = field(nb, "vocabulary").get<std::vector<std::string>>();
      if (!std::is_sorted(c.nb.vocabulary.begin(), c.nb.vocabulary.end()) ||
          std::adjacent_find(c.nb.vocabulary.begin(), c.nb.vocabulary.end()) != c.nb.vocabulary.end()) {
        format_error("naive bayes vocabulary must be sorted and unique");
      }
      expected.emplace_back("doc_counts", Shape{2});
      if (!c.nb.vocabulary.empty()) expected.emplace_back("token_counts", Shape{2, c.nb.vocabulary.size()});
    }

    const auto& manifest = field(header, "weights");
    if (!manifest.is_array() || manifest.size() != expected.size()) {
      throw ShapeMismatchError("checkpoint: manifest lists " + std::to_string(manifest.size()) +
                               " tensors, the model needs " + std::to_string(expected.size()));
    }
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& m = manifest[i];
      const auto name = field(m, "name").get<std::string>();
      const auto shape = field(m, "shape").get<Shape>();
      if (name != expected[i].first || shape != expected[i].second) {
        throw ShapeMismatchError("checkpoint: tensor " + std::to_string(i) + " is " + name + " " + shape_str(shape) +
                                 ", expected " + expected[i].first + " " + shape_str(expected[i].second));
      }
      const auto offset = field(m, "offset").get<std::size_t>();
      const auto length = field(m, "length").get<std::size_t>();
      if (offset != cursor || length != 4 * shape_numel(shape)) {
        throw ShapeMismatchError("checkpoint: byte range of " + name + " does not match its shape");
      }
      cursor += length;
    }
    const auto blob_bytes = field(header, "blob_bytes").get<std::size_t>();
    if (blob_bytes != cursor) format_error("blob_bytes disagrees with the manifest");
    if (payload.size() < blob_bytes) {
      throw TruncatedBlobError("checkpoint: weight data is " + std::to_string(payload.size()) + " bytes, expected " +
                               std::to_string(blob_bytes));
    }
    if (payload.size() > blob_bytes) format_error("trailing bytes after weight data");
    if (field(header, "blob_fnv1a").get<std::string>() != hex64(fnv1a(payload))) {
      format_error("weight data checksum mismatch");
    }

    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& m = manifest[i];
      const auto offset = m.at("offset").get<std::size_t>();
      const auto length = m.at("length").get<std::size_t>();
      auto values = read_floats(payload.substr(offset, length));
      Tensor<float> t(expected[i].second, std::move(values));
      if (!t.all_finite()) format_error("non-finite value in " + expected[i].first);
      if (c.kind == ModelKind::neural) {
        c.params.add(expected[i].first, std::move(t), m.at("trainable").get<bool>());
      } else if (expected[i].first == "doc_counts") {
        c.nb.doc_counts = {static_cast<std::int64_t>(t[0]), static_cast<std::int64_t>(t[1])};
      } else {
        const std::size_t v = c.nb.vocabulary.size();
        for (int k = 0; k < 2; ++k) {
          c.nb.token_counts[k].assign(t.data().begin() + static_cast<std::ptrdiff_t>(k * v),
                                      t.data().begin() + static_cast<std::ptrdiff_t>((k + 1) * v));
        }
      }
    }
    if (c.kind == ModelKind::naive_bayes) {
      for (auto& counts : c.nb.token_counts) counts.resize(c.nb.vocabulary.size());
      nb_refresh(c.nb);
    } else {
      c.model();  // final consistency check
    }
  } catch (const LoadError&) {
    throw;
  } catch (const json::exception& e) {
    format_error(std::string("malformed header: ") + e.what());
  } catch (const Error& e) {
    format_error(e.what());
  }
  return c;
}

void save(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = serialize(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

Checkpoint load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace costsense
