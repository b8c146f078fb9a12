#include "semiret/checkpoint.hpp"

#include <fstream>

#include "semiret/errors.hpp"

namespace semiret {

using nlohmann::json;

json config_to_json(const EncoderConfig& c) {
  return json{{"num_layers", c.num_layers},   {"hidden_dim", c.hidden_dim},
              {"num_heads", c.num_heads},     {"ffn_dim", c.ffn_dim},
              {"max_seq_len", c.max_seq_len}, {"vocab_size", c.vocab_size},
              {"dropout_rate", c.dropout_rate}, {"init_std", c.init_std}};
}

EncoderConfig config_from_json(const json& j) {
  EncoderConfig c;
  c.num_layers = j.value("num_layers", c.num_layers);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.num_heads = j.value("num_heads", c.num_heads);
  c.ffn_dim = j.value("ffn_dim", c.ffn_dim);
  c.max_seq_len = j.value("max_seq_len", c.max_seq_len);
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.dropout_rate = j.value("dropout_rate", c.dropout_rate);
  c.init_std = j.value("init_std", c.init_std);
  c.validate();
  return c;
}

json encoder_to_json(const EncoderModel& model, const std::string& prefix) {
  json params = json::array();
  for (const auto& p : model.parameters()) {
    params.push_back(json{{"name", prefix + p.name},
                          {"rows", p.value.rows()},
                          {"cols", p.value.cols()},
                          {"data", std::vector<double>(p.value.values().begin(),
                                                       p.value.values().end())}});
  }
  return params;
}

void encoder_params_from_json(const json& params, EncoderModel& model, const std::string& prefix) {
  for (auto& p : model.parameters()) {
    const std::string want = prefix + p.name;
    const json* found = nullptr;
    for (const auto& entry : params) {
      if (entry.at("name").get<std::string>() == want) {
        found = &entry;
        break;
      }
    }
    if (!found) throw FormatError("checkpoint is missing parameter '" + want + "'");
    const auto rows = found->at("rows").get<std::size_t>();
    const auto cols = found->at("cols").get<std::size_t>();
    if (rows != p.value.rows() || cols != p.value.cols()) {
      throw FormatError("parameter '" + want + "' has shape " + std::to_string(rows) + "x" +
                        std::to_string(cols) + ", expected " + std::to_string(p.value.rows()) +
                        "x" + std::to_string(p.value.cols()));
    }
    p.value = Matrix(rows, cols, found->at("data").get<std::vector<double>>());
  }
}

json checkpoint_to_json(const InteractiveModel& model) {
  return json{{"version", kCheckpointVersion},
              {"kind", "interactive"},
              {"mechanism", to_string(Mechanism::kInteractive)},
              {"n_relevant", 0},
              {"config", config_to_json(model.encoder.config())},
              {"vocabulary", model.vocab->tokens()},
              {"parameters", encoder_to_json(model.encoder)}};
}

json checkpoint_to_json(const DualModel& model) {
  json params = encoder_to_json(model.query_encoder, "query.");
  for (auto& p : encoder_to_json(model.document_encoder, "document.")) params.push_back(p);
  return json{{"version", kCheckpointVersion},
              {"kind", "dual"},
              {"mechanism", to_string(model.mode)},
              {"n_relevant", model.n_relevant},
              {"config", config_to_json(model.query_encoder.config())},
              {"vocabulary", model.vocab->tokens()},
              {"parameters", std::move(params)}};
}

namespace {

std::shared_ptr<const Vocabulary> vocab_from_json(const json& j) {
  return std::make_shared<const Vocabulary>(
      Vocabulary::from_tokens(j.at("vocabulary").get<std::vector<std::string>>()));
}

}  // namespace

AnyModel checkpoint_from_json(const json& j) {
  if (j.value("version", std::string()) != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version '" + j.value("version", std::string()) + "'");
  }
  const EncoderConfig cfg = config_from_json(j.at("config"));
  auto vocab = vocab_from_json(j);
  const std::string kind = j.at("kind").get<std::string>();
  const json& params = j.at("parameters");
  if (kind == "interactive") {
    InteractiveModel model{vocab, EncoderModel(cfg, true)};
    encoder_params_from_json(params, model.encoder);
    return model;
  }
  if (kind == "dual") {
    DualModel model{vocab, EncoderModel(cfg, false), EncoderModel(cfg, false),
                    parse_mechanism(j.at("mechanism").get<std::string>()),
                    j.at("n_relevant").get<std::size_t>()};
    encoder_params_from_json(params, model.query_encoder, "query.");
    encoder_params_from_json(params, model.document_encoder, "document.");
    model.validate();
    return model;
  }
  throw FormatError("unknown checkpoint kind '" + kind + "'");
}

void save_checkpoint(const AnyModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write checkpoint " + path.string());
  const json j = std::visit([](const auto& m) { return checkpoint_to_json(m); }, model);
  out << j.dump() << '\n';
}

AnyModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open checkpoint " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

InteractiveModel load_interactive(const std::filesystem::path& path) {
  auto any = load_checkpoint(path);
  if (auto* m = std::get_if<InteractiveModel>(&any)) return std::move(*m);
  throw ConfigError(path.string() + " is not an interactive checkpoint");
}

DualModel load_dual(const std::filesystem::path& path) {
  auto any = load_checkpoint(path);
  if (auto* m = std::get_if<DualModel>(&any)) return std::move(*m);
  throw ConfigError(path.string() + " is not a dual-encoder checkpoint");
}

}  // namespace semiret
