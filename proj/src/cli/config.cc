#include "flagdec/cli/config.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "flagdec/dataset.h"
#include "flagdec/rng.h"
#include "json.hpp"

namespace flagdec::cli {

using nlohmann::json;

namespace {

constexpr const char* kDecoderNames[] = {"lut", "srnn-x", "srnn-z", "drnn", "dnn2"};

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

json data_json(const DataConfig& d) {
  return {{"p_ph", d.p_ph},
          {"min_rounds", d.min_rounds},
          {"max_rounds", d.max_rounds},
          {"train_shots", d.train_shots},
          {"validation_shots", d.validation_shots},
          {"test_shots", d.test_shots}};
}

json network_json(const NetworkConfig& n) {
  return {{"lstm_units", n.lstm_units},
          {"dense", n.dense},
          {"dropout", n.dropout},
          {"lstm_output", n.lstm_output}};
}

json training_json(const TrainingSection& t) {
  return {{"epochs", t.epochs},           {"batch_size", t.batch_size},
          {"learning_rate", t.learning_rate}, {"beta1", t.beta1},
          {"beta2", t.beta2},             {"epsilon", t.epsilon},
          {"forget_bias", t.forget_bias}, {"stop_at_dep", t.stop_at_dep}};
}

json eval_json(const EvalConfig& e) {
  return {{"shots", e.shots}, {"max_rounds", e.max_rounds},
          {"scaling_window_max", e.scaling_window_max}};
}

json explain_json(const ExplainConfig& e) {
  return {{"method", e.method}, {"samples", e.samples}, {"background", e.background},
          {"lag", e.lag}};
}

json to_json(const RunConfig& c) {
  return {{"seed", c.seed},
          {"out", c.out},
          {"decoder", decoder_name(c.decoder)},
          {"threads", c.threads},
          {"data", data_json(c.data)},
          {"noise_sweep", c.noise_sweep},
          {"network", network_json(c.network)},
          {"training", training_json(c.training)},
          {"eval", eval_json(c.eval)},
          {"explain", explain_json(c.explain)}};
}

}  // namespace

const char* decoder_name(DecoderId d) { return kDecoderNames[static_cast<int>(d)]; }

DecoderId decoder_from_name(const std::string& s) {
  for (int i = 0; i < 5; ++i)
    if (s == kDecoderNames[i]) return static_cast<DecoderId>(i);
  throw ConfigError("unknown decoder '" + s + "'");
}

void RunConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(data.p_ph >= 0.0 && data.p_ph <= 1.0, "data.p_ph must lie in [0, 1]");
  need(data.min_rounds >= 1 && data.min_rounds <= data.max_rounds,
       "data rounds need 1 <= min_rounds <= max_rounds");
  need(data.max_rounds <= 64, "data.max_rounds is limited to 64");
  for (double p : noise_sweep) need(p >= 0.0 && p <= 1.0, "noise_sweep entries must lie in [0, 1]");
  need(network.lstm_units >= 1, "network.lstm_units must be positive");
  for (int w : network.dense) need(w >= 1, "network.dense widths must be positive");
  need(network.dropout >= 0.0 && network.dropout < 1.0, "network.dropout must lie in [0, 1)");
  need(network.lstm_output == "tanh" || network.lstm_output == "relu",
       "network.lstm_output must be tanh or relu");
  need(training.epochs >= 0, "training.epochs must be non-negative");
  need(training.batch_size >= 1, "training.batch_size must be positive");
  need(training.learning_rate > 0.0, "training.learning_rate must be positive");
  need(training.beta1 >= 0.0 && training.beta1 < 1.0 && training.beta2 >= 0.0 &&
           training.beta2 < 1.0,
       "Adam betas must lie in [0, 1)");
  need(training.epsilon > 0.0, "training.epsilon must be positive");
  need(eval.max_rounds >= 1 && eval.max_rounds <= 64, "eval.max_rounds must lie in [1, 64]");
  need(eval.scaling_window_max > 0.0, "eval.scaling_window_max must be positive");
  need(explain.method == "deepshap" || explain.method == "exact" || explain.method == "lrp",
       "explain.method must be deepshap, exact or lrp");
  need(explain.background >= 1, "explain.background must be positive");
  need(threads >= 0, "threads must be non-negative");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  check_keys(j, {"seed", "out", "decoder", "threads", "data", "noise_sweep", "network", "training",
                 "eval", "explain"},
             "config");
  read(j, "seed", c.seed);
  read(j, "out", c.out);
  std::string dec = decoder_name(c.decoder);
  read(j, "decoder", dec);
  c.decoder = decoder_from_name(dec);
  read(j, "threads", c.threads);
  read(j, "noise_sweep", c.noise_sweep);
  if (j.contains("data")) {
    const json& d = j["data"];
    check_keys(d, {"p_ph", "min_rounds", "max_rounds", "train_shots", "validation_shots", "test_shots"},
               "data");
    read(d, "p_ph", c.data.p_ph);
    read(d, "min_rounds", c.data.min_rounds);
    read(d, "max_rounds", c.data.max_rounds);
    read(d, "train_shots", c.data.train_shots);
    read(d, "validation_shots", c.data.validation_shots);
    read(d, "test_shots", c.data.test_shots);
  }
  if (j.contains("network")) {
    const json& n = j["network"];
    check_keys(n, {"lstm_units", "dense", "dropout", "lstm_output"}, "network");
    read(n, "lstm_units", c.network.lstm_units);
    read(n, "dense", c.network.dense);
    read(n, "dropout", c.network.dropout);
    read(n, "lstm_output", c.network.lstm_output);
  }
  if (j.contains("training")) {
    const json& t = j["training"];
    check_keys(t, {"epochs", "batch_size", "learning_rate", "beta1", "beta2", "epsilon",
                   "forget_bias", "stop_at_dep"},
               "training");
    read(t, "epochs", c.training.epochs);
    read(t, "batch_size", c.training.batch_size);
    read(t, "learning_rate", c.training.learning_rate);
    read(t, "beta1", c.training.beta1);
    read(t, "beta2", c.training.beta2);
    read(t, "epsilon", c.training.epsilon);
    read(t, "forget_bias", c.training.forget_bias);
    read(t, "stop_at_dep", c.training.stop_at_dep);
  }
  if (j.contains("eval")) {
    const json& e = j["eval"];
    check_keys(e, {"shots", "max_rounds", "scaling_window_max"}, "eval");
    read(e, "shots", c.eval.shots);
    read(e, "max_rounds", c.eval.max_rounds);
    read(e, "scaling_window_max", c.eval.scaling_window_max);
  }
  if (j.contains("explain")) {
    const json& e = j["explain"];
    check_keys(e, {"method", "samples", "background", "lag"}, "explain");
    read(e, "method", c.explain.method);
    read(e, "samples", c.explain.samples);
    read(e, "background", c.explain.background);
    read(e, "lag", c.explain.lag);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

DataConfig effective_data(const RunConfig& c) {
  DataConfig d = c.data;
  if (c.decoder == DecoderId::Dnn2) d.min_rounds = d.max_rounds = 2;
  return d;
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t data_hash(const RunConfig& c) {
  const json j = {{"code", kCodeId},
                  {"seed", c.seed},
                  {"data", data_json(effective_data(c))},
                  {"families", static_cast<int>(c.decoder)}};
  return fnv1a64(j.dump());
}

uint64_t model_hash(const RunConfig& c) {
  const json j = {{"data", data_hash(c)},
                  {"decoder", decoder_name(c.decoder)},
                  {"network", network_json(c.network)},
                  {"training", training_json(c.training)}};
  return fnv1a64(j.dump());
}

uint64_t eval_hash(const RunConfig& c) {
  const json j = {{"model", model_hash(c)},
                  {"noise_sweep", c.noise_sweep},
                  {"eval", eval_json(c.eval)},
                  {"explain", explain_json(c.explain)}};
  return fnv1a64(j.dump());
}

std::string hex_hash(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nn::NetworkSpec network_spec(const RunConfig& c) {
  nn::ArchitectureWidths w;
  w.lstm = c.network.lstm_units;
  w.dense = c.network.dense;
  w.dropout = c.network.dropout;
  w.lstm_output = nn::activation_from_name(c.network.lstm_output);
  switch (c.decoder) {
    case DecoderId::SrnnX:
    case DecoderId::SrnnZ: return nn::srnn_spec(w);
    case DecoderId::Drnn: return nn::drnn_spec(w);
    case DecoderId::Dnn2: return nn::dnn2_spec(w);
    case DecoderId::Lut: break;
  }
  throw ConfigError("the lut decoder has no network");
}

nn::TrainingConfig training_config(const RunConfig& c) {
  nn::TrainingConfig t;
  t.batch_size = c.training.batch_size;
  t.epochs = c.training.epochs;
  t.adam.learning_rate = c.training.learning_rate;
  t.adam.beta1 = c.training.beta1;
  t.adam.beta2 = c.training.beta2;
  t.adam.epsilon = c.training.epsilon;
  t.seed = derive_seed(c.seed, 4);
  t.forget_bias = c.training.forget_bias;
  return t;
}

Basis decoder_basis(DecoderId d) { return d == DecoderId::SrnnZ ? Basis::X : Basis::Z; }

std::vector<std::pair<Basis, int>> state_families(DecoderId d) {
  switch (d) {
    case DecoderId::SrnnZ: return {{Basis::X, 0}, {Basis::X, 1}};
    case DecoderId::Drnn: return {{Basis::Z, 0}, {Basis::Z, 1}, {Basis::X, 0}, {Basis::X, 1}};
    default: return {{Basis::Z, 0}, {Basis::Z, 1}};
  }
}

}  // namespace flagdec::cli
