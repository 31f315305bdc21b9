#include "flagdec/cli/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "flagdec/analysis/monitor.h"
#include "flagdec/dataset.h"
#include "flagdec/nn/nn_decoder.h"
#include "flagdec/nn/train.h"
#include "flagdec/rng.h"
#include "flagdec/seqlut.h"
#include "flagdec/xai/deepshap.h"
#include "flagdec/xai/lrp.h"
#include "json.hpp"

namespace flagdec::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed tags for independent streams derived from the run seed.
enum SeedTag : uint64_t {
  kTrainSplit = 1,
  kValidationSplit = 2,
  kTestSplit = 3,
  kEvalStream = 5,
  kBackgroundPick = 6,
  kMonitorStream = 7,
};

std::string decoder_dir(const RunConfig& c, const char* stage) {
  return (fs::path(c.out) / stage / decoder_name(c.decoder)).string();
}

void write_text(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("missing artifact " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ArtifactError("unreadable artifact " + path + ": " + e.what());
  }
}

void require_hash(uint64_t found, uint64_t expected, const std::string& what) {
  if (found != expected)
    throw ArtifactError(what + " was produced under config hash " + hex_hash(found) +
                        ", expected " + hex_hash(expected));
}

Dataset load_split(const RunConfig& c, const std::string& split) {
  const std::string path = dataset_path(c, split);
  if (!fs::exists(path)) throw ArtifactError("missing dataset " + path + " (run gen-data)");
  Dataset ds = read_dataset(path);
  require_hash(ds.header.config_hash, data_hash(c), path);
  return ds;
}

bool is_network(DecoderId d) { return d != DecoderId::Lut; }

nn::Checkpoint load_final(const RunConfig& c) {
  const std::string path = final_checkpoint_path(c);
  if (!fs::exists(path)) throw ArtifactError("missing checkpoint " + path + " (run train)");
  nn::Checkpoint ck = nn::load_checkpoint(path);
  require_hash(ck.config_hash, model_hash(c), path);
  return ck;
}

// Decoder under evaluation; the network decoder is kept alive by the returned closure.
Decoder make_decoder(const RunConfig& c, nn::NetworkSpec* spec_out = nullptr) {
  if (!is_network(c.decoder)) return seqlut_decoder();
  nn::Checkpoint ck = load_final(c);
  if (spec_out) *spec_out = ck.spec;
  return nn::NetworkDecoder(nn::network_from_checkpoint(ck)).as_decoder();
}

std::vector<int> eval_rounds(const RunConfig& c) {
  if (c.decoder == DecoderId::Dnn2) return {2};
  std::vector<int> r(static_cast<size_t>(c.eval.max_rounds));
  std::iota(r.begin(), r.end(), 1);
  return r;
}

constexpr int kDepCycles = 2;

json wilson_json(const WilsonInterval& w) {
  return {{"p_hat", w.p_hat}, {"p_min", w.p_min}, {"p_max", w.p_max}, {"sigma", w.sigma}};
}

json fit_json(const FitResult& f) {
  json j = {{"params", f.params}, {"covariance", f.covariance}, {"residual", f.residual},
            {"converged", f.converged}, {"message", f.message}};
  return j;
}

json curve_json(const LogicalErrorRate& r) {
  json inf = json::array();
  for (const auto& w : r.infidelity) inf.push_back(wilson_json(w));
  const double sigma = r.fit.params.empty() ? 0.0 : r.fit.stddev(0);
  return {{"p_ph", r.p_ph},
          {"basis", basis_name(r.basis)},
          {"shots_per_round", r.shots_per_round},
          {"rounds", r.rounds},
          {"failures", r.failures},
          {"infidelity", inf},
          {"p_L", r.p_l()},
          {"p_L_sigma", std::isfinite(sigma) ? json(sigma) : json(nullptr)},
          {"fit", fit_json(r.fit)}};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<size_t> background_indices(const RunConfig& c, size_t available) {
  std::vector<size_t> idx(available);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::mt19937_64 rng(derive_seed(c.seed, kBackgroundPick));
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min<size_t>(available, c.explain.background));
  return idx;
}

int pad_rows(const nn::NetworkSpec& spec, const RunConfig& c) {
  return spec.recurrent() ? effective_data(c).max_rounds : 0;
}

}  // namespace

std::string dataset_path(const RunConfig& c, const std::string& split) {
  return (fs::path(decoder_dir(c, "data")) / (split + ".fdds")).string();
}

std::string checkpoint_path(const RunConfig& c, uint64_t epoch) {
  char name[32];
  std::snprintf(name, sizeof name, "epoch_%04llu.fdck", static_cast<unsigned long long>(epoch));
  return (fs::path(decoder_dir(c, "model")) / name).string();
}

std::string final_checkpoint_path(const RunConfig& c) {
  return (fs::path(decoder_dir(c, "model")) / "final.fdck").string();
}

int cmd_gen_data(const RunConfig& c, std::ostream& log) {
  const DataConfig d = effective_data(c);
  const FrameSimulator sim;
  const struct {
    const char* name;
    SeedTag tag;
    uint64_t shots;
  } splits[] = {{"train", kTrainSplit, d.train_shots},
                {"validation", kValidationSplit, d.validation_shots},
                {"test", kTestSplit, d.test_shots}};
  for (const auto& s : splits) {
    GenerationSpec g;
    g.p_ph = d.p_ph;
    g.min_rounds = d.min_rounds;
    g.max_rounds = d.max_rounds;
    g.families = state_families(c.decoder);
    g.seed = derive_seed(c.seed, s.tag);
    g.shots = s.shots;
    g.config_hash = data_hash(c);
    const Dataset ds = generate_dataset(sim, g, c.threads);
    const std::string path = dataset_path(c, s.name);
    fs::create_directories(fs::path(path).parent_path());
    write_dataset(path, ds);
    size_t flips = 0;
    for (const auto& m : ds.samples) flips += m.label;
    log << s.name << ": " << ds.samples.size() << " samples, " << flips << " logical flips -> "
        << path << "\n";
  }
  write_text((fs::path(c.out) / "config.json").string(), dump_config(c));
  return kExitOk;
}

int cmd_train(const RunConfig& c, std::ostream& log) {
  if (!is_network(c.decoder)) {
    log << "the lut decoder has nothing to train\n";
    return kExitInvalidConfig;
  }
  const Dataset ds = load_split(c, "train");
  const nn::NetworkSpec spec = network_spec(c);
  const auto samples = nn::make_training_samples(spec, ds.samples);
  const Basis basis = decoder_basis(c.decoder);
  const uint64_t hash = model_hash(c);
  fs::create_directories(decoder_dir(c, "model"));
  std::ostringstream table;
  table << "# config_hash " << hex_hash(hash) << "\n# epoch mean_loss dep_failure\n";

  auto dep_of = [&](const nn::Checkpoint& ck) {
    nn::NetworkDecoder dec(nn::network_from_checkpoint(ck));
    return dep_failure_fraction(dec.as_decoder(), basis, FrameSimulator(), kDepCycles)
        .failure_fraction;
  };
  nn::save_checkpoint(checkpoint_path(c, 0), nn::Trainer(spec, training_config(c), hash).checkpoint());
  const auto cks = nn::train(spec, samples, training_config(c), hash,
                             [&](const nn::Checkpoint& ck, const nn::EpochStats& st) {
                               nn::save_checkpoint(checkpoint_path(c, ck.epoch), ck);
                               double dep = std::nan("");
                               if (c.training.stop_at_dep) dep = dep_of(ck);
                               table << st.epoch << " " << st.mean_loss << " " << dep << "\n";
                               log << "epoch " << st.epoch << " loss " << st.mean_loss;
                               if (c.training.stop_at_dep) log << " dep " << dep;
                               log << "\n";
                               return !(c.training.stop_at_dep && dep == 0.0);
                             });
  nn::save_checkpoint(final_checkpoint_path(c), cks.back());
  write_text((fs::path(decoder_dir(c, "model")) / "train_log.txt").string(), table.str());
  log << "final checkpoint (epoch " << cks.back().epoch << ") -> " << final_checkpoint_path(c) << "\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& c, std::ostream& log) {
  const Decoder dec = make_decoder(c);
  const Basis basis = decoder_basis(c.decoder);
  const auto rounds = eval_rounds(c);
  const uint64_t stream = derive_seed(c.seed, kEvalStream);
  json points = json::array();
  std::vector<double> ps, pls, sig;
  std::ostringstream table;
  table << "# decoder " << decoder_name(c.decoder) << " basis " << basis_name(basis)
        << " config_hash " << hex_hash(eval_hash(c)) << "\n# p_ph p_L p_L_sigma t0\n";
  for (size_t i = 0; i < c.noise_sweep.size(); ++i) {
    const double p = c.noise_sweep[i];
    const LogicalErrorRate r = logical_error_rate(NoiseModel(p), rounds, c.eval.shots,
                                                  derive_seed(stream, i), basis, dec, c.threads);
    points.push_back(curve_json(r));
    const double s = r.fit.params.empty() ? 0.0 : r.fit.stddev(0);
    table << p << " " << r.p_l() << " " << s << " " << (r.fit.params.size() > 1 ? r.fit.params[1] : 0.0)
          << "\n";
    log << "p_ph " << p << ": p_L = " << fmt(r.p_l()) << " +- " << fmt(s) << "\n";
    if (p <= c.eval.scaling_window_max && r.p_l() > 0.0) {
      ps.push_back(p);
      pls.push_back(r.p_l());
      sig.push_back(s);
    }
  }
  json scaling = nullptr;
  if (ps.size() >= 2) {
    bool weights = true;
    for (double s : sig) weights = weights && std::isfinite(s) && s > 0.0;
    const FitResult f = fit_scaling(ps, pls, weights ? sig : std::vector<double>{});
    scaling = {{"a", f.param(0)}, {"b", f.param(1)}, {"b_sigma", f.stddev(1)},
               {"window_max", c.eval.scaling_window_max}, {"points", ps.size()}};
    table << "# scaling a " << f.param(0) << " b " << f.param(1) << " +- " << f.stddev(1) << "\n";
    log << "scaling exponent b = " << fmt(f.param(1)) << " +- " << fmt(f.stddev(1)) << "\n";
  }
  const json out = {{"config_hash", hex_hash(eval_hash(c))},
                    {"decoder", decoder_name(c.decoder)},
                    {"basis", basis_name(basis)},
                    {"points", points},
                    {"scaling", scaling}};
  const fs::path dir = fs::path(c.out) / "eval";
  write_text((dir / (std::string(decoder_name(c.decoder)) + ".json")).string(), out.dump(2) + "\n");
  write_text((dir / (std::string(decoder_name(c.decoder)) + ".txt")).string(), table.str());
  return kExitOk;
}

int cmd_explain(const RunConfig& c, std::ostream& log) {
  if (!is_network(c.decoder)) {
    log << "explain needs a network decoder\n";
    return kExitInvalidConfig;
  }
  const nn::Checkpoint ck = load_final(c);
  const nn::Network net = nn::network_from_checkpoint(ck);
  const nn::NetworkSpec& spec = net.spec();
  const Dataset test = load_split(c, "test");
  const Dataset train = load_split(c, "train");
  const Basis basis = decoder_basis(c.decoder);
  const int head = nn::head_for_basis(spec, basis);
  const int pad = pad_rows(spec, c);

  xai::BackgroundSet bg;
  for (size_t i : background_indices(c, train.samples.size()))
    bg.samples.push_back(nn::encode_volume(spec, train.samples[i].volume, pad));
  const size_t n = std::min<size_t>(c.explain.samples, test.samples.size());
  std::vector<nn::NetworkInput> inputs;
  for (size_t i = 0; i < n; ++i) inputs.push_back(nn::encode_volume(spec, test.samples[i].volume, pad));

  std::vector<xai::Attribution> attrs;
  if (c.explain.method == "deepshap") {
    attrs = xai::deepshap_batch(net, inputs, bg, head, c.threads);
  } else if (c.explain.method == "exact") {
    std::map<std::pair<int, std::vector<double>>, xai::Attribution> cache;
    for (const auto& x : inputs) {
      auto key = std::make_pair(x.length, x.values);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, xai::exact_network_shapley(net, x, bg, head)).first;
      attrs.push_back(it->second);
    }
  } else {
    for (const auto& x : inputs) attrs.push_back(xai::lrp(net, x, {}, {}, head).attribution);
  }

  const std::string hash = hex_hash(eval_hash(c));
  std::ostringstream lines;
  for (size_t i = 0; i < attrs.size(); ++i) {
    const auto& a = attrs[i];
    const auto& vol = test.samples[i].volume;
    json phi = json::array(), input = json::array();
    for (int t = 0; t < a.rounds; ++t) {
      phi.push_back(std::vector<double>(a.phi.begin() + t * kChannels, a.phi.begin() + (t + 1) * kChannels));
      std::vector<int> row(kChannels);
      for (int ch = 0; ch < kChannels; ++ch) row[ch] = vol.at(t, ch);
      input.push_back(row);
    }
    lines << json{{"config_hash", hash}, {"id", i}, {"T", a.rounds},
                  {"basis", basis_name(test.samples[i].basis)}, {"method", c.explain.method},
                  {"phi0", a.phi0}, {"fx", a.fx}, {"phi", phi}, {"input", input}}
                 .dump()
          << "\n";
  }
  const fs::path dir = fs::path(c.out) / "explain";
  const std::string stem = decoder_name(c.decoder);
  write_text((dir / (stem + ".jsonl")).string(), lines.str());

  json summary = {{"config_hash", hash}, {"method", c.explain.method}, {"samples", attrs.size()},
                  {"background", bg.size()}, {"lag", c.explain.lag}, {"pooled_over_rounds", true}};
  try {
    const CorrelationReport rep = attribution_correlations(attrs, c.explain.lag);
    const HookSignatureSet hooks =
        derive_hook_signatures(basis == Basis::Z ? PauliType::X : PauliType::Z);
    const auto [hook, baseline] = hook_excess(rep, hooks);
    json m = json::array();
    for (int a = 0; a < kChannels; ++a)
      m.push_back(std::vector<double>(rep.matrix.begin() + a * kChannels,
                                      rep.matrix.begin() + (a + 1) * kChannels));
    summary["channels"] = [] {
      std::vector<std::string> v;
      for (int ch = 0; ch < kChannels; ++ch) v.push_back(channel_name(ch));
      return v;
    }();
    summary["correlation"] = m;
    summary["pairs"] = rep.pairs;
    summary["zero_variance_lead"] = rep.zero_variance_lead;
    summary["zero_variance_lag"] = rep.zero_variance_lag;
    summary["hook_lag"] = hooks.lag;
    summary["hook_mean"] = hook;
    summary["baseline_mean"] = baseline;
    log << "hook mean " << fmt(hook) << ", baseline mean " << fmt(baseline) << " at lag "
        << hooks.lag << "\n";
  } catch (const std::invalid_argument& e) {
    summary["correlation_error"] = e.what();
  }
  write_text((dir / (stem + "_summary.json")).string(), summary.dump(2) + "\n");
  log << attrs.size() << " attributions -> " << (dir / (stem + ".jsonl")).string() << "\n";
  return kExitOk;
}

int cmd_dep(const RunConfig& c, std::ostream& log) {
  const Decoder dec = make_decoder(c);
  std::vector<Basis> bases{decoder_basis(c.decoder)};
  if (c.decoder == DecoderId::Lut || c.decoder == DecoderId::Drnn) bases = {Basis::Z, Basis::X};
  json reports = json::array();
  bool failed = false;
  for (Basis b : bases) {
    const DepReport r = dep_failure_fraction(dec, b, FrameSimulator(), kDepCycles);
    reports.push_back({{"basis", basis_name(b)},
                       {"cycles", r.cycles},
                       {"locations", r.locations},
                       {"injections", r.injections},
                       {"failures", r.failures},
                       {"failure_fraction", r.failure_fraction}});
    log << "basis " << basis_name(b) << ": " << r.failures << "/" << r.injections
        << " single faults fail (" << fmt(r.failure_fraction) << ")\n";
    failed = failed || r.failures > 0;
  }
  const json out = {{"config_hash", hex_hash(is_network(c.decoder) ? model_hash(c) : data_hash(c))},
                    {"decoder", decoder_name(c.decoder)},
                    {"reports", reports},
                    {"fault_tolerant", !failed}};
  write_text((fs::path(c.out) / "dep" / (std::string(decoder_name(c.decoder)) + ".json")).string(),
             out.dump(2) + "\n");
  return failed ? kExitCheckFailed : kExitOk;
}

int cmd_monitor(const RunConfig& c, std::ostream& log) {
  if (!is_network(c.decoder)) {
    log << "monitor needs a network decoder\n";
    return kExitInvalidConfig;
  }
  std::vector<nn::Checkpoint> cks;
  for (uint64_t e = 0;; ++e) {
    const std::string path = checkpoint_path(c, e);
    if (!fs::exists(path)) break;
    cks.push_back(nn::load_checkpoint(path));
    require_hash(cks.back().config_hash, model_hash(c), path);
  }
  if (cks.empty()) throw ArtifactError("no checkpoints under " + decoder_dir(c, "model"));
  const Dataset val = load_split(c, "validation");
  const Dataset train = load_split(c, "train");
  std::vector<MemorySample> explain(val.samples.begin(),
                                    val.samples.begin() +
                                        static_cast<ptrdiff_t>(std::min<size_t>(c.explain.samples, val.samples.size())));
  std::vector<MemorySample> background;
  for (size_t i : background_indices(c, train.samples.size())) background.push_back(train.samples[i]);

  MonitorConfig mc;
  mc.noise_sweep = c.noise_sweep;
  mc.scaling_window_max = c.eval.scaling_window_max;
  mc.max_rounds = c.eval.max_rounds;
  mc.shots = c.eval.shots;
  mc.seed = derive_seed(c.seed, kMonitorStream);
  mc.basis = decoder_basis(c.decoder);
  mc.background_size = c.explain.background;
  mc.threads = c.threads;
  const auto rows = ft_monitor(cks, explain, background, mc);
  const CooccurrenceResult co = check_ft_cooccurrence(rows);

  const std::string hash = hex_hash(eval_hash(c));
  const fs::path dir = fs::path(c.out) / "monitor";
  const std::string stem = decoder_name(c.decoder);
  write_text((dir / (stem + ".txt")).string(),
             "# config_hash " + hash + "\n" + monitor_table(rows) + "# " + co.message + "\n");
  json jr = json::array();
  for (const auto& r : rows) {
    json curves = json::array();
    for (const auto& cv : r.curves) curves.push_back(curve_json(cv));
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    jr.push_back({{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"curves", curves},
                  {"b", num(r.b)}, {"b_sigma", num(r.b_sigma)}, {"dep_failure", r.dep_failure},
                  {"hook_mean", r.hook_mean}, {"baseline_mean", r.baseline_mean}});
  }
  const json out = {{"config_hash", hash},
                    {"decoder", stem},
                    {"epochs", jr},
                    {"cooccurrence",
                     {{"pass", co.pass}, {"ft_epoch", co.ft_epoch}, {"scaling_epoch", co.scaling_epoch},
                      {"divergence_epoch", co.divergence_epoch}, {"message", co.message}}}};
  write_text((dir / (stem + ".json")).string(), out.dump(2) + "\n");
  log << monitor_table(rows) << co.message << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& log) {
  const fs::path out_txt = fs::path(c.out) / "report.txt";
  const fs::path out_json = fs::path(c.out) / "report.json";
  std::ostringstream table;
  json decoders = json::array();
  if (c.noise_sweep.empty()) {
    write_text(out_txt.string(), "# empty noise sweep\n");
    write_text(out_json.string(), json{{"decoders", decoders}}.dump(2) + "\n");
    log << "empty noise sweep; nothing to report\n";
    return kExitOk;
  }
  struct Column {
    std::string name;
    std::map<double, std::pair<double, double>> pl;
    json scaling;
  };
  std::vector<Column> cols;
  for (DecoderId d : {DecoderId::Lut, DecoderId::SrnnX, DecoderId::SrnnZ, DecoderId::Drnn, DecoderId::Dnn2}) {
    RunConfig cd = c;
    cd.decoder = d;
    const fs::path path = fs::path(c.out) / "eval" / (std::string(decoder_name(d)) + ".json");
    if (!fs::exists(path)) continue;
    const json j = read_json(path.string());
    if (j.at("config_hash").get<std::string>() != hex_hash(eval_hash(cd)))
      throw ArtifactError(path.string() + " was produced under a different config");
    Column col{decoder_name(d), {}, j.at("scaling")};
    for (const auto& pt : j.at("points")) {
      const double s = pt.at("p_L_sigma").is_null() ? std::nan("") : pt.at("p_L_sigma").get<double>();
      col.pl[pt.at("p_ph").get<double>()] = {pt.at("p_L").get<double>(), s};
    }
    decoders.push_back({{"decoder", col.name}, {"points", j.at("points")}, {"scaling", col.scaling}});
    cols.push_back(std::move(col));
  }
  if (cols.empty()) throw ArtifactError("no evaluation artifacts under " + (fs::path(c.out) / "eval").string());
  table << "p_ph";
  for (const auto& col : cols) table << "\t" << col.name << " p_L";
  table << "\n";
  for (double p : c.noise_sweep) {
    table << fmt(p);
    for (const auto& col : cols) {
      auto it = col.pl.find(p);
      if (it == col.pl.end()) {
        table << "\t-";
      } else {
        table << "\t" << fmt(it->second.first) << " +- " << fmt(it->second.second);
      }
    }
    table << "\n";
  }
  table << "b";
  for (const auto& col : cols) {
    if (col.scaling.is_null()) {
      table << "\t-";
    } else {
      const json& bs = col.scaling.at("b_sigma");
      table << "\t" << fmt(col.scaling.at("b").get<double>()) << " +- "
            << (bs.is_null() ? std::string("nan") : fmt(bs.get<double>()));
    }
  }
  table << "\n";
  write_text(out_txt.string(), table.str());
  write_text(out_json.string(),
             json{{"config_hash", hex_hash(eval_hash(c))}, {"decoders", decoders}}.dump(2) + "\n");
  log << table.str();
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& c, std::ostream& log, std::ostream& err) {
  static const std::map<std::string, int (*)(const RunConfig&, std::ostream&)> table = {
      {"gen-data", cmd_gen_data}, {"train", cmd_train},     {"eval", cmd_eval},
      {"explain", cmd_explain},   {"dep", cmd_dep},         {"monitor", cmd_monitor},
      {"report", cmd_report}};
  auto it = table.find(name);
  if (it == table.end()) {
    err << "unknown subcommand " << name << "\n";
    return kExitInvalidConfig;
  }
  try {
    return it->second(c, log);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const ArtifactError& e) {
    err << "artifact error: " << e.what() << "\n";
    return kExitMissingArtifact;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
}

}  // namespace flagdec::cli
