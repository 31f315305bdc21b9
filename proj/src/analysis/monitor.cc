#include "flagdec/analysis/monitor.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <tuple>

#include "flagdec/nn/nn_decoder.h"
#include "flagdec/nn/train.h"
#include "flagdec/rng.h"
#include "flagdec/xai/deepshap.h"

namespace flagdec {

namespace {

std::vector<nn::NetworkInput> encode_all(const nn::NetworkSpec& spec,
                                         std::span<const MemorySample> samples, int pad) {
  std::vector<nn::NetworkInput> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(nn::encode_volume(spec, s.volume, pad));
  return out;
}

int max_rounds_of(std::span<const MemorySample> samples) {
  int m = 1;
  for (const auto& s : samples) m = std::max(m, s.volume.size());
  return m;
}

}  // namespace

std::vector<MonitorRow> ft_monitor(std::span<const nn::Checkpoint> checkpoints,
                                   std::span<const MemorySample> explain,
                                   std::span<const MemorySample> background,
                                   const MonitorConfig& config) {
  const PauliType error_type = config.basis == Basis::Z ? PauliType::X : PauliType::Z;
  const FrameSimulator sim;
  const HookSignatureSet hooks = derive_hook_signatures(error_type, sim);
  std::vector<MonitorRow> rows;
  for (const auto& ck : checkpoints) {
    MonitorRow row;
    row.epoch = ck.epoch;
    row.train_loss = ck.train_loss;
    nn::Network net = nn::network_from_checkpoint(ck);
    const nn::NetworkSpec& spec = net.spec();
    const int head = nn::head_for_basis(spec, config.basis);
    nn::NetworkDecoder decoder(net);
    const Decoder dec = decoder.as_decoder();
    std::vector<int> rounds;
    if (spec.recurrent()) {
      for (int t = 1; t <= config.max_rounds; ++t) rounds.push_back(t);
    } else {
      rounds.push_back(spec.flatten_rounds);
    }

    std::vector<double> ps, pls, sig;
    bool positive = true;
    for (size_t i = 0; i < config.noise_sweep.size(); ++i) {
      const double p = config.noise_sweep[i];
      LogicalErrorRate c = logical_error_rate(NoiseModel(p), rounds, config.shots,
                                              derive_seed(config.seed, i), config.basis, dec,
                                              config.threads, sim);
      if (p <= config.scaling_window_max) {
        ps.push_back(p);
        pls.push_back(c.p_l());
        sig.push_back(c.fit.params.empty() ? 0.0 : c.fit.stddev(0));
        positive = positive && c.p_l() > 0.0;
      }
      row.curves.push_back(std::move(c));
    }
    row.b = std::numeric_limits<double>::quiet_NaN();
    row.b_sigma = std::numeric_limits<double>::quiet_NaN();
    if (positive && ps.size() >= 2) {
      bool usable_sigma = true;
      for (double s : sig) usable_sigma = usable_sigma && s > 0.0 && std::isfinite(s);
      row.scaling = fit_scaling(ps, pls, usable_sigma ? sig : std::vector<double>{});
      row.b = row.scaling.param(1);
      row.b_sigma = row.scaling.stddev(1);
    }

    row.dep_failure = dep_failure_fraction(dec, config.basis, sim,
                                           spec.recurrent() ? config.dep_cycles : spec.flatten_rounds).failure_fraction;

    if (!explain.empty() && !background.empty()) {
      const int pad = spec.recurrent() ? std::max(max_rounds_of(explain), max_rounds_of(background)) : 0;
      xai::BackgroundSet bg;
      const size_t nb = std::min(config.background_size, background.size());
      bg.samples = encode_all(spec, background.subspan(0, nb), pad);
      const auto inputs = encode_all(spec, explain, pad);
      const auto attrs = xai::deepshap_batch(net, inputs, bg, head, config.threads);
      const CorrelationReport rep = attribution_correlations(attrs, hooks.lag);
      std::tie(row.hook_mean, row.baseline_mean) = hook_excess(rep, hooks);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CooccurrenceResult check_ft_cooccurrence(std::span<const MonitorRow> rows, int window,
                                         double b_tolerance, double divergence_margin) {
  CooccurrenceResult r;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (r.ft_epoch < 0 && rows[i].dep_failure == 0.0) r.ft_epoch = static_cast<int>(rows[i].epoch);
    if (r.divergence_epoch < 0 && rows[i].hook_mean - rows[i].baseline_mean > divergence_margin)
      r.divergence_epoch = static_cast<int>(rows[i].epoch);
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    bool stays = true;
    for (size_t j = i; j < rows.size(); ++j)
      stays = stays && std::isfinite(rows[j].b) && std::abs(rows[j].b - 2.0) <= b_tolerance;
    if (stays) {
      r.scaling_epoch = static_cast<int>(rows[i].epoch);
      break;
    }
  }
  std::ostringstream msg;
  msg << "ft_epoch=" << r.ft_epoch << " scaling_epoch=" << r.scaling_epoch
      << " divergence_epoch=" << r.divergence_epoch;
  if (r.ft_epoch < 0 || r.scaling_epoch < 0 || r.divergence_epoch < 0) {
    msg << " (a track never reached its target)";
  } else {
    const bool together = std::abs(r.ft_epoch - r.scaling_epoch) <= window;
    const bool before = r.divergence_epoch < std::min(r.ft_epoch, r.scaling_epoch);
    r.pass = together && before;
    if (!together) msg << " (DEP and scaling epochs differ by more than " << window << ")";
    if (!before) msg << " (hook correlations did not diverge first)";
  }
  r.message = msg.str();
  return r;
}

std::string monitor_table(std::span<const MonitorRow> rows) {
  std::ostringstream out;
  out << "# epoch train_loss";
  if (!rows.empty())
    for (const auto& c : rows.front().curves) out << " pL@" << c.p_ph;
  out << " b b_sigma dep_failure hook_mean baseline_mean\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.epoch;
    std::snprintf(buf, sizeof buf, " %.6g", r.train_loss);
    out << buf;
    for (const auto& c : r.curves) {
      std::snprintf(buf, sizeof buf, " %.6g", c.p_l());
      out << buf;
    }
    for (double v : {r.b, r.b_sigma, r.dep_failure, r.hook_mean, r.baseline_mean}) {
      std::snprintf(buf, sizeof buf, " %.6g", v);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace flagdec
