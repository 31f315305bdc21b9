#include "flagdec/nn/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "flagdec/nn/loss.h"

namespace flagdec::nn {

std::vector<TrainingSample> make_training_samples(const NetworkSpec& spec,
                                                  std::span<const MemorySample> samples) {
  std::vector<TrainingSample> out;
  out.reserve(samples.size());
  const bool dual = spec.output_size() >= 2;
  for (const MemorySample& s : samples) {
    TrainingSample t;
    t.input = encode_volume(spec, s.volume);
    const int head = dual ? head_for_basis(spec, s.basis) : 0;
    t.label[head] = s.label;
    t.mask = static_cast<uint8_t>(1u << head);
    out.push_back(std::move(t));
  }
  return out;
}

Trainer::Trainer(const NetworkSpec& spec, const TrainingConfig& config, uint64_t config_hash)
    : net_(spec), config_(config), config_hash_(config_hash), rng_(config.seed) {
  if (config.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (spec.layers.back().activation != Activation::Sigmoid)
    throw std::invalid_argument("training needs sigmoid outputs");
  net_.initialize(rng_, config.forget_bias);
  adam_.config = config.adam;
  adam_.reset(net_.parameter_count());
}

Trainer::Trainer(const Checkpoint& from, const TrainingConfig& config)
    : net_(from.spec), config_(config), config_hash_(from.config_hash) {
  if (from.parameters.size() != net_.parameter_count())
    throw std::invalid_argument("checkpoint does not match its spec");
  net_.parameters() = from.parameters;
  adam_ = from.adam;
  std::istringstream is(from.rng_state);
  is >> rng_;
  if (!is) throw std::invalid_argument("corrupt rng state in checkpoint");
  epoch_ = from.epoch;
  last_loss_ = from.train_loss;
}

EpochStats Trainer::run_epoch(std::span<const TrainingSample> data) {
  if (data.empty()) throw std::invalid_argument("training set is empty");
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::shuffle(order.begin(), order.end(), rng_);

  const size_t P = net_.parameter_count();
  const size_t heads = static_cast<size_t>(net_.spec().output_size());
  std::vector<double> grad(P), dlogit(heads);
  ForwardCache cache;
  EpochStats stats;
  double loss_sum = 0.0;
  const size_t bs = static_cast<size_t>(config_.batch_size);
  for (size_t start = 0; start < order.size(); start += bs) {
    const size_t end = std::min(order.size(), start + bs);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (size_t k = start; k < end; ++k) {
      const TrainingSample& s = data[order[k]];
      const auto& q = net_.forward(s.input, Mode::Train, &rng_, cache);
      std::span<const double> labels(s.label.data(), heads);
      loss_sum += masked_bce_loss(labels, s.mask, q);
      masked_bce_logit_gradient(labels, s.mask, q, dlogit);
      for (size_t h = 0; h < heads && h < 2; ++h) stats.head_gradient_l1[h] += std::abs(dlogit[h]);
      net_.backward(cache, dlogit, true, grad, {});
    }
    const double inv = 1.0 / static_cast<double>(end - start);
    for (double& g : grad) g *= inv;
    adam_update(adam_, net_.parameters(), grad);
  }
  ++epoch_;
  stats.epoch = epoch_;
  stats.mean_loss = loss_sum / static_cast<double>(data.size());
  last_loss_ = stats.mean_loss;
  return stats;
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint c;
  c.epoch = epoch_;
  c.config_hash = config_hash_;
  c.spec = net_.spec();
  c.parameters = net_.parameters();
  c.adam = adam_;
  std::ostringstream os;
  os << rng_;
  c.rng_state = os.str();
  c.train_loss = last_loss_;
  return c;
}

std::vector<Checkpoint> train(
    const NetworkSpec& spec, std::span<const TrainingSample> data, const TrainingConfig& config,
    uint64_t config_hash, const std::function<bool(const Checkpoint&, const EpochStats&)>& on_epoch) {
  if (data.empty()) throw std::invalid_argument("training set is empty");
  Trainer trainer(spec, config, config_hash);
  std::vector<Checkpoint> out{trainer.checkpoint()};
  for (int e = 0; e < config.epochs; ++e) {
    EpochStats stats = trainer.run_epoch(data);
    out.push_back(trainer.checkpoint());
    if (on_epoch && !on_epoch(out.back(), stats)) break;
  }
  return out;
}

Network network_from_checkpoint(const Checkpoint& c) {
  Network net(c.spec);
  if (c.parameters.size() != net.parameter_count())
    throw std::invalid_argument("checkpoint does not match its spec");
  net.parameters() = c.parameters;
  return net;
}

}  // namespace flagdec::nn
