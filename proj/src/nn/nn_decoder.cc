#include "flagdec/nn/nn_decoder.h"

#include <mutex>
#include <string>
#include <unordered_map>

namespace flagdec::nn {

struct NetworkDecoder::State {
  explicit State(Network n) : net(std::move(n)) {}
  Network net;
  std::mutex mu;
  std::unordered_map<std::string, double> memo;
};

NetworkDecoder::NetworkDecoder(Network net) : state_(std::make_shared<State>(std::move(net))) {}

double NetworkDecoder::probability(const MemorySample& s) const {
  std::string key(1, static_cast<char>(s.basis));
  key.append(reinterpret_cast<const char*>(s.volume.rounds.data()),
             s.volume.rounds.size() * sizeof(uint16_t));
  {
    std::lock_guard<std::mutex> lock(state_->mu);
    auto it = state_->memo.find(key);
    if (it != state_->memo.end()) return it->second;
  }
  const Network& net = state_->net;
  const auto out = net.predict(encode_volume(net.spec(), s.volume));
  const double p = out[static_cast<size_t>(head_for_basis(net.spec(), s.basis))];
  std::lock_guard<std::mutex> lock(state_->mu);
  state_->memo.emplace(std::move(key), p);
  return p;
}

const Network& NetworkDecoder::network() const { return state_->net; }

Decoder NetworkDecoder::as_decoder() const {
  NetworkDecoder copy = *this;
  return [copy](const MemorySample& s) { return copy.predict(s); };
}

}  // namespace flagdec::nn
