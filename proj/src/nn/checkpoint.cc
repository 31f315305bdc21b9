#include "flagdec/nn/checkpoint.h"

#include <cstring>
#include <stdexcept>

#include "flagdec/binary_io.h"
#include "flagdec/nn/network.h"

namespace flagdec::nn {

namespace {

constexpr char kMagic[4] = {'F', 'D', 'C', 'K'};

void put_tensor(ByteWriter& w, const std::string& name, std::vector<uint64_t> shape,
                const double* data) {
  w.put_string(name);
  w.put<uint32_t>(static_cast<uint32_t>(shape.size()));
  size_t count = 1;
  for (uint64_t d : shape) {
    w.put<uint64_t>(d);
    count *= d;
  }
  for (size_t i = 0; i < count; ++i) w.put<double>(data[i]);
}

std::vector<double> get_tensor(ByteReader& r, const std::string& name,
                               const std::vector<uint64_t>& shape) {
  if (r.get_string() != name) throw std::runtime_error("checkpoint tensor order mismatch: " + name);
  const uint32_t nd = r.get<uint32_t>();
  if (nd != shape.size()) throw std::runtime_error("checkpoint tensor rank mismatch: " + name);
  size_t count = 1;
  for (uint64_t d : shape) {
    if (r.get<uint64_t>() != d) throw std::runtime_error("checkpoint tensor shape mismatch: " + name);
    count *= d;
  }
  std::vector<double> out(count);
  for (double& v : out) v = r.get<double>();
  return out;
}

struct TensorLayout {
  std::string name;
  std::vector<uint64_t> shape;
  size_t offset;
};

std::vector<TensorLayout> layout(const NetworkSpec& spec) {
  Network net(spec);
  std::vector<TensorLayout> out;
  for (size_t li = 0; li < net.layers().size(); ++li) {
    const LayerInfo& l = net.layers()[li];
    const std::string p = "layer" + std::to_string(li) + ".";
    if (l.kind == LayerKind::Lstm) {
      const uint64_t n4 = 4 * l.out;
      out.push_back({p + "kernel", {l.in, n4}, l.offset});
      out.push_back({p + "recurrent_kernel", {l.out, n4}, l.offset + l.in * n4});
      out.push_back({p + "bias", {n4}, l.offset + l.in * n4 + l.out * n4});
    } else if (l.kind == LayerKind::Dense) {
      out.push_back({p + "kernel", {l.in, l.out}, l.offset});
      out.push_back({p + "bias", {l.out}, l.offset + l.in * l.out});
    }
  }
  return out;
}

}  // namespace

bool operator==(const Checkpoint& a, const Checkpoint& b) {
  auto same_bits = [](const std::vector<double>& x, const std::vector<double>& y) {
    return x.size() == y.size() &&
           (x.empty() || std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
  };
  return a.epoch == b.epoch && a.config_hash == b.config_hash && a.spec == b.spec &&
         same_bits(a.parameters, b.parameters) && same_bits(a.adam.m, b.adam.m) &&
         same_bits(a.adam.v, b.adam.v) && a.adam.step == b.adam.step &&
         a.adam.config.learning_rate == b.adam.config.learning_rate &&
         a.adam.config.beta1 == b.adam.config.beta1 && a.adam.config.beta2 == b.adam.config.beta2 &&
         a.adam.config.epsilon == b.adam.config.epsilon && a.rng_state == b.rng_state &&
         std::memcmp(&a.train_loss, &b.train_loss, sizeof(double)) == 0;
}

std::string serialize_checkpoint(const Checkpoint& c) {
  ByteWriter w;
  w.put_raw(kMagic, 4);
  w.put<uint32_t>(kCheckpointVersion);
  w.put<uint64_t>(c.epoch);
  w.put<uint64_t>(c.config_hash);
  w.put<double>(c.train_loss);

  const NetworkSpec& s = c.spec;
  w.put_string(s.name);
  w.put<uint32_t>(static_cast<uint32_t>(s.input_channels.size()));
  for (int ch : s.input_channels) w.put<int32_t>(ch);
  w.put<int32_t>(s.flatten_rounds);
  w.put<uint32_t>(static_cast<uint32_t>(s.layers.size()));
  for (const LayerSpec& l : s.layers) {
    w.put<uint8_t>(static_cast<uint8_t>(l.kind));
    w.put<int32_t>(l.units);
    w.put<uint8_t>(static_cast<uint8_t>(l.activation));
    w.put<uint8_t>(l.return_sequences ? 1 : 0);
    w.put<double>(l.rate);
  }

  const auto tensors = layout(s);
  w.put<uint32_t>(static_cast<uint32_t>(tensors.size()));
  for (const auto& t : tensors) put_tensor(w, t.name, t.shape, c.parameters.data() + t.offset);

  w.put<double>(c.adam.config.learning_rate);
  w.put<double>(c.adam.config.beta1);
  w.put<double>(c.adam.config.beta2);
  w.put<double>(c.adam.config.epsilon);
  w.put<uint64_t>(c.adam.step);
  const uint64_t moments = c.adam.m.size();
  put_tensor(w, "adam.m", {moments}, c.adam.m.data());
  put_tensor(w, "adam.v", {moments}, c.adam.v.data());
  w.put_string(c.rng_state);
  return w.bytes();
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  ByteReader r(bytes);
  if (r.get_raw(4) != std::string(kMagic, 4)) throw std::runtime_error("not a checkpoint file");
  if (r.get<uint32_t>() != kCheckpointVersion) throw std::runtime_error("unsupported checkpoint version");
  Checkpoint c;
  c.epoch = r.get<uint64_t>();
  c.config_hash = r.get<uint64_t>();
  c.train_loss = r.get<double>();

  NetworkSpec& s = c.spec;
  s.name = r.get_string();
  s.input_channels.resize(r.get<uint32_t>());
  for (int& ch : s.input_channels) ch = r.get<int32_t>();
  s.flatten_rounds = r.get<int32_t>();
  s.layers.resize(r.get<uint32_t>());
  for (LayerSpec& l : s.layers) {
    l.kind = static_cast<LayerKind>(r.get<uint8_t>());
    l.units = r.get<int32_t>();
    l.activation = static_cast<Activation>(r.get<uint8_t>());
    l.return_sequences = r.get<uint8_t>() != 0;
    l.rate = r.get<double>();
  }
  s.validate();

  const auto tensors = layout(s);
  if (r.get<uint32_t>() != tensors.size()) throw std::runtime_error("checkpoint tensor count mismatch");
  c.parameters.assign(Network(s).parameter_count(), 0.0);
  for (const auto& t : tensors) {
    auto v = get_tensor(r, t.name, t.shape);
    std::copy(v.begin(), v.end(), c.parameters.begin() + static_cast<ptrdiff_t>(t.offset));
  }

  c.adam.config.learning_rate = r.get<double>();
  c.adam.config.beta1 = r.get<double>();
  c.adam.config.beta2 = r.get<double>();
  c.adam.config.epsilon = r.get<double>();
  c.adam.step = r.get<uint64_t>();
  // Moment tensors are either empty (never stepped) or parameter-sized.
  auto read_moments = [&](const char* name) {
    if (r.get_string() != name) throw std::runtime_error("checkpoint missing adam moments");
    if (r.get<uint32_t>() != 1) throw std::runtime_error("adam moment rank");
    std::vector<double> v(r.get<uint64_t>());
    for (double& x : v) x = r.get<double>();
    return v;
  };
  c.adam.m = read_moments("adam.m");
  c.adam.v = read_moments("adam.v");
  c.rng_state = r.get_string();
  if (!r.done()) throw std::runtime_error("trailing bytes in checkpoint");
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  write_file(path, serialize_checkpoint(c));
}

Checkpoint load_checkpoint(const std::string& path) { return deserialize_checkpoint(read_file(path)); }

}  // namespace flagdec::nn
