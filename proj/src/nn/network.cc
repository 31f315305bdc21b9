#include "flagdec/nn/network.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flagdec/kernels.h"

namespace flagdec::nn {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Linear: return z;
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Tanh: return std::tanh(z);
  }
  return z;
}

double activate_derivative(Activation a, double z, double y) {
  switch (a) {
    case Activation::Linear: return 1.0;
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Sigmoid: return y * (1.0 - y);
    case Activation::Tanh: return 1.0 - y * y;
  }
  return 1.0;
}

namespace {

constexpr double kRescaleGuard = 1e-12;

// DeepLIFT rescale multiplier, falling back to the derivative at the midpoint.
double rescale(Activation a, double z, double y, double zr, double yr) {
  const double dz = z - zr;
  if (std::abs(dz) >= kRescaleGuard) return (y - yr) / dz;
  const double zm = 0.5 * (z + zr);
  return activate_derivative(a, zm, activate(a, zm));
}

}  // namespace

void lstm_step(const LstmWeights& w, std::span<const double> x, std::span<const double> h_prev,
               std::span<const double> c_prev, LstmStepCache& out) {
  const size_t n = w.units, n4 = 4 * n;
  if (x.size() != w.in || h_prev.size() != n || c_prev.size() != n)
    throw std::invalid_argument("lstm_step dimension mismatch");
  const auto& k = kernels::active();
  out.z.assign(w.b, w.b + n4);
  k.affine_forward(w.kx, w.in, n4, x.data(), out.z.data());
  k.affine_forward(w.kh, n, n4, h_prev.data(), out.z.data());
  out.gates.resize(n4);
  for (size_t j = 0; j < n; ++j) {
    out.gates[j] = activate(Activation::Sigmoid, out.z[j]);
    out.gates[n + j] = activate(Activation::Sigmoid, out.z[n + j]);
    out.gates[2 * n + j] = std::tanh(out.z[2 * n + j]);
    out.gates[3 * n + j] = activate(Activation::Sigmoid, out.z[3 * n + j]);
  }
  out.c_prev.assign(c_prev.begin(), c_prev.end());
  out.h_prev.assign(h_prev.begin(), h_prev.end());
  out.c.resize(n);
  out.act_c.resize(n);
  out.h.resize(n);
  for (size_t j = 0; j < n; ++j) {
    out.c[j] = c_prev[j] * out.gates[j] + out.gates[2 * n + j] * out.gates[n + j];
    out.act_c[j] = activate(w.output, out.c[j]);
    out.h[j] = out.gates[3 * n + j] * out.act_c[j];
  }
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  size_t width = static_cast<size_t>(spec_.input_size());
  size_t offset = 0;
  for (const LayerSpec& l : spec_.layers) {
    LayerInfo info{l.kind, width, width, offset, 0};
    if (l.kind == LayerKind::Lstm) {
      const size_t n = static_cast<size_t>(l.units);
      info.out = n;
      info.count = width * 4 * n + n * 4 * n + 4 * n;
    } else if (l.kind == LayerKind::Dense) {
      info.out = static_cast<size_t>(l.units);
      info.count = width * info.out + info.out;
    }
    offset += info.count;
    width = info.out;
    info_.push_back(info);
  }
  params_.assign(offset, 0.0);
}

void Network::initialize(std::mt19937_64& rng, double forget_bias) {
  std::fill(params_.begin(), params_.end(), 0.0);
  auto glorot = [&](double* p, size_t fan_in, size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (size_t i = 0; i < fan_in * fan_out; ++i) p[i] = u(rng);
  };
  for (size_t li = 0; li < info_.size(); ++li) {
    const LayerInfo& l = info_[li];
    double* p = params_.data() + l.offset;
    if (l.kind == LayerKind::Lstm) {
      const size_t n = l.out, n4 = 4 * n;
      glorot(p, l.in, n4);
      glorot(p + l.in * n4, n, n4);
      double* b = p + l.in * n4 + n * n4;
      for (size_t j = 0; j < n; ++j) b[j] = forget_bias;
    } else if (l.kind == LayerKind::Dense) {
      glorot(p, l.in, l.out);
    }
  }
}

LstmWeights Network::lstm_weights(size_t layer) const {
  const LayerInfo& l = info_.at(layer);
  if (l.kind != LayerKind::Lstm) throw std::invalid_argument("layer is not an LSTM");
  const size_t n4 = 4 * l.out;
  const double* p = params_.data() + l.offset;
  return {l.in, l.out, p, p + l.in * n4, p + l.in * n4 + l.out * n4,
          spec_.layers[layer].activation};
}

const std::vector<double>& Network::forward(const NetworkInput& x, Mode mode,
                                            std::mt19937_64* rng, ForwardCache& cache) const {
  if (x.width != spec_.round_width()) throw std::invalid_argument("input width mismatch");
  if (x.length < 1 || x.length > x.rows) throw std::invalid_argument("invalid input length");
  if (!spec_.recurrent() && x.rows != spec_.flatten_rounds)
    throw std::invalid_argument("feed-forward input has the wrong number of rounds");
  if (mode == Mode::Train && !rng) throw std::invalid_argument("train mode needs an rng");
  const auto& k = kernels::active();
  cache.rows = x.rows;
  cache.length = x.length;
  cache.layers.resize(info_.size());

  const int L = x.length;
  std::vector<double> seq;  // current sequence, rows x width (only first L rows meaningful)
  std::vector<double> vec;  // current vector
  if (spec_.recurrent()) {
    seq.assign(x.values.begin(), x.values.begin() + static_cast<ptrdiff_t>(L) * x.width);
  } else {
    vec = x.values;
  }

  for (size_t li = 0; li < info_.size(); ++li) {
    const LayerInfo& info = info_[li];
    const LayerSpec& ls = spec_.layers[li];
    LayerCache& lc = cache.layers[li];
    switch (info.kind) {
      case LayerKind::Masking:
        break;
      case LayerKind::Lstm: {
        const LstmWeights w = lstm_weights(li);
        const size_t n = info.out;
        lc.seq_in = seq;
        lc.steps.resize(static_cast<size_t>(L));
        std::vector<double> h(n, 0.0), c(n, 0.0);
        std::vector<double> next(ls.return_sequences ? static_cast<size_t>(L) * n : 0);
        for (int t = 0; t < L; ++t) {
          std::span<const double> xt(lc.seq_in.data() + static_cast<size_t>(t) * info.in, info.in);
          LstmStepCache& st = lc.steps[static_cast<size_t>(t)];
          lstm_step(w, xt, h, c, st);
          h = st.h;
          c = st.c;
          if (ls.return_sequences) std::copy(h.begin(), h.end(), next.begin() + t * n);
        }
        if (ls.return_sequences) {
          seq = std::move(next);
        } else {
          vec = h;
        }
        break;
      }
      case LayerKind::Dense: {
        const double* kmat = params_.data() + info.offset;
        const double* b = kmat + info.in * info.out;
        lc.in = vec;
        lc.z.assign(b, b + info.out);
        k.affine_forward(kmat, info.in, info.out, lc.in.data(), lc.z.data());
        lc.out.resize(info.out);
        for (size_t j = 0; j < info.out; ++j) lc.out[j] = activate(ls.activation, lc.z[j]);
        vec = lc.out;
        break;
      }
      case LayerKind::Dropout: {
        lc.in = vec;
        lc.mask.assign(info.out, 1.0);
        if (mode == Mode::Train && ls.rate > 0.0) {
          std::bernoulli_distribution keep(1.0 - ls.rate);
          const double scale = 1.0 / (1.0 - ls.rate);
          for (double& m : lc.mask) m = keep(*rng) ? scale : 0.0;
        }
        lc.out.resize(info.out);
        for (size_t j = 0; j < info.out; ++j) lc.out[j] = lc.in[j] * lc.mask[j];
        vec = lc.out;
        break;
      }
    }
  }
  cache.output = vec;
  return cache.output;
}

std::vector<double> Network::predict(const NetworkInput& x) const {
  ForwardCache cache;
  return forward(x, Mode::Eval, nullptr, cache);
}

void Network::backward(const ForwardCache& cache, std::span<const double> d_out, bool wrt_logits,
                       std::span<double> d_params, std::span<double> d_input) const {
  if (!d_params.empty() && d_params.size() != params_.size())
    throw std::invalid_argument("gradient buffer size mismatch");
  if (!d_input.empty() && d_input.size() != static_cast<size_t>(cache.rows) * spec_.round_width())
    throw std::invalid_argument("input-gradient buffer size mismatch");
  backward_impl(cache, nullptr, d_out, wrt_logits, d_params.empty() ? nullptr : d_params.data(),
                d_input.empty() ? nullptr : d_input.data());
}

void Network::backward_multipliers(const ForwardCache& x, const ForwardCache& ref,
                                   std::span<const double> d_out, std::span<double> m_input) const {
  if (x.length != ref.length) throw std::invalid_argument("reference pass must share the mask");
  if (m_input.size() != static_cast<size_t>(x.rows) * spec_.round_width())
    throw std::invalid_argument("multiplier buffer size mismatch");
  backward_impl(x, &ref, d_out, false, nullptr, m_input.data());
}

void Network::backward_impl(const ForwardCache& c, const ForwardCache* ref,
                            std::span<const double> d_out, bool wrt_logits, double* d_params,
                            double* d_input) const {
  if (d_out.size() != c.output.size()) throw std::invalid_argument("output gradient size");
  const auto& k = kernels::active();
  const int L = c.length;
  std::vector<double> dvec(d_out.begin(), d_out.end());
  std::vector<double> dseq;
  bool have_seq = false;

  for (size_t li = info_.size(); li-- > 0;) {
    const LayerInfo& info = info_[li];
    const LayerSpec& ls = spec_.layers[li];
    const LayerCache& lc = c.layers[li];
    const LayerCache* rc = ref ? &ref->layers[li] : nullptr;
    switch (info.kind) {
      case LayerKind::Masking:
        break;
      case LayerKind::Dropout: {
        for (size_t j = 0; j < info.out; ++j) dvec[j] *= lc.mask[j];
        break;
      }
      case LayerKind::Dense: {
        const double* kmat = params_.data() + info.offset;
        std::vector<double> dz(info.out);
        const bool logits = wrt_logits && li + 1 == info_.size();
        for (size_t j = 0; j < info.out; ++j) {
          double m;
          if (logits) {
            m = 1.0;
          } else if (rc) {
            m = rescale(ls.activation, lc.z[j], lc.out[j], rc->z[j], rc->out[j]);
          } else {
            m = activate_derivative(ls.activation, lc.z[j], lc.out[j]);
          }
          dz[j] = dvec[j] * m;
        }
        if (d_params) {
          double* dk = d_params + info.offset;
          k.affine_backward_weights(dk, info.in, info.out, lc.in.data(), dz.data());
          k.axpy(1.0, dz.data(), dk + info.in * info.out, info.out);
        }
        dvec.assign(info.in, 0.0);
        k.affine_backward_input(kmat, info.in, info.out, dz.data(), dvec.data());
        break;
      }
      case LayerKind::Lstm: {
        const LstmWeights w = lstm_weights(li);
        const size_t n = info.out, n4 = 4 * n;
        double* dkx = d_params ? d_params + info.offset : nullptr;
        double* dkh = dkx ? dkx + info.in * n4 : nullptr;
        double* db = dkh ? dkh + n * n4 : nullptr;
        std::vector<double> dh_next(n, 0.0), dc_next(n, 0.0), dz(n4), dh(n);
        std::vector<double> dx(static_cast<size_t>(L) * info.in, 0.0);
        for (int t = L - 1; t >= 0; --t) {
          const LstmStepCache& s = lc.steps[static_cast<size_t>(t)];
          const LstmStepCache* r = rc ? &rc->steps[static_cast<size_t>(t)] : nullptr;
          for (size_t j = 0; j < n; ++j) {
            double above = 0.0;
            if (ls.return_sequences) {
              above = dseq[static_cast<size_t>(t) * n + j];
            } else if (t == L - 1) {
              above = dvec[j];
            }
            dh[j] = above + dh_next[j];
          }
          for (size_t j = 0; j < n; ++j) {
            const double f = s.gates[j], i = s.gates[n + j], cc = s.gates[2 * n + j],
                         o = s.gates[3 * n + j];
            double m_o, m_act, m_c, m_f, m_cprev, m_i, m_cc;
            double g_f, g_i, g_cc, g_o;
            if (r) {
              m_o = 0.5 * (s.act_c[j] + r->act_c[j]);
              m_act = 0.5 * (o + r->gates[3 * n + j]);
              m_c = rescale(w.output, s.c[j], s.act_c[j], r->c[j], r->act_c[j]);
              m_f = 0.5 * (s.c_prev[j] + r->c_prev[j]);
              m_cprev = 0.5 * (f + r->gates[j]);
              m_i = 0.5 * (cc + r->gates[2 * n + j]);
              m_cc = 0.5 * (i + r->gates[n + j]);
              g_f = rescale(Activation::Sigmoid, s.z[j], f, r->z[j], r->gates[j]);
              g_i = rescale(Activation::Sigmoid, s.z[n + j], i, r->z[n + j], r->gates[n + j]);
              g_cc = rescale(Activation::Tanh, s.z[2 * n + j], cc, r->z[2 * n + j],
                             r->gates[2 * n + j]);
              g_o = rescale(Activation::Sigmoid, s.z[3 * n + j], o, r->z[3 * n + j],
                            r->gates[3 * n + j]);
            } else {
              m_o = s.act_c[j];
              m_act = o;
              m_c = activate_derivative(w.output, s.c[j], s.act_c[j]);
              m_f = s.c_prev[j];
              m_cprev = f;
              m_i = cc;
              m_cc = i;
              g_f = f * (1.0 - f);
              g_i = i * (1.0 - i);
              g_cc = 1.0 - cc * cc;
              g_o = o * (1.0 - o);
            }
            const double d_o = dh[j] * m_o;
            const double dcell = dc_next[j] + dh[j] * m_act * m_c;
            dz[j] = dcell * m_f * g_f;
            dz[n + j] = dcell * m_i * g_i;
            dz[2 * n + j] = dcell * m_cc * g_cc;
            dz[3 * n + j] = d_o * g_o;
            dc_next[j] = dcell * m_cprev;
          }
          const double* xt = lc.seq_in.data() + static_cast<size_t>(t) * info.in;
          if (dkx) {
            k.affine_backward_weights(dkx, info.in, n4, xt, dz.data());
            k.affine_backward_weights(dkh, n, n4, s.h_prev.data(), dz.data());
            k.axpy(1.0, dz.data(), db, n4);
          }
          k.affine_backward_input(w.kx, info.in, n4, dz.data(), dx.data() + static_cast<size_t>(t) * info.in);
          std::fill(dh_next.begin(), dh_next.end(), 0.0);
          k.affine_backward_input(w.kh, n, n4, dz.data(), dh_next.data());
        }
        dseq = std::move(dx);
        have_seq = true;
        break;
      }
    }
  }

  if (!d_input) return;
  if (spec_.recurrent()) {
    if (!have_seq) return;
    const size_t width = static_cast<size_t>(spec_.round_width());
    for (size_t i = 0; i < static_cast<size_t>(L) * width; ++i) d_input[i] += dseq[i];
  } else {
    for (size_t i = 0; i < dvec.size(); ++i) d_input[i] += dvec[i];
  }
}

}  // namespace flagdec::nn
