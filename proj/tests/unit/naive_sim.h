#pragma once

// Unpacked reference simulator: one bool pair per qubit, circuit spelled out from the
// plaquette supports and gate order. Shares only the keyed draw convention with the library.

#include <array>
#include <cstdint>
#include <vector>

#include "flagdec/rng.h"

namespace naive {

constexpr int kQubits = 19;
constexpr int kSupports[3][4] = {{1, 2, 3, 4}, {2, 3, 5, 6}, {3, 4, 6, 7}};
constexpr int kLogical[3] = {1, 4, 7};

enum Op { PrepZ, PrepX, Cx, MeasZ, MeasX };

struct Step {
  Op op;
  int a = 0, b = 0;
  int channel = -1;
};

struct Qubit {
  bool x = false, z = false;
};

using State = std::array<Qubit, kQubits>;

inline std::vector<Step> cycle() {
  std::vector<Step> s;
  for (int p = 0; p < 6; ++p) {
    const int g = p % 3, anc = 7 + p, flag = 13 + p;
    const int* d = kSupports[g];
    if (p < 3) {
      s.push_back({PrepX, anc});
      s.push_back({PrepZ, flag});
      s.push_back({Cx, anc, d[0] - 1});
      s.push_back({Cx, anc, flag});
      s.push_back({Cx, anc, d[1] - 1});
      s.push_back({Cx, anc, d[2] - 1});
      s.push_back({Cx, anc, flag});
      s.push_back({Cx, anc, d[3] - 1});
      s.push_back({MeasX, anc, 0, g});
      s.push_back({MeasZ, flag, 0, 6 + g});
    } else {
      s.push_back({PrepZ, anc});
      s.push_back({PrepX, flag});
      s.push_back({Cx, d[0] - 1, anc});
      s.push_back({Cx, flag, anc});
      s.push_back({Cx, d[1] - 1, anc});
      s.push_back({Cx, d[2] - 1, anc});
      s.push_back({Cx, flag, anc});
      s.push_back({Cx, d[3] - 1, anc});
      s.push_back({MeasZ, anc, 0, 3 + g});
      s.push_back({MeasX, flag, 0, 9 + g});
    }
  }
  return s;
}

// X/Z parts of a single-qubit Pauli index I, X, Y, Z = 0..3.
inline void apply_pauli(Qubit& q, int p) {
  if (p == 1 || p == 2) q.x = !q.x;
  if (p == 2 || p == 3) q.z = !q.z;
}

struct Shot {
  std::vector<std::array<int, 12>> rounds;  // increments of S, raw flags
  int label = 0;
  int final_increment = 0;
};

// Syndrome bit g of the data state against Z-type (detect_x) or X-type generators.
inline int data_syndrome(const State& st, bool detect_x) {
  int s = 0;
  for (int g = 0; g < 3; ++g) {
    int par = 0;
    for (int q : kSupports[g]) par ^= detect_x ? st[q - 1].x : st[q - 1].z;
    s |= par << g;
  }
  return s;
}

// z_basis: Z readout, so X errors matter.
inline int residual_flip(const State& st, bool z_basis) {
  int s = data_syndrome(st, z_basis);
  std::array<bool, 7> e{};
  for (int q = 0; q < 7; ++q) e[q] = z_basis ? st[q].x : st[q].z;
  if (s) {
    // Unique single-qubit error with this syndrome.
    for (int q = 1; q <= 7; ++q) {
      int sq = 0;
      for (int g = 0; g < 3; ++g)
        for (int r : kSupports[g]) sq |= (r == q) << g;
      if (sq == s) {
        e[q - 1] = !e[q - 1];
        break;
      }
    }
  }
  int par = 0;
  for (int q : kLogical) par ^= e[q - 1];
  return par;
}

// p == 0 disables noise. Noise draws are keyed exactly like the library sampler.
inline Shot run(double p, int T, bool z_basis, uint64_t seed, uint64_t shot) {
  const auto c = cycle();
  State st{};
  Shot out;
  std::array<int, 6> prev{};
  const double p_spam = 2.0 * p / 3.0, p_cx = p;
  for (int cyc = 0; cyc <= T; ++cyc) {
    std::array<int, 12> rec{};
    for (size_t loc = 0; loc < c.size(); ++loc) {
      const Step& s = c[loc];
      double u = 2.0;
      if (p > 0) u = flagdec::to_unit(flagdec::keyed_u64(seed, shot, cyc * c.size() + loc));
      switch (s.op) {
        case PrepZ:
        case PrepX:
          st[s.a] = {};
          if (u < p_spam) (s.op == PrepZ ? st[s.a].x : st[s.a].z) = true;
          break;
        case Cx: {
          if (st[s.a].x) st[s.b].x = !st[s.b].x;
          if (st[s.b].z) st[s.a].z = !st[s.a].z;
          if (u < p_cx) {
            int e = 1 + std::min(14, static_cast<int>(u / p_cx * 15.0));
            apply_pauli(st[s.a], e / 4);
            apply_pauli(st[s.b], e % 4);
          }
          break;
        }
        case MeasZ:
        case MeasX: {
          if (u < p_spam) (s.op == MeasZ ? st[s.a].x : st[s.a].z) = !(s.op == MeasZ ? st[s.a].x : st[s.a].z);
          rec[s.channel] = s.op == MeasZ ? st[s.a].x : st[s.a].z;
          break;
        }
      }
    }
    std::array<int, 6> synd{};
    for (int i = 0; i < 6; ++i) synd[i] = rec[i];
    if (cyc > 0) {
      std::array<int, 12> row = rec;
      for (int i = 0; i < 6; ++i) row[i] = synd[i] ^ prev[i];
      out.rounds.push_back(row);
    }
    prev = synd;
  }
  const int last = z_basis ? (prev[3] | prev[4] << 1 | prev[5] << 2) : (prev[0] | prev[1] << 1 | prev[2] << 2);
  out.final_increment = data_syndrome(st, z_basis) ^ last;
  out.label = residual_flip(st, z_basis);
  return out;
}

}  // namespace naive
