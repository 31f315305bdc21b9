#include "flagdec/steane_code.h"

#include <bit>
#include <stdexcept>

namespace flagdec {

const char* basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

namespace {

uint8_t mask_of(std::initializer_list<int> qubits) {
  uint8_t m = 0;
  for (int q : qubits) {
    if (q < 1 || q > kDataQubits) throw std::out_of_range("data qubit index must be in 1..7");
    m ^= static_cast<uint8_t>(1u << (q - 1));
  }
  return m;
}

}  // namespace

PauliString PauliString::xs(std::initializer_list<int> qubits) { return {mask_of(qubits), 0}; }
PauliString PauliString::zs(std::initializer_list<int> qubits) { return {0, mask_of(qubits)}; }
PauliString PauliString::of_type(PauliType t, uint8_t mask) {
  return t == PauliType::X ? PauliString{mask, 0} : PauliString{0, mask};
}

int PauliString::weight() const { return std::popcount(static_cast<unsigned>(x | z)); }

std::string PauliString::str() const {
  if (is_identity()) return "I";
  std::string out;
  for (int q = 1; q <= kDataQubits; ++q) {
    bool hx = (x >> (q - 1)) & 1, hz = (z >> (q - 1)) & 1;
    if (!hx && !hz) continue;
    out += hx && hz ? 'Y' : (hx ? 'X' : 'Z');
    out += static_cast<char>('0' + q);
  }
  return out;
}

PauliString compose(PauliString a, PauliString b) {
  return {static_cast<uint8_t>(a.x ^ b.x), static_cast<uint8_t>(a.z ^ b.z)};
}

uint8_t CodeDefinition::support_mask(int generator) const {
  uint8_t m = 0;
  for (int q : gate_order.at(generator)) m |= static_cast<uint8_t>(1u << (q - 1));
  return m;
}

uint8_t CodeDefinition::logical_x_mask() const {
  uint8_t m = 0;
  for (int q : logical_x_support) m |= static_cast<uint8_t>(1u << (q - 1));
  return m;
}

uint8_t CodeDefinition::logical_z_mask() const {
  uint8_t m = 0;
  for (int q : logical_z_support) m |= static_cast<uint8_t>(1u << (q - 1));
  return m;
}

const CodeDefinition& steane_code() {
  static const CodeDefinition code{
      {{{1, 2, 3, 4}, {2, 3, 5, 6}, {3, 4, 6, 7}}},
      {1, 4, 7},
      {1, 4, 7},
  };
  return code;
}

uint8_t half_syndrome(uint8_t mask, const CodeDefinition& code) {
  uint8_t s = 0;
  for (int k = 0; k < kGenerators; ++k) {
    if (std::popcount(static_cast<unsigned>(mask & code.support_mask(k))) & 1) s |= 1u << k;
  }
  return s;
}

Syndrome syndrome_of(PauliString p, const CodeDefinition& code) {
  return {half_syndrome(p.z, code), half_syndrome(p.x, code)};
}

PauliString pure_error_correction(uint8_t s, PauliType stabilizers, const CodeDefinition& code) {
  s &= 0x7;
  PauliType kind = stabilizers == PauliType::Z ? PauliType::X : PauliType::Z;
  if (s == 0) return {};
  for (int q = 0; q < kDataQubits; ++q) {
    uint8_t m = static_cast<uint8_t>(1u << q);
    if (half_syndrome(m, code) == s) return PauliString::of_type(kind, m);
  }
  throw std::logic_error("code has no weight-1 error for this syndrome");
}

int logical_parity(PauliString residual, Basis basis, const CodeDefinition& code) {
  uint8_t mask = basis == Basis::Z ? residual.x : residual.z;
  if (half_syndrome(mask, code) != 0)
    throw std::invalid_argument("residual has a nontrivial syndrome: " + residual.str());
  uint8_t logical = basis == Basis::Z ? code.logical_z_mask() : code.logical_x_mask();
  return std::popcount(static_cast<unsigned>(mask & logical)) & 1;
}

int corrected_logical_parity(PauliString error, Basis basis, const CodeDefinition& code) {
  Syndrome s = syndrome_of(error, code);
  PauliString c = basis == Basis::Z ? pure_error_correction(s.sz, PauliType::Z, code)
                                    : pure_error_correction(s.sx, PauliType::X, code);
  return logical_parity(compose(error, c), basis, code);
}

std::string half_syndrome_str(uint8_t s) {
  std::string out(3, '0');
  for (int k = 0; k < 3; ++k)
    if ((s >> k) & 1) out[k] = '1';
  return out;
}

}  // namespace flagdec
