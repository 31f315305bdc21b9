#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flagdec/steane_code.h"

namespace flagdec {

// Circuit qubits: data 0..6, one syndrome ancilla and one flag per plaquette readout.
inline constexpr int kPlaquettes = 6;
inline constexpr int kCircuitQubits = kDataQubits + 2 * kPlaquettes;

// Fixed 12-channel layout of one round.
inline constexpr int kChannels = 12;
inline constexpr int kChannelSX = 0;
inline constexpr int kChannelSZ = 3;
inline constexpr int kChannelFX = 6;
inline constexpr int kChannelFZ = 9;

std::string channel_name(int c);

enum class GateKind : uint8_t { PrepareZ, PrepareX, Cnot, MeasureZ, MeasureX };

struct Gate {
  GateKind kind;
  uint8_t q0 = 0;        // target qubit, or CNOT control
  uint8_t q1 = 0;        // CNOT target
  uint32_t location = 0;
  int8_t channel = -1;   // record channel for measurements
};

using GateList = std::vector<Gate>;

inline int ancilla_qubit(int plaquette) { return kDataQubits + plaquette; }
inline int flag_qubit(int plaquette) { return kDataQubits + kPlaquettes + plaquette; }

// Plaquette p in 0..5: 0..2 are X-type generators 1..3, 3..5 are Z-type.
inline PauliType plaquette_type(int p) { return p < 3 ? PauliType::X : PauliType::Z; }

GateList build_plaquette(const CodeDefinition& code, int plaquette);
GateList build_qec_cycle(const CodeDefinition& code = steane_code());
// Concatenates `cycles` copies of `cycle`, renumbering locations consecutively.
GateList repeat_cycles(const GateList& cycle, int cycles);

struct NoiseModel {
  double p_ph = 0.0;

  explicit NoiseModel(double p = 0.0);
  double spam_flip() const { return 2.0 * p_ph / 3.0; }
  double one_q() const { return p_ph / 3.0; }
  double two_q() const { return p_ph / 15.0; }
  // Probability that a location of this kind suffers any fault.
  double location_fault_probability(GateKind kind) const;
};

// Pauli on the operands of one location: bit 0 of each mask is operand q0, bit 1 is q1.
struct FaultInjection {
  uint32_t location = 0;
  uint8_t x = 0;
  uint8_t z = 0;

  friend bool operator==(const FaultInjection&, const FaultInjection&) = default;
};

// Nontrivial elements of the location's error set, in a fixed order.
std::vector<FaultInjection> error_set(const Gate& gate);
std::vector<FaultInjection> enumerate_single_faults(const GateList& gates);
std::vector<FaultInjection> enumerate_single_faults(const CodeDefinition& code, int cycles = 2);

}  // namespace flagdec
