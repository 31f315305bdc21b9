#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "flagdec/circuit.h"
#include "flagdec/steane_code.h"

namespace flagdec {

// Accumulated X/Z error record over all circuit qubits; bit i is circuit qubit i.
struct PauliFrame {
  uint32_t x = 0;
  uint32_t z = 0;

  PauliString data() const {
    return {static_cast<uint8_t>(x & 0x7f), static_cast<uint8_t>(z & 0x7f)};
  }
  friend bool operator==(const PauliFrame&, const PauliFrame&) = default;
};

// Clifford action of the gate; preparation resets the qubit, measurement leaves the frame alone.
PauliFrame propagate(PauliFrame frame, const Gate& gate);
// Outcome flip of a measurement gate relative to the noiseless reference.
bool measurement_flip(const PauliFrame& frame, const Gate& gate);
void apply_fault(PauliFrame& frame, const Gate& gate, const FaultInjection& fault);

// Rounds are stored 0-based: index t holds round t+1. Bit c of a word is channel c.
struct SyndromeFlagVolume {
  std::vector<uint16_t> rounds;

  int size() const { return static_cast<int>(rounds.size()); }
  int at(int t, int c) const { return (rounds[t] >> c) & 1; }
  void set(int t, int c, int v) {
    rounds[t] = static_cast<uint16_t>((rounds[t] & ~(1u << c)) | ((v & 1u) << c));
  }
  uint8_t half(int t, int first_channel) const { return (rounds[t] >> first_channel) & 0x7; }
  bool all_zero() const;

  friend bool operator==(const SyndromeFlagVolume&, const SyndromeFlagVolume&) = default;
};

struct MemorySample {
  SyndromeFlagVolume volume;
  Basis basis = Basis::Z;
  uint8_t m_in = 0;
  uint8_t m_out = 0;
  uint8_t label = 0;
  // Half-syndrome of the perfect final data readout XOR the last measured one, readout basis only.
  uint8_t final_increment = 0;

  bool consistent() const { return label == (m_in ^ m_out); }
  friend bool operator==(const MemorySample&, const MemorySample&) = default;
};

class FrameSimulator {
 public:
  explicit FrameSimulator(const CodeDefinition& code = steane_code());

  const CodeDefinition& code() const { return code_; }
  const GateList& cycle() const { return cycle_; }
  size_t locations_per_cycle() const { return cycle_.size(); }

  // Noisy prep cycle, `rounds` noisy cycles, perfect readout. Fault draws keyed by (seed, shot, location).
  MemorySample sample(const NoiseModel& noise, int rounds, Basis basis, int m_in, uint64_t seed,
                      uint64_t shot) const;

  // Noiseless prep; `fault.location` counts from the first cycle after prep.
  MemorySample run_with_fault(const FaultInjection& fault, int rounds, Basis basis,
                              int m_in = 0) const;

  // Noiseless circuit with data Paulis applied before each round (entry t before round t+1)
  // and optionally at the end. Returns the sample and the data frame at every round boundary.
  MemorySample run_with_data_errors(const std::vector<PauliString>& before_round, Basis basis,
                                    std::vector<PauliString>* boundary_frames = nullptr) const;

  using FaultSource = std::function<bool(uint32_t cycle_index, const Gate&, FaultInjection&)>;
  // General driver; cycle index 0 is the prep round.
  MemorySample run(int rounds, Basis basis, int m_in, const FaultSource& faults,
                   const std::function<void(int, PauliFrame&)>& before_cycle = {},
                   std::vector<PauliString>* boundary_frames = nullptr) const;

 private:
  uint16_t run_cycle(PauliFrame& frame, uint32_t cycle_index, const FaultSource& faults) const;

  CodeDefinition code_;
  GateList cycle_;
};

// Convenience wrapper over FrameSimulator::sample with a shared default simulator.
MemorySample sample_memory_experiment(const CodeDefinition& code, const NoiseModel& noise,
                                      int rounds, Basis basis, int m_in, uint64_t seed,
                                      uint64_t shot);

}  // namespace flagdec
