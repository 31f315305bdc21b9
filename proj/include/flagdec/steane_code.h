#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>

namespace flagdec {

inline constexpr int kDataQubits = 7;
inline constexpr int kGenerators = 3;

// Type of a stabilizer generator (or of a single-type Pauli).
enum class PauliType : uint8_t { X, Z };

// Readout basis of a memory experiment. Z readout detects bit flips,
// X readout detects phase flips.
enum class Basis : uint8_t { Z = 0, X = 1 };

const char* basis_name(Basis b);

// Phase-free Pauli on the seven data qubits; bit q-1 of a mask is qubit q.
struct PauliString {
  uint8_t x = 0;
  uint8_t z = 0;

  static PauliString xs(std::initializer_list<int> qubits);
  static PauliString zs(std::initializer_list<int> qubits);
  static PauliString of_type(PauliType t, uint8_t mask);

  bool is_identity() const { return x == 0 && z == 0; }
  int weight() const;
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

PauliString compose(PauliString a, PauliString b);

// Bit k-1 holds generator k.
struct Syndrome {
  uint8_t sx = 0;  // X-type generators, detect Z errors
  uint8_t sz = 0;  // Z-type generators, detect X errors

  friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

struct CodeDefinition {
  // Data qubits of each plaquette in entangling-gate order i, j, k, l (1-based).
  std::array<std::array<int, 4>, kGenerators> gate_order;
  std::array<int, 3> logical_x_support;
  std::array<int, 3> logical_z_support;

  uint8_t support_mask(int generator) const;
  uint8_t logical_x_mask() const;
  uint8_t logical_z_mask() const;
};

const CodeDefinition& steane_code();

uint8_t half_syndrome(uint8_t mask, const CodeDefinition& code = steane_code());
Syndrome syndrome_of(PauliString p, const CodeDefinition& code = steane_code());

// Minimum-weight Pauli of the opposite type to `stabilizers` whose half-syndrome is `s`:
// s_Z (stabilizers == Z) yields an X correction, s_X yields a Z correction.
PauliString pure_error_correction(uint8_t s, PauliType stabilizers,
                                  const CodeDefinition& code = steane_code());

// 1 iff the residual flips the logical observable read out in `basis`.
// Throws std::invalid_argument when the residual has a syndrome visible in that basis.
int logical_parity(PauliString residual, Basis basis, const CodeDefinition& code = steane_code());

// Residual logical flip after completing `error` with its pure-error correction.
int corrected_logical_parity(PauliString error, Basis basis,
                             const CodeDefinition& code = steane_code());

std::string half_syndrome_str(uint8_t s);

}  // namespace flagdec
