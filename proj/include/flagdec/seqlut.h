#pragma once

#include <array>
#include <optional>
#include <vector>

#include "flagdec/analysis/stats.h"
#include "flagdec/dep.h"
#include "flagdec/frame_sim.h"

namespace flagdec {

enum class Signal : uint8_t { None, Error, Flag };

struct SeqLutState {
  Signal signal = Signal::None;
  int reference = 0;  // round index, 0 is the prep reference
  int head = 1;
  PauliString frame;  // accumulated correction
};

// One row per (flagged generator, ancilla fault class E_1..E_3). Masks are type-agnostic:
// the flagged circuit's type decides whether they act as X or Z.
struct FlagCorrectionRow {
  int generator = 0;    // 0..2
  int fault_class = 0;  // 1..3
  uint8_t syndrome = 0;
  uint8_t correction = 0;
  uint8_t replaced = 0;  // default weight-1 correction for the same syndrome
};

class FlagCorrectionTable {
 public:
  static FlagCorrectionTable build(const CodeDefinition& code);

  const std::vector<FlagCorrectionRow>& rows() const { return rows_; }
  // First matching row over the flagged generators (bit g = generator g) in schedule order.
  std::optional<uint8_t> lookup(uint8_t flagged, uint8_t syndrome) const;

 private:
  std::vector<FlagCorrectionRow> rows_;
};

struct SeqLutResult {
  int x_flip = 0;  // predicted logical bit flip
  int z_flip = 0;  // predicted logical phase flip
  PauliString frame;
};

class SeqLutDecoder {
 public:
  explicit SeqLutDecoder(const CodeDefinition& code = steane_code());

  // Without a final readout the last round's syndrome closes any pending signal.
  // `final_readout` supplies the perfect data-readout increment of one basis as a flag-free round.
  SeqLutResult decode(const SyndromeFlagVolume& volume,
                      std::optional<std::pair<Basis, uint8_t>> final_readout = std::nullopt) const;

  // Single-basis pass. error_type X decodes bit flips from S_Z and F_X.
  int decode_pass(const SyndromeFlagVolume& volume, PauliType error_type,
                  std::optional<uint8_t> terminal, PauliString* frame = nullptr,
                  std::vector<SeqLutState>* trace = nullptr) const;

  int predict(const MemorySample& sample) const;
  const FlagCorrectionTable& table() const { return table_; }

 private:
  CodeDefinition code_;
  FlagCorrectionTable table_;
};

Decoder seqlut_decoder(const CodeDefinition& code = steane_code());

struct LogicalErrorRate {
  Basis basis = Basis::Z;
  double p_ph = 0.0;
  std::vector<int> rounds;
  std::vector<uint64_t> failures;
  uint64_t shots_per_round = 0;
  std::vector<WilsonInterval> infidelity;
  FitResult fit;  // (p_L, t0)

  double p_l() const { return fit.params.empty() ? 0.0 : fit.params[0]; }
};

// Monte-Carlo infidelity I(t) for t = 1..T (shots per t), then the per-round fit.
// Initial states alternate m_in = 0, 1. Default decoder is SeqLUT.
LogicalErrorRate logical_error_rate(const NoiseModel& noise, int max_rounds, uint64_t shots,
                                    uint64_t seed, Basis basis = Basis::Z,
                                    const Decoder& decoder = {}, int threads = 0,
                                    const FrameSimulator& sim = FrameSimulator());
// Same over an explicit list of rounds; fewer than three points skip the fit and invert the
// model at the last round with t0 = 0.
LogicalErrorRate logical_error_rate(const NoiseModel& noise, const std::vector<int>& rounds,
                                    uint64_t shots, uint64_t seed, Basis basis = Basis::Z,
                                    const Decoder& decoder = {}, int threads = 0,
                                    const FrameSimulator& sim = FrameSimulator());

}  // namespace flagdec
