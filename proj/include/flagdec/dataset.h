#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flagdec/frame_sim.h"

namespace flagdec {

inline constexpr uint32_t kDatasetVersion = 1;
inline constexpr const char* kCodeId = "steane-7-1-3-flagged";

// basis field: 0 = Z readout, 1 = X readout, 2 = mixed.
struct DatasetHeader {
  uint32_t version = kDatasetVersion;
  std::string code_id = kCodeId;
  double p_ph = 0.0;
  uint32_t max_rounds = 0;
  uint8_t basis = 0;
  uint64_t seed = 0;
  uint64_t shots = 0;
  uint64_t config_hash = 0;
};

struct Dataset {
  DatasetHeader header;
  std::vector<MemorySample> samples;
};

// Initial states are assigned round-robin over `families` so each gets an equal share.
struct GenerationSpec {
  double p_ph = 0.0;
  int min_rounds = 1;
  int max_rounds = 1;
  std::vector<std::pair<Basis, int>> families{{Basis::Z, 0}, {Basis::Z, 1}};
  uint64_t seed = 0;
  uint64_t shots = 0;
  uint64_t config_hash = 0;
};

Dataset generate_dataset(const FrameSimulator& sim, const GenerationSpec& spec, int threads = 0);

void write_dataset(const std::string& path, const Dataset& ds);
Dataset read_dataset(const std::string& path);
void write_dataset_text(const std::string& path, const Dataset& ds);

}  // namespace flagdec
