#include "flagdec/dataset.h"

#include <fstream>
#include <iterator>
#include <stdexcept>

#include "flagdec/binary_io.h"
#include "flagdec/parallel.h"
#include "flagdec/rng.h"

namespace flagdec {

namespace {

constexpr char kMagic[4] = {'F', 'D', 'D', 'S'};
constexpr uint64_t kRoundsSlot = ~0ULL;

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

Dataset generate_dataset(const FrameSimulator& sim, const GenerationSpec& spec, int threads) {
  if (spec.families.empty()) throw std::invalid_argument("no initial-state families");
  if (spec.min_rounds < 1 || spec.max_rounds < spec.min_rounds)
    throw std::invalid_argument("invalid round range");
  Dataset ds;
  ds.header.p_ph = spec.p_ph;
  ds.header.max_rounds = static_cast<uint32_t>(spec.max_rounds);
  bool mixed = false;
  for (auto& f : spec.families) mixed |= f.first != spec.families.front().first;
  ds.header.basis = mixed ? 2 : static_cast<uint8_t>(spec.families.front().first);
  ds.header.seed = spec.seed;
  ds.header.shots = spec.shots;
  ds.header.config_hash = spec.config_hash;
  ds.samples.resize(spec.shots);
  const NoiseModel noise(spec.p_ph);
  const uint64_t span = static_cast<uint64_t>(spec.max_rounds - spec.min_rounds + 1);
  parallel_for(spec.shots, threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const auto& fam = spec.families[i % spec.families.size()];
      int rounds = spec.min_rounds + static_cast<int>(keyed_u64(spec.seed, i, kRoundsSlot) % span);
      ds.samples[i] = sim.sample(noise, rounds, fam.first, fam.second, spec.seed, i);
    }
  });
  return ds;
}

void write_dataset(const std::string& path, const Dataset& ds) {
  ByteWriter w;
  w.put_raw(kMagic, 4);
  const DatasetHeader& h = ds.header;
  w.put<uint32_t>(h.version);
  w.put_string(h.code_id);
  w.put<double>(h.p_ph);
  w.put<uint32_t>(h.max_rounds);
  w.put<uint8_t>(h.basis);
  w.put<uint64_t>(h.seed);
  w.put<uint64_t>(static_cast<uint64_t>(ds.samples.size()));
  w.put<uint64_t>(h.config_hash);
  for (const MemorySample& s : ds.samples) {
    w.put<uint16_t>(static_cast<uint16_t>(s.volume.size()));
    w.put<uint8_t>(static_cast<uint8_t>(s.basis));
    for (uint16_t word : s.volume.rounds) w.put<uint16_t>(word);
    w.put<uint8_t>(s.m_in);
    w.put<uint8_t>(s.m_out);
    w.put<uint8_t>(s.label);
    w.put<uint8_t>(s.final_increment);
  }
  write_file(path, w.bytes());
}

Dataset read_dataset(const std::string& path) {
  const std::string bytes = read_file(path);
  ByteReader r(bytes);
  if (r.get_raw(4) != std::string(kMagic, 4)) throw std::runtime_error("not a dataset file: " + path);
  Dataset ds;
  DatasetHeader& h = ds.header;
  h.version = r.get<uint32_t>();
  if (h.version != kDatasetVersion) throw std::runtime_error("unsupported dataset version");
  h.code_id = r.get_string();
  h.p_ph = r.get<double>();
  h.max_rounds = r.get<uint32_t>();
  h.basis = r.get<uint8_t>();
  h.seed = r.get<uint64_t>();
  h.shots = r.get<uint64_t>();
  h.config_hash = r.get<uint64_t>();
  ds.samples.resize(h.shots);
  for (MemorySample& s : ds.samples) {
    const uint16_t rounds = r.get<uint16_t>();
    s.basis = static_cast<Basis>(r.get<uint8_t>());
    s.volume.rounds.resize(rounds);
    for (auto& word : s.volume.rounds) word = r.get<uint16_t>() & 0x0fff;
    s.m_in = r.get<uint8_t>();
    s.m_out = r.get<uint8_t>();
    s.label = r.get<uint8_t>();
    s.final_increment = r.get<uint8_t>();
    if (!s.consistent()) throw std::runtime_error("dataset record violates m_L = m_in ^ m_out");
  }
  if (!r.done()) throw std::runtime_error("trailing bytes in dataset file");
  return ds;
}

void write_dataset_text(const std::string& path, const Dataset& ds) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "# T basis m_in m_out m_L final | per round: SX1..3 SZ1..3 FX1..3 FZ1..3\n";
  for (const MemorySample& s : ds.samples) {
    os << s.volume.size() << ' ' << basis_name(s.basis) << ' ' << int(s.m_in) << ' '
       << int(s.m_out) << ' ' << int(s.label) << ' ' << half_syndrome_str(s.final_increment);
    for (int t = 0; t < s.volume.size(); ++t) {
      os << " |";
      for (int c = 0; c < kChannels; ++c) {
        if (c % 3 == 0) os << ' ';
        os << s.volume.at(t, c);
      }
    }
    os << '\n';
  }
}

}  // namespace flagdec
