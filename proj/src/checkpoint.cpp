#include "cbim/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "cbim/graph.hpp"

namespace cbim {

namespace {

constexpr char kMagic[8] = {'C', 'B', 'I', 'M', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_le(std::ofstream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("checkpoint: cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.algorithm));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.k));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.l));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.hidden));
  write_le<std::uint64_t>(out, ckpt.master_seed);
  write_le<std::uint64_t>(out, ckpt.iterations_done);
  write_le<std::uint64_t>(out, ckpt.episodes_done);
  write_le<std::uint64_t>(out, ckpt.transitions_stored);
  write_le<std::uint64_t>(out, ckpt.update_ticks);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.agent_params.size()));
  for (const auto& nets : ckpt.agent_params) {
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(nets.size()));
    for (const Vector& params : nets) {
      write_le<std::uint64_t>(out, static_cast<std::uint64_t>(params.size()));
      for (long i = 0; i < params.size(); ++i) write_le<double>(out, params[i]);
    }
  }
  if (!out) throw DataError("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("checkpoint: bad magic in " + path);
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kVersion) throw DataError("checkpoint: unsupported version in " + path);

  Checkpoint ckpt;
  ckpt.algorithm = static_cast<Algorithm>(read_le<std::uint32_t>(in));
  ckpt.k = static_cast<int>(read_le<std::uint32_t>(in));
  ckpt.l = static_cast<int>(read_le<std::uint32_t>(in));
  ckpt.hidden = static_cast<int>(read_le<std::uint32_t>(in));
  ckpt.master_seed = read_le<std::uint64_t>(in);
  ckpt.iterations_done = read_le<std::uint64_t>(in);
  ckpt.episodes_done = read_le<std::uint64_t>(in);
  ckpt.transitions_stored = read_le<std::uint64_t>(in);
  ckpt.update_ticks = read_le<std::uint64_t>(in);
  const auto agents = read_le<std::uint32_t>(in);
  if (!in || agents > 4096) throw DataError("checkpoint: corrupt header in " + path);
  ckpt.agent_params.resize(agents);
  for (auto& nets : ckpt.agent_params) {
    const auto count = read_le<std::uint32_t>(in);
    if (!in || count > 64) throw DataError("checkpoint: corrupt section in " + path);
    nets.resize(count);
    for (Vector& params : nets) {
      const auto size = read_le<std::uint64_t>(in);
      if (!in || size > (1ULL << 32)) throw DataError("checkpoint: corrupt section in " + path);
      params.resize(static_cast<long>(size));
      for (std::uint64_t i = 0; i < size; ++i) params[static_cast<long>(i)] = read_le<double>(in);
    }
  }
  if (!in) throw DataError("checkpoint: truncated file " + path);
  return ckpt;
}

}  // namespace cbim
