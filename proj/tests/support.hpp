#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cbim/rng.hpp"

namespace cbim::testing {

inline std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "cbim-tests";
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string write_file(const std::string& name, const std::string& content) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

// Undirected preferential-attachment edge list: nodes arrive one at a time
// and attach m edges to existing nodes chosen proportionally to degree.
inline std::string preferential_attachment_edges(int n, int m, std::uint64_t seed) {
  Rng rng(RngLabel{seed, Stream::kSynthetic});
  std::vector<std::pair<int, int>> edges;
  std::vector<int> endpoint_pool;  // node id repeated once per incident edge

  // seed clique over the first m+1 nodes
  for (int u = 0; u <= m; ++u) {
    for (int v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      endpoint_pool.push_back(u);
      endpoint_pool.push_back(v);
    }
  }
  for (int u = m + 1; u < n; ++u) {
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < m) {
      const int candidate = endpoint_pool[rng.below(endpoint_pool.size())];
      bool duplicate = false;
      for (const int c : chosen) duplicate = duplicate || c == candidate;
      if (!duplicate) chosen.push_back(candidate);
    }
    for (const int v : chosen) {
      edges.emplace_back(u, v);
      endpoint_pool.push_back(u);
      endpoint_pool.push_back(v);
    }
  }

  std::ostringstream os;
  os << "# synthetic preferential-attachment graph n=" << n << " m=" << m << "\n";
  for (const auto& [u, v] : edges) os << u << " " << v << "\n";
  return os.str();
}

inline std::string write_pa_graph(const std::string& name, int n, int m, std::uint64_t seed) {
  return write_file(name, preferential_attachment_edges(n, m, seed));
}

}  // namespace cbim::testing
