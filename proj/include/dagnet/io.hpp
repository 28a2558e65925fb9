#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dagnet/convergence.hpp"
#include "dagnet/network.hpp"
#include "dagnet/topology.hpp"

namespace dagnet {

// Parsed `key = value` text: one assignment per line, '#' starts a comment,
// blank lines ignored.  Values keep their raw text; typed getters convert on
// demand and throw ParseError naming the origin and line on any problem.
class KeyValueFile {
 public:
  static KeyValueFile parse_text(const std::string& text,
                                 const std::string& origin = "<string>");
  static KeyValueFile load(const std::string& path);

  bool has(const std::string& key) const;
  // Keys in first-appearance order (duplicates are a ParseError).
  const std::vector<std::string>& keys() const { return order_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // "[1, 2, 3]"
  std::vector<int> get_int_list(const std::string& key) const;
  // "[[0, 1], [1, 2]]"
  std::vector<std::pair<int, int>> get_pair_list(const std::string& key) const;

  // Throws ParseError when the file holds a key outside `allowed` (typo
  // protection for config files).
  void require_known(const std::vector<std::string>& allowed) const;

 private:
  std::string origin_;
  std::map<std::string, std::pair<std::string, int>> values_;  // value, line
  std::vector<std::string> order_;

  const std::string& raw(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& why) const;
};

// FNV-1a over the bytes of a string; the stable 64-bit fingerprint used to
// tie weight files and trajectories to the exact topology / configuration
// they came from.
std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

// Canonical text form of a topology:
//   widths = [...]
//   edges = [[i, j], ...]
//   code_layer = c        (only when present)
// Round-trips through topology_from_text; the topology hash is the FNV
// fingerprint of exactly this text.
std::string topology_to_text(const DagTopology& t);
DagTopology topology_from_text(const std::string& text,
                               const std::string& origin = "<string>");
DagTopology load_topology(const std::string& path);
void save_topology(const std::string& path, const DagTopology& t);
std::uint64_t topology_hash(const DagTopology& t);

// Weight container: a small text header binding the payload to a topology
// hash, then one line of C99 hexfloats per matrix row.  Hexfloats make the
// round-trip exact — a saved and reloaded WeightSet is bitwise identical.
void save_matrices(const std::string& path, const EdgeMatrices& m,
                   std::uint64_t topo_hash);
// Throws LoadMismatch when the stored hash or shapes disagree with `t`.
WeightSet load_weights(const std::string& path, const DagTopology& t);

// Trajectory CSV: `# key = value` header lines carrying the run fingerprint
// and the optimizer parameters, a column-name line, then one row per
// transition.  Only the per-record totals survive the round-trip; per-edge
// detail stays in memory.
struct TrajectoryFile {
  std::vector<IterationRecord> records;
  std::uint64_t config_hash = 0;
  double eta = 0.0;
  double s = 0.0;
};
void save_trajectory(const std::string& path,
                     const std::vector<IterationRecord>& records,
                     std::uint64_t config_hash, double eta, double s);
TrajectoryFile load_trajectory(const std::string& path);

// Shortest decimal form that parses back to exactly the same double
// (printf "%.17g" tightened where fewer digits round-trip).
std::string format_double(double x);

}  // namespace dagnet
