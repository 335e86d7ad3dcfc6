#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace oim {

// Undirected weighted pair. Stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Weighted max-cut problem on vertices [0, n). Edges are kept sorted
// lexicographically by (u, v); construction rejects self-loops, duplicates,
// out-of-range endpoints and non-finite weights.
class MaxCutInstance {
 public:
  MaxCutInstance(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  double total_weight() const noexcept { return total_weight_; }

  friend bool operator==(const MaxCutInstance&, const MaxCutInstance&) = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  double total_weight_ = 0.0;
};

struct Coupling {
  std::size_t j = 0;
  double value = 0.0;
};

// Ising problem H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i.
//
// Couplings are given once per unordered pair; the adjacency view is
// symmetric by construction so J_ij == J_ji always holds. Zero-valued
// couplings are dropped.
class IsingInstance {
 public:
  IsingInstance(std::size_t n, std::vector<Edge> couplings,
                std::vector<double> field = {});

  std::size_t size() const noexcept { return n_; }

  // Each unordered pair once, u < v, sorted.
  std::span<const Edge> pairs() const noexcept { return pairs_; }

  // Row i of the symmetric coupling matrix, sorted by column.
  std::span<const Coupling> neighbors(std::size_t i) const;

  double coupling(std::size_t i, std::size_t j) const;
  std::span<const double> field() const noexcept { return field_; }
  bool has_field() const noexcept { return has_field_; }

 private:
  std::size_t n_;
  std::vector<Edge> pairs_;
  std::vector<std::size_t> row_start_;
  std::vector<Coupling> adjacency_;
  std::vector<double> field_;
  bool has_field_ = false;
};

class SpinAssignment {
 public:
  explicit SpinAssignment(std::vector<int> spins);

  std::size_t size() const noexcept { return spins_.size(); }
  int operator[](std::size_t i) const { return spins_[i]; }
  std::span<const int> values() const noexcept { return spins_; }
  SpinAssignment flipped() const;

  friend bool operator==(const SpinAssignment&, const SpinAssignment&) = default;

 private:
  std::vector<int> spins_;
};

double hamiltonian_energy(const IsingInstance& inst, const SpinAssignment& s);
double cut_value(const MaxCutInstance& g, const SpinAssignment& s);

// J_ij = -w_ij, h = 0, so that cut(s) = (W - H(s)) / 2.
IsingInstance ising_from_maxcut(const MaxCutInstance& g);

struct GroundState {
  SpinAssignment spins;
  double energy;
  // Number of distinct minimizers; a spin-flip pair counts once when h = 0.
  std::size_t degeneracy;
};

inline constexpr std::size_t kBruteForceMaxSpins = 24;

// Exhaustive search over all assignments (half of them when h = 0). Throws
// CapacityError above kBruteForceMaxSpins.
GroundState brute_force_ground_state(const IsingInstance& inst);

// Edge-list text format: header "n m", then m lines "i j w" with 1-based
// vertices. Lines starting with '#' and blank lines are skipped.
MaxCutInstance parse_graph(std::istream& in);
MaxCutInstance parse_graph(const std::string& text);
MaxCutInstance read_graph_file(const std::string& path);

// Inverse of parse_graph; weights are written in shortest round-trip form.
void write_graph(std::ostream& out, const MaxCutInstance& g);
std::string serialize_graph(const MaxCutInstance& g);

enum class WeightSet { PlusMinusOne, Uniform };

// Each of the n(n-1)/2 pairs becomes an edge with probability `density`.
// Weights are +-1 (fair coin) or uniform on (-1, 1).
MaxCutInstance random_instance(std::size_t n, double density, WeightSet weights,
                               std::uint64_t seed);

WeightSet parse_weight_set(const std::string& name);
std::string to_string(WeightSet w);

}  // namespace oim
