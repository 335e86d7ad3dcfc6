#include "oim/ising.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "oim/error.hpp"
#include "oim/io.hpp"

namespace oim {

namespace {

bool edge_less(const Edge& a, const Edge& b) {
  return std::tie(a.u, a.v) < std::tie(b.u, b.v);
}

// Normalizes to u < v, sorts, and rejects loops, duplicates and bad indices.
std::vector<Edge> canonical_edges(std::size_t n, std::vector<Edge> edges,
                                  const char* what) {
  for (auto& e : edges) {
    if (e.u == e.v) {
      throw ParameterError(std::string(what) + ": self-loop at vertex " +
                           std::to_string(e.u));
    }
    if (e.u >= n || e.v >= n) {
      throw ParameterError(std::string(what) + ": vertex index out of range");
    }
    if (!std::isfinite(e.weight)) {
      throw ParameterError(std::string(what) + ": non-finite weight");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), edge_less);
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v) {
      throw ParameterError(std::string(what) + ": duplicate pair (" +
                           std::to_string(edges[k].u) + ", " +
                           std::to_string(edges[k].v) + ")");
    }
  }
  return edges;
}

void require_same_size(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw DimensionError("spin assignment has length " + std::to_string(got) +
                         ", instance has " + std::to_string(expected));
  }
}

}  // namespace

MaxCutInstance::MaxCutInstance(std::size_t n, std::vector<Edge> edges)
    : n_(n) {
  if (n == 0) throw ParameterError("max-cut instance needs at least one vertex");
  edges_ = canonical_edges(n, std::move(edges), "max-cut instance");
  for (const auto& e : edges_) total_weight_ += e.weight;
  if (!std::isfinite(total_weight_)) {
    throw ParameterError("max-cut instance: total weight is not finite");
  }
}

IsingInstance::IsingInstance(std::size_t n, std::vector<Edge> couplings,
                             std::vector<double> field)
    : n_(n), field_(std::move(field)) {
  if (n == 0) throw ParameterError("Ising instance needs at least one spin");
  if (field_.empty()) field_.assign(n, 0.0);
  if (field_.size() != n) {
    throw DimensionError("field has length " + std::to_string(field_.size()) +
                         ", expected " + std::to_string(n));
  }
  for (double h : field_) {
    if (!std::isfinite(h)) throw ParameterError("non-finite external field");
    if (h != 0.0) has_field_ = true;
  }

  pairs_ = canonical_edges(n, std::move(couplings), "Ising instance");
  std::erase_if(pairs_, [](const Edge& e) { return e.weight == 0.0; });

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : pairs_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  row_start_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) row_start_[i + 1] = row_start_[i] + degree[i];
  adjacency_.resize(row_start_[n]);
  std::vector<std::size_t> cursor(row_start_.begin(), row_start_.end() - 1);
  for (const auto& e : pairs_) {
    adjacency_[cursor[e.u]++] = {e.v, e.weight};
    adjacency_[cursor[e.v]++] = {e.u, e.weight};
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(row_start_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(row_start_[i + 1]),
              [](const Coupling& a, const Coupling& b) { return a.j < b.j; });
  }
}

std::span<const Coupling> IsingInstance::neighbors(std::size_t i) const {
  return std::span<const Coupling>(adjacency_).subspan(
      row_start_[i], row_start_[i + 1] - row_start_[i]);
}

double IsingInstance::coupling(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw DimensionError("coupling index out of range");
  const auto row = neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Coupling& c, std::size_t col) { return c.j < col; });
  return (it != row.end() && it->j == j) ? it->value : 0.0;
}

SpinAssignment::SpinAssignment(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_) {
    if (s != 1 && s != -1) throw ParameterError("spin values must be +1 or -1");
  }
}

SpinAssignment SpinAssignment::flipped() const {
  std::vector<int> out(spins_.size());
  std::transform(spins_.begin(), spins_.end(), out.begin(), [](int s) { return -s; });
  return SpinAssignment(std::move(out));
}

double hamiltonian_energy(const IsingInstance& inst, const SpinAssignment& s) {
  require_same_size(inst.size(), s.size());
  double h = 0.0;
  for (const auto& e : inst.pairs()) h -= e.weight * s[e.u] * s[e.v];
  const auto field = inst.field();
  for (std::size_t i = 0; i < s.size(); ++i) h -= field[i] * s[i];
  return h;
}

double cut_value(const MaxCutInstance& g, const SpinAssignment& s) {
  require_same_size(g.size(), s.size());
  double cut = 0.0;
  for (const auto& e : g.edges()) {
    if (s[e.u] != s[e.v]) cut += e.weight;
  }
  return cut;
}

IsingInstance ising_from_maxcut(const MaxCutInstance& g) {
  std::vector<Edge> couplings;
  couplings.reserve(g.edges().size());
  for (const auto& e : g.edges()) couplings.push_back({e.u, e.v, -e.weight});
  return IsingInstance(g.size(), std::move(couplings));
}

GroundState brute_force_ground_state(const IsingInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kBruteForceMaxSpins) {
    throw CapacityError("brute force is limited to " +
                        std::to_string(kBruteForceMaxSpins) + " spins, instance has " +
                        std::to_string(n));
  }
  // Without a field the last spin is pinned to +1: every other assignment is
  // the global flip of one we visit.
  const std::size_t free_spins = inst.has_field() ? n : n - 1;
  const auto field = inst.field();

  double scale = 1.0;
  for (const auto& e : inst.pairs()) scale += std::abs(e.weight);
  for (double h : field) scale += std::abs(h);
  const double tol = 1e-9 * scale;

  std::vector<int> spins(n, 1);
  std::vector<double> local(n, 0.0);  // sum_j J_ij s_j
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& c : inst.neighbors(i)) local[i] += c.value;
  }
  double energy = hamiltonian_energy(inst, SpinAssignment(spins));

  double best = energy;
  std::vector<int> best_spins = spins;
  std::size_t count = 1;

  const std::uint64_t total = std::uint64_t{1} << free_spins;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto b = static_cast<std::size_t>(std::countr_zero(k));
    const int old = spins[b];
    energy += 2.0 * old * (local[b] + field[b]);
    spins[b] = -old;
    for (const auto& c : inst.neighbors(b)) local[c.j] -= 2.0 * c.value * old;

    if (energy < best - tol) {
      best = energy;
      best_spins = spins;
      count = 1;
    } else if (energy <= best + tol) {
      ++count;
    }
  }

  SpinAssignment minimizer(std::move(best_spins));
  const double exact = hamiltonian_energy(inst, minimizer);
  return GroundState{std::move(minimizer), exact, count};
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_index(std::string_view tok, std::size_t line, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected non-negative integer ") + what +
                               ", got '" + std::string(tok) + "'");
  }
  return value;
}

double parse_weight(std::string_view tok, std::size_t line) {
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (body.empty() || ec != std::errc() || ptr != body.data() + body.size() ||
      !std::isfinite(value)) {
    throw ParseError(line, "expected finite real weight, got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

MaxCutInstance parse_graph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto tokens = split_ws(line);

    if (!have_header) {
      if (tokens.size() != 2) throw ParseError(line_no, "header must be 'n m'");
      n = parse_index(tokens[0], line_no, "vertex count");
      m = parse_index(tokens[1], line_no, "edge count");
      if (n == 0) throw ParseError(line_no, "vertex count must be positive");
      have_header = true;
      continue;
    }

    if (tokens.size() != 3) throw ParseError(line_no, "edge line must be 'i j w'");
    if (edges.size() == m) {
      throw ParseError(line_no, "more edge lines than the declared " + std::to_string(m));
    }
    std::size_t i = parse_index(tokens[0], line_no, "vertex");
    std::size_t j = parse_index(tokens[1], line_no, "vertex");
    const double w = parse_weight(tokens[2], line_no);
    for (std::size_t idx : {i, j}) {
      if (idx < 1 || idx > n) {
        throw ParseError(line_no, "vertex index " + std::to_string(idx) +
                                      " out of range [1, " + std::to_string(n) + "]");
      }
    }
    if (i == j) throw ParseError(line_no, "self-loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
    if (!seen.emplace(i, j).second) {
      throw ParseError(line_no, "duplicate edge (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
    }
    edges.push_back({i - 1, j - 1, w});
  }

  if (!have_header) throw ParseError(line_no, "missing header line");
  if (edges.size() != m) {
    throw ParseError(line_no, "header declares " + std::to_string(m) + " edges, found " +
                                  std::to_string(edges.size()));
  }
  return MaxCutInstance(n, std::move(edges));
}

MaxCutInstance parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

MaxCutInstance read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const MaxCutInstance& g) {
  out << g.size() << ' ' << g.edges().size() << '\n';
  for (const auto& e : g.edges()) {
    out << (e.u + 1) << ' ' << (e.v + 1) << ' ' << format_shortest(e.weight) << '\n';
  }
}

std::string serialize_graph(const MaxCutInstance& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

MaxCutInstance random_instance(std::size_t n, double density, WeightSet weights,
                               std::uint64_t seed) {
  if (n < 2) throw ParameterError("random instance needs n >= 2");
  if (!(density > 0.0 && density <= 1.0)) {
    throw ParameterError("density must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> symmetric(-1.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Both draws happen for every pair so the weight stream does not
      // depend on which pairs were kept.
      const bool keep = unit(rng) < density;
      const double w = weights == WeightSet::PlusMinusOne
                           ? (unit(rng) < 0.5 ? -1.0 : 1.0)
                           : symmetric(rng);
      if (keep) edges.push_back({i, j, w});
    }
  }
  return MaxCutInstance(n, std::move(edges));
}

WeightSet parse_weight_set(const std::string& name) {
  if (name == "pm1") return WeightSet::PlusMinusOne;
  if (name == "uniform") return WeightSet::Uniform;
  throw ParameterError("unknown weight set '" + name + "' (expected pm1 or uniform)");
}

std::string to_string(WeightSet w) {
  return w == WeightSet::PlusMinusOne ? "pm1" : "uniform";
}

}  // namespace oim
