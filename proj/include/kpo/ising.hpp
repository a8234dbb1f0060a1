#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kpo {

// Real symmetric coupling matrix with zero diagonal, n >= 2.
class CouplingMatrix {
 public:
  // Throws InvalidArgument unless entries is square, n >= 2, exactly
  // symmetric, finite, and has an all-zero diagonal.
  explicit CouplingMatrix(Eigen::MatrixXd entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int j, int k) const { return entries_(j, k); }

  // Sum of |J_jk| over all ordered pairs; sets the scale of energy tolerances.
  double abs_sum() const;

  bool operator==(const CouplingMatrix& other) const {
    return entries_ == other.entries_;
  }

 private:
  Eigen::MatrixXd entries_;
};

// Ising spins, each exactly +1 or -1.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(std::vector<int> spins);

  int size() const { return static_cast<int>(spins_.size()); }
  int operator[](int j) const { return spins_[j]; }
  const std::vector<int>& spins() const { return spins_; }

  SpinConfiguration flipped() const;

  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::vector<int> spins_;
};

struct SpectrumLevel {
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
};

// All distinct Ising energies of an instance with their exact degeneracies.
struct IsingSpectrum {
  int n = 0;
  std::vector<SpectrumLevel> levels;  // strictly increasing energy
  double tolerance = 0.0;             // energies closer than this are one level

  double min_energy() const { return levels.front().energy; }
  double max_energy() const { return levels.back().energy; }
  std::uint64_t total_degeneracy() const;

  // Index of the level matching energy within tolerance, if any.
  std::optional<std::size_t> find_level(double energy) const;
};

enum class GraphKind { kFerroChain, kRandomBinary };

struct GraphSpec {
  GraphKind kind = GraphKind::kFerroChain;
  int n = 8;
  double coupling = 0.1;
  double density = 0.8;      // RandomBinary only
  std::uint64_t seed = 0;    // RandomBinary only

  void validate() const;
  bool operator==(const GraphSpec&) const = default;
};

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& name);

// E = -sum_{j,k} J_jk s_j s_k over all ordered pairs (each edge counted twice).
double ising_energy(const CouplingMatrix& J, const SpinConfiguration& sigma);

// E_XY = -sum_{j,k} J_jk cos(phi_j - phi_k).
double xy_energy(const CouplingMatrix& J, const std::vector<double>& phases);

inline constexpr int kMaxEnumerationSize = 24;

// Energies closer than kLevelTolerance * max(1, abs_sum()) form one level:
// far above summation rounding, far below any spacing of a real instance.
inline constexpr double kLevelTolerance = 1e-12;

// Exhaustive enumeration of all 2^n configurations. Throws SizeGuardError for
// n > kMaxEnumerationSize.
IsingSpectrum enumerate_spectrum(const CouplingMatrix& J);

// Periodic nearest-neighbour ring with every bond equal to coupling. n >= 3.
CouplingMatrix make_chain(int n, double coupling);

// Each unordered pair is an edge with probability density; edges carry
// +coupling or -coupling with equal probability. Draws come from the kGraph
// substream of seed, pairs visited in row-major (j < k) order.
CouplingMatrix make_random_binary(int n, double coupling, double density,
                                  std::uint64_t seed);

CouplingMatrix build_graph(const GraphSpec& spec);

// Dense CSV: one matrix row per line, comma separated, shortest round-trip
// decimal representation.
std::string coupling_to_csv(const CouplingMatrix& J);
CouplingMatrix coupling_from_csv(const std::string& text);
CouplingMatrix load_coupling_csv(const std::string& path);

}  // namespace kpo
