#include "kpo/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "kpo/errors.hpp"
#include "kpo/output.hpp"
#include "kpo/rng.hpp"

namespace kpo {

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  const auto n = entries_.rows();
  if (n != entries_.cols())
    throw InvalidArgument("coupling matrix must be square");
  if (n < 2) throw InvalidArgument("coupling matrix needs n >= 2");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (entries_(j, j) != 0.0)
      throw InvalidArgument("coupling matrix diagonal must be zero (row " +
                            std::to_string(j) + ")");
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!std::isfinite(entries_(j, k)))
        throw InvalidArgument("coupling matrix has a non-finite entry");
      if (entries_(j, k) != entries_(k, j))
        throw InvalidArgument("coupling matrix must be symmetric (entry " +
                              std::to_string(j) + "," + std::to_string(k) +
                              ")");
    }
  }
}

double CouplingMatrix::abs_sum() const { return entries_.cwiseAbs().sum(); }

SpinConfiguration::SpinConfiguration(std::vector<int> spins)
    : spins_(std::move(spins)) {
  for (int s : spins_)
    if (s != 1 && s != -1)
      throw InvalidArgument("spin values must be +1 or -1");
}

SpinConfiguration SpinConfiguration::flipped() const {
  SpinConfiguration out = *this;
  for (int& s : out.spins_) s = -s;
  return out;
}

std::uint64_t IsingSpectrum::total_degeneracy() const {
  std::uint64_t total = 0;
  for (const auto& l : levels) total += l.degeneracy;
  return total;
}

std::optional<std::size_t> IsingSpectrum::find_level(double energy) const {
  auto it = std::lower_bound(
      levels.begin(), levels.end(), energy - tolerance,
      [](const SpectrumLevel& l, double e) { return l.energy < e; });
  if (it != levels.end() && std::abs(it->energy - energy) <= tolerance)
    return static_cast<std::size_t>(it - levels.begin());
  return std::nullopt;
}

void GraphSpec::validate() const {
  if (!(coupling > 0.0)) throw InvalidArgument("graph.J must be > 0");
  if (!(density >= 0.0 && density <= 1.0))
    throw InvalidArgument("graph.density must be in [0, 1]");
  if (kind == GraphKind::kFerroChain && n < 3)
    throw InvalidArgument("graph.n must be >= 3 for a chain");
  if (n < 2) throw InvalidArgument("graph.n must be >= 2");
}

std::string to_string(GraphKind kind) {
  return kind == GraphKind::kFerroChain ? "chain" : "random_binary";
}

GraphKind graph_kind_from_string(const std::string& name) {
  if (name == "chain") return GraphKind::kFerroChain;
  if (name == "random_binary") return GraphKind::kRandomBinary;
  throw InvalidArgument("unknown graph kind '" + name +
                        "' (expected chain or random_binary)");
}

double ising_energy(const CouplingMatrix& J, const SpinConfiguration& sigma) {
  const int n = J.size();
  if (sigma.size() != n)
    throw DimensionMismatch("ising_energy: " + std::to_string(sigma.size()) +
                            " spins for an n=" + std::to_string(n) + " matrix");
  double e = 0.0;
  for (int j = 0; j < n; ++j) {
    double row = 0.0;
    for (int k = 0; k < n; ++k) row += J(j, k) * sigma[k];
    e -= sigma[j] * row;
  }
  return e;
}

double xy_energy(const CouplingMatrix& J, const std::vector<double>& phases) {
  const int n = J.size();
  if (static_cast<int>(phases.size()) != n)
    throw DimensionMismatch("xy_energy: " + std::to_string(phases.size()) +
                            " phases for an n=" + std::to_string(n) +
                            " matrix");
  double e = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) e -= J(j, k) * std::cos(phases[j] - phases[k]);
  return e;
}

namespace {

// Energies of the 2^(n-1) configurations with spin 0 fixed to +1; the other
// half follows from global flip symmetry.
std::vector<double> half_space_energies(const CouplingMatrix& J) {
  const int n = J.size();
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  std::vector<double> energies;
  energies.reserve(count);

  if (n <= 16) {
    std::vector<int> s(n);
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      s[0] = 1;
      for (int j = 1; j < n; ++j) s[j] = (bits >> (j - 1)) & 1 ? -1 : 1;
      energies.push_back(ising_energy(J, SpinConfiguration(s)));
    }
    return energies;
  }

  // Gray-code walk: one spin flip per step with local fields h_j updated in
  // O(n). Energy and fields are recomputed from scratch every kResync steps
  // so rounding cannot accumulate across the walk.
  constexpr std::uint64_t kResync = 1024;
  std::vector<int> s(n, 1);
  std::vector<double> h(n, 0.0);
  auto resync = [&] {
    for (int j = 0; j < n; ++j) {
      h[j] = 0.0;
      for (int k = 0; k < n; ++k) h[j] += J(j, k) * s[k];
    }
    return ising_energy(J, SpinConfiguration(s));
  };
  double e = resync();
  energies.push_back(e);
  for (std::uint64_t step = 1; step < count; ++step) {
    const int i = 1 + std::countr_zero(step);
    e += 4.0 * s[i] * h[i];
    const double delta = -2.0 * s[i];
    for (int k = 0; k < n; ++k) h[k] += J(k, i) * delta;
    s[i] = -s[i];
    if (step % kResync == 0) e = resync();
    energies.push_back(e);
  }
  return energies;
}

}  // namespace

IsingSpectrum enumerate_spectrum(const CouplingMatrix& J) {
  const int n = J.size();
  if (n > kMaxEnumerationSize)
    throw SizeGuardError("enumerate_spectrum: n=" + std::to_string(n) +
                         " exceeds the brute-force limit of " +
                         std::to_string(kMaxEnumerationSize));
  std::vector<double> energies = half_space_energies(J);
  std::sort(energies.begin(), energies.end());

  IsingSpectrum spectrum;
  spectrum.n = n;
  spectrum.tolerance = kLevelTolerance * std::max(1.0, J.abs_sum());
  std::size_t i = 0;
  while (i < energies.size()) {
    std::size_t j = i + 1;
    while (j < energies.size() &&
           energies[j] - energies[j - 1] <= spectrum.tolerance)
      ++j;
    // Report the median of the cluster as the level energy.
    spectrum.levels.push_back({energies[i + (j - i) / 2], 2 * (j - i)});
    i = j;
  }
  return spectrum;
}

CouplingMatrix make_chain(int n, double coupling) {
  if (n < 3) throw InvalidArgument("make_chain: n must be >= 3");
  if (!(coupling > 0.0)) throw InvalidArgument("make_chain: J must be > 0");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    m(j, k) = coupling;
    m(k, j) = coupling;
  }
  return CouplingMatrix(std::move(m));
}

CouplingMatrix make_random_binary(int n, double coupling, double density,
                                  std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("make_random_binary: n must be >= 2");
  if (!(coupling > 0.0))
    throw InvalidArgument("make_random_binary: J must be > 0");
  if (!(density >= 0.0 && density <= 1.0))
    throw InvalidArgument("make_random_binary: density must be in [0, 1]");
  Rng rng = make_rng(seed, {tag(Stream::kGraph)});
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (uniform01(rng) >= density) continue;
      const double value = uniform01(rng) < 0.5 ? coupling : -coupling;
      m(j, k) = value;
      m(k, j) = value;
    }
  }
  return CouplingMatrix(std::move(m));
}

CouplingMatrix build_graph(const GraphSpec& spec) {
  spec.validate();
  if (spec.kind == GraphKind::kFerroChain)
    return make_chain(spec.n, spec.coupling);
  return make_random_binary(spec.n, spec.coupling, spec.density, spec.seed);
}

std::string coupling_to_csv(const CouplingMatrix& J) {
  std::string out;
  for (int j = 0; j < J.size(); ++j) {
    for (int k = 0; k < J.size(); ++k) {
      if (k) out += ',';
      out += format_number(J(j, k));
    }
    out += '\n';
  }
  return out;
}

CouplingMatrix coupling_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size()
                                                               : comma) -
                                       start);
      try {
        row.push_back(parse_number(field));
      } catch (const InvalidArgument& e) {
        throw InvalidArgument("coupling CSV line " + std::to_string(line_no) +
                              ": " + e.what());
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (static_cast<Eigen::Index>(rows[j].size()) != n)
      throw InvalidArgument("coupling CSV: row " + std::to_string(j + 1) +
                            " has " + std::to_string(rows[j].size()) +
                            " entries, expected " + std::to_string(n));
    for (Eigen::Index k = 0; k < n; ++k) m(j, k) = rows[j][k];
  }
  return CouplingMatrix(std::move(m));
}

CouplingMatrix load_coupling_csv(const std::string& path) {
  return coupling_from_csv(read_file(path));
}

}  // namespace kpo
