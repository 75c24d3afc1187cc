#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "monotone/error.hpp"
#include "monotone/report.hpp"

namespace monotone {

// p in [0,1]^{n x n}, row-major; entry (i, j) is the probability of edge
// (left i, right j) in G(p).
class EdgeProbabilityMatrix {
 public:
  EdgeProbabilityMatrix(std::size_t n, std::vector<double> entries);
  static EdgeProbabilityMatrix uniform(std::size_t n, double p);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const noexcept { return entries_; }

  friend bool operator==(const EdgeProbabilityMatrix&, const EdgeProbabilityMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

// Euclidean (Frobenius) distance.
double distance(const EdgeProbabilityMatrix& a, const EdgeProbabilityMatrix& b);

inline constexpr std::size_t kMaxGraphSide = 64;

// Bipartite graph on [n] x [n], n <= 64, one adjacency bitmask per left vertex.
class BipartiteGraph {
 public:
  explicit BipartiteGraph(std::size_t n);

  std::size_t n() const noexcept { return rows_.size(); }
  void add_edge(std::size_t i, std::size_t j) { rows_[i] |= std::uint64_t{1} << j; }
  bool has_edge(std::size_t i, std::size_t j) const { return (rows_[i] >> j) & 1u; }
  std::uint64_t row(std::size_t i) const { return rows_[i]; }
  void set_row(std::size_t i, std::uint64_t mask) { rows_[i] = mask; }

 private:
  std::vector<std::uint64_t> rows_;
};

// Hopcroft-Karp.
std::size_t maximum_matching_size(const BipartiteGraph& g);
bool has_perfect_matching(const BipartiteGraph& g);

inline constexpr std::size_t kDefaultExactLimit = 5;
// The family-of-subsets state fits in 64 bits only up to n = 6.
inline constexpr std::size_t kExactHardLimit = 6;

// m(p) = P(G(p) has a perfect matching), summed exactly over all 2^{n^2}
// edge sets (grouped row by row). Throws TooLarge above `limit`.
double exact_matching_probability(const EdgeProbabilityMatrix& p,
                                  std::size_t limit = kDefaultExactLimit);

// floor(p * 2^q) / 2^q per entry.
EdgeProbabilityMatrix truncate_probabilities(const EdgeProbabilityMatrix& p, int q);

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'2023'0b1a'5e5dULL;

struct EstimatorConfig {
  int q = 16;                // bits kept per probability
  std::uint64_t r = 100'000;  // sampled graphs
  std::uint64_t seed = kDefaultSeed;
  double delta = 0.01;       // sampling accuracy target

  // Throws InvalidArgument unless q >= 1, r >= 1, 0 < delta < 1.
  void validate() const;
};

struct MatchingEstimate {
  double value = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t samples = 0;
};

// Truncate p to q bits, sample r graphs, return the fraction with a perfect
// matching. Replica k draws from its own stream keyed by (seed, k).
MatchingEstimate estimate_matching_probability(const EdgeProbabilityMatrix& p,
                                               const EstimatorConfig& cfg);

// q = ceil(log2(4 n^4 / eps^2)) + 1, delta = eps / 2,
// r = ceil(3 ln(2 / fail_prob) / delta^2).
EstimatorConfig default_parameters(std::size_t n, double eps, double fail_prob,
                                   std::uint64_t seed = kDefaultSeed);

// delta + n^2 / sqrt(2)^q: holds except with probability failure_probability.
double guaranteed_error_bound(std::size_t n, const EstimatorConfig& cfg);
// delta + n^2 2^-q, from the per-entry truncation error 2^-q.
double tight_error_bound(std::size_t n, const EstimatorConfig& cfg);
// 2 exp(-r delta^2 / 3).
double failure_probability(const EstimatorConfig& cfg);

// |m(p) - m(p')| <= n ||p - p'|| on random pairs, and |dm| <= rho for
// single-entry changes by rho.
AuditReport lipschitz_probe(std::uint64_t pairs, std::size_t n, std::uint64_t seed,
                            std::size_t limit = kDefaultExactLimit);
// p <= p' entrywise implies m(p) <= m(p').
AuditReport monotone_probe_m(std::uint64_t pairs, std::size_t n, std::uint64_t seed,
                             std::size_t limit = kDefaultExactLimit);

}  // namespace monotone
