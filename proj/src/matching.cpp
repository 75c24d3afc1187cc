#include "monotone/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

namespace monotone {

namespace {

// Absolute slack for float round-off when comparing two exact-oracle values.
constexpr double kProbeSlack = 1e-12;

void check_square(std::size_t n, std::size_t size) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "matrix side must be >= 1");
  if (size != n * n) throw Error(ErrorCode::DimensionMismatch, "matrix must have n*n entries");
}

// SplitMix64: a counter-based stream, cheap to key per replica.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

std::uint64_t replica_key(std::uint64_t seed, std::uint64_t replica) {
  SplitMix64 outer(seed);
  const std::uint64_t base = outer.next();
  SplitMix64 inner(base ^ (replica * 0xD1B54A32D192ED03ULL));
  return inner.next();
}

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& g)
      : g_(g), n_(g.n()), left_(n_, kFree), right_(n_, kFree), dist_(n_) {}

  std::size_t run() {
    std::size_t size = 0;
    while (layer()) {
      for (std::size_t u = 0; u < n_; ++u)
        if (left_[u] == kFree && augment(static_cast<int>(u))) ++size;
    }
    return size;
  }

 private:
  static constexpr int kFree = -1;
  static constexpr int kInf = std::numeric_limits<int>::max();

  // BFS from free left vertices; true iff some free right vertex is reachable.
  bool layer() {
    std::vector<int> queue;
    queue.reserve(n_);
    for (std::size_t u = 0; u < n_; ++u) {
      if (left_[u] == kFree) {
        dist_[u] = 0;
        queue.push_back(static_cast<int>(u));
      } else {
        dist_[u] = kInf;
      }
    }
    bool found = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (std::uint64_t adj = g_.row(u); adj != 0; adj &= adj - 1) {
        const int v = std::countr_zero(adj);
        const int w = right_[v];
        if (w == kFree) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return found;
  }

  bool augment(int u) {
    for (std::uint64_t adj = g_.row(u); adj != 0; adj &= adj - 1) {
      const int v = std::countr_zero(adj);
      const int w = right_[v];
      if (w == kFree || (dist_[w] == dist_[u] + 1 && augment(w))) {
        left_[u] = v;
        right_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  const BipartiteGraph& g_;
  std::size_t n_;
  std::vector<int> left_, right_, dist_;
};

EdgeProbabilityMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> e(n * n);
  for (auto& v : e) v = unit(rng);
  return EdgeProbabilityMatrix(n, std::move(e));
}

nlohmann::json matrix_json(const EdgeProbabilityMatrix& p) {
  return nlohmann::json(std::vector<double>(p.entries().begin(), p.entries().end()));
}

void check_oracle_size(std::size_t n, std::size_t limit) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "matrix side must be >= 1");
  if (n > std::min(limit, kExactHardLimit))
    throw Error(ErrorCode::TooLarge, "exact oracle limited to n <= " +
                                         std::to_string(std::min(limit, kExactHardLimit)));
}

}  // namespace

EdgeProbabilityMatrix::EdgeProbabilityMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  check_square(n_, entries_.size());
  for (double v : entries_)
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(ErrorCode::InvalidNumber, "edge probability outside [0, 1]");
}

EdgeProbabilityMatrix EdgeProbabilityMatrix::uniform(std::size_t n, double p) {
  return EdgeProbabilityMatrix(n, std::vector<double>(n * n, p));
}

double distance(const EdgeProbabilityMatrix& a, const EdgeProbabilityMatrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "matrix sides differ");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    const double diff = a.entries()[k] - b.entries()[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

BipartiteGraph::BipartiteGraph(std::size_t n) : rows_(n, 0) {
  if (n > kMaxGraphSide)
    throw Error(ErrorCode::TooLarge, "bipartite graphs are limited to 64 vertices per side");
}

std::size_t maximum_matching_size(const BipartiteGraph& g) { return HopcroftKarp(g).run(); }

bool has_perfect_matching(const BipartiteGraph& g) {
  for (std::size_t i = 0; i < g.n(); ++i)
    if (g.row(i) == 0) return false;
  return maximum_matching_size(g) == g.n();
}

double exact_matching_probability(const EdgeProbabilityMatrix& p, std::size_t limit) {
  const std::size_t n = p.n();
  check_oracle_size(n, limit);
  const std::size_t subsets = std::size_t{1} << n;

  // A state is the family of right-vertex subsets that can be perfectly
  // matched to the rows seen so far, as a bitmask over the 2^n subsets.
  // Empty families never recover and are dropped.
  std::map<std::uint64_t, double> states{{std::uint64_t{1}, 1.0}};
  std::vector<double> weight(subsets);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < subsets; ++s) {
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) w *= ((s >> j) & 1u) ? p(i, j) : 1.0 - p(i, j);
      weight[s] = w;
    }
    std::map<std::uint64_t, double> next;
    for (const auto& [family, prob] : states) {
      for (std::size_t s = 0; s < subsets; ++s) {
        if (weight[s] == 0.0) continue;
        std::uint64_t grown = 0;
        for (std::uint64_t f = family; f != 0; f &= f - 1) {
          const std::size_t t = static_cast<std::size_t>(std::countr_zero(f));
          for (std::size_t avail = s & ~t; avail != 0; avail &= avail - 1)
            grown |= std::uint64_t{1} << (t | (std::size_t{1} << std::countr_zero(avail)));
        }
        if (grown != 0) next[grown] += prob * weight[s];
      }
    }
    states = std::move(next);
  }
  double total = 0.0;
  for (const auto& [family, prob] : states) total += prob;
  return total;
}

EdgeProbabilityMatrix truncate_probabilities(const EdgeProbabilityMatrix& p, int q) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "q must be >= 1");
  std::vector<double> out(p.entries().begin(), p.entries().end());
  if (q >= 1074) return EdgeProbabilityMatrix(p.n(), std::move(out));
  for (auto& v : out) {
    const double scaled = std::ldexp(v, q);
    // An infinite scale means v already has at most q fractional bits.
    if (!std::isinf(scaled)) v = std::ldexp(std::floor(scaled), -q);
    v = std::clamp(v, 0.0, 1.0);
  }
  return EdgeProbabilityMatrix(p.n(), std::move(out));
}

void EstimatorConfig::validate() const {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "q must be >= 1");
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "r must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
}

MatchingEstimate estimate_matching_probability(const EdgeProbabilityMatrix& p,
                                               const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t n = p.n();
  if (n > kMaxGraphSide)
    throw Error(ErrorCode::TooLarge, "estimator limited to 64 vertices per side");
  const EdgeProbabilityMatrix truncated = truncate_probabilities(p, cfg.q);
  const auto probs = truncated.entries();

  MatchingEstimate est;
  est.samples = cfg.r;
  BipartiteGraph g(n);
  for (std::uint64_t k = 0; k < cfg.r; ++k) {
    SplitMix64 stream(replica_key(cfg.seed, k));
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t mask = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (stream.uniform() < probs[i * n + j]) mask |= std::uint64_t{1} << j;
      g.set_row(i, mask);
    }
    if (has_perfect_matching(g)) ++est.successes;
  }
  est.value = static_cast<double>(est.successes) / static_cast<double>(cfg.r);
  return est;
}

EstimatorConfig default_parameters(std::size_t n, double eps, double fail_prob, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
  if (!(fail_prob > 0.0 && fail_prob < 1.0))
    throw Error(ErrorCode::InvalidArgument, "failure probability must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  EstimatorConfig cfg;
  cfg.seed = seed;
  cfg.delta = eps / 2.0;
  const double q = std::ceil(std::log2(4.0 * std::pow(nn, 4) / (eps * eps))) + 1.0;
  cfg.q = std::max(1, static_cast<int>(q));
  cfg.r = static_cast<std::uint64_t>(
      std::ceil(3.0 * std::log(2.0 / fail_prob) / (cfg.delta * cfg.delta)));
  return cfg;
}

double guaranteed_error_bound(std::size_t n, const EstimatorConfig& cfg) {
  const double nn = static_cast<double>(n);
  return cfg.delta + nn * nn / std::pow(std::sqrt(2.0), cfg.q);
}

double tight_error_bound(std::size_t n, const EstimatorConfig& cfg) {
  const double nn = static_cast<double>(n);
  return cfg.delta + nn * nn * std::ldexp(1.0, -cfg.q);
}

double failure_probability(const EstimatorConfig& cfg) {
  return 2.0 * std::exp(-static_cast<double>(cfg.r) * cfg.delta * cfg.delta / 3.0);
}

AuditReport lipschitz_probe(std::uint64_t pairs, std::size_t n, std::uint64_t seed,
                            std::size_t limit) {
  check_oracle_size(n, limit);
  AuditReport report{"lipschitz", true, pairs, seed};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> entry(0, n * n - 1);
  const double nn = static_cast<double>(n);
  double worst_ratio = 0.0;
  double worst_single = 0.0;

  for (std::uint64_t s = 0; s < pairs; ++s) {
    const EdgeProbabilityMatrix p = random_matrix(rng, n);
    // Alternate between independent pairs and small local perturbations.
    std::vector<double> e(p.entries().begin(), p.entries().end());
    if (s % 2 == 0) {
      for (auto& v : e) v = unit(rng);
    } else {
      const double radius = 0.1 * unit(rng);
      for (auto& v : e) v = std::clamp(v + radius * (2.0 * unit(rng) - 1.0), 0.0, 1.0);
    }
    const EdgeProbabilityMatrix p2(n, std::move(e));
    const double m1 = exact_matching_probability(p, limit);
    const double m2 = exact_matching_probability(p2, limit);
    const double dist = distance(p, p2);
    const double dm = std::abs(m1 - m2);
    if (dist > 0.0) worst_ratio = std::max(worst_ratio, dm / (nn * dist));
    if (dm > nn * dist + kProbeSlack && report.passed) {
      report.passed = false;
      report.witness = {{"kind", "n-lipschitz"}, {"pair", s}, {"p", matrix_json(p)},
                        {"p_prime", matrix_json(p2)}, {"m_p", m1}, {"m_p_prime", m2},
                        {"distance", dist}};
    }

    // One entry moved by rho.
    std::vector<double> single(p.entries().begin(), p.entries().end());
    const std::size_t k = entry(rng);
    single[k] = unit(rng);
    const double rho = std::abs(single[k] - p.entries()[k]);
    const EdgeProbabilityMatrix p3(n, std::move(single));
    const double m3 = exact_matching_probability(p3, limit);
    const double dm3 = std::abs(m1 - m3);
    if (rho > 0.0) worst_single = std::max(worst_single, dm3 / rho);
    if (dm3 > rho + kProbeSlack && report.passed) {
      report.passed = false;
      report.witness = {{"kind", "single-entry"}, {"pair", s}, {"p", matrix_json(p)},
                        {"entry", k}, {"rho", rho}, {"m_p", m1}, {"m_changed", m3}};
    }
  }
  report.details = {{"n", n}, {"max_ratio_to_n_lipschitz_bound", worst_ratio},
                    {"max_single_entry_ratio", worst_single}, {"slack", kProbeSlack}};
  return report;
}

AuditReport monotone_probe_m(std::uint64_t pairs, std::size_t n, std::uint64_t seed,
                             std::size_t limit) {
  check_oracle_size(n, limit);
  AuditReport report{"matching-monotone", true, pairs, seed};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> entry(0, n * n - 1);
  for (std::uint64_t s = 0; s < pairs; ++s) {
    const EdgeProbabilityMatrix low = random_matrix(rng, n);
    std::vector<double> e(low.entries().begin(), low.entries().end());
    if (s % 2 == 0) {
      for (auto& v : e) v = std::min(1.0, v + unit(rng) * (1.0 - v));
    } else {
      auto& v = e[entry(rng)];
      v = std::min(1.0, v + unit(rng) * (1.0 - v));
    }
    const EdgeProbabilityMatrix high(n, std::move(e));
    const double m_low = exact_matching_probability(low, limit);
    const double m_high = exact_matching_probability(high, limit);
    if (m_low > m_high + kProbeSlack && report.passed) {
      report.passed = false;
      report.witness = {{"pair", s}, {"p", matrix_json(low)}, {"p_prime", matrix_json(high)},
                        {"m_p", m_low}, {"m_p_prime", m_high}};
    }
  }
  report.details = {{"n", n}, {"slack", kProbeSlack}};
  return report;
}

}  // namespace monotone
