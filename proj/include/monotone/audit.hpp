#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "monotone/core.hpp"
#include "monotone/report.hpp"

namespace monotone {

// Passes iff every hidden and output weight is >= 0. A failure names the
// first negative entry (layer index, unit, input; layer == -1 is the output).
AuditReport certify_monotone_structure(const ThresholdNetwork& net);

// Draws u uniform in [lo, hi]^d and v = u + nonnegative perturbation inside the
// box, and checks N(u) <= N(v).
AuditReport probe_monotonicity(const ThresholdNetwork& net, double lo, double hi,
                               std::uint64_t samples, std::uint64_t seed);

// Midpoint convexity N((u+v)/2) <= (N(u)+N(v))/2 on random pairs in
// [lo, hi]^d. Requires ReLU hidden layers (ActivationMismatch) and a monotone
// network (PreconditionViolated).
AuditReport relu_convexity_probe(const ThresholdNetwork& net, std::uint64_t triples,
                                 std::uint64_t seed, double lo = -1.0, double hi = 1.0);

struct GapWitness {
  double x = 0.0;
  double gap = 0.0;
};

// argmax over the grid {k * resolution} ∩ [0,1] of |N(x) - sqrt(x)|, for a
// one-dimensional monotone ReLU network.
GapWitness sqrt_gap_witness(const ThresholdNetwork& net, double resolution = 1e-4);

// {(d e_i, 0)}_{i<d} ∪ {((1,...,1), 1)}. Throws DimensionTooSmall for d < 2.
MonotoneDataset depth2_counterexample(std::size_t d);

// For a monotone network with a single threshold hidden layer and input
// dimension d, checks sum_i Ñ(x_i) >= Ñ(x_{d+1}) on the counterexample, where
// Ñ = N - output bias, in exact arithmetic. Throws ArchitectureMismatch.
AuditReport depth2_inequality_audit(const ThresholdNetwork& net, std::size_t d);

// sets[i] lists the first-layer units with nonzero output on point i.
struct ActivitySets {
  std::size_t units = 0;
  std::vector<std::vector<std::size_t>> sets;
};

ActivitySets activity_sets(const ThresholdNetwork& net, const MonotoneDataset& ds);

// For a chain with strictly increasing labels and a monotone network whose
// first layer is threshold: verifies I_1 ⊆ ... ⊆ I_n and, when the first
// layer has fewer than n units, locates i with I_i = I_{i+1} and confirms
// N(x_i) = N(x_{i+1}). Throws PreconditionViolated.
AuditReport chain_width_audit(const ThresholdNetwork& net, const MonotoneDataset& ds);

// Randomised campaigns over generated networks; each report aggregates the
// individual audits and keeps the first failing witness.
AuditReport depth2_campaign(std::size_t d, std::uint64_t nets, std::uint64_t seed,
                            std::size_t max_width = 32);
AuditReport convexity_campaign(std::uint64_t nets, std::uint64_t seed,
                               std::uint64_t triples_per_net = 64);
// first_width_slack: random first-layer widths are drawn from [1, n - slack].
AuditReport chain_width_campaign(std::uint64_t nets, std::uint64_t seed,
                                 std::size_t first_width_slack = 2);

}  // namespace monotone
