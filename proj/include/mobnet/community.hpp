// Community detection on the multi-layer network: loopless-null modularity
// with a resolution parameter, its layer average, a Combo-style optimizer,
// an exhaustive oracle, NMI and the similarity/sweep analyses.
#ifndef MOBNET_COMMUNITY_HPP
#define MOBNET_COMMUNITY_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mobnet/netcore.hpp"

namespace mobnet {

/// Per-layer strength bookkeeping for the loopless null model. Every layer
/// must have positive total weight.
struct ModularityContext {
    struct LayerStrengths {
        std::vector<double> s;  // out-strengths
        std::vector<double> t;  // in-strengths
        double m = 0.0;
    };
    std::vector<LayerStrengths> layers;
    double resolution = 1.0;

    static ModularityContext from(const MultiLayerNetwork& net, double a);
};

/// Averaged loopless null expectation for the ordered edge (i,j) of layer l:
/// (s_i t_j / (m - t_i) + s_i t_j / (m - s_j)) / 2. A zero numerator yields 0
/// outright; a vanishing denominator with flow to distribute is an error.
double null_weight(const ModularityContext& ctx, size_t layer, int i, int j);

/// (1/2m) * sum over ordered pairs i != j of
/// (2 w_ij - a s_i t_j/(m-t_i) - a s_i t_j/(m-s_j)) * delta(C_i, C_j).
double modularity(const LayerGraph& g, const Partition& partition, double a);

/// Plain average of the per-layer adjusted modularity scores.
double multilayer_modularity(const MultiLayerNetwork& net, const Partition& partition, double a);

struct ComboResult {
    Partition partition;
    double q = 0.0;
};

struct ComboOptions {
    int restarts = 1;
    // Called after every accepted redistribution with the current partition
    // and the incrementally tracked Q.
    std::function<void(const Partition&, double)> on_accept;
};

/// Combo-style modularity maximization. Repeatedly evaluates every community
/// pair (destination possibly empty), finds the best redistribution of the
/// pair's nodes by Kernighan-Lin passes (single-node shifts by best gain,
/// negative intermediate gains allowed, best prefix kept, a few seeded
/// restarts per pair) and applies the best one until none improves Q by more
/// than 1e-9. Several seed-derived trajectories with different starting
/// partitions are optimized and the best local optimum wins. Deterministic
/// given (net, a, seed).
ComboResult combo_optimize(const MultiLayerNetwork& net, double a, uint64_t seed,
                           const ComboOptions& options = {});

ComboResult combo_optimize(const LayerGraph& g, double a, uint64_t seed,
                           const ComboOptions& options = {});

/// Exhaustive argmax over all set partitions (n <= 12). Ties keep the
/// partition whose restricted growth string is lexicographically largest,
/// i.e. the first encountered when enumerating from the singleton partition
/// downwards; for the two-node tie this makes the singleton partition win.
ComboResult brute_force_partition(const MultiLayerNetwork& net, double a);

/// Normalized mutual information of two partitions of the same node set,
/// in [0,1], with 0*log(...) = 0; defined as 1 when both partitions are a
/// single community.
double nmi(const Partition& a, const Partition& b);

struct SweepPoint {
    double resolution = 0.0;
    int community_count = 0;
    double q = 0.0;
};

/// Runs combo_optimize once per resolution value with the same seed.
std::vector<SweepPoint> resolution_sweep(const MultiLayerNetwork& net,
                                         std::span<const double> a_values, uint64_t seed,
                                         const ComboOptions& options = {});

struct NamedPartition {
    std::string name;
    Partition partition;
};

struct SimilarityRow {
    std::string name;                 // mobility partition being scored
    std::vector<double> nmi_values;   // one per reference, in reference order
    double average = 0.0;
};

/// Average NMI of each mobility partition against every reference partition.
std::vector<SimilarityRow> similarity_report(const std::vector<NamedPartition>& mobility,
                                             const std::vector<NamedPartition>& references);

}  // namespace mobnet

#endif
