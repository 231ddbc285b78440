// Shared helpers for the unit and acceptance suites: tiny graph builders,
// synthetic registries/networks and independent oracles.
#ifndef MOBNET_TESTS_SUPPORT_HPP
#define MOBNET_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "mobnet/community.hpp"
#include "mobnet/flowmodels.hpp"
#include "mobnet/netcore.hpp"

namespace mobnet::testsupport {

// Deterministic generator (splitmix64 core) so expected values cannot drift
// with standard library distribution changes.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    int next_int(int bound) { return static_cast<int>(next_u64() % static_cast<uint64_t>(bound)); }

    // standard normal via Box-Muller
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    uint64_t state_;
};

// "AA", "AB", ... synthetic iso codes
inline std::string iso_code(int i) {
    std::string code(2, 'A');
    code[0] = static_cast<char>('A' + (i / 26) % 26);
    code[1] = static_cast<char>('A' + i % 26);
    return code;
}

inline LayerGraph make_graph(int n, const std::vector<std::tuple<int, int, double>>& edges,
                             bool loop_free = true) {
    LayerGraph g(n, loop_free);
    for (const auto& [i, j, w] : edges) g.add_weight(i, j, w);
    return g;
}

inline CountryRegistry uniform_registry(int n, double population = 1e6) {
    std::vector<CountryInfo> entries;
    for (int i = 0; i < n; ++i) {
        entries.push_back({iso_code(i), population,
                           -60.0 + 120.0 * static_cast<double>(i) / std::max(1, n - 1),
                           -150.0 + 300.0 * static_cast<double>(i) / std::max(1, n)});
    }
    return CountryRegistry(entries);
}

/// Random registry with log-uniform populations and pairwise distinct
/// centroid distances (regenerated until distinct, which in practice never
/// loops).
CountryRegistry random_registry(int n, Rng& rng);

/// Random loop-free weighted digraph with at least one edge.
LayerGraph random_digraph(int n, Rng& rng, double edge_prob = 0.5);

/// Edges generated exactly by the global gravity law around the given
/// registry; log-normal multiplicative noise with sigma >= 0.
LayerGraph gravity_net(const CountryRegistry& registry, const DistanceMatrix& dist,
                       const std::vector<double>& s_out, double alpha, double log_c,
                       double noise_sigma, Rng& rng);

/// Direct-summation modularity over ordered pairs, built on null_weight --
/// the independent oracle for the factorized implementation.
double modularity_oracle(const LayerGraph& g, const Partition& partition, double a);

struct PlantedNet {
    MultiLayerNetwork net;
    Partition planted;
};

/// Multi-layer planted-partition network: `layers` copies of a block
/// structure on n nodes and k equal communities, each layer independently
/// corrupted by rewiring `rewire` of every node's out-weight to uniformly
/// random destinations.
PlantedNet planted_partition_net(int n, int k, int layers, double rewire, Rng& rng);

}  // namespace mobnet::testsupport

#endif
