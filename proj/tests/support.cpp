#include "support.hpp"

#include <stdexcept>

namespace mobnet::testsupport {

CountryRegistry random_registry(int n, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<CountryInfo> entries;
        for (int i = 0; i < n; ++i) {
            double pop = std::pow(10.0, rng.uniform(4.0, 8.0));  // 1e4 .. 1e8
            entries.push_back({iso_code(i), pop, rng.uniform(-80.0, 80.0),
                               rng.uniform(-170.0, 170.0)});
        }
        CountryRegistry registry(entries);
        DistanceMatrix dist = haversine_matrix(registry);
        bool distinct = true;
        for (int i = 0; i < n && distinct; ++i) {
            for (int j = i + 1; j < n && distinct; ++j) {
                if (!(dist(i, j) > 0.0)) distinct = false;
                for (int k = j + 1; k < n && distinct; ++k) {
                    if (dist(i, j) == dist(i, k)) distinct = false;
                }
            }
        }
        if (distinct) return registry;
    }
    throw std::runtime_error("random_registry: could not draw distinct distances");
}

LayerGraph random_digraph(int n, Rng& rng, double edge_prob) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        LayerGraph g(n, true);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j && rng.next_double() < edge_prob) {
                    g.add_weight(i, j, rng.uniform(0.1, 1.0));
                }
            }
        }
        if (g.edge_count() > 0) return g;
    }
    throw std::runtime_error("random_digraph: no edges after many attempts");
}

LayerGraph gravity_net(const CountryRegistry& registry, const DistanceMatrix& dist,
                       const std::vector<double>& s_out, double alpha, double log_c,
                       double noise_sigma, Rng& rng) {
    const int n = registry.size();
    LayerGraph g(n, true);
    const double c = std::exp(log_c);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double w = c * s_out[static_cast<size_t>(i)] * registry.entry(j).population /
                       std::pow(dist(i, j), alpha);
            if (noise_sigma > 0.0) w *= std::exp(noise_sigma * rng.next_normal());
            g.add_weight(i, j, w);
        }
    }
    return g;
}

double modularity_oracle(const LayerGraph& g, const Partition& partition, double a) {
    Strengths st = strengths(g);
    ModularityContext ctx;
    ctx.resolution = a;
    ctx.layers.push_back({st.out, st.in, st.total});

    const int n = g.node_count();
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || partition.label(i) != partition.label(j)) continue;
            q += 2.0 * g.weight(i, j) - 2.0 * a * null_weight(ctx, 0, i, j);
        }
    }
    return q / (2.0 * st.total);
}

PlantedNet planted_partition_net(int n, int k, int layers, double rewire, Rng& rng) {
    if (n % k != 0) throw std::invalid_argument("planted_partition_net: k must divide n");
    const int block = n / k;
    std::vector<int> labels(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = i / block;

    PlantedNet result{MultiLayerNetwork{uniform_registry(n)}, Partition(labels)};
    const double out_weight = 100.0;
    // signal goes to a few random community peers and noise arrives in
    // chunks of comparable weight, so a single layer is genuinely ambiguous
    // while the layer stack still carries the planted structure
    const int fanout = std::min(2, block - 1);
    const int noise_chunks = 1;
    for (int l = 0; l < layers; ++l) {
        LayerGraph g(n, true);
        for (int i = 0; i < n; ++i) {
            const int community = labels[static_cast<size_t>(i)];
            const double intra = out_weight * (1.0 - rewire) / static_cast<double>(fanout);
            for (int picked = 0; picked < fanout;) {
                int j = community * block + rng.next_int(block);
                if (j == i) continue;
                g.add_weight(i, j, intra);
                ++picked;
            }
            // noise: `rewire` of the out-weight sent to uniform destinations
            const double chunk = out_weight * rewire / static_cast<double>(noise_chunks);
            for (int c = 0; c < noise_chunks; ++c) {
                int dest = rng.next_int(n - 1);
                if (dest >= i) ++dest;
                g.add_weight(i, dest, chunk);
            }
        }
        result.net.add_layer("layer" + std::to_string(l), std::move(g));
    }
    return result;
}

}  // namespace mobnet::testsupport
