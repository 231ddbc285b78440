// Core data model: country registry, weighted digraph layers, multi-layer
// stacks and partitions.
#ifndef MOBNET_NETCORE_HPP
#define MOBNET_NETCORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mobnet {

struct CountryInfo {
    std::string iso;   // 2- or 3-letter code, used verbatim as node identity
    double population = 0.0;
    double lat = 0.0;  // centroid, degrees
    double lon = 0.0;
};

/// Canonical node set shared by all layers. Dense ids are assigned in
/// insertion order and are an internal detail; the ISO code is the identity.
class CountryRegistry {
public:
    CountryRegistry() = default;
    explicit CountryRegistry(std::vector<CountryInfo> entries);

    int size() const { return static_cast<int>(entries_.size()); }
    const CountryInfo& entry(int id) const { return entries_.at(static_cast<size_t>(id)); }
    const std::vector<CountryInfo>& entries() const { return entries_; }

    std::optional<int> find(const std::string& iso) const;
    int id_of(const std::string& iso) const;  // throws on unknown code

private:
    std::vector<CountryInfo> entries_;
    std::unordered_map<std::string, int> index_;
};

/// One directed weighted OD layer. Weights are stored sparsely; an absent
/// entry is zero and explicit zeros are never kept.
class LayerGraph {
public:
    using EdgeMap = std::map<std::pair<int, int>, double>;

    LayerGraph() = default;
    explicit LayerGraph(int node_count, bool loop_free = false);

    int node_count() const { return n_; }
    bool loop_free() const { return loop_free_; }
    void set_loop_free(bool v);

    // Accumulates onto the existing entry; rejects negative weights and,
    // for loop-free graphs, diagonal entries.
    void add_weight(int origin, int dest, double w);
    double weight(int origin, int dest) const;

    size_t edge_count() const { return w_.size(); }
    const EdgeMap& edges() const { return w_; }

private:
    void check_node(int v) const;

    int n_ = 0;
    bool loop_free_ = false;
    EdgeMap w_;
};

struct Strengths {
    std::vector<double> out;  // s_i = sum_j w_ij
    std::vector<double> in;   // t_j = sum_i w_ij
    double total = 0.0;       // m = sum_ij w_ij
};

Strengths strengths(const LayerGraph& g);

/// Removes every (i,i) entry; all other weights are kept as-is. Idempotent.
LayerGraph strip_loops(const LayerGraph& g);

/// Ordered stack of layers over one shared registry. Layer names are unique
/// and every layer has the registry's node count.
class MultiLayerNetwork {
public:
    MultiLayerNetwork() = default;
    explicit MultiLayerNetwork(CountryRegistry registry);

    void add_layer(std::string name, LayerGraph graph);

    const CountryRegistry& registry() const { return registry_; }
    int node_count() const { return registry_.size(); }
    size_t layer_count() const { return layers_.size(); }

    const LayerGraph& layer(size_t idx) const { return layers_.at(idx).second; }
    const std::string& layer_name(size_t idx) const { return layers_.at(idx).first; }
    const LayerGraph* find_layer(const std::string& name) const;

private:
    CountryRegistry registry_;
    std::vector<std::pair<std::string, LayerGraph>> layers_;
};

/// Single-pass node filter: drops every country whose in- OR out-strength is
/// strictly below `threshold` in any layer, then re-indexes the survivors.
/// The pass is applied once, not iterated to a fixpoint, so strengths in the
/// result may themselves fall below the threshold.
MultiLayerNetwork filter_low_strength(const MultiLayerNetwork& net, double threshold);

/// Node -> community label map with labels contiguous from 0. Construction
/// compacts arbitrary labels by order of first appearance.
class Partition {
public:
    Partition() = default;
    explicit Partition(const std::vector<int>& labels);

    static Partition singletons(int n);
    static Partition all_in_one(int n);

    int node_count() const { return static_cast<int>(labels_.size()); }
    int community_count() const { return static_cast<int>(sizes_.size()); }
    int label(int node) const { return labels_.at(static_cast<size_t>(node)); }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<int>& community_sizes() const { return sizes_; }

    bool operator==(const Partition& other) const { return labels_ == other.labels_; }

private:
    std::vector<int> labels_;
    std::vector<int> sizes_;
};

}  // namespace mobnet

#endif
