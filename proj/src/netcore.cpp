#include "mobnet/netcore.hpp"

#include <cmath>
#include <stdexcept>

namespace mobnet {

namespace {

bool valid_iso(const std::string& iso) {
    if (iso.size() < 2 || iso.size() > 3) return false;
    for (char c : iso) {
        if (!std::isalpha(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

CountryRegistry::CountryRegistry(std::vector<CountryInfo> entries) : entries_(std::move(entries)) {
    index_.reserve(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) {
        const CountryInfo& e = entries_[i];
        if (!valid_iso(e.iso)) {
            throw std::invalid_argument("registry: bad iso code '" + e.iso + "'");
        }
        if (!(e.population >= 0.0) || !std::isfinite(e.population)) {
            throw std::invalid_argument("registry: negative or non-finite population for " + e.iso);
        }
        if (!(e.lat >= -90.0 && e.lat <= 90.0) || !(e.lon >= -180.0 && e.lon <= 180.0)) {
            throw std::invalid_argument("registry: centroid out of range for " + e.iso);
        }
        auto [it, inserted] = index_.emplace(e.iso, static_cast<int>(i));
        if (!inserted) {
            throw std::invalid_argument("registry: duplicate iso code '" + e.iso + "'");
        }
    }
}

std::optional<int> CountryRegistry::find(const std::string& iso) const {
    auto it = index_.find(iso);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int CountryRegistry::id_of(const std::string& iso) const {
    auto id = find(iso);
    if (!id) throw std::out_of_range("registry: unknown iso code '" + iso + "'");
    return *id;
}

LayerGraph::LayerGraph(int node_count, bool loop_free) : n_(node_count), loop_free_(loop_free) {
    if (node_count < 0) throw std::invalid_argument("LayerGraph: negative node count");
}

void LayerGraph::check_node(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("LayerGraph: node id out of range");
}

void LayerGraph::set_loop_free(bool v) {
    if (v) {
        for (const auto& [edge, w] : w_) {
            (void)w;
            if (edge.first == edge.second) {
                throw std::logic_error("LayerGraph: loop entry present, cannot mark loop-free");
            }
        }
    }
    loop_free_ = v;
}

void LayerGraph::add_weight(int origin, int dest, double w) {
    check_node(origin);
    check_node(dest);
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("LayerGraph: weight must be a nonnegative finite value");
    }
    if (loop_free_ && origin == dest) {
        throw std::invalid_argument("LayerGraph: loop edge on a loop-free graph");
    }
    if (w == 0.0) return;  // absent entry == 0
    w_[{origin, dest}] += w;
}

double LayerGraph::weight(int origin, int dest) const {
    check_node(origin);
    check_node(dest);
    auto it = w_.find({origin, dest});
    return it == w_.end() ? 0.0 : it->second;
}

Strengths strengths(const LayerGraph& g) {
    Strengths r;
    r.out.assign(static_cast<size_t>(g.node_count()), 0.0);
    r.in.assign(static_cast<size_t>(g.node_count()), 0.0);
    for (const auto& [edge, w] : g.edges()) {
        r.out[static_cast<size_t>(edge.first)] += w;
        r.in[static_cast<size_t>(edge.second)] += w;
        r.total += w;
    }
    return r;
}

LayerGraph strip_loops(const LayerGraph& g) {
    LayerGraph out(g.node_count(), true);
    for (const auto& [edge, w] : g.edges()) {
        if (edge.first != edge.second) out.add_weight(edge.first, edge.second, w);
    }
    return out;
}

MultiLayerNetwork::MultiLayerNetwork(CountryRegistry registry) : registry_(std::move(registry)) {}

void MultiLayerNetwork::add_layer(std::string name, LayerGraph graph) {
    if (graph.node_count() != registry_.size()) {
        throw std::invalid_argument("MultiLayerNetwork: layer '" + name +
                                    "' node count differs from registry");
    }
    if (find_layer(name) != nullptr) {
        throw std::invalid_argument("MultiLayerNetwork: duplicate layer name '" + name + "'");
    }
    layers_.emplace_back(std::move(name), std::move(graph));
}

const LayerGraph* MultiLayerNetwork::find_layer(const std::string& name) const {
    for (const auto& [n, g] : layers_) {
        if (n == name) return &g;
    }
    return nullptr;
}

MultiLayerNetwork filter_low_strength(const MultiLayerNetwork& net, double threshold) {
    if (!(threshold >= 0.0)) {
        throw std::invalid_argument("filter_low_strength: threshold must be >= 0");
    }
    const int n = net.node_count();
    std::vector<bool> keep(static_cast<size_t>(n), true);
    for (size_t l = 0; l < net.layer_count(); ++l) {
        Strengths st = strengths(net.layer(l));
        for (int i = 0; i < n; ++i) {
            if (st.out[static_cast<size_t>(i)] < threshold || st.in[static_cast<size_t>(i)] < threshold) {
                keep[static_cast<size_t>(i)] = false;
            }
        }
    }

    std::vector<int> new_id(static_cast<size_t>(n), -1);
    std::vector<CountryInfo> surviving;
    for (int i = 0; i < n; ++i) {
        if (keep[static_cast<size_t>(i)]) {
            new_id[static_cast<size_t>(i)] = static_cast<int>(surviving.size());
            surviving.push_back(net.registry().entry(i));
        }
    }
    if (surviving.empty()) {
        throw std::runtime_error("filter_low_strength: threshold removed every node");
    }

    MultiLayerNetwork out{CountryRegistry(surviving)};
    for (size_t l = 0; l < net.layer_count(); ++l) {
        const LayerGraph& src = net.layer(l);
        LayerGraph dst(static_cast<int>(surviving.size()), src.loop_free());
        for (const auto& [edge, w] : src.edges()) {
            int a = new_id[static_cast<size_t>(edge.first)];
            int b = new_id[static_cast<size_t>(edge.second)];
            if (a >= 0 && b >= 0) dst.add_weight(a, b, w);
        }
        out.add_layer(net.layer_name(l), std::move(dst));
    }
    return out;
}

Partition::Partition(const std::vector<int>& labels) {
    labels_.resize(labels.size());
    std::unordered_map<int, int> remap;
    for (size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(sizes_.size()));
        if (inserted) sizes_.push_back(0);
        labels_[i] = it->second;
        sizes_[static_cast<size_t>(it->second)] += 1;
    }
}

Partition Partition::singletons(int n) {
    std::vector<int> labels(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = i;
    return Partition(labels);
}

Partition Partition::all_in_one(int n) {
    return Partition(std::vector<int>(static_cast<size_t>(n), 0));
}

}  // namespace mobnet
