#include "mobnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mobnet {

namespace {

constexpr double kGainThreshold = 1e-9;

ModularityContext::LayerStrengths layer_strengths(const LayerGraph& g) {
    if (!g.loop_free()) {
        throw std::invalid_argument("modularity: layers must be loop-free");
    }
    Strengths st = strengths(g);
    if (!(st.total > 0.0)) {
        throw std::invalid_argument("modularity: layer total weight must be > 0");
    }
    return ModularityContext::LayerStrengths{std::move(st.out), std::move(st.in), st.total};
}

// Per-node factors of the loopless null model. The ordered-pair expectation
// s_i t_j/(m - t_i) + s_i t_j/(m - s_j) factorizes as p_i q_j + u_i v_j.
// A zero strength zeroes the whole product, so p/v are forced to 0 there; a
// vanishing denominator with flow left to distribute cannot happen on a
// loop-free graph and is rejected.
struct NullFactors {
    std::vector<double> p, q, u, v;
};

NullFactors null_factors(const ModularityContext::LayerStrengths& ls) {
    const size_t n = ls.s.size();
    NullFactors f;
    f.p.resize(n);
    f.q = ls.t;
    f.u = ls.s;
    f.v.resize(n);
    for (size_t i = 0; i < n; ++i) {
        if (ls.s[i] > 0.0) {
            if (!(ls.m - ls.t[i] > 0.0)) {
                throw std::runtime_error("modularity: node " + std::to_string(i) +
                                         " absorbs the layer's entire in-flow");
            }
            f.p[i] = ls.s[i] / (ls.m - ls.t[i]);
        }
        if (ls.t[i] > 0.0) {
            if (!(ls.m - ls.s[i] > 0.0)) {
                throw std::runtime_error("modularity: node " + std::to_string(i) +
                                         " emits the layer's entire out-flow");
            }
            f.v[i] = ls.t[i] / (ls.m - ls.s[i]);
        }
    }
    return f;
}

double modularity_single(const LayerGraph& g, const ModularityContext::LayerStrengths& ls,
                         const Partition& partition, double a) {
    if (partition.node_count() != g.node_count()) {
        throw std::invalid_argument("modularity: partition/graph size mismatch");
    }
    NullFactors f = null_factors(ls);
    const int k = partition.community_count();

    double intra_weight = 0.0;
    for (const auto& [edge, w] : g.edges()) {
        if (partition.label(edge.first) == partition.label(edge.second)) intra_weight += w;
    }

    std::vector<double> sum_p(static_cast<size_t>(k), 0.0), sum_q(sum_p), sum_u(sum_p), sum_v(sum_p);
    std::vector<double> diag_pq(sum_p), diag_uv(sum_p);  // i == j products, excluded from the sum
    for (int i = 0; i < g.node_count(); ++i) {
        const size_t c = static_cast<size_t>(partition.label(i));
        const size_t si = static_cast<size_t>(i);
        sum_p[c] += f.p[si];
        sum_q[c] += f.q[si];
        sum_u[c] += f.u[si];
        sum_v[c] += f.v[si];
        diag_pq[c] += f.p[si] * f.q[si];
        diag_uv[c] += f.u[si] * f.v[si];
    }
    // grouped per community so that singleton communities cancel exactly
    double null_sum = 0.0;
    for (size_t c = 0; c < static_cast<size_t>(k); ++c) {
        null_sum += (sum_p[c] * sum_q[c] - diag_pq[c]) + (sum_u[c] * sum_v[c] - diag_uv[c]);
    }
    return (2.0 * intra_weight - a * null_sum) / (2.0 * ls.m);
}

}  // namespace

ModularityContext ModularityContext::from(const MultiLayerNetwork& net, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("modularity: resolution must be > 0");
    if (net.layer_count() == 0) throw std::invalid_argument("modularity: network has no layers");
    ModularityContext ctx;
    ctx.resolution = a;
    for (size_t l = 0; l < net.layer_count(); ++l) {
        ctx.layers.push_back(layer_strengths(net.layer(l)));
    }
    return ctx;
}

double null_weight(const ModularityContext& ctx, size_t layer, int i, int j) {
    if (i == j) throw std::invalid_argument("null_weight: i == j");
    const auto& ls = ctx.layers.at(layer);
    const double num = ls.s[static_cast<size_t>(i)] * ls.t[static_cast<size_t>(j)];
    if (num == 0.0) return 0.0;
    const double den1 = ls.m - ls.t[static_cast<size_t>(i)];
    const double den2 = ls.m - ls.s[static_cast<size_t>(j)];
    if (!(den1 > 0.0)) {
        throw std::runtime_error("null_weight: node " + std::to_string(i) +
                                 " absorbs the layer's entire in-flow");
    }
    if (!(den2 > 0.0)) {
        throw std::runtime_error("null_weight: node " + std::to_string(j) +
                                 " emits the layer's entire out-flow");
    }
    return 0.5 * (num / den1 + num / den2);
}

double modularity(const LayerGraph& g, const Partition& partition, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("modularity: resolution must be > 0");
    return modularity_single(g, layer_strengths(g), partition, a);
}

double multilayer_modularity(const MultiLayerNetwork& net, const Partition& partition, double a) {
    if (net.layer_count() == 0) throw std::invalid_argument("multilayer_modularity: no layers");
    double sum = 0.0;
    for (size_t l = 0; l < net.layer_count(); ++l) {
        sum += modularity(net.layer(l), partition, a);
    }
    return sum / static_cast<double>(net.layer_count());
}

// ---------------------------------------------------------------------------
// Combo-style optimizer
// ---------------------------------------------------------------------------

namespace {

// Deterministic permutation of 0..n-1; hand-rolled so the visit order depends
// only on the seed, not on the standard library's shuffle.
std::vector<int> seeded_permutation(int n, uint64_t seed) {
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    uint64_t state = seed ^ 0x9e3779b97f4a7c15ULL;
    auto next = [&state]() {
        // splitmix64
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(next() % static_cast<uint64_t>(i + 1));
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
    }
    return perm;
}

class ComboEngine {
public:
    ComboEngine(std::vector<const LayerGraph*> layers, double a) : layers_(std::move(layers)) {
        if (layers_.empty()) throw std::invalid_argument("combo: no layers");
        n_ = layers_.front()->node_count();
        if (n_ <= 0) throw std::invalid_argument("combo: empty network");
        const double layer_count = static_cast<double>(layers_.size());
        for (const LayerGraph* g : layers_) {
            if (g->node_count() != n_) throw std::invalid_argument("combo: layer sizes disagree");
            auto ls = layer_strengths(*g);
            factors_.push_back(null_factors(ls));
            edge_coef_.push_back(1.0 / (layer_count * ls.m));
            null_coef_.push_back(a / (2.0 * layer_count * ls.m));
        }
        build_adjacency();
    }

    // Symmetric combined pair score between distinct nodes x and y.
    double pair_score(int x, int y) const {
        double score = edge_weight(x, y);
        for (size_t l = 0; l < layers_.size(); ++l) {
            const NullFactors& f = factors_[l];
            const size_t sx = static_cast<size_t>(x), sy = static_cast<size_t>(y);
            score -= null_coef_[l] * (f.p[sx] * f.q[sy] + f.u[sx] * f.v[sy] +
                                      f.p[sy] * f.q[sx] + f.u[sy] * f.v[sx]);
        }
        return score;
    }

    // Runs a handful of deterministic trajectories (cycling through single-
    // community, singleton and random starting partitions, each with its own
    // seed-derived visit order and split-attempt stream) and returns the best
    // local optimum: single trajectories can land in redistribution-stable
    // states below the global maximum.
    ComboResult optimize(uint64_t seed, const ComboOptions& options) {
        ComboResult best;
        bool have = false;
        for (int t = 0; t < trajectory_count(); ++t) {
            ComboResult run =
                run_trajectory(seed + 0x51ed2701ULL * static_cast<uint64_t>(t), t, options);
            if (!have || run.q > best.q) {
                best = std::move(run);
                have = true;
            }
        }
        return best;
    }

  private:
    ComboResult run_trajectory(uint64_t stream, int kind, const ComboOptions& options) {
        visit_rank_.assign(static_cast<size_t>(n_), 0);
        std::vector<int> perm = seeded_permutation(n_, stream);
        for (int r = 0; r < n_; ++r) visit_rank_[static_cast<size_t>(perm[static_cast<size_t>(r)])] = r;
        slot_.assign(static_cast<size_t>(n_), SIZE_MAX);
        rng_state_ = stream * 0x2545f4914f6cdd1dULL + 0x632be59bd9b4e019ULL;

        if (kind % 3 == 1) {
            init_singletons();
        } else if (kind % 3 == 2) {
            init_random_groups(2 + static_cast<int>(rng_next() % 6));
        } else {
            init_single_community();
        }
        tracked_q_ = partition_quality();

        // Cached candidate per community pair, keyed (from, to) with the
        // fresh destination as INT_MAX. A candidate stays exactly valid
        // until one of its two communities changes, so each accepted move
        // only invalidates the pairs touching its source and destination.
        std::map<std::pair<int, int>, Candidate> candidates;
        auto refresh_pairs_of = [&](int changed) {
            for (int other : live_ids()) {
                if (other == changed) continue;
                auto key = std::minmax(changed, other);
                candidates[{key.first, key.second}] = kl_pass(key.first, key.second);
            }
            candidates[{changed, kFreshKey}] = kl_pass(changed, kNewCommunity);
        };
        {
            const std::vector<int> live = live_ids();
            for (size_t ai = 0; ai < live.size(); ++ai) {
                for (size_t bi = ai + 1; bi < live.size(); ++bi) {
                    candidates[{live[ai], live[bi]}] = kl_pass(live[ai], live[bi]);
                }
                candidates[{live[ai], kFreshKey}] = kl_pass(live[ai], kNewCommunity);
            }
        }

        while (true) {
            const Candidate* best = nullptr;
            for (const auto& [key, cand] : candidates) {
                (void)key;
                if (cand.empty()) continue;
                if (best == nullptr || cand.gain > best->gain) best = &cand;
            }
            if (best == nullptr || best->gain <= kGainThreshold) break;

            Candidate applied = *best;
            const int created = apply(applied);
            if (options.on_accept) options.on_accept(Partition(comm_), tracked_q_);

            const int from = applied.from;
            const int to = applied.to == kNewCommunity ? created : applied.to;
            // drop every cached pair touching the changed communities, then
            // recompute those still alive
            for (auto it = candidates.begin(); it != candidates.end();) {
                const auto& [x, y] = it->first;
                bool touches = x == from || x == to || y == from || y == to;
                bool dead = members_[static_cast<size_t>(x)].empty() ||
                            (y != kFreshKey && members_[static_cast<size_t>(y)].empty());
                it = (touches || dead) ? candidates.erase(it) : ++it;
            }
            if (!members_[static_cast<size_t>(from)].empty()) refresh_pairs_of(from);
            if (to != from && !members_[static_cast<size_t>(to)].empty()) refresh_pairs_of(to);
        }
        return ComboResult{Partition(comm_), tracked_q_};
    }

    static constexpr int kNewCommunity = -1;

    struct Candidate {
        double gain = -std::numeric_limits<double>::infinity();
        int from = -1;
        int to = kNewCommunity - 1;
        std::vector<int> nodes_to_b;  // members of `from` that change side
        std::vector<int> nodes_to_a;  // members of `to` that change side

        bool empty() const { return nodes_to_b.empty() && nodes_to_a.empty(); }
    };

    struct SideAggregates {
        // indexed [layer]: sums of p, q, u, v over the side's members
        std::vector<double> p, q, u, v;
        explicit SideAggregates(size_t layer_count)
            : p(layer_count, 0.0), q(layer_count, 0.0), u(layer_count, 0.0), v(layer_count, 0.0) {}

        void add(const std::vector<NullFactors>& f, int node, double sign) {
            const size_t s = static_cast<size_t>(node);
            for (size_t l = 0; l < p.size(); ++l) {
                p[l] += sign * f[l].p[s];
                q[l] += sign * f[l].q[s];
                u[l] += sign * f[l].u[s];
                v[l] += sign * f[l].v[s];
            }
        }
    };

    void build_adjacency() {
        std::map<std::pair<int, int>, double> combined;
        for (size_t l = 0; l < layers_.size(); ++l) {
            for (const auto& [edge, w] : layers_[l]->edges()) {
                auto key = std::minmax(edge.first, edge.second);
                combined[{key.first, key.second}] += edge_coef_[l] * w;
            }
        }
        adj_.assign(static_cast<size_t>(n_), {});
        for (const auto& [edge, w] : combined) {
            adj_[static_cast<size_t>(edge.first)].emplace_back(edge.second, w);
            adj_[static_cast<size_t>(edge.second)].emplace_back(edge.first, w);
        }
    }

    double edge_weight(int x, int y) const {
        for (const auto& [node, w] : adj_[static_cast<size_t>(x)]) {
            if (node == y) return w;
        }
        return 0.0;
    }

    void init_single_community() {
        comm_.assign(static_cast<size_t>(n_), 0);
        members_.clear();
        members_.push_back({});
        members_[0].reserve(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) members_[0].push_back(i);
        agg_.clear();
        agg_.emplace_back(layers_.size());
        for (int i = 0; i < n_; ++i) agg_[0].add(factors_, i, +1.0);
    }

    void init_singletons() {
        comm_.resize(static_cast<size_t>(n_));
        members_.assign(static_cast<size_t>(n_), {});
        agg_.assign(static_cast<size_t>(n_), SideAggregates(layers_.size()));
        for (int i = 0; i < n_; ++i) {
            comm_[static_cast<size_t>(i)] = i;
            members_[static_cast<size_t>(i)].push_back(i);
            agg_[static_cast<size_t>(i)].add(factors_, i, +1.0);
        }
    }

    void init_random_groups(int groups) {
        groups = std::max(2, std::min(groups, n_));
        comm_.resize(static_cast<size_t>(n_));
        members_.assign(static_cast<size_t>(groups), {});
        agg_.assign(static_cast<size_t>(groups), SideAggregates(layers_.size()));
        for (int i = 0; i < n_; ++i) {
            int c = static_cast<int>(rng_next() % static_cast<uint64_t>(groups));
            comm_[static_cast<size_t>(i)] = c;
            members_[static_cast<size_t>(c)].push_back(i);
            agg_[static_cast<size_t>(c)].add(factors_, i, +1.0);
        }
    }

    std::vector<int> live_ids() const {
        std::vector<int> ids;
        for (size_t c = 0; c < members_.size(); ++c) {
            if (!members_[c].empty()) ids.push_back(static_cast<int>(c));
        }
        return ids;
    }

    // Q of the current partition from scratch (used once, for the start
    // state); Q is the sum of pair scores over co-community pairs.
    double partition_quality() const {
        double q = 0.0;
        for (const auto& group : members_) {
            for (size_t x = 0; x < group.size(); ++x) {
                for (size_t y = x + 1; y < group.size(); ++y) {
                    q += pair_score(group[x], group[y]);
                }
            }
        }
        return q;
    }

    double null_affinity(int x, const SideAggregates& agg, bool member) const {
        const size_t sx = static_cast<size_t>(x);
        double aff = 0.0;
        for (size_t l = 0; l < layers_.size(); ++l) {
            const NullFactors& f = factors_[l];
            double P = agg.p[l], Q = agg.q[l], U = agg.u[l], V = agg.v[l];
            if (member) {
                P -= f.p[sx];
                Q -= f.q[sx];
                U -= f.u[sx];
                V -= f.v[sx];
            }
            aff += null_coef_[l] * (f.p[sx] * Q + f.u[sx] * V + f.q[sx] * P + f.v[sx] * U);
        }
        return aff;
    }

    // Shift-search state for one (source, destination) pair: which
    // participants sit on the destination side, their link weights to either
    // side and the running side aggregates.
    struct ShiftState {
        std::vector<int> order;        // participants by visit rank
        std::vector<bool> on_b;
        std::vector<double> edge_a, edge_b;
        SideAggregates agg_a, agg_b;
        double gain = 0.0;             // relative to everything on the A side

        ShiftState(size_t size, size_t layer_count)
            : on_b(size, false), edge_a(size, 0.0), edge_b(size, 0.0),
              agg_a(layer_count), agg_b(layer_count) {}
    };

    void toggle(ShiftState& st, size_t k) const {
        const int z = st.order[k];
        const double sign = st.on_b[k] ? -1.0 : +1.0;  // +1: A -> B
        st.agg_a.add(factors_, z, -sign);
        st.agg_b.add(factors_, z, +sign);
        for (const auto& [y, w] : adj_[static_cast<size_t>(z)]) {
            size_t ks = slot_[static_cast<size_t>(y)];
            if (ks != SIZE_MAX && ks != k) {
                st.edge_a[ks] -= sign * w;
                st.edge_b[ks] += sign * w;
            }
        }
        st.on_b[k] = !st.on_b[k];
    }

    double toggle_gain(const ShiftState& st, size_t k) const {
        const int x = st.order[k];
        double to_b = (st.edge_b[k] - null_affinity(x, st.agg_b, st.on_b[k])) -
                      (st.edge_a[k] - null_affinity(x, st.agg_a, !st.on_b[k]));
        return st.on_b[k] ? -to_b : to_b;
    }

    // Kernighan-Lin sweeps: every participant toggles sides once per sweep,
    // picked by best gain with negative intermediate gains allowed; the best
    // prefix of each sweep is kept and sweeps repeat until exhausted.
    void kl_sweeps(ShiftState& st) const {
        const size_t size = st.order.size();
        std::vector<bool> locked(size);
        std::vector<size_t> sequence(size, 0);
        const size_t max_sweeps = 2 * size + 8;
        for (size_t sweep = 0; sweep < max_sweeps; ++sweep) {
            std::fill(locked.begin(), locked.end(), false);
            double cum = 0.0, best_cum = 0.0;
            size_t best_len = 0;
            for (size_t step = 0; step < size; ++step) {
                size_t pick = SIZE_MAX;
                double pick_gain = -std::numeric_limits<double>::infinity();
                for (size_t k = 0; k < size; ++k) {
                    if (locked[k]) continue;
                    double gain = toggle_gain(st, k);
                    if (gain > pick_gain) {
                        pick_gain = gain;
                        pick = k;
                    }
                }
                toggle(st, pick);
                locked[pick] = true;
                sequence[step] = pick;
                cum += pick_gain;
                if (cum > best_cum) {
                    best_cum = cum;
                    best_len = step + 1;
                }
            }
            // rewind the tail beyond the best prefix
            for (size_t step = size; step-- > best_len;) toggle(st, sequence[step]);
            st.gain += best_cum;
            if (!(best_cum > kGainThreshold)) break;
        }
    }

    // Best redistribution between communities `from` and `to` (kNewCommunity
    // = fresh empty destination): the union of both memberships is
    // repartitioned across the two sides by KL sweeps, started from the
    // current assignment and from a few seeded random assignments, keeping
    // the best outcome. Nodes may flow in both directions, so community
    // swaps, merges and splits are all reachable in one move.
    Candidate kl_pass(int from, int to) {
        Candidate cand;
        cand.from = from;
        cand.to = to;

        std::vector<int> participants = members_[static_cast<size_t>(from)];
        if (to != kNewCommunity) {
            const auto& dest = members_[static_cast<size_t>(to)];
            participants.insert(participants.end(), dest.begin(), dest.end());
        }
        if (participants.empty()) return cand;
        const size_t size = participants.size();

        ShiftState base(size, layers_.size());
        base.order = std::move(participants);
        std::sort(base.order.begin(), base.order.end(), [this](int a, int b) {
            return visit_rank_[static_cast<size_t>(a)] < visit_rank_[static_cast<size_t>(b)];
        });
        base.agg_a = agg_[static_cast<size_t>(from)];
        if (to != kNewCommunity) base.agg_b = agg_[static_cast<size_t>(to)];
        for (size_t k = 0; k < size; ++k) {
            slot_[static_cast<size_t>(base.order[k])] = k;
            base.on_b[k] = to != kNewCommunity &&
                           comm_[static_cast<size_t>(base.order[k])] == to;
        }
        for (size_t k = 0; k < size; ++k) {
            for (const auto& [y, w] : adj_[static_cast<size_t>(base.order[k])]) {
                if (comm_[static_cast<size_t>(y)] == from) {
                    base.edge_a[k] += w;
                } else if (to != kNewCommunity && comm_[static_cast<size_t>(y)] == to) {
                    base.edge_b[k] += w;
                }
            }
        }

        const int attempts = split_attempts(size);
        ShiftState best = base;
        bool have_best = false;
        for (int attempt = 0; attempt <= attempts; ++attempt) {
            ShiftState st = base;
            if (attempt > 0) {
                // seeded random initial assignment; gains tracked so the
                // total stays relative to the untouched pair
                for (size_t k = 0; k < size; ++k) {
                    if (rng_next() & 1u) {
                        st.gain += toggle_gain(st, k);
                        toggle(st, k);
                    }
                }
            }
            kl_sweeps(st);
            if (!have_best || st.gain > best.gain) {
                best = std::move(st);
                have_best = true;
            }
        }
        for (size_t k = 0; k < size; ++k) slot_[static_cast<size_t>(base.order[k])] = SIZE_MAX;

        for (size_t k = 0; k < size; ++k) {
            if (best.on_b[k] != base.on_b[k]) {
                (best.on_b[k] ? cand.nodes_to_b : cand.nodes_to_a).push_back(best.order[k]);
            }
        }
        // a no-op or a whole-community move to a fresh label is a relabeling
        if (cand.empty() || (to == kNewCommunity && cand.nodes_to_b.size() == size)) {
            cand.nodes_to_b.clear();
            cand.nodes_to_a.clear();
            return cand;
        }
        cand.gain = best.gain;
        return cand;
    }

    uint64_t rng_next() {
        // splitmix64 stream drawn deterministically per optimize() run
        rng_state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = rng_state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    void move_node(int z, int from, int to) {
        auto& src = members_[static_cast<size_t>(from)];
        src.erase(std::find(src.begin(), src.end(), z));
        members_[static_cast<size_t>(to)].push_back(z);
        comm_[static_cast<size_t>(z)] = to;
        agg_[static_cast<size_t>(from)].add(factors_, z, -1.0);
        agg_[static_cast<size_t>(to)].add(factors_, z, +1.0);
    }

    // Applies the redistribution; returns the destination community id
    // (freshly allocated when the candidate targeted an empty one).
    int apply(const Candidate& best) {
        int to = best.to;
        if (to == kNewCommunity) {
            to = static_cast<int>(members_.size());
            members_.push_back({});
            agg_.emplace_back(layers_.size());
        }
        for (int z : best.nodes_to_b) move_node(z, best.from, to);
        for (int z : best.nodes_to_a) move_node(z, to, best.from);
        tracked_q_ += best.gain;
        return to;
    }

    static constexpr int kFreshKey = std::numeric_limits<int>::max();

    // Small instances get the exhaustive treatment (many trajectories and
    // split attempts); large ones favour the cheaper production profile.
    int trajectory_count() const { return n_ <= 48 ? 12 : 4; }
    int split_attempts(size_t pair_size) const {
        if (pair_size < 2) return 0;
        return pair_size <= 64 ? 6 : 2;
    }

    std::vector<const LayerGraph*> layers_;
    int n_ = 0;
    std::vector<NullFactors> factors_;
    std::vector<double> edge_coef_, null_coef_;
    std::vector<std::vector<std::pair<int, double>>> adj_;

    std::vector<int> comm_;
    std::vector<std::vector<int>> members_;
    std::vector<SideAggregates> agg_;
    std::vector<int> visit_rank_;
    std::vector<size_t> slot_;  // node -> participant index during a pass
    uint64_t rng_state_ = 0;
    double tracked_q_ = 0.0;
};

ComboResult combo_on_layers(std::vector<const LayerGraph*> layers, double a, uint64_t seed,
                            const ComboOptions& options) {
    if (!(a > 0.0)) throw std::invalid_argument("combo: resolution must be > 0");
    if (options.restarts < 1) throw std::invalid_argument("combo: restarts must be >= 1");
    if (layers.empty()) throw std::invalid_argument("combo: no layers");
    // a single node has no pairs and no flow; the trivial partition scores 0
    if (layers.front()->node_count() == 1) return ComboResult{Partition::all_in_one(1), 0.0};
    ComboEngine engine(std::move(layers), a);
    ComboResult best;
    bool have = false;
    for (int r = 0; r < options.restarts; ++r) {
        ComboResult run = engine.optimize(seed + static_cast<uint64_t>(r), options);
        if (!have || run.q > best.q) {
            best = std::move(run);
            have = true;
        }
    }
    return best;
}

}  // namespace

ComboResult combo_optimize(const MultiLayerNetwork& net, double a, uint64_t seed,
                           const ComboOptions& options) {
    std::vector<const LayerGraph*> layers;
    for (size_t l = 0; l < net.layer_count(); ++l) layers.push_back(&net.layer(l));
    return combo_on_layers(std::move(layers), a, seed, options);
}

ComboResult combo_optimize(const LayerGraph& g, double a, uint64_t seed,
                           const ComboOptions& options) {
    return combo_on_layers({&g}, a, seed, options);
}

ComboResult brute_force_partition(const MultiLayerNetwork& net, double a) {
    const int n = net.node_count();
    if (n < 1) throw std::invalid_argument("brute_force_partition: empty network");
    if (n > 12) throw std::invalid_argument("brute_force_partition: n > 12 is not tractable");
    if (!(a > 0.0)) throw std::invalid_argument("brute_force_partition: resolution must be > 0");
    if (n == 1) return ComboResult{Partition::all_in_one(1), 0.0};

    std::vector<const LayerGraph*> layers;
    for (size_t l = 0; l < net.layer_count(); ++l) layers.push_back(&net.layer(l));
    ComboEngine engine(layers, a);

    // pair score matrix, upper triangle
    std::vector<double> score(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            score[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] =
                engine.pair_score(i, j);
        }
    }

    std::vector<int> rgs(static_cast<size_t>(n), 0);
    std::vector<int> prefix_max(static_cast<size_t>(n), 0);  // max label over rgs[0..i]
    std::vector<int> best_labels;
    double best_q = -std::numeric_limits<double>::infinity();

    while (true) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) {
            const size_t row = static_cast<size_t>(i) * static_cast<size_t>(n);
            for (int j = i + 1; j < n; ++j) {
                if (rgs[static_cast<size_t>(i)] == rgs[static_cast<size_t>(j)]) {
                    q += score[row + static_cast<size_t>(j)];
                }
            }
        }
        // >= keeps the last maximizer of the ascending enumeration, i.e. the
        // first encountered scanning from the singleton partition downwards
        if (q >= best_q) {
            best_q = q;
            best_labels = rgs;
        }

        // next restricted growth string in lexicographic order
        int i = n - 1;
        while (i > 0 && rgs[static_cast<size_t>(i)] > prefix_max[static_cast<size_t>(i - 1)]) --i;
        if (i == 0) break;
        rgs[static_cast<size_t>(i)] += 1;
        prefix_max[static_cast<size_t>(i)] =
            std::max(prefix_max[static_cast<size_t>(i - 1)], rgs[static_cast<size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            rgs[static_cast<size_t>(j)] = 0;
            prefix_max[static_cast<size_t>(j)] = prefix_max[static_cast<size_t>(j - 1)];
        }
    }
    return ComboResult{Partition(best_labels), best_q};
}

double nmi(const Partition& a, const Partition& b) {
    if (a.node_count() != b.node_count()) {
        throw std::invalid_argument("nmi: partitions cover different node sets");
    }
    const int n = a.node_count();
    if (n == 0) throw std::invalid_argument("nmi: empty partitions");
    if (a.community_count() == 1 && b.community_count() == 1) return 1.0;
    // labels are canonical (first-appearance order), so equal groupings have
    // equal label vectors; identity is exactly 1
    if (a.labels() == b.labels()) return 1.0;

    std::map<std::pair<int, int>, double> confusion;
    for (int i = 0; i < n; ++i) confusion[{a.label(i), b.label(i)}] += 1.0;

    const double total = static_cast<double>(n);
    double numerator = 0.0;
    for (const auto& [cell, count] : confusion) {
        const double na = static_cast<double>(a.community_sizes()[static_cast<size_t>(cell.first)]);
        const double nb = static_cast<double>(b.community_sizes()[static_cast<size_t>(cell.second)]);
        numerator += -2.0 * count * std::log(count * total / (na * nb));
    }
    double denominator = 0.0;
    for (int sz : a.community_sizes()) denominator += sz * std::log(static_cast<double>(sz) / total);
    for (int sz : b.community_sizes()) denominator += sz * std::log(static_cast<double>(sz) / total);

    double value = numerator / denominator;
    return std::clamp(value, 0.0, 1.0);
}

std::vector<SweepPoint> resolution_sweep(const MultiLayerNetwork& net,
                                         std::span<const double> a_values, uint64_t seed,
                                         const ComboOptions& options) {
    std::vector<SweepPoint> points;
    points.reserve(a_values.size());
    for (double a : a_values) {
        ComboResult r = combo_optimize(net, a, seed, options);
        points.push_back(SweepPoint{a, r.partition.community_count(), r.q});
    }
    return points;
}

std::vector<SimilarityRow> similarity_report(const std::vector<NamedPartition>& mobility,
                                             const std::vector<NamedPartition>& references) {
    if (references.empty()) throw std::invalid_argument("similarity_report: no reference partitions");
    std::vector<SimilarityRow> rows;
    rows.reserve(mobility.size());
    for (const NamedPartition& mob : mobility) {
        SimilarityRow row;
        row.name = mob.name;
        double sum = 0.0;
        for (const NamedPartition& ref : references) {
            double v = nmi(mob.partition, ref.partition);
            row.nmi_values.push_back(v);
            sum += v;
        }
        row.average = sum / static_cast<double>(references.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mobnet
