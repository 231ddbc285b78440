#include <doctest.h>

#include <cmath>

#include "mobnet/community.hpp"
#include "support.hpp"

using namespace mobnet;
using testsupport::make_graph;
using testsupport::modularity_oracle;
using testsupport::Rng;

namespace {

MultiLayerNetwork single_layer_net(const LayerGraph& g) {
    MultiLayerNetwork net(testsupport::uniform_registry(g.node_count()));
    net.add_layer("only", g);
    return net;
}

MultiLayerNetwork stack_layers(const std::vector<LayerGraph>& layers) {
    MultiLayerNetwork net(testsupport::uniform_registry(layers.front().node_count()));
    for (size_t l = 0; l < layers.size(); ++l) {
        net.add_layer("layer" + std::to_string(l), layers[l]);
    }
    return net;
}

// two directed 3-cycles with no edges between them
LayerGraph two_cycles() {
    return make_graph(6, {{0, 1, 2.0}, {1, 2, 2.0}, {2, 0, 2.0},
                          {3, 4, 2.0}, {4, 5, 2.0}, {5, 3, 2.0}});
}

}  // namespace

TEST_CASE("null_weight") {
    LayerGraph g = make_graph(2, {{0, 1, 1.0}});
    ModularityContext ctx = ModularityContext::from(single_layer_net(g), 1.0);

    SUBCASE("two-node hand case") {
        // null(0,1) = (1*1/(1-0) + 1*1/(1-0)) / 2 = 1
        CHECK(null_weight(ctx, 0, 0, 1) == 1.0);
    }

    SUBCASE("zero strength short-circuits to zero") {
        // s_1 = 0 and t_0 = 0, so the reverse pair has no expected weight
        CHECK(null_weight(ctx, 0, 1, 0) == 0.0);
    }

    SUBCASE("loops are rejected") { CHECK_THROWS(null_weight(ctx, 0, 1, 1)); }

    SUBCASE("symmetric uniform graph has swap-symmetric null") {
        LayerGraph u = make_graph(4, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0},
                                      {0, 2, 1.0}, {2, 0, 1.0}, {1, 3, 1.0}, {3, 1, 1.0}});
        ModularityContext uc = ModularityContext::from(single_layer_net(u), 1.0);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (i != j) CHECK(null_weight(uc, 0, i, j) == null_weight(uc, 0, j, i));
            }
        }
    }
}

TEST_CASE("modularity") {
    SUBCASE("two nodes in one community score zero") {
        LayerGraph g = make_graph(2, {{0, 1, 1.0}});
        CHECK(modularity(g, Partition::all_in_one(2), 1.0) == 0.0);
    }

    SUBCASE("singleton partition scores exactly zero") {
        Rng rng(13);
        for (int trial = 0; trial < 10; ++trial) {
            LayerGraph g = testsupport::random_digraph(3 + rng.next_int(15), rng);
            for (double a : {0.5, 1.0, 2.0}) {
                CHECK(modularity(g, Partition::singletons(g.node_count()), a) == 0.0);
            }
        }
    }

    SUBCASE("two disconnected cycles match the direct-summation oracle") {
        LayerGraph g = two_cycles();
        Partition split(std::vector<int>{0, 0, 0, 1, 1, 1});
        double expected = modularity_oracle(g, split, 1.0);
        CHECK(modularity(g, split, 1.0) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(modularity(g, split, 1.0) > 0.0);
    }

    SUBCASE("factorized evaluation matches the oracle on random graphs") {
        Rng rng(14);
        for (int trial = 0; trial < 20; ++trial) {
            int n = 3 + rng.next_int(12);
            LayerGraph g = testsupport::random_digraph(n, rng);
            std::vector<int> labels(static_cast<size_t>(n));
            for (int& l : labels) l = rng.next_int(3);
            Partition p(labels);
            for (double a : {0.7, 1.0, 1.9}) {
                CHECK(modularity(g, p, a) ==
                      doctest::Approx(modularity_oracle(g, p, a)).epsilon(1e-12));
            }
        }
    }

    SUBCASE("per-layer scale invariance") {
        Rng rng(15);
        LayerGraph g = testsupport::random_digraph(10, rng);
        std::vector<int> labels(10);
        for (int& l : labels) l = rng.next_int(4);
        Partition p(labels);
        double base = modularity(g, p, 1.3);
        for (double c : {1e-3, 7.0, 1e4}) {
            LayerGraph scaled(10, true);
            for (const auto& [edge, w] : g.edges()) scaled.add_weight(edge.first, edge.second, c * w);
            CHECK(modularity(scaled, p, 1.3) == doctest::Approx(base).epsilon(1e-12));
        }
    }

    SUBCASE("graph without edges is an error") {
        CHECK_THROWS(modularity(LayerGraph(3, true), Partition::singletons(3), 1.0));
    }
}

TEST_CASE("multilayer_modularity") {
    Rng rng(16);
    LayerGraph g1 = testsupport::random_digraph(8, rng);
    LayerGraph g2 = testsupport::random_digraph(8, rng);
    std::vector<int> labels{0, 0, 1, 1, 2, 2, 0, 1};
    Partition p(labels);

    SUBCASE("identical layers average to the single-layer value") {
        MultiLayerNetwork net = stack_layers({g1, g1, g1});
        CHECK(multilayer_modularity(net, p, 1.0) ==
              doctest::Approx(modularity(g1, p, 1.0)).epsilon(1e-12));
    }

    SUBCASE("one layer reduces to modularity") {
        CHECK(multilayer_modularity(single_layer_net(g1), p, 1.4) ==
              doctest::Approx(modularity(g1, p, 1.4)).epsilon(1e-12));
    }

    SUBCASE("two layers average the per-layer oracle values") {
        MultiLayerNetwork net = stack_layers({g1, g2});
        double q1 = modularity_oracle(g1, p, 1.0);
        double q2 = modularity_oracle(g2, p, 1.0);
        CHECK(multilayer_modularity(net, p, 1.0) ==
              doctest::Approx((q1 + q2) / 2.0).epsilon(1e-12));
    }

    SUBCASE("permutation equivariance under simultaneous relabeling") {
        MultiLayerNetwork net = stack_layers({g1, g2});
        double base = multilayer_modularity(net, p, 1.0);

        // reverse node ids in both layers and in the partition
        auto reverse_graph = [](const LayerGraph& g) {
            LayerGraph out(g.node_count(), true);
            const int n = g.node_count();
            for (const auto& [edge, w] : g.edges()) {
                out.add_weight(n - 1 - edge.first, n - 1 - edge.second, w);
            }
            return out;
        };
        std::vector<int> rev_labels(labels.rbegin(), labels.rend());
        MultiLayerNetwork rev = stack_layers({reverse_graph(g1), reverse_graph(g2)});
        CHECK(multilayer_modularity(rev, Partition(rev_labels), 1.0) ==
              doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("brute_force_partition") {
    SUBCASE("one node") {
        ComboResult r = brute_force_partition(single_layer_net(make_graph(1, {})), 1.0);
        CHECK(r.partition.community_count() == 1);
        CHECK(r.q == 0.0);
    }

    SUBCASE("two nodes, single edge: tie resolved to singletons") {
        ComboResult r = brute_force_partition(single_layer_net(make_graph(2, {{0, 1, 1.0}})), 1.0);
        CHECK(r.q == 0.0);
        CHECK(r.partition.community_count() == 2);
    }

    SUBCASE("recovers the two cycles") {
        ComboResult r = brute_force_partition(single_layer_net(two_cycles()), 1.0);
        CHECK(r.partition.community_count() == 2);
        CHECK(r.partition.label(0) == r.partition.label(1));
        CHECK(r.partition.label(0) == r.partition.label(2));
        CHECK(r.partition.label(3) == r.partition.label(4));
        CHECK(r.partition.label(3) == r.partition.label(5));
        CHECK(r.partition.label(0) != r.partition.label(3));
    }

    SUBCASE("size guard") {
        CHECK_THROWS(brute_force_partition(single_layer_net(make_graph(13, {{0, 1, 1.0}})), 1.0));
    }
}

TEST_CASE("brute_force_partition maximizes over all partitions (cross-checked)") {
    // exhaustively verified against an independent enumeration by labels
    Rng rng(19);
    LayerGraph g = testsupport::random_digraph(5, rng);
    MultiLayerNetwork net = single_layer_net(g);
    ComboResult best = brute_force_partition(net, 1.0);

    // enumerate every labeling 0..4^5 and keep the best Q
    double best_by_labels = -1e18;
    for (int code = 0; code < 5 * 5 * 5 * 5 * 5; ++code) {
        int c = code;
        std::vector<int> labels(5);
        for (int& l : labels) {
            l = c % 5;
            c /= 5;
        }
        best_by_labels = std::max(best_by_labels, multilayer_modularity(net, Partition(labels), 1.0));
    }
    CHECK(best.q == doctest::Approx(best_by_labels).epsilon(1e-12));
}

TEST_CASE("combo_optimize") {
    SUBCASE("single node network is one community with Q 0") {
        ComboResult r = combo_optimize(LayerGraph(1, true), 1.0, 7);
        CHECK(r.partition.community_count() == 1);
        CHECK(r.q == 0.0);
    }

    SUBCASE("graphs with loops are rejected") {
        CHECK_THROWS(combo_optimize(make_graph(2, {{0, 0, 1.0}, {0, 1, 1.0}}, false), 1.0, 7));
    }

    SUBCASE("empty multi-node graphs are rejected") {
        CHECK_THROWS(combo_optimize(LayerGraph(3, true), 1.0, 7));  // m = 0
    }

    SUBCASE("two dense clusters are recovered") {
        Rng rng(20);
        LayerGraph g(10, true);
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                if (i == j) continue;
                bool same = (i < 5) == (j < 5);
                if (same) {
                    g.add_weight(i, j, rng.uniform(0.8, 1.0));
                } else if (rng.next_double() < 0.1) {
                    g.add_weight(i, j, rng.uniform(0.0, 0.1));
                }
            }
        }
        ComboResult combo = combo_optimize(g, 1.0, 1);
        ComboResult brute = brute_force_partition(single_layer_net(g), 1.0);
        CHECK(combo.q == doctest::Approx(brute.q).epsilon(1e-9));
        CHECK(combo.partition.community_count() == 2);
        CHECK(nmi(combo.partition, Partition(std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1})) == 1.0);
    }

    SUBCASE("matches brute force on small random graphs") {
        Rng rng(22);
        for (int n = 4; n <= 7; ++n) {
            for (int trial = 0; trial < 5; ++trial) {
                LayerGraph g = testsupport::random_digraph(n, rng);
                MultiLayerNetwork net = single_layer_net(g);
                for (double a : {1.0, 2.0}) {
                    ComboResult combo = combo_optimize(net, a, 100 + trial);
                    ComboResult brute = brute_force_partition(net, a);
                    CHECK(combo.q == doctest::Approx(brute.q).epsilon(1e-9));
                }
            }
        }
    }

    SUBCASE("deterministic given the seed") {
        Rng rng(24);
        LayerGraph g = testsupport::random_digraph(15, rng);
        ComboResult a = combo_optimize(g, 1.5, 42);
        ComboResult b = combo_optimize(g, 1.5, 42);
        CHECK(a.partition == b.partition);
        CHECK(a.q == b.q);
    }

    SUBCASE("tracked Q matches recomputation after every accepted move") {
        Rng rng(25);
        LayerGraph g1 = testsupport::random_digraph(12, rng);
        LayerGraph g2 = testsupport::random_digraph(12, rng);
        MultiLayerNetwork net = stack_layers({g1, g2});
        ComboOptions options;
        int calls = 0;
        options.on_accept = [&](const Partition& p, double tracked) {
            CHECK(tracked == doctest::Approx(multilayer_modularity(net, p, 1.0)).epsilon(1e-9));
            ++calls;
        };
        combo_optimize(net, 1.0, 5, options);
        CHECK(calls > 0);
    }

    SUBCASE("scale invariance of the optimum value") {
        Rng rng(26);
        LayerGraph g = testsupport::random_digraph(12, rng);
        ComboResult base = combo_optimize(g, 1.0, 3);
        LayerGraph scaled(12, true);
        for (const auto& [edge, w] : g.edges()) scaled.add_weight(edge.first, edge.second, w * 1e3);
        ComboResult after = combo_optimize(scaled, 1.0, 3);
        CHECK(after.q == doctest::Approx(base.q).epsilon(1e-12));
        CHECK(after.partition == base.partition);
    }

    SUBCASE("restarts never lower the result") {
        Rng rng(27);
        LayerGraph g = testsupport::random_digraph(14, rng);
        ComboOptions one, five;
        five.restarts = 5;
        CHECK(combo_optimize(g, 1.0, 11, five).q >= combo_optimize(g, 1.0, 11, one).q - 1e-12);
    }
}

TEST_CASE("nmi") {
    SUBCASE("identical partitions") {
        Partition p(std::vector<int>{0, 0, 1, 1, 2});
        CHECK(nmi(p, p) == 1.0);
    }

    SUBCASE("anything vs all-in-one is zero") {
        Partition p(std::vector<int>{0, 0, 1, 1, 2});
        CHECK(nmi(p, Partition::all_in_one(5)) == 0.0);
        CHECK(nmi(Partition::all_in_one(5), p) == 0.0);
    }

    SUBCASE("both trivial partitions") {
        CHECK(nmi(Partition::all_in_one(4), Partition::all_in_one(4)) == 1.0);
    }

    SUBCASE("crossed 4-node example is zero") {
        Partition a(std::vector<int>{0, 0, 1, 1});
        Partition b(std::vector<int>{0, 1, 0, 1});
        CHECK(nmi(a, b) == 0.0);
    }

    SUBCASE("symmetry and range on random partition pairs") {
        Rng rng(28);
        for (int trial = 0; trial < 50; ++trial) {
            int n = 2 + rng.next_int(40);
            std::vector<int> la(static_cast<size_t>(n)), lb(static_cast<size_t>(n));
            for (int& l : la) l = rng.next_int(5);
            for (int& l : lb) l = rng.next_int(5);
            Partition a(la), b(lb);
            double ab = nmi(a, b);
            double ba = nmi(b, a);
            CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
            CHECK(ab >= 0.0);
            CHECK(ab <= 1.0);
        }
    }

    SUBCASE("node-set mismatch is an error") {
        CHECK_THROWS(nmi(Partition::all_in_one(3), Partition::all_in_one(4)));
    }

    SUBCASE("random partitions on 201 nodes are nearly independent") {
        Rng rng(29);
        double total = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> la(201), lb(201);
            for (int& l : la) l = rng.next_int(8);
            for (int& l : lb) l = rng.next_int(8);
            total += nmi(Partition(la), Partition(lb));
        }
        CHECK(total / 20.0 < 0.15);
    }
}

TEST_CASE("resolution_sweep") {
    SUBCASE("tiny resolution collapses a connected net into one community") {
        Rng rng(30);
        LayerGraph g = testsupport::random_digraph(10, rng, 0.7);
        MultiLayerNetwork net = single_layer_net(g);
        std::vector<double> a_values{1e-6};
        auto points = resolution_sweep(net, a_values, 9);
        REQUIRE(points.size() == 1);
        CHECK(points[0].community_count == 1);
    }

    SUBCASE("emits one point per resolution, deterministically") {
        Rng rng(32);
        MultiLayerNetwork net =
            stack_layers({testsupport::random_digraph(12, rng), testsupport::random_digraph(12, rng)});
        std::vector<double> a_values{0.5, 1.0, 2.0};
        auto p1 = resolution_sweep(net, a_values, 4);
        auto p2 = resolution_sweep(net, a_values, 4);
        REQUIRE(p1.size() == 3);
        for (size_t k = 0; k < 3; ++k) {
            CHECK(p1[k].resolution == a_values[k]);
            CHECK(p1[k].community_count == p2[k].community_count);
            CHECK(p1[k].q == p2[k].q);
        }
    }
}

TEST_CASE("similarity_report") {
    SUBCASE("identical partitions everywhere give average 1") {
        Partition p(std::vector<int>{0, 0, 1, 1, 2, 2});
        std::vector<NamedPartition> mobility{{"flickr", p}, {"multilayer", p}};
        std::vector<NamedPartition> refs{{"colonial", p}, {"language", p}, {"trade", p}};
        auto rows = similarity_report(mobility, refs);
        REQUIRE(rows.size() == 2);
        for (const auto& row : rows) {
            CHECK(row.average == 1.0);
            for (double v : row.nmi_values) CHECK(v == 1.0);
        }
    }

    SUBCASE("planted structure: the multilayer partition scores highest") {
        Rng rng(33);
        int wins = 0;
        const int seeds = 20;
        for (int trial = 0; trial < seeds; ++trial) {
            testsupport::PlantedNet planted = testsupport::planted_partition_net(96, 6, 3, 0.3, rng);

            std::vector<NamedPartition> mobility;
            for (size_t l = 0; l < planted.net.layer_count(); ++l) {
                mobility.push_back({planted.net.layer_name(l),
                                    combo_optimize(planted.net.layer(l), 1.0, 1000 + trial).partition});
            }
            mobility.push_back({"multilayer", combo_optimize(planted.net, 1.0, 1000 + trial).partition});

            // references share the planted structure with 10% label noise
            std::vector<NamedPartition> refs;
            for (int r = 0; r < 3; ++r) {
                std::vector<int> labels = planted.planted.labels();
                for (int& l : labels) {
                    if (rng.next_double() < 0.10) l = rng.next_int(6);
                }
                refs.push_back({"ref" + std::to_string(r), Partition(labels)});
            }

            auto rows = similarity_report(mobility, refs);
            double multi = rows.back().average;
            bool ge_all = true;
            for (size_t k = 0; k + 1 < rows.size(); ++k) {
                if (multi < rows[k].average) ge_all = false;
            }
            if (ge_all) ++wins;
        }
        // the multilayer partition should dominate on nearly every draw
        CHECK(wins >= seeds - 3);
    }
}
