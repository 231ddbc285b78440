#include <doctest.h>

#include "mobnet/netcore.hpp"
#include "support.hpp"

using namespace mobnet;
using testsupport::make_graph;
using testsupport::Rng;

TEST_CASE("strengths on the empty graph are all zero") {
    LayerGraph g(3, true);
    Strengths st = strengths(g);
    CHECK(st.total == 0.0);
    for (double v : st.out) CHECK(v == 0.0);
    for (double v : st.in) CHECK(v == 0.0);
}

TEST_CASE("strengths of a single edge") {
    LayerGraph g = make_graph(2, {{0, 1, 5.0}});
    Strengths st = strengths(g);
    CHECK(st.out[0] == 5.0);
    CHECK(st.out[1] == 0.0);
    CHECK(st.in[0] == 0.0);
    CHECK(st.in[1] == 5.0);
    CHECK(st.total == 5.0);
}

TEST_CASE("strengths of a 3-cycle") {
    LayerGraph g = make_graph(3, {{0, 1, 2.0}, {1, 2, 3.0}, {2, 0, 4.0}});
    Strengths st = strengths(g);
    CHECK(st.out == std::vector<double>{2.0, 3.0, 4.0});
    CHECK(st.in == std::vector<double>{4.0, 2.0, 3.0});
    CHECK(st.total == 9.0);
}

TEST_CASE("strength identity holds on random graphs") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        LayerGraph g = testsupport::random_digraph(2 + rng.next_int(30), rng);
        Strengths st = strengths(g);
        double so = 0.0, si = 0.0;
        for (double v : st.out) so += v;
        for (double v : st.in) si += v;
        CHECK(so == doctest::Approx(st.total).epsilon(1e-12));
        CHECK(si == doctest::Approx(st.total).epsilon(1e-12));
    }
}

TEST_CASE("strip_loops removes diagonal and keeps everything else") {
    LayerGraph only_loop = make_graph(1, {{0, 0, 7.0}}, false);
    LayerGraph stripped = strip_loops(only_loop);
    CHECK(stripped.loop_free());
    CHECK(stripped.edge_count() == 0);
    CHECK(strengths(stripped).total == 0.0);

    LayerGraph mixed = make_graph(2, {{0, 0, 7.0}, {0, 1, 3.0}}, false);
    LayerGraph clean = strip_loops(mixed);
    CHECK(clean.edge_count() == 1);
    CHECK(clean.weight(0, 1) == 3.0);

    // idempotent on an already loop-free graph
    LayerGraph again = strip_loops(clean);
    CHECK(again.edges() == clean.edges());
}

TEST_CASE("strip_loops never changes non-loop weights") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + rng.next_int(10);
        LayerGraph g(n, false);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (rng.next_double() < 0.4) g.add_weight(i, j, rng.uniform(0.1, 2.0));
            }
        }
        LayerGraph stripped = strip_loops(g);
        for (const auto& [edge, w] : g.edges()) {
            if (edge.first != edge.second) CHECK(stripped.weight(edge.first, edge.second) == w);
        }
        for (const auto& [edge, w] : stripped.edges()) {
            (void)w;
            CHECK(edge.first != edge.second);
        }
    }
}

TEST_CASE("loop-free graphs reject diagonal entries") {
    LayerGraph g(2, true);
    CHECK_THROWS(g.add_weight(1, 1, 1.0));
    CHECK_THROWS(g.add_weight(0, 1, -2.0));
}

TEST_CASE("registry validates its entries") {
    CHECK_THROWS(CountryRegistry({{"FR", 1.0, 0.0, 0.0}, {"FR", 1.0, 0.0, 0.0}}));
    CHECK_THROWS(CountryRegistry({{"F", 1.0, 0.0, 0.0}}));
    CHECK_THROWS(CountryRegistry({{"FR", -5.0, 0.0, 0.0}}));
    CHECK_THROWS(CountryRegistry({{"FR", 1.0, 95.0, 0.0}}));
    CHECK_THROWS(CountryRegistry({{"FR", 1.0, 0.0, 181.0}}));

    CountryRegistry reg({{"FR", 1.0, 0.0, 0.0}, {"DEU", 2.0, 1.0, 1.0}});
    CHECK(reg.id_of("FR") == 0);
    CHECK(reg.id_of("DEU") == 1);
    CHECK(!reg.find("XX"));
    CHECK_THROWS(reg.id_of("XX"));
}

TEST_CASE("multilayer network enforces shared nodes and unique names") {
    MultiLayerNetwork net(testsupport::uniform_registry(3));
    net.add_layer("a", LayerGraph(3, true));
    CHECK_THROWS(net.add_layer("a", LayerGraph(3, true)));
    CHECK_THROWS(net.add_layer("b", LayerGraph(4, true)));
}

namespace {

MultiLayerNetwork two_layer_fixture() {
    // node 1 is strong in layer one but weak (s = 3) in layer two
    MultiLayerNetwork net(testsupport::uniform_registry(3));
    net.add_layer("one", make_graph(3, {{0, 1, 12.0}, {1, 0, 12.0}, {0, 2, 15.0}, {2, 0, 15.0}}));
    net.add_layer("two", make_graph(3, {{0, 1, 11.0}, {1, 0, 3.0}, {0, 2, 20.0}, {2, 0, 20.0}}));
    return net;
}

}  // namespace

TEST_CASE("filter_low_strength with threshold 0 keeps everything") {
    MultiLayerNetwork net = two_layer_fixture();
    MultiLayerNetwork out = filter_low_strength(net, 0.0);
    CHECK(out.node_count() == 3);
    for (size_t l = 0; l < net.layer_count(); ++l) {
        CHECK(out.layer(l).edges() == net.layer(l).edges());
    }
}

TEST_CASE("filter_low_strength drops a node weak in any layer, from all layers") {
    MultiLayerNetwork out = filter_low_strength(two_layer_fixture(), 10.0);
    CHECK(out.node_count() == 2);
    CHECK(!out.registry().find("AB"));  // node 1 removed
    CHECK(out.registry().find("AA"));
    CHECK(out.registry().find("AC"));
    // surviving edge 0<->2 re-indexed consistently in both layers
    CHECK(out.layer(0).weight(0, 1) == 15.0);
    CHECK(out.layer(0).weight(1, 0) == 15.0);
    CHECK(out.layer(1).weight(0, 1) == 20.0);
    for (size_t l = 0; l < out.layer_count(); ++l) {
        CHECK(out.layer(l).node_count() == out.node_count());
    }
}

TEST_CASE("filter_low_strength errors when nothing survives") {
    MultiLayerNetwork net(testsupport::uniform_registry(2));
    net.add_layer("one", make_graph(2, {{0, 1, 1.0}}));
    CHECK_THROWS(filter_low_strength(net, 100.0));
    CHECK_THROWS(filter_low_strength(net, -1.0));
}

TEST_CASE("filter_low_strength is a single pass, not a fixpoint") {
    // node 0 is weak and gets dropped; node 1 only clears the threshold
    // thanks to its edges with node 0, so a second pass would drop it too
    MultiLayerNetwork net(testsupport::uniform_registry(4));
    net.add_layer("one", make_graph(4, {{0, 1, 9.0},
                                        {1, 0, 9.0},
                                        {1, 2, 2.0},
                                        {2, 1, 2.0},
                                        {2, 3, 20.0},
                                        {3, 2, 20.0}}));
    MultiLayerNetwork once = filter_low_strength(net, 10.0);
    CHECK(once.node_count() == 3);
    CHECK(!once.registry().find("AA"));

    Strengths st = strengths(once.layer(0));
    bool any_below = false;
    for (size_t i = 0; i < st.out.size(); ++i) {
        if (st.out[i] < 10.0 || st.in[i] < 10.0) any_below = true;
    }
    CHECK(any_below);  // a second pass would remove more; we stop after one
}

TEST_CASE("partition compacts labels and tracks sizes") {
    Partition p(std::vector<int>{5, 5, 9, 5, 2});
    CHECK(p.community_count() == 3);
    CHECK(p.labels() == std::vector<int>{0, 0, 1, 0, 2});
    CHECK(p.community_sizes() == std::vector<int>{3, 1, 1});
    int total = 0;
    for (int s : p.community_sizes()) total += s;
    CHECK(total == p.node_count());

    CHECK(Partition::singletons(4).community_count() == 4);
    CHECK(Partition::all_in_one(4).community_count() == 1);
}
