#include "mobnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mobnet {

std::vector<double> normalized_in_strength(const LayerGraph& g) {
    if (!g.loop_free()) throw std::invalid_argument("normalized_in_strength: graph must be loop-free");
    Strengths st = strengths(g);
    if (st.total <= 0.0) throw std::invalid_argument("normalized_in_strength: total weight is zero");
    std::vector<double> v(st.in.size());
    for (size_t j = 0; j < v.size(); ++j) v[j] = st.in[j] / st.total;
    return v;
}

std::map<std::pair<int, int>, double> relative_out_weights(const LayerGraph& g) {
    if (!g.loop_free()) throw std::invalid_argument("relative_out_weights: graph must be loop-free");
    Strengths st = strengths(g);
    std::map<std::pair<int, int>, double> r;
    for (const auto& [edge, w] : g.edges()) {
        double s = st.out[static_cast<size_t>(edge.first)];
        if (s > 0.0) r[edge] = w / s;
    }
    return r;
}

LognormalFit lognormal_fit(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("lognormal_fit: need at least 2 values");
    double sum = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) throw std::invalid_argument("lognormal_fit: values must be positive");
        sum += std::log(v);
    }
    const double n = static_cast<double>(values.size());
    LognormalFit fit;
    fit.mu = sum / n;
    double ss = 0.0;
    for (double v : values) {
        double d = std::log(v) - fit.mu;
        ss += d * d;
    }
    fit.sigma = std::sqrt(ss / n);

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    fit.ecdf.reserve(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
        fit.ecdf.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
    }
    return fit;
}

CoverageCurve flow_coverage(const LayerGraph& g) {
    if (!g.loop_free()) throw std::invalid_argument("flow_coverage: graph must be loop-free");
    if (g.edge_count() == 0) throw std::invalid_argument("flow_coverage: graph has no edges");

    std::vector<std::pair<std::pair<int, int>, double>> edges(g.edges().begin(), g.edges().end());
    // heaviest first; ties in (origin,dest) id order for determinism
    std::stable_sort(edges.begin(), edges.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    double total = 0.0;
    for (const auto& [e, w] : edges) {
        (void)e;
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("flow_coverage: total weight is zero");

    CoverageCurve curve;
    curve.points.reserve(edges.size());
    const double count = static_cast<double>(edges.size());
    double cum = 0.0;
    for (size_t k = 0; k < edges.size(); ++k) {
        cum += edges[k].second;
        double flow = (k + 1 == edges.size()) ? 1.0 : cum / total;
        curve.points.emplace_back(static_cast<double>(k + 1) / count, flow);
    }
    return curve;
}

std::vector<double> fractional_ranks_desc(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] > values[b]; });

    std::vector<double> ranks(n, 0.0);
    size_t pos = 0;
    while (pos < n) {
        size_t end = pos + 1;
        while (end < n && values[order[end]] == values[order[pos]]) ++end;
        // positions pos..end-1 are tied; ranks are 1-based
        double mean_rank = (static_cast<double>(pos + 1) + static_cast<double>(end)) / 2.0;
        for (size_t k = pos; k < end; ++k) ranks[order[k]] = mean_rank;
        pos = end;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("pearson: need two equally sized vectors of length >= 2");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx == 0.0 || vy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return cov / std::sqrt(vx * vy);
}

RankTable attractiveness_ranks(const LayerGraph& flickr, const LayerGraph& twitter,
                               const LayerGraph& migration) {
    const int n = flickr.node_count();
    if (twitter.node_count() != n || migration.node_count() != n) {
        throw std::invalid_argument("attractiveness_ranks: layers disagree on node count");
    }
    std::vector<double> rf = fractional_ranks_desc(normalized_in_strength(flickr));
    std::vector<double> rt = fractional_ranks_desc(normalized_in_strength(twitter));
    std::vector<double> rm = fractional_ranks_desc(normalized_in_strength(migration));

    RankTable table;
    table.rows.resize(static_cast<size_t>(n));
    std::vector<double> short_col(static_cast<size_t>(n));
    for (size_t i = 0; i < table.rows.size(); ++i) {
        table.rows[i].short_term_rank = (rf[i] + rt[i]) / 2.0;
        table.rows[i].migration_rank = rm[i];
        short_col[i] = table.rows[i].short_term_rank;
    }
    table.spearman = pearson(short_col, rm);
    return table;
}

}  // namespace mobnet
