#include "mobnet/flowmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mobnet/csv.hpp"

namespace mobnet {

DistanceMatrix haversine_matrix(const CountryRegistry& registry) {
    const int n = registry.size();
    DistanceMatrix d(n);
    constexpr double deg = std::numbers::pi / 180.0;
    for (int i = 0; i < n; ++i) {
        const CountryInfo& a = registry.entry(i);
        for (int j = i + 1; j < n; ++j) {
            const CountryInfo& b = registry.entry(j);
            double dlat = (b.lat - a.lat) * deg;
            double dlon = (b.lon - a.lon) * deg;
            double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                       std::cos(a.lat * deg) * std::cos(b.lat * deg) *
                           std::sin(dlon / 2) * std::sin(dlon / 2);
            d.set(i, j, 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(h), std::sqrt(1.0 - h)));
        }
    }
    return d;
}

namespace {

void check_model_inputs(std::span<const double> s_out, const CountryRegistry& registry,
                        const DistanceMatrix& dist, bool need_positive_pops) {
    if (static_cast<int>(s_out.size()) != registry.size() || dist.size() != registry.size()) {
        throw std::invalid_argument("flow model: s_out/registry/distance sizes disagree");
    }
    if (need_positive_pops) {
        for (int i = 0; i < registry.size(); ++i) {
            if (!(registry.entry(i).population > 0.0)) {
                throw std::invalid_argument("flow model: population of " + registry.entry(i).iso +
                                            " must be > 0");
            }
        }
    }
}

[[noreturn]] void zero_distance_error(const CountryRegistry& registry, int i, int j) {
    throw std::runtime_error("flow model: zero distance between distinct countries " +
                             registry.entry(i).iso + " and " + registry.entry(j).iso);
}

}  // namespace

LayerGraph gravity_predict(std::span<const double> s_out, const CountryRegistry& registry,
                           const DistanceMatrix& dist, const GravityParams& params) {
    check_model_inputs(s_out, registry, dist, true);
    if (!params.logC) throw std::invalid_argument("gravity_predict: params.logC is required");
    const int n = registry.size();
    const double c = std::exp(*params.logC);
    LayerGraph pred(n, true);
    for (int i = 0; i < n; ++i) {
        if (s_out[static_cast<size_t>(i)] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = dist(i, j);
            if (!(d > 0.0)) zero_distance_error(registry, i, j);
            pred.add_weight(i, j, c * s_out[static_cast<size_t>(i)] * registry.entry(j).population /
                                      std::pow(d, params.alpha));
        }
    }
    return pred;
}

LayerGraph local_gravity_predict(std::span<const double> s_out, const CountryRegistry& registry,
                                 const DistanceMatrix& dist, double alpha) {
    check_model_inputs(s_out, registry, dist, true);
    const int n = registry.size();
    LayerGraph pred(n, true);
    std::vector<double> share(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (s_out[static_cast<size_t>(i)] == 0.0) continue;
        double norm = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            double d = dist(i, k);
            if (!(d > 0.0)) zero_distance_error(registry, i, k);
            share[static_cast<size_t>(k)] = registry.entry(k).population * std::pow(d, -alpha);
            norm += share[static_cast<size_t>(k)];
        }
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            pred.add_weight(i, j, s_out[static_cast<size_t>(i)] * share[static_cast<size_t>(j)] / norm);
        }
    }
    return pred;
}

double radiation_sij(const DistanceMatrix& dist, const CountryRegistry& registry, int i, int j) {
    if (i == j) throw std::invalid_argument("radiation_sij: i == j");
    double pop_in_circle = 0.0;
    const double radius = dist(i, j);
    for (int k = 0; k < registry.size(); ++k) {
        if (k == i || k == j) continue;
        if (dist(i, k) < radius) pop_in_circle += registry.entry(k).population;
    }
    return pop_in_circle;
}

LayerGraph radiation_predict(std::span<const double> s_out, const CountryRegistry& registry,
                             const DistanceMatrix& dist) {
    check_model_inputs(s_out, registry, dist, true);
    const int n = registry.size();
    double total_pop = 0.0;
    for (int i = 0; i < n; ++i) total_pop += registry.entry(i).population;

    LayerGraph pred(n, true);
    std::vector<std::pair<double, int>> by_dist(static_cast<size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        const double pop_i = registry.entry(i).population;
        if (!(total_pop - pop_i > 0.0)) {
            throw std::runtime_error("radiation_predict: " + registry.entry(i).iso +
                                     " holds the entire population");
        }
        if (s_out[static_cast<size_t>(i)] == 0.0) continue;
        const double factor = s_out[static_cast<size_t>(i)] / (1.0 - pop_i / total_pop);

        // accumulate the intervening population in distance order instead of
        // rescanning the circle per destination; ties share the same s_ij
        size_t idx = 0;
        for (int k = 0; k < n; ++k) {
            if (k != i) by_dist[idx++] = {dist(i, k), k};
        }
        std::sort(by_dist.begin(), by_dist.end());
        double s_ij = 0.0;
        size_t pos = 0;
        while (pos < by_dist.size()) {
            size_t end = pos + 1;
            while (end < by_dist.size() && by_dist[end].first == by_dist[pos].first) ++end;
            for (size_t k = pos; k < end; ++k) {
                const int j = by_dist[k].second;
                const double pop_j = registry.entry(j).population;
                pred.add_weight(i, j, factor * pop_i * pop_j /
                                          ((pop_i + s_ij) * (pop_i + pop_j + s_ij)));
            }
            for (size_t k = pos; k < end; ++k) {
                s_ij += registry.entry(by_dist[k].second).population;
            }
            pos = end;
        }
    }
    return pred;
}

const char* flow_model_name(FlowModel m) {
    switch (m) {
        case FlowModel::gravity: return "gravity";
        case FlowModel::local_gravity: return "local_gravity";
        case FlowModel::radiation: return "radiation";
    }
    return "?";
}

std::string FitReport::to_json() const {
    std::ostringstream out;
    out << "{\"model\":\"" << flow_model_name(model) << "\",";
    out << "\"alpha\":" << (params ? csv::format_double(params->alpha) : "null") << ",";
    out << "\"logC\":" << (params && params->logC ? csv::format_double(*params->logC) : "null") << ",";
    out << "\"r2_log\":" << csv::format_double(r2_log) << ",";
    out << "\"n_links\":" << n_links_used << "}";
    return out.str();
}

double r2_log(const LayerGraph& observed, const LayerGraph& predicted) {
    if (observed.node_count() != predicted.node_count()) {
        throw std::invalid_argument("r2_log: node counts disagree");
    }
    std::vector<double> y, yhat;
    for (const auto& [edge, w_obs] : observed.edges()) {
        double w_pred = predicted.weight(edge.first, edge.second);
        if (w_obs > 0.0 && w_pred > 0.0) {
            y.push_back(std::log(w_obs));
            yhat.push_back(std::log(w_pred));
        }
    }
    if (y.size() < 2) throw std::runtime_error("r2_log: fewer than 2 common positive links");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double sse = 0.0, sst = 0.0;
    for (size_t k = 0; k < y.size(); ++k) {
        sse += (y[k] - yhat[k]) * (y[k] - yhat[k]);
        sst += (y[k] - mean) * (y[k] - mean);
    }
    if (sst == 0.0) throw std::runtime_error("r2_log: observed log-weights have zero variance");
    return 1.0 - sse / sst;
}

namespace {

struct LogLink {
    int i, j;
    double log_w;
};

std::vector<LogLink> positive_log_links(const LayerGraph& observed) {
    std::vector<LogLink> links;
    for (const auto& [edge, w] : observed.edges()) {
        if (edge.first != edge.second && w > 0.0) {
            links.push_back({edge.first, edge.second, std::log(w)});
        }
    }
    return links;
}

// Sum of squared log residuals of `predicted` against the observed links.
double log_sse(const std::vector<LogLink>& links, const LayerGraph& predicted) {
    double sse = 0.0;
    for (const LogLink& l : links) {
        double p = predicted.weight(l.i, l.j);
        if (!(p > 0.0)) {
            throw std::runtime_error("fit: prediction vanished on an observed link");
        }
        double r = l.log_w - std::log(p);
        sse += r * r;
    }
    return sse;
}

}  // namespace

FitReport fit_gravity(const LayerGraph& observed, std::span<const double> s_out,
                      const CountryRegistry& registry, const DistanceMatrix& dist) {
    check_model_inputs(s_out, registry, dist, true);
    std::vector<LogLink> links = positive_log_links(observed);
    if (links.size() < 3) throw std::runtime_error("fit_gravity: need at least 3 positive links");

    // y = ln w - ln(s_i pop_j), x = -ln d; OLS for y = logC + alpha * x
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(links.size()), ys(links.size());
    for (size_t k = 0; k < links.size(); ++k) {
        const LogLink& l = links[k];
        double s = s_out[static_cast<size_t>(l.i)];
        if (!(s > 0.0)) {
            throw std::runtime_error("fit_gravity: observed link from origin with zero outflow");
        }
        double d = dist(l.i, l.j);
        if (!(d > 0.0)) zero_distance_error(registry, l.i, l.j);
        xs[k] = -std::log(d);
        ys[k] = l.log_w - std::log(s * registry.entry(l.j).population);
        sx += xs[k];
        sy += ys[k];
    }
    const double n = static_cast<double>(links.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t k = 0; k < links.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (sxx <= 0.0) {
        throw std::runtime_error("fit_gravity: degenerate design (all distances equal)");
    }

    FitReport report;
    report.model = FlowModel::gravity;
    report.params = GravityParams{sxy / sxx, my - (sxy / sxx) * mx};
    report.n_links_used = links.size();
    report.r2_log = r2_log(observed, gravity_predict(s_out, registry, dist, *report.params));
    return report;
}

FitReport fit_local_gravity(const LayerGraph& observed, std::span<const double> s_out,
                            const CountryRegistry& registry, const DistanceMatrix& dist) {
    check_model_inputs(s_out, registry, dist, true);
    std::vector<LogLink> links = positive_log_links(observed);
    if (links.size() < 3) throw std::runtime_error("fit_local_gravity: need at least 3 positive links");

    auto objective = [&](double alpha) {
        return log_sse(links, local_gravity_predict(s_out, registry, dist, alpha));
    };

    // golden-section search on [0, 10]
    constexpr double lo_bound = 0.0, hi_bound = 10.0, tol = 1e-6;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = lo_bound, hi = hi_bound;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    // sanity check that the bracket is informative at all
    if (!(std::isfinite(f1) && std::isfinite(f2))) {
        throw std::runtime_error("fit_local_gravity: objective not finite on the bracket");
    }
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    const double alpha = (lo + hi) / 2.0;

    FitReport report;
    report.model = FlowModel::local_gravity;
    report.params = GravityParams{alpha, std::nullopt};
    report.n_links_used = links.size();
    report.boundary_warning = (lo <= lo_bound + tol) || (hi >= hi_bound - tol);
    report.r2_log = r2_log(observed, local_gravity_predict(s_out, registry, dist, alpha));
    return report;
}

FitReport fit_radiation(const LayerGraph& observed, std::span<const double> s_out,
                        const CountryRegistry& registry, const DistanceMatrix& dist) {
    FitReport report;
    report.model = FlowModel::radiation;
    LayerGraph pred = radiation_predict(s_out, registry, dist);
    report.r2_log = r2_log(observed, pred);
    size_t used = 0;
    for (const auto& [edge, w] : observed.edges()) {
        if (w > 0.0 && pred.weight(edge.first, edge.second) > 0.0) ++used;
    }
    report.n_links_used = used;
    return report;
}

}  // namespace mobnet
