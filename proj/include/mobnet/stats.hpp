// Descriptive layer statistics: normalized strengths, relative link weights,
// log-normal fits, flow-coverage curves and attractiveness rank comparison.
#ifndef MOBNET_STATS_HPP
#define MOBNET_STATS_HPP

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mobnet/netcore.hpp"

namespace mobnet {

/// v_j = t_j / m. Requires a loop-free graph with m > 0; sums to 1.
std::vector<double> normalized_in_strength(const LayerGraph& g);

/// r_ij = w_ij / s_i for every edge whose origin has outflow; per-origin
/// row sums equal 1. Origins with s_i = 0 contribute no entries.
std::map<std::pair<int, int>, double> relative_out_weights(const LayerGraph& g);

struct LognormalFit {
    double mu = 0.0;     // mean of ln(values)
    double sigma = 0.0;  // population standard deviation of ln(values)
    // empirical CDF of the raw values: (value ascending, fraction <= value)
    std::vector<std::pair<double, double>> ecdf;
};

/// Maximum-likelihood log-normal fit. All values must be > 0 and there must
/// be at least two of them.
LognormalFit lognormal_fit(std::span<const double> values);

/// Links sorted by descending weight; point k is (links used / E,
/// flow covered / m). Both coordinates are nondecreasing and end at (1,1).
struct CoverageCurve {
    std::vector<std::pair<double, double>> points;
};

CoverageCurve flow_coverage(const LayerGraph& g);

struct RankRow {
    double short_term_rank = 0.0;  // mean of Flickr and Twitter fractional ranks
    double migration_rank = 0.0;
};

struct RankTable {
    std::vector<RankRow> rows;  // indexed by node id
    double spearman = 0.0;      // rank correlation between the two columns
};

/// Ranks countries by normalized in-strength per layer (rank 1 = most
/// attractive, ties share the mean rank) and compares the Flickr/Twitter
/// average against the migration ranking.
RankTable attractiveness_ranks(const LayerGraph& flickr, const LayerGraph& twitter,
                               const LayerGraph& migration);

// Fractional (mean-of-tied-positions) ranks of `values` sorted descending.
std::vector<double> fractional_ranks_desc(std::span<const double> values);

// Pearson correlation of two equally long vectors; used on rank columns.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace mobnet

#endif
