// Flux models: gravity (global-constant and locally-normalized) and the
// finite-size-corrected radiation model, with log-scale fitting.
#ifndef MOBNET_FLOWMODELS_HPP
#define MOBNET_FLOWMODELS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobnet/netcore.hpp"

namespace mobnet {

/// Dense symmetric great-circle distances (km) between country centroids.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0) {}

    int size() const { return n_; }
    double operator()(int i, int j) const {
        return d_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
    }
    void set(int i, int j, double km) {
        d_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)] = km;
        d_[static_cast<size_t>(j) * static_cast<size_t>(n_) + static_cast<size_t>(i)] = km;
    }

private:
    int n_ = 0;
    std::vector<double> d_;
};

inline constexpr double kEarthRadiusKm = 6371.0;

DistanceMatrix haversine_matrix(const CountryRegistry& registry);

struct GravityParams {
    double alpha = 0.0;
    std::optional<double> logC;  // absent for the locally-normalized variant
};

/// w_ij = exp(logC) * s_i * pop_j / d_ij^alpha over all ordered pairs i != j.
LayerGraph gravity_predict(std::span<const double> s_out, const CountryRegistry& registry,
                           const DistanceMatrix& dist, const GravityParams& params);

/// w_ij = s_i * pop_j * d_ij^-alpha / sum_{k != i} pop_k * d_ik^-alpha;
/// per-origin outflow equals s_i by construction.
LayerGraph local_gravity_predict(std::span<const double> s_out, const CountryRegistry& registry,
                                 const DistanceMatrix& dist, double alpha);

/// Population strictly inside the circle of radius d_ij around i, excluding
/// both endpoints (ties d_ik == d_ij stay outside).
double radiation_sij(const DistanceMatrix& dist, const CountryRegistry& registry, int i, int j);

/// Finite-size-corrected radiation prediction:
/// w_ij = [s_i / (1 - pop_i/P)] * pop_i*pop_j / ((pop_i+s_ij)(pop_i+pop_j+s_ij)).
LayerGraph radiation_predict(std::span<const double> s_out, const CountryRegistry& registry,
                             const DistanceMatrix& dist);

enum class FlowModel { gravity, local_gravity, radiation };

const char* flow_model_name(FlowModel m);

struct FitReport {
    FlowModel model = FlowModel::gravity;
    std::optional<GravityParams> params;
    double r2_log = 0.0;
    size_t n_links_used = 0;
    bool boundary_warning = false;  // 1-D search ended on the bracket edge

    std::string to_json() const;  // {model, alpha, logC, r2_log, n_links}
};

/// Log-scale R^2 over links where both graphs are positive: 1 - SSE/SST with
/// y = ln(observed), yhat = ln(predicted), SST about the mean of y.
double r2_log(const LayerGraph& observed, const LayerGraph& predicted);

/// Ordinary least squares of ln w_obs - ln(s_i pop_j) against -ln d_ij over
/// positive observed links; recovers (alpha, logC).
FitReport fit_gravity(const LayerGraph& observed, std::span<const double> s_out,
                      const CountryRegistry& registry, const DistanceMatrix& dist);

/// Golden-section search of the log-scale SSE over alpha in [0, 10]
/// (tolerance 1e-6), each candidate evaluated by a full prediction.
FitReport fit_local_gravity(const LayerGraph& observed, std::span<const double> s_out,
                            const CountryRegistry& registry, const DistanceMatrix& dist);

/// Report for the parameter-free radiation model (r2_log only).
FitReport fit_radiation(const LayerGraph& observed, std::span<const double> s_out,
                        const CountryRegistry& registry, const DistanceMatrix& dist);

}  // namespace mobnet

#endif
