// Loaders and layer assembly: event logs -> OD layers via home-country
// detection, migration tables, auxiliary comparison networks, registry files.
#ifndef MOBNET_INGEST_HPP
#define MOBNET_INGEST_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobnet/csv.hpp"
#include "mobnet/netcore.hpp"

namespace mobnet {

struct EventRecord {
    std::string user_id;
    int64_t timestamp = 0;  // UTC epoch seconds
    std::string country;    // iso code, must resolve against the registry
};

struct CountryActivity {
    int64_t event_count = 0;
    int64_t first_ts = 0;
    int64_t last_ts = 0;

    int64_t timespan() const { return last_ts - first_ts; }
};

struct UserProfile {
    std::string user_id;
    // keyed by iso code; ordered so that tie-breaking is reproducible
    std::map<std::string, CountryActivity> per_country;
    std::optional<std::string> home;
};

/// Residency rule: the country with the most events wins; ties fall back to
/// the longest first-to-last timespan, then to the smallest iso code.
/// Empty profiles (excluded by precondition) yield nullopt.
std::optional<std::string> detect_home(const UserProfile& profile);

struct OdBuildResult {
    LayerGraph graph;       // loop-free by construction
    csv::LoadReport report;
    size_t users_total = 0;
    size_t users_resolved = 0;  // users with a detected home
};

/// Event rows are `user_id,timestamp,iso`. Each user with a detected home H
/// adds +1 to w(H -> D) for every distinct foreign country D they were active
/// in; users count once per destination no matter how many events they made.
OdBuildResult build_od_layer(std::istream& events, const CountryRegistry& registry);

struct LayerLoadResult {
    LayerGraph graph;
    csv::LoadReport report;
};

/// Migration rows are `origin_iso,dest_iso,persons`. Duplicate pairs are
/// summed; loop rows are dropped; unknown codes and negative counts are
/// skipped and reported.
LayerLoadResult load_migration(std::istream& table, const CountryRegistry& registry);

enum class AuxKind { colonial, language, trade };

const char* aux_kind_name(AuxKind kind);

struct AuxNetwork {
    AuxKind kind = AuxKind::colonial;
    LayerGraph graph;
};

struct AuxLoadResult {
    AuxNetwork network;
    csv::LoadReport report;
};

/// Colonial/language files are `iso_a,iso_b` pair lists, symmetrized to 0/1
/// weights in both directions; trade files are `origin,dest,usd` triples kept
/// directed with the given weights.
AuxLoadResult load_aux(AuxKind kind, std::istream& table, const CountryRegistry& registry);

/// Users who travel abroad per million residents of their home country:
/// s_i / (pop_i / 1e6). Countries with zero population get NaN.
std::vector<double> penetration(const LayerGraph& od_layer, const CountryRegistry& registry);

struct RegistryLoadResult {
    CountryRegistry registry;
    csv::LoadReport report;
};

/// Registry rows are `iso,population,lat,lon`.
RegistryLoadResult load_registry(std::istream& table);

}  // namespace mobnet

#endif
