#include "mobnet/ingest.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace mobnet {

namespace {

// Reads data lines, skipping blank ones, and hands (line_number, fields) to fn.
template <typename Fn>
void for_each_row(std::istream& in, csv::LoadReport& report, Fn&& fn) {
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = line;
        if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
        bool blank = true;
        for (char c : sv) {
            if (c != ' ' && c != '\t') { blank = false; break; }
        }
        if (blank) continue;
        report.rows_total += 1;
        fn(line_no, csv::split(sv));
    }
}

}  // namespace

std::optional<std::string> detect_home(const UserProfile& profile) {
    if (profile.per_country.empty()) return std::nullopt;
    const std::string* best = nullptr;
    int64_t best_count = -1;
    int64_t best_span = -1;
    for (const auto& [iso, act] : profile.per_country) {
        // count first, then timespan; map order makes the final fallback the
        // lexicographically smallest code
        if (act.event_count > best_count ||
            (act.event_count == best_count && act.timespan() > best_span)) {
            best = &iso;
            best_count = act.event_count;
            best_span = act.timespan();
        }
    }
    return *best;
}

OdBuildResult build_od_layer(std::istream& events, const CountryRegistry& registry) {
    std::unordered_map<std::string, UserProfile> profiles;

    OdBuildResult result;
    for_each_row(events, result.report, [&](size_t line_no, const std::vector<std::string>& f) {
        if (f.size() != 3) {
            result.report.skip(line_no, "expected 3 fields (user_id,timestamp,iso)");
            return;
        }
        if (f[0].empty()) {
            result.report.skip(line_no, "empty user id");
            return;
        }
        auto ts = csv::parse_int(f[1]);
        if (!ts) {
            result.report.skip(line_no, "bad timestamp '" + f[1] + "'");
            return;
        }
        if (!registry.find(f[2])) {
            result.report.skip(line_no, "unknown iso code '" + f[2] + "'");
            return;
        }
        result.report.rows_accepted += 1;
        UserProfile& p = profiles[f[0]];
        p.user_id = f[0];
        auto [it, inserted] = p.per_country.try_emplace(f[2]);
        CountryActivity& act = it->second;
        if (inserted) {
            act.event_count = 1;
            act.first_ts = act.last_ts = *ts;
        } else {
            act.event_count += 1;
            act.first_ts = std::min(act.first_ts, *ts);
            act.last_ts = std::max(act.last_ts, *ts);
        }
    });

    result.graph = LayerGraph(registry.size(), true);
    result.users_total = profiles.size();
    for (auto& [uid, profile] : profiles) {
        (void)uid;
        profile.home = detect_home(profile);
        if (!profile.home) continue;
        result.users_resolved += 1;
        int home_id = registry.id_of(*profile.home);
        for (const auto& [iso, act] : profile.per_country) {
            (void)act;
            if (iso == *profile.home) continue;  // home activity is not a trip
            result.graph.add_weight(home_id, registry.id_of(iso), 1.0);
        }
    }
    return result;
}

LayerLoadResult load_migration(std::istream& table, const CountryRegistry& registry) {
    LayerLoadResult result;
    result.graph = LayerGraph(registry.size(), true);
    for_each_row(table, result.report, [&](size_t line_no, const std::vector<std::string>& f) {
        if (f.size() != 3) {
            result.report.skip(line_no, "expected 3 fields (origin,dest,persons)");
            return;
        }
        auto origin = registry.find(f[0]);
        auto dest = registry.find(f[1]);
        if (!origin || !dest) {
            result.report.skip(line_no, "unknown iso code '" + (!origin ? f[0] : f[1]) + "'");
            return;
        }
        auto persons = csv::parse_double(f[2]);
        if (!persons) {
            result.report.skip(line_no, "bad count '" + f[2] + "'");
            return;
        }
        if (*persons < 0.0) {
            result.report.skip(line_no, "negative count");
            return;
        }
        result.report.rows_accepted += 1;
        if (*origin == *dest) return;  // loop rows accepted but stripped
        result.graph.add_weight(*origin, *dest, *persons);
    });
    return result;
}

const char* aux_kind_name(AuxKind kind) {
    switch (kind) {
        case AuxKind::colonial: return "colonial";
        case AuxKind::language: return "language";
        case AuxKind::trade: return "trade";
    }
    return "?";
}

AuxLoadResult load_aux(AuxKind kind, std::istream& table, const CountryRegistry& registry) {
    AuxLoadResult result;
    result.network.kind = kind;
    result.network.graph = LayerGraph(registry.size(), true);
    LayerGraph& g = result.network.graph;

    if (kind == AuxKind::trade) {
        LayerLoadResult loaded = load_migration(table, registry);
        result.network.graph = std::move(loaded.graph);
        result.report = std::move(loaded.report);
        return result;
    }

    for_each_row(table, result.report, [&](size_t line_no, const std::vector<std::string>& f) {
        if (f.size() != 2) {
            result.report.skip(line_no, "expected 2 fields (iso_a,iso_b)");
            return;
        }
        auto a = registry.find(f[0]);
        auto b = registry.find(f[1]);
        if (!a || !b) {
            result.report.skip(line_no, "unknown iso code '" + (!a ? f[0] : f[1]) + "'");
            return;
        }
        result.report.rows_accepted += 1;
        if (*a == *b) return;
        // 0/1 weights, both directions; repeated pairs stay at weight 1
        if (g.weight(*a, *b) == 0.0) g.add_weight(*a, *b, 1.0);
        if (g.weight(*b, *a) == 0.0) g.add_weight(*b, *a, 1.0);
    });
    return result;
}

std::vector<double> penetration(const LayerGraph& od_layer, const CountryRegistry& registry) {
    if (od_layer.node_count() != registry.size()) {
        throw std::invalid_argument("penetration: layer/registry size mismatch");
    }
    Strengths st = strengths(od_layer);
    std::vector<double> rates(st.out.size());
    for (size_t i = 0; i < rates.size(); ++i) {
        double pop = registry.entry(static_cast<int>(i)).population;
        rates[i] = pop > 0.0 ? st.out[i] / (pop / 1e6)
                             : std::numeric_limits<double>::quiet_NaN();
    }
    return rates;
}

RegistryLoadResult load_registry(std::istream& table) {
    std::vector<CountryInfo> entries;
    std::unordered_map<std::string, bool> seen;
    csv::LoadReport report;
    for_each_row(table, report, [&](size_t line_no, const std::vector<std::string>& f) {
        if (f.size() != 4) {
            report.skip(line_no, "expected 4 fields (iso,population,lat,lon)");
            return;
        }
        auto pop = csv::parse_double(f[1]);
        auto lat = csv::parse_double(f[2]);
        auto lon = csv::parse_double(f[3]);
        if (!pop || !lat || !lon) {
            report.skip(line_no, "bad numeric field");
            return;
        }
        CountryInfo info{f[0], *pop, *lat, *lon};
        bool iso_ok = info.iso.size() >= 2 && info.iso.size() <= 3;
        for (char c : info.iso) {
            if (!std::isalpha(static_cast<unsigned char>(c))) iso_ok = false;
        }
        if (!iso_ok || *pop < 0.0 ||
            *lat < -90.0 || *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
            report.skip(line_no, "invalid registry entry for '" + f[0] + "'");
            return;
        }
        if (!seen.emplace(info.iso, true).second) {
            report.skip(line_no, "duplicate iso code '" + info.iso + "'");
            return;
        }
        report.rows_accepted += 1;
        entries.push_back(std::move(info));
    });
    return RegistryLoadResult{CountryRegistry(std::move(entries)), std::move(report)};
}

}  // namespace mobnet
