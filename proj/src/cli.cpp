#include "mobnet/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mobnet/community.hpp"
#include "mobnet/csv.hpp"
#include "mobnet/flowmodels.hpp"
#include "mobnet/ingest.hpp"
#include "mobnet/stats.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace mobnet::cli {

namespace {

constexpr const char* kLayerNames[3] = {"flickr", "twitter", "migration"};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

struct OutputFile {
    std::string relative_path;  // forward slashes, relative to the out dir
    std::string content;
};

void write_tree(const std::string& out_dir, const std::vector<OutputFile>& files) {
    for (const OutputFile& f : files) {
        fs::path target = fs::path(out_dir) / f.relative_path;
        fs::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + target.string());
        out << f.content;
    }
}

std::string format_double(double v) { return csv::format_double(v); }

void require_path(const std::string& path, const std::string& field) {
    if (path.empty()) throw std::runtime_error("config: missing required path '" + field + "'");
    if (!fs::exists(path)) throw std::runtime_error("config: file does not exist: " + path);
}

std::string partition_csv(const CountryRegistry& registry, const Partition& partition) {
    std::ostringstream out;
    out << "iso,community_label\n";
    for (int i = 0; i < registry.size(); ++i) {
        out << registry.entry(i).iso << ',' << partition.label(i) << '\n';
    }
    return out.str();
}

json report_issues(const csv::LoadReport& report) {
    json j;
    j["rows_total"] = report.rows_total;
    j["rows_accepted"] = report.rows_accepted;
    j["rows_skipped"] = report.rows_skipped;
    json issues = json::array();
    for (const auto& issue : report.issues) {
        issues.push_back({{"line", issue.line}, {"message", issue.message}});
    }
    j["issues"] = issues;
    return j;
}

struct BuiltInputs {
    CountryRegistry registry;
    OdBuildResult flickr;
    OdBuildResult twitter;
    LayerLoadResult migration;
};

BuiltInputs load_raw_inputs(const PipelineConfig& config) {
    require_path(config.registry, "registry");
    require_path(config.flickr_events, "flickr_events");
    require_path(config.twitter_events, "twitter_events");
    require_path(config.migration, "migration");

    auto reg_in = open_input(config.registry);
    RegistryLoadResult reg = load_registry(reg_in);
    if (reg.registry.size() == 0) throw std::runtime_error("registry file has no valid entries");

    BuiltInputs inputs{std::move(reg.registry), {}, {}, {}};
    auto flickr_in = open_input(config.flickr_events);
    inputs.flickr = build_od_layer(flickr_in, inputs.registry);
    auto twitter_in = open_input(config.twitter_events);
    inputs.twitter = build_od_layer(twitter_in, inputs.registry);
    auto migration_in = open_input(config.migration);
    inputs.migration = load_migration(migration_in, inputs.registry);

    if (inputs.flickr.graph.edge_count() == 0) throw std::runtime_error("flickr layer is empty");
    if (inputs.twitter.graph.edge_count() == 0) throw std::runtime_error("twitter layer is empty");
    if (inputs.migration.graph.edge_count() == 0) throw std::runtime_error("migration layer is empty");
    return inputs;
}

std::string layer_csv(const CountryRegistry& registry, const LayerGraph& g) {
    std::ostringstream out;
    out << "origin_iso,dest_iso,weight\n";
    for (const auto& [edge, w] : g.edges()) {
        out << registry.entry(edge.first).iso << ',' << registry.entry(edge.second).iso << ','
            << format_double(w) << '\n';
    }
    return out.str();
}

std::string penetration_csv(const LayerGraph& layer, const CountryRegistry& registry) {
    std::vector<double> rates = penetration(layer, registry);
    std::ostringstream out;
    out << "iso,users_abroad_per_million\n";
    for (int i = 0; i < registry.size(); ++i) {
        out << registry.entry(i).iso << ',' << format_double(rates[static_cast<size_t>(i)]) << '\n';
    }
    return out.str();
}

// Share of countries with fewer than 100 users abroad per million residents,
// i.e. below 0.01% of the population; countries with zero population skipped.
double share_below_100_per_million(const LayerGraph& layer, const CountryRegistry& registry) {
    std::vector<double> rates = penetration(layer, registry);
    size_t below = 0, counted = 0;
    for (double r : rates) {
        if (std::isnan(r)) continue;
        ++counted;
        if (r < 100.0) ++below;
    }
    return counted == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(counted);
}

double first_resolution(const PipelineConfig& config) {
    if (config.resolutions.empty()) throw std::runtime_error("config: resolutions list is empty");
    return config.resolutions.front();
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: invalid JSON in " + path + ": " + e.what());
    }

    PipelineConfig config;
    config.registry = j.value("registry", "");
    if (j.contains("events")) {
        config.flickr_events = j["events"].value("flickr", "");
        config.twitter_events = j["events"].value("twitter", "");
    }
    config.migration = j.value("migration", "");
    if (j.contains("aux")) {
        config.colonial = j["aux"].value("colonial", "");
        config.language = j["aux"].value("language", "");
        config.trade = j["aux"].value("trade", "");
    }
    config.threshold = j.value("threshold", 10.0);
    if (j.contains("resolutions")) {
        config.resolutions = j["resolutions"].get<std::vector<double>>();
    }
    if (j.contains("aux_resolution") && !j["aux_resolution"].is_null()) {
        config.aux_resolution = j["aux_resolution"].get<double>();
    }
    config.restarts = j.value("restarts", 1);
    config.seed = j.value("seed", uint64_t{0});
    config.out = j.value("out", "");

    // paths in the config are relative to the config file's directory
    fs::path base = fs::path(path).parent_path();
    auto rebase = [&base](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).string();
    };
    rebase(config.registry);
    rebase(config.flickr_events);
    rebase(config.twitter_events);
    rebase(config.migration);
    rebase(config.colonial);
    rebase(config.language);
    rebase(config.trade);
    rebase(config.out);

    config.validate();
    return config;
}

void PipelineConfig::validate() const {
    if (!(threshold >= 0.0)) throw std::runtime_error("config: threshold must be >= 0");
    if (resolutions.empty()) throw std::runtime_error("config: resolutions list is empty");
    for (double a : resolutions) {
        if (!(a > 0.0)) throw std::runtime_error("config: resolution values must be > 0");
    }
    if (aux_resolution && !(*aux_resolution > 0.0)) {
        throw std::runtime_error("config: aux_resolution must be > 0");
    }
    if (restarts < 1) throw std::runtime_error("config: restarts must be >= 1");
    if (out.empty()) throw std::runtime_error("config: missing output directory 'out'");
    for (const std::string* p : {&registry, &flickr_events, &twitter_events, &migration,
                                 &colonial, &language, &trade}) {
        if (!p->empty() && !fs::exists(*p)) {
            throw std::runtime_error("config: file does not exist: " + *p);
        }
    }
}

void cmd_build(const PipelineConfig& config) {
    BuiltInputs inputs = load_raw_inputs(config);

    MultiLayerNetwork full(inputs.registry);
    full.add_layer("flickr", inputs.flickr.graph);
    full.add_layer("twitter", inputs.twitter.graph);
    full.add_layer("migration", inputs.migration.graph);

    MultiLayerNetwork filtered = filter_low_strength(full, config.threshold);

    json manifest;
    manifest["threshold"] = config.threshold;
    manifest["nodes_registry"] = inputs.registry.size();
    manifest["nodes_after_filter"] = filtered.node_count();
    json layers;
    const OdBuildResult* od[2] = {&inputs.flickr, &inputs.twitter};
    for (int k = 0; k < 2; ++k) {
        json j = report_issues(od[k]->report);
        j["users_total"] = od[k]->users_total;
        j["users_resolved"] = od[k]->users_resolved;
        j["total_weight_prefilter"] = strengths(od[k]->graph).total;
        j["total_weight"] = strengths(*filtered.find_layer(kLayerNames[k])).total;
        j["share_of_countries_below_100_users_per_million"] =
            share_below_100_per_million(od[k]->graph, inputs.registry);
        layers[kLayerNames[k]] = std::move(j);
    }
    {
        json j = report_issues(inputs.migration.report);
        j["total_weight_prefilter"] = strengths(inputs.migration.graph).total;
        j["total_weight"] = strengths(*filtered.find_layer("migration")).total;
        layers["migration"] = std::move(j);
    }
    manifest["layers"] = std::move(layers);

    std::vector<OutputFile> files;
    {
        std::ostringstream reg;
        reg << "iso,population,lat,lon\n";
        for (int i = 0; i < filtered.node_count(); ++i) {
            const CountryInfo& e = filtered.registry().entry(i);
            reg << e.iso << ',' << format_double(e.population) << ',' << format_double(e.lat)
                << ',' << format_double(e.lon) << '\n';
        }
        files.push_back({"network/registry.csv", reg.str()});
    }
    for (size_t l = 0; l < filtered.layer_count(); ++l) {
        files.push_back({"network/" + filtered.layer_name(l) + ".csv",
                         layer_csv(filtered.registry(), filtered.layer(l))});
    }
    files.push_back({"network/penetration_flickr.csv",
                     penetration_csv(inputs.flickr.graph, inputs.registry)});
    files.push_back({"network/penetration_twitter.csv",
                     penetration_csv(inputs.twitter.graph, inputs.registry)});
    files.push_back({"network/manifest.json", manifest.dump(2) + "\n"});
    write_tree(config.out, files);
}

MultiLayerNetwork load_built_network(const std::string& out_dir) {
    fs::path net_dir = fs::path(out_dir) / "network";
    std::ifstream reg_in(net_dir / "registry.csv");
    if (!reg_in) {
        throw std::runtime_error("no built network under " + out_dir + " (run `mobnet build` first)");
    }
    std::string header;
    std::getline(reg_in, header);  // written with a header row
    RegistryLoadResult reg = load_registry(reg_in);

    MultiLayerNetwork net(reg.registry);
    for (const char* name : kLayerNames) {
        std::ifstream in(net_dir / (std::string(name) + ".csv"));
        if (!in) throw std::runtime_error("missing built layer file: " + std::string(name));
        std::getline(in, header);
        LayerLoadResult layer = load_migration(in, reg.registry);
        if (!layer.report.issues.empty()) {
            throw std::runtime_error("built layer file " + std::string(name) + " is corrupt: " +
                                     layer.report.issues.front().message);
        }
        net.add_layer(name, std::move(layer.graph));
    }
    return net;
}

void cmd_stats(const PipelineConfig& config) {
    MultiLayerNetwork net = load_built_network(config.out);

    std::vector<OutputFile> files;
    json summary;
    for (size_t l = 0; l < net.layer_count(); ++l) {
        const std::string& name = net.layer_name(l);
        const LayerGraph& g = net.layer(l);

        CoverageCurve curve = flow_coverage(g);
        std::ostringstream cov;
        cov << "link_fraction,flow_fraction\n";
        for (const auto& [lf, ff] : curve.points) {
            cov << format_double(lf) << ',' << format_double(ff) << '\n';
        }
        files.push_back({"stats/coverage_" + name + ".csv", cov.str()});

        std::vector<double> in_strength = normalized_in_strength(g);
        std::vector<double> positive;
        for (double v : in_strength) {
            if (v > 0.0) positive.push_back(v);
        }
        LognormalFit strength_fit = lognormal_fit(positive);

        std::vector<double> rel;
        for (const auto& [edge, r] : relative_out_weights(g)) {
            (void)edge;
            rel.push_back(r);
        }
        LognormalFit weight_fit = lognormal_fit(rel);

        for (const auto& [label, fit] :
             {std::pair<const char*, const LognormalFit*>{"strength_cdf_", &strength_fit},
              std::pair<const char*, const LognormalFit*>{"weight_cdf_", &weight_fit}}) {
            std::ostringstream cdf;
            cdf << "value,cdf\n";
            for (const auto& [value, p] : fit->ecdf) {
                cdf << format_double(value) << ',' << format_double(p) << '\n';
            }
            files.push_back({"stats/" + std::string(label) + name + ".csv", cdf.str()});
        }

        summary["lognormal"][name] = {
            {"normalized_in_strength", {{"mu", strength_fit.mu}, {"sigma", strength_fit.sigma}}},
            {"relative_link_weights", {{"mu", weight_fit.mu}, {"sigma", weight_fit.sigma}}}};
    }

    RankTable ranks = attractiveness_ranks(*net.find_layer("flickr"), *net.find_layer("twitter"),
                                           *net.find_layer("migration"));
    std::ostringstream rank_csv;
    rank_csv << "country,rank_short,rank_migration\n";
    for (int i = 0; i < net.node_count(); ++i) {
        const RankRow& row = ranks.rows[static_cast<size_t>(i)];
        rank_csv << net.registry().entry(i).iso << ',' << format_double(row.short_term_rank) << ','
                 << format_double(row.migration_rank) << '\n';
    }
    files.push_back({"stats/ranks.csv", rank_csv.str()});
    summary["spearman_short_vs_migration"] = ranks.spearman;
    files.push_back({"stats/summary.json", summary.dump(2) + "\n"});

    write_tree(config.out, files);
}

void cmd_fit(const PipelineConfig& config) {
    MultiLayerNetwork net = load_built_network(config.out);
    DistanceMatrix dist = haversine_matrix(net.registry());

    json reports;
    for (size_t l = 0; l < net.layer_count(); ++l) {
        const LayerGraph& g = net.layer(l);
        std::vector<double> s_out = strengths(g).out;

        FitReport gravity = fit_gravity(g, s_out, net.registry(), dist);
        FitReport local = fit_local_gravity(g, s_out, net.registry(), dist);
        FitReport radiation = fit_radiation(g, s_out, net.registry(), dist);
        if (local.boundary_warning) {
            fprintf(stderr, "warning: %s locally-normalized alpha hit the search bracket edge\n",
                    net.layer_name(l).c_str());
        }
        json layer;
        layer["gravity"] = json::parse(gravity.to_json());
        layer["local_gravity"] = json::parse(local.to_json());
        layer["radiation"] = json::parse(radiation.to_json());
        reports[net.layer_name(l)] = std::move(layer);
    }

    write_tree(config.out, {{"fit/reports.json", reports.dump(2) + "\n"}});
}

void cmd_detect(const PipelineConfig& config) {
    MultiLayerNetwork net = load_built_network(config.out);
    ComboOptions options;
    options.restarts = config.restarts;

    std::vector<OutputFile> files;
    std::ostringstream sweep;
    sweep << "a,n_communities,Q\n";
    for (double a : config.resolutions) {
        ComboResult result = combo_optimize(net, a, config.seed, options);
        files.push_back({"detect/partition_multilayer_a" + format_double(a) + ".csv",
                         partition_csv(net.registry(), result.partition)});
        sweep << format_double(a) << ',' << result.partition.community_count() << ','
              << format_double(result.q) << '\n';
    }
    files.push_back({"detect/sweep.csv", sweep.str()});
    write_tree(config.out, files);
}

void cmd_sweep(const PipelineConfig& config) {
    MultiLayerNetwork net = load_built_network(config.out);
    ComboOptions options;
    options.restarts = config.restarts;

    std::vector<SweepPoint> points = resolution_sweep(net, config.resolutions, config.seed, options);
    std::ostringstream sweep;
    sweep << "a,n_communities,Q\n";
    for (const SweepPoint& p : points) {
        sweep << format_double(p.resolution) << ',' << p.community_count << ','
              << format_double(p.q) << '\n';
    }
    write_tree(config.out, {{"sweep/sweep.csv", sweep.str()}});
}

void cmd_compare(const PipelineConfig& config) {
    require_path(config.colonial, "colonial");
    require_path(config.language, "language");
    require_path(config.trade, "trade");

    MultiLayerNetwork net = load_built_network(config.out);
    const double a_mob = first_resolution(config);
    const double a_aux = config.aux_resolution.value_or(a_mob);
    ComboOptions options;
    options.restarts = config.restarts;

    std::vector<NamedPartition> mobility;
    for (size_t l = 0; l < net.layer_count(); ++l) {
        mobility.push_back(
            {net.layer_name(l), combo_optimize(net.layer(l), a_mob, config.seed, options).partition});
    }
    mobility.push_back({"multilayer", combo_optimize(net, a_mob, config.seed, options).partition});

    const std::pair<AuxKind, const std::string*> aux_inputs[3] = {
        {AuxKind::colonial, &config.colonial},
        {AuxKind::language, &config.language},
        {AuxKind::trade, &config.trade},
    };
    std::vector<NamedPartition> references;
    for (const auto& [kind, path] : aux_inputs) {
        auto in = open_input(*path);
        AuxLoadResult aux = load_aux(kind, in, net.registry());
        if (aux.network.graph.edge_count() == 0) {
            throw std::runtime_error(std::string("aux network '") + aux_kind_name(kind) +
                                     "' has no edges on the filtered node set");
        }
        references.push_back(
            {aux_kind_name(kind),
             combo_optimize(aux.network.graph, a_aux, config.seed, options).partition});
    }

    std::vector<SimilarityRow> rows = similarity_report(mobility, references);

    std::vector<OutputFile> files;
    std::ostringstream table;
    table << "partition";
    for (const NamedPartition& ref : references) table << ',' << ref.name;
    table << ",average\n";
    for (const SimilarityRow& row : rows) {
        table << row.name;
        for (double v : row.nmi_values) table << ',' << format_double(v);
        table << ',' << format_double(row.average) << '\n';
    }
    files.push_back({"compare/nmi_table.csv", table.str()});
    for (const NamedPartition& p : mobility) {
        files.push_back({"compare/partition_" + p.name + ".csv",
                         partition_csv(net.registry(), p.partition)});
    }
    for (const NamedPartition& p : references) {
        files.push_back({"compare/partition_" + p.name + ".csv",
                         partition_csv(net.registry(), p.partition)});
    }
    write_tree(config.out, files);
}

}  // namespace mobnet::cli
