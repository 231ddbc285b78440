// mobnet command line: build the mobility network and run the analyses.
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "mobnet/cli.hpp"

namespace {

struct Overrides {
    std::optional<uint64_t> seed;
    std::vector<double> resolutions;
    std::optional<double> threshold;
    std::optional<double> aux_resolution;
    std::optional<int> restarts;
    std::string out;
};

mobnet::cli::PipelineConfig resolve(const std::string& config_path, const Overrides& o) {
    auto config = mobnet::cli::PipelineConfig::from_file(config_path);
    if (o.seed) config.seed = *o.seed;
    if (!o.resolutions.empty()) config.resolutions = o.resolutions;
    if (o.threshold) config.threshold = *o.threshold;
    if (o.aux_resolution) config.aux_resolution = *o.aux_resolution;
    if (o.restarts) config.restarts = *o.restarts;
    if (!o.out.empty()) config.out = o.out;
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Global multi-layer mobility network toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    using Command = std::function<void(const mobnet::cli::PipelineConfig&)>;
    const std::tuple<const char*, const char*, Command> commands[] = {
        {"build", "assemble and filter the three-layer network from raw inputs",
         mobnet::cli::cmd_build},
        {"stats", "strength/weight distributions, flow coverage and attractiveness ranks",
         mobnet::cli::cmd_stats},
        {"fit", "fit gravity, locally-normalized gravity and radiation models per layer",
         mobnet::cli::cmd_fit},
        {"detect", "detect communities on the multi-layer network per resolution value",
         mobnet::cli::cmd_detect},
        {"compare", "compare mobility partitions against auxiliary network partitions (NMI)",
         mobnet::cli::cmd_compare},
        {"sweep", "community count and Q across the resolution list", mobnet::cli::cmd_sweep},
    };

    Command selected;
    for (const auto& [name, description, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "pipeline config JSON")->required();
        sub->add_option("--seed", overrides.seed, "override the config seed");
        sub->add_option("--resolution", overrides.resolutions,
                        "override the resolution value list")
            ->delimiter(',');
        sub->add_option("--threshold", overrides.threshold, "override the strength threshold");
        sub->add_option("--aux-resolution", overrides.aux_resolution,
                        "resolution used to partition the auxiliary networks");
        sub->add_option("--restarts", overrides.restarts, "optimizer restarts (default 1)");
        sub->add_option("--out", overrides.out, "override the output directory");
        sub->callback([&selected, fn = fn]() { selected = fn; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        selected(resolve(config_path, overrides));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
