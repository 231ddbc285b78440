// Pipeline commands behind the mobnet executable: build the three-layer
// network from raw inputs, then run stats / model fits / community detection
// / cross-network comparison on the built artifacts.
#ifndef MOBNET_CLI_HPP
#define MOBNET_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mobnet/netcore.hpp"

namespace mobnet::cli {

struct PipelineConfig {
    std::string registry;
    std::string flickr_events;
    std::string twitter_events;
    std::string migration;
    std::string colonial;
    std::string language;
    std::string trade;

    double threshold = 10.0;
    std::vector<double> resolutions{1.0};
    std::optional<double> aux_resolution;  // defaults to the mobility resolution
    int restarts = 1;
    uint64_t seed = 0;
    std::string out;

    // Parses the declarative JSON config and checks the invariants that can
    // be checked without knowing the command (files exist, values in range).
    static PipelineConfig from_file(const std::string& path);
    void validate() const;
};

// Each command validates and computes everything first, then writes its
// output files in one go, so failures leave no partial output tree.
void cmd_build(const PipelineConfig& config);
void cmd_stats(const PipelineConfig& config);
void cmd_fit(const PipelineConfig& config);
void cmd_detect(const PipelineConfig& config);
void cmd_compare(const PipelineConfig& config);
void cmd_sweep(const PipelineConfig& config);

// Reads the network directory written by cmd_build.
MultiLayerNetwork load_built_network(const std::string& out_dir);

}  // namespace mobnet::cli

#endif
