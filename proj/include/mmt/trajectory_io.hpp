#pragma once

#include <string>

#include <json.hpp>

#include "mmt/mmt_dynamics.hpp"

namespace mmt {

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const GridSpec& g);
nlohmann::json to_json(const IntegratorConfig& c);

// {params, grid, cfg, times, mass, energy, hamiltonian, h_half[, snapshots]}.
// When snapshots are present, sidecar_name names the binary file in the index.
nlohmann::json to_json(const TrajectoryRecord& rec, const ModelParams& p, const GridSpec& g,
                       const IntegratorConfig& c, const std::string& sidecar_name = "");

// Raw little-endian interleaved (re, im) doubles, snapshot after snapshot.
std::string snapshot_bytes(const TrajectoryRecord& rec);
std::vector<SpectralField> read_snapshots(const std::string& bytes, const GridSpec& g);

}  // namespace mmt
