#pragma once

#include <filesystem>
#include <iosfwd>

#include "lagflow/flow/flow.hpp"

namespace lagflow::io {

/// LGT1: magic "LGT1", u32 version, u64 particle count, u64 save count, f64 T,
/// then save-major positions (x, y, z) as little-endian f64. The first save
/// holds the initial points and save times are uniform on [0, T].
void write_trajectories(std::ostream& os, const ParticleEnsemble& e);
ParticleEnsemble read_trajectories(std::istream& is);

void write_trajectories(const std::filesystem::path& p, const ParticleEnsemble& e);
ParticleEnsemble read_trajectories(const std::filesystem::path& p);

}  // namespace lagflow::io
