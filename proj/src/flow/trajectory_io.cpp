#include "lagflow/flow/trajectory_io.hpp"

#include <fstream>
#include <stdexcept>

#include "lagflow/field/binary.hpp"

namespace lagflow::io {

namespace {
constexpr std::uint32_t kTrajectoryVersion = 1;
}

void write_trajectories(std::ostream& os, const ParticleEnsemble& e) {
  const double T = e.times.empty() ? 0.0 : e.times.back();
  put_magic(os, "LGT1");
  put_le<std::uint32_t>(os, kTrajectoryVersion);
  put_le<std::uint64_t>(os, e.size());
  put_le<std::uint64_t>(os, e.positions.size());
  put_le<double>(os, T);
  for (const auto& save : e.positions)
    for (const Vec3& x : save) {
      put_le<double>(os, x.x);
      put_le<double>(os, x.y);
      put_le<double>(os, x.z);
    }
  if (!os) throw std::runtime_error("trajectory write failed");
}

ParticleEnsemble read_trajectories(std::istream& is) {
  expect_magic(is, "LGT1");
  if (get_le<std::uint32_t>(is) != kTrajectoryVersion) throw std::runtime_error("unsupported trajectory version");
  const auto particles = get_le<std::uint64_t>(is);
  const auto saves = get_le<std::uint64_t>(is);
  const double T = get_le<double>(is);
  ParticleEnsemble e;
  e.positions.assign(saves, std::vector<Vec3>(particles));
  for (auto& save : e.positions)
    for (Vec3& x : save) {
      x.x = get_le<double>(is);
      x.y = get_le<double>(is);
      x.z = get_le<double>(is);
    }
  for (std::uint64_t s = 0; s < saves; ++s) e.times.push_back(saves > 1 ? T * double(s) / double(saves - 1) : T);
  if (saves > 0) e.initial = e.positions.front();
  return e;
}

void write_trajectories(const std::filesystem::path& p, const ParticleEnsemble& e) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  write_trajectories(os, e);
}

ParticleEnsemble read_trajectories(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + p.string());
  return read_trajectories(is);
}

}  // namespace lagflow::io
