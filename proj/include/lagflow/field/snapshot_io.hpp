#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "lagflow/field/field.hpp"

namespace lagflow::io {

/// LGF1: magic "LGF1", u32 version, u32 n, f64 L, f64 time, f64 nu, then
/// 3*n^3 little-endian f64 samples, component-major and x-fastest within
/// a component. LGS1 is the same layout with a single component.
struct SnapshotHeader {
  std::uint32_t version = 1;
  std::uint32_t n = 0;
  double box_len = 0.0;
  double time = 0.0;
  double nu = 0.0;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_vector_snapshot(std::ostream& os, const RealVectorField& f, double time, double nu);
RealVectorField read_vector_snapshot(std::istream& is, SnapshotHeader* header = nullptr);

void write_scalar_snapshot(std::ostream& os, const ScalarField& f, double time, double nu);
ScalarField read_scalar_snapshot(std::istream& is, SnapshotHeader* header = nullptr);

void write_vector_snapshot(const std::filesystem::path& p, const RealVectorField& f, double time, double nu);
RealVectorField read_vector_snapshot(const std::filesystem::path& p, SnapshotHeader* header = nullptr);
void write_scalar_snapshot(const std::filesystem::path& p, const ScalarField& f, double time, double nu);
ScalarField read_scalar_snapshot(const std::filesystem::path& p, SnapshotHeader* header = nullptr);

}  // namespace lagflow::io
