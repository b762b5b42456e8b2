#include "lagflow/field/snapshot_io.hpp"

#include <fstream>
#include <stdexcept>

#include "lagflow/field/binary.hpp"

namespace lagflow::io {

namespace {

template <std::size_t C>
void write_field(std::ostream& os, std::string_view magic, const RealField<C>& f, double time, double nu) {
  put_magic(os, magic);
  put_le<std::uint32_t>(os, kSnapshotVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.n));
  put_le<double>(os, f.grid.box_len);
  put_le<double>(os, time);
  put_le<double>(os, nu);
  for (const auto& c : f.comp)
    for (double v : c) put_le<double>(os, v);
  if (!os) throw std::runtime_error("snapshot write failed");
}

template <std::size_t C>
RealField<C> read_field(std::istream& is, std::string_view magic, SnapshotHeader* header) {
  expect_magic(is, magic);
  SnapshotHeader h;
  h.version = get_le<std::uint32_t>(is);
  if (h.version != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version");
  h.n = get_le<std::uint32_t>(is);
  h.box_len = get_le<double>(is);
  h.time = get_le<double>(is);
  h.nu = get_le<double>(is);
  RealField<C> f(Grid3(static_cast<int>(h.n), h.box_len));
  for (auto& c : f.comp)
    for (double& v : c) v = get_le<double>(is);
  if (header) *header = h;
  return f;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + p.string());
  return is;
}

}  // namespace

void write_vector_snapshot(std::ostream& os, const RealVectorField& f, double time, double nu) {
  write_field(os, "LGF1", f, time, nu);
}
RealVectorField read_vector_snapshot(std::istream& is, SnapshotHeader* header) {
  return read_field<3>(is, "LGF1", header);
}
void write_scalar_snapshot(std::ostream& os, const ScalarField& f, double time, double nu) {
  write_field(os, "LGS1", f, time, nu);
}
ScalarField read_scalar_snapshot(std::istream& is, SnapshotHeader* header) {
  return read_field<1>(is, "LGS1", header);
}

void write_vector_snapshot(const std::filesystem::path& p, const RealVectorField& f, double time, double nu) {
  auto os = open_out(p);
  write_vector_snapshot(os, f, time, nu);
}
RealVectorField read_vector_snapshot(const std::filesystem::path& p, SnapshotHeader* header) {
  auto is = open_in(p);
  return read_vector_snapshot(is, header);
}
void write_scalar_snapshot(const std::filesystem::path& p, const ScalarField& f, double time, double nu) {
  auto os = open_out(p);
  write_scalar_snapshot(os, f, time, nu);
}
ScalarField read_scalar_snapshot(const std::filesystem::path& p, SnapshotHeader* header) {
  auto is = open_in(p);
  return read_scalar_snapshot(is, header);
}

}  // namespace lagflow::io
