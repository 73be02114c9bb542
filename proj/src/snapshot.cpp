#include "tesim/snapshot.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tesim {

namespace {

static_assert(sizeof(double) == 8, "snapshot format needs 64-bit doubles");

// The payload is little-endian on disk; swap on big-endian hosts.
void to_little_endian(std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::big) {
    for (double& d : v) {
      uint64_t bits;
      std::memcpy(&bits, &d, 8);
      bits = __builtin_bswap64(bits);
      std::memcpy(&d, &bits, 8);
    }
  }
}

std::string format_time(double t) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, t);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

Field Snapshot::to_field(const Grid& grid) const {
  if (grid.dim != dim)
    throw std::invalid_argument("Snapshot::to_field: dimension mismatch");
  for (int a = 0; a < dim; ++a)
    if (grid.cells[a] != cells[a])
      throw std::invalid_argument("Snapshot::to_field: node count mismatch");
  Field f(grid, components);
  if (f.values.size() != values.size())
    throw std::invalid_argument("Snapshot::to_field: value count mismatch");
  f.values = values;
  return f;
}

void write_snapshot(const std::string& path, const Field& field, double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("write_snapshot: cannot open " + path);
  std::ostringstream header;
  header << "TESIM1 " << field.grid.dim;
  for (int a = 0; a < field.grid.dim; ++a)
    header << ' ' << field.grid.cells[a];
  header << ' ' << field.components << ' ' << format_time(time) << '\n';
  out << header.str();
  std::vector<double> payload = field.values;
  to_little_endian(payload);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * 8));
  if (!out) throw std::runtime_error("write_snapshot: write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("read_snapshot: missing header: " + path);
  std::istringstream hs(header);
  std::string magic;
  Snapshot snap;
  hs >> magic >> snap.dim;
  if (magic != "TESIM1" || !hs || (snap.dim != 1 && snap.dim != 2))
    throw std::runtime_error("read_snapshot: bad header: " + path);
  size_t nodes = 1;
  for (int a = 0; a < snap.dim; ++a) {
    hs >> snap.cells[a];
    if (!hs || snap.cells[a] < 3)
      throw std::runtime_error("read_snapshot: bad node counts: " + path);
    nodes *= static_cast<size_t>(snap.cells[a]);
  }
  std::string time_token;
  hs >> snap.components >> time_token;
  if (!hs || snap.components < 1 || snap.components > 2)
    throw std::runtime_error("read_snapshot: bad component count: " + path);
  {
    const char* b = time_token.data();
    auto [p, ec] = std::from_chars(b, b + time_token.size(), snap.time);
    if (ec != std::errc() || p != b + time_token.size())
      throw std::runtime_error("read_snapshot: bad time stamp: " + path);
  }
  snap.values.resize(nodes * snap.components);
  in.read(reinterpret_cast<char*>(snap.values.data()),
          static_cast<std::streamsize>(snap.values.size() * 8));
  if (in.gcount() != static_cast<std::streamsize>(snap.values.size() * 8))
    throw std::runtime_error("read_snapshot: truncated payload: " + path);
  to_little_endian(snap.values);
  return snap;
}

}  // namespace tesim
