#include "fermilt/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "fermilt/errors.hpp"

namespace fermilt {

namespace {
constexpr char kMagic[4] = {'F', 'V', 'F', '1'};
}

void write_checkpoint(const std::string& path, const OrbitalSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("checkpoint: cannot open for writing: " + path);
  const auto& g = *set.grid();
  const std::uint32_t n = static_cast<std::uint32_t>(g.n());
  const double L = g.box_length();
  const std::uint8_t count = static_cast<std::uint8_t>(set.count());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&L), sizeof(L));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const auto& w : set.orbitals) {
    // std::complex<double> is layout-compatible with (re, im) f64 pairs.
    out.write(reinterpret_cast<const char*>(w.values.data()),
              static_cast<std::streamsize>(w.values.size() * sizeof(cdouble)));
  }
  if (!out) throw IoError("checkpoint: write failed: " + path);
}

OrbitalSet read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("checkpoint: bad magic in " + path);
  }
  std::uint32_t n = 0;
  double L = 0.0;
  std::uint8_t count = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&L), sizeof(L));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in) throw IoError("checkpoint: truncated header in " + path);
  GridPtr grid = SpectralGrid::make(static_cast<int>(n), L);
  OrbitalSet set;
  for (int j = 0; j < count; ++j) {
    ComplexField w(grid);
    in.read(reinterpret_cast<char*>(w.values.data()),
            static_cast<std::streamsize>(w.values.size() * sizeof(cdouble)));
    if (!in) throw IoError("checkpoint: truncated orbital data in " + path);
    set.orbitals.push_back(std::move(w));
  }
  set.occupations.assign(count, 1.0);
  return set;
}

}  // namespace fermilt
