#pragma once

#include <string>

#include "fermilt/state.hpp"

namespace fermilt {

/// Binary field checkpoint, little-endian:
///   magic "FVF1" (4 bytes)
///   n_per_axis    u32
///   box_length L  f64
///   orbital_count u8
/// followed, per orbital, by n^3 row-major (re, im) f64 pairs.
void write_checkpoint(const std::string& path, const OrbitalSet& set);
OrbitalSet read_checkpoint(const std::string& path);

}  // namespace fermilt
