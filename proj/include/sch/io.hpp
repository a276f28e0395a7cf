#pragma once

// Serialization: the Field binary snapshot format, CSV time series, content
// hashing for manifests.
//
// Field snapshot layout (little-endian): 16-byte header consisting of the
// magic "SCHF", a u32 node count n and two reserved u32 words (zero),
// followed by n IEEE-754 doubles.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sch/grid.hpp"

namespace sch {
namespace io {

void write_field(const std::string& path, const Field& f);

/// Read a snapshot; if `grid` is given, its size must match the header.
Field read_field(const std::string& path, GridPtr grid = nullptr);

/// CSV with a time column followed by named series (all the same length).
void write_csv(const std::string& path, const std::vector<double>& times,
               const std::vector<std::pair<std::string, std::vector<double>>>& columns);

/// FNV-1a 64-bit over a byte buffer; stable content fingerprint for manifests.
uint64_t fnv1a(const void* data, size_t len);
uint64_t fnv1a_file(const std::string& path);
std::string hex64(uint64_t h);

}  // namespace io
}  // namespace sch
