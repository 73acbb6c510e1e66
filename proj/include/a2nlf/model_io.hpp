#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "a2nlf/admm.hpp"
#include "a2nlf/metrics.hpp"

namespace a2nlf {

/// A trained fold as written to disk.
///
/// Layout (all integers and floats little-endian):
///   "A2NLFMDL"                      8-byte magic
///   u32 version                     kModelVersion
///   u64 num_rows, num_cols, rank
///   u64 split_seed, u64 fold
///   u8 clip flag, f64 clip lo, f64 clip hi
///   row ids, then col ids           each: u32 byte length + bytes
///   P, Z, A, X, H, W                row-major f64
struct ModelArtifact {
  FactorState state;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  std::uint64_t split_seed = 0;
  std::uint64_t fold = 0;
  std::optional<ClipRange> clip;
};

inline constexpr std::uint32_t kModelVersion = 1;

void write_model(std::ostream& out, const ModelArtifact& model);
void save_model(const std::string& path, const ModelArtifact& model);

/// Throws DomainError on a bad magic, an unsupported version or truncation.
ModelArtifact read_model(std::istream& in);
ModelArtifact load_model(const std::string& path);

}  // namespace a2nlf
