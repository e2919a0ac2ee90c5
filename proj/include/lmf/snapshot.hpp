#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include "lmf/models.hpp"

namespace lmf {

// Binary snapshot layout (all little-endian, written field by field):
//   offset  0: magic "LMF1" (4 bytes)
//   offset  4: version, u32 (currently 1)
//   offset  8: n, u32
//   offset 12: box_length, f64
//   offset 20: kappa, f64
//   offset 28: time, f64
//   offset 36: model tag, u8 (1 = mod1, 2 = mod2)
//   offset 37: pressure tag, u8 (0 = quadratic, 1 = linear)
//   offset 38: 2 reserved bytes (zero)
//   offset 40: payload, 3 * n^3 f64 values, x-fastest, component-major
// Total size 40 + 24*n^3 bytes.
struct SnapshotMeta {
  std::uint32_t version = 1;
  double kappa = 1.0;
  double time = 0.0;
  ModelKind model;
};

void write_snapshot(const VectorField3& field, const SnapshotMeta& meta,
                    const std::filesystem::path& path);

std::pair<VectorField3, SnapshotMeta> read_snapshot(
    const std::filesystem::path& path);

}  // namespace lmf
