#include "lmf/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "lmf/errors.hpp"

namespace lmf {
namespace {

constexpr char kMagic[4] = {'L', 'M', 'F', '1'};
constexpr std::size_t kHeaderBytes = 40;

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back((v >> (8 * i)) & 0xffu);
}

void put_f64(std::vector<unsigned char>& buf, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) buf.push_back((bits >> (8 * i)) & 0xffu);
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_snapshot(const VectorField3& field, const SnapshotMeta& meta,
                    const std::filesystem::path& path) {
  const Grid3& g = field.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + 24 * g.size());
  for (char c : kMagic) buf.push_back(static_cast<unsigned char>(c));
  put_u32(buf, meta.version);
  put_u32(buf, static_cast<std::uint32_t>(g.n));
  put_f64(buf, g.box_length);
  put_f64(buf, meta.kappa);
  put_f64(buf, meta.time);
  buf.push_back(meta.model.variant == ModelVariant::mod1 ? 1 : 2);
  buf.push_back(meta.model.pressure_law == PressureLaw::quadratic ? 0 : 1);
  buf.push_back(0);
  buf.push_back(0);
  for (int c = 0; c < 3; ++c) {
    const RealArray& v = field.comp[c].values;
    for (Eigen::Index i = 0; i < v.size(); ++i) put_f64(buf, v[i]);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("write_snapshot: cannot open '" + path.string() +
                  "' for writing");
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) {
    throw IoError("write_snapshot: short write to '" + path.string() + "'");
  }
}

std::pair<VectorField3, SnapshotMeta> read_snapshot(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) {
    throw IoError("read_snapshot: cannot open '" + path.string() + "'");
  }
  const std::streamsize size = in.tellg();
  in.seekg(0);
  if (size < static_cast<std::streamsize>(kHeaderBytes)) {
    throw IoError("read_snapshot: '" + path.string() +
                  "' is shorter than the header");
  }
  std::vector<unsigned char> buf(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(buf.data()), size);
  if (!in) {
    throw IoError("read_snapshot: failed reading '" + path.string() + "'");
  }

  if (std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw IoError("read_snapshot: bad magic in '" + path.string() +
                  "' (not a snapshot file)");
  }
  SnapshotMeta meta;
  meta.version = get_u32(buf.data() + 4);
  if (meta.version != 1) {
    throw IoError("read_snapshot: unsupported version " +
                  std::to_string(meta.version));
  }
  const std::uint32_t n = get_u32(buf.data() + 8);
  const double box_length = get_f64(buf.data() + 12);
  meta.kappa = get_f64(buf.data() + 20);
  meta.time = get_f64(buf.data() + 28);
  const unsigned char model_tag = buf[36];
  const unsigned char pressure_tag = buf[37];
  if (model_tag != 1 && model_tag != 2) {
    throw IoError("read_snapshot: unknown model tag " +
                  std::to_string(model_tag));
  }
  if (pressure_tag > 1) {
    throw IoError("read_snapshot: unknown pressure tag " +
                  std::to_string(pressure_tag));
  }
  meta.model.variant =
      model_tag == 1 ? ModelVariant::mod1 : ModelVariant::mod2;
  meta.model.pressure_law =
      pressure_tag == 0 ? PressureLaw::quadratic : PressureLaw::linear;

  Grid3 grid;
  try {
    grid = make_grid(static_cast<int>(n), box_length);
  } catch (const std::invalid_argument& e) {
    throw IoError("read_snapshot: invalid header in '" + path.string() +
                  "': " + e.what());
  }
  const std::size_t expected = kHeaderBytes + 24 * grid.size();
  if (static_cast<std::size_t>(size) != expected) {
    throw IoError("read_snapshot: '" + path.string() + "' holds " +
                  std::to_string(size) + " bytes, expected " +
                  std::to_string(expected));
  }

  VectorField3 field = make_vector(grid);
  const unsigned char* p = buf.data() + kHeaderBytes;
  for (int c = 0; c < 3; ++c) {
    RealArray& v = field.comp[c].values;
    for (Eigen::Index i = 0; i < v.size(); ++i, p += 8) v[i] = get_f64(p);
  }
  return {std::move(field), meta};
}

}  // namespace lmf
