#include "a2nlf/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "a2nlf/errors.hpp"

namespace a2nlf {

namespace {

constexpr std::array<char, 8> kMagic{'A', '2', 'N', 'L', 'F', 'M', 'D', 'L'};

template <class U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t b = 0; b < sizeof(U); ++b)
    bytes[b] = static_cast<char>((value >> (8 * b)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw DomainError("model artifact is truncated");
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) value |= static_cast<U>(bytes[b]) << (8 * b);
  return value;
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

void put_ids(std::ostream& out, const std::vector<std::string>& ids) {
  for (const std::string& id : ids) {
    put_le(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
}

std::vector<std::string> get_ids(std::istream& in, std::size_t count) {
  std::vector<std::string> ids(count);
  for (std::string& id : ids) {
    id.resize(get_le<std::uint32_t>(in));
    if (!in.read(id.data(), static_cast<std::streamsize>(id.size())))
      throw DomainError("model artifact is truncated");
  }
  return ids;
}

void put_matrix(std::ostream& out, const DenseMatrix& m) {
  for (const double v : m.data()) put_f64(out, v);
}

DenseMatrix get_matrix(std::istream& in, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = get_f64(in);
  return m;
}

}  // namespace

void write_model(std::ostream& out, const ModelArtifact& model) {
  const FactorState& s = model.state;
  if (model.row_ids.size() != s.num_rows() || model.col_ids.size() != s.num_cols())
    throw DomainError("id tables do not match the factor state");
  out.write(kMagic.data(), kMagic.size());
  put_le(out, kModelVersion);
  put_le(out, static_cast<std::uint64_t>(s.num_rows()));
  put_le(out, static_cast<std::uint64_t>(s.num_cols()));
  put_le(out, static_cast<std::uint64_t>(s.rank));
  put_le(out, model.split_seed);
  put_le(out, model.fold);
  put_le(out, static_cast<std::uint8_t>(model.clip ? 1 : 0));
  put_f64(out, model.clip ? model.clip->lo : 0.0);
  put_f64(out, model.clip ? model.clip->hi : 0.0);
  put_ids(out, model.row_ids);
  put_ids(out, model.col_ids);
  for (const DenseMatrix* m : {&s.P, &s.Z, &s.A, &s.X, &s.H, &s.W}) put_matrix(out, *m);
}

void save_model(const std::string& path, const ModelArtifact& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write model artifact '" + path + "'");
  write_model(out, model);
  if (!out) throw DomainError("failed writing model artifact '" + path + "'");
}

ModelArtifact read_model(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw DomainError("not a model artifact (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kModelVersion)
    throw DomainError("unsupported model artifact version " + std::to_string(version) +
                      " (expected " + std::to_string(kModelVersion) + ")");
  ModelArtifact model;
  const auto rows = get_le<std::uint64_t>(in);
  const auto cols = get_le<std::uint64_t>(in);
  const auto rank = get_le<std::uint64_t>(in);
  if (rows == 0 || cols == 0 || rank == 0) throw DomainError("model artifact has a zero dimension");
  model.split_seed = get_le<std::uint64_t>(in);
  model.fold = get_le<std::uint64_t>(in);
  const bool clipped = get_le<std::uint8_t>(in) != 0;
  const double lo = get_f64(in);
  const double hi = get_f64(in);
  if (clipped) model.clip = ClipRange{lo, hi};
  model.row_ids = get_ids(in, rows);
  model.col_ids = get_ids(in, cols);

  FactorState& s = model.state;
  s.rank = rank;
  s.P = get_matrix(in, rows, rank);
  s.Z = get_matrix(in, cols, rank);
  s.A = get_matrix(in, rows, rank);
  s.X = get_matrix(in, cols, rank);
  s.H = get_matrix(in, rows, rank);
  s.W = get_matrix(in, cols, rank);
  return model;
}

ModelArtifact load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open model artifact '" + path + "'");
  return read_model(in);
}

}  // namespace a2nlf
