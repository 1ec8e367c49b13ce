#include "mnmt/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "mnmt/errors.hpp"

namespace mnmt {

namespace {

constexpr char kMagic[4] = {'M', 'N', 'T', '1'};
constexpr std::size_t kMaxRank = 8;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void put_f64(std::ostream& out, double v) {
  const std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw InvalidFormat("tensor container truncated");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw InvalidFormat("tensor container truncated");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

}  // namespace

void write_tensor(std::ostream& out, const Tensor& t) {
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.shape()) {
    if (d > std::numeric_limits<std::uint32_t>::max()) {
      throw InvalidFormat("tensor dimension exceeds u32");
    }
    put_u32(out, static_cast<std::uint32_t>(d));
  }
  for (double v : t.values()) put_f64(out, v);
}

Tensor read_tensor(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw InvalidFormat("bad tensor container magic (expected MNT1)");
  }
  const std::uint32_t rank = get_u32(in);
  if (rank == 0 || rank > kMaxRank) {
    throw InvalidFormat("tensor container rank out of range");
  }
  std::vector<std::size_t> shape(rank);
  for (auto& d : shape) d = get_u32(in);
  const std::size_t n = shape_numel(shape);
  std::vector<double> data(n);
  for (auto& v : data) v = get_f64(in);
  return Tensor(std::move(shape), std::move(data));
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_tensor(out, t);
  if (!out) throw IoError("write failed: " + path.string());
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  return read_tensor(in);
}

void save_tensors(const std::filesystem::path& path,
                  const std::vector<const Tensor*>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const Tensor* t : tensors) write_tensor(out, *t);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Tensor> load_tensors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<Tensor> out;
  while (in.peek() != std::char_traits<char>::eof()) {
    out.push_back(read_tensor(in));
  }
  return out;
}

}  // namespace mnmt
