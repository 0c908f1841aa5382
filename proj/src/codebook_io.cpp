#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "bitbandit/codebook.hpp"

namespace bitbandit {
namespace {

constexpr char kMagic[8] = {'B', 'B', 'N', 'E', 'T', '0', '0', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::string& path) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw Error("truncated codebook file: " + path);
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

int required_bits(std::uint64_t letters) {
  int b = 0;
  while (b < 64 && (std::uint64_t{1} << b) < letters) ++b;
  return b;
}

void capacity_check(std::int64_t codebook_size, int B) {
  if (B < 1) throw ConfigError("channel capacity B must be >= 1");
  const auto letters = static_cast<std::uint64_t>(codebook_size) + 1;
  if (B >= 64) return;
  if (letters > (std::uint64_t{1} << B)) {
    throw ConfigError("codebook of " + std::to_string(codebook_size) +
                      " centers plus overflow needs B >= " +
                      std::to_string(required_bits(letters)) + " bits, got B = " +
                      std::to_string(B));
  }
}

void save_codebook(const NetCodebook<double>& cb, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open codebook file for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cb.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cb.kind()));
  put<double>(os, cb.epsilon());
  put<std::uint64_t>(os, cb.seed());
  put<std::uint64_t>(os, static_cast<std::uint64_t>(cb.size()));
  for (Eigen::Index j = 0; j < cb.size(); ++j) {
    for (Eigen::Index i = 0; i < cb.dim(); ++i) put<double>(os, cb.centers()(i, j));
  }
  if (!os) throw Error("write failed for codebook file: " + path);
}

NetCodebook<double> load_codebook(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open codebook file: " + path);
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("not a codebook file: " + path);
  }
  const auto d = get<std::uint32_t>(is, path);
  const auto kind = get<std::uint32_t>(is, path);
  const auto eps = get<double>(is, path);
  const auto seed = get<std::uint64_t>(is, path);
  const auto count = get<std::uint64_t>(is, path);
  if (d == 0 || kind > 1) throw Error("corrupt codebook header: " + path);
  MatrixXd centers(d, static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < centers.cols(); ++j) {
    for (Eigen::Index i = 0; i < centers.rows(); ++i) centers(i, j) = get<double>(is, path);
  }
  return NetCodebook<double>(std::move(centers), eps, seed,
                             static_cast<NetCodebook<double>::Kind>(kind));
}

}  // namespace bitbandit
