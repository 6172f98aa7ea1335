#include "halltorus/serialize.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace halltorus {

namespace {
constexpr char kMagic[4] = {'H', 'T', 'M', 'X'};
}

void write_matrix(const std::filesystem::path& path, const Mat& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_matrix: cannot open " + path.string());
  f.write(kMagic, 4);
  std::int64_t r = m.rows(), c = m.cols();
  f.write(reinterpret_cast<const char*>(&r), 8);
  f.write(reinterpret_cast<const char*>(&c), 8);
  for (std::int64_t i = 0; i < r; ++i) {
    for (std::int64_t j = 0; j < c; ++j) {
      double re = m(i, j).real(), im = m(i, j).imag();
      f.write(reinterpret_cast<const char*>(&re), 8);
      f.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
}

Mat read_matrix(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_matrix: cannot open " + path.string());
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_matrix: bad magic in " + path.string());
  std::int64_t r = 0, c = 0;
  f.read(reinterpret_cast<char*>(&r), 8);
  f.read(reinterpret_cast<char*>(&c), 8);
  if (!f || r < 0 || c < 0 || r > (1 << 20) || c > (1 << 20))
    throw std::runtime_error("read_matrix: bad header in " + path.string());
  Mat m(r, c);
  for (std::int64_t i = 0; i < r; ++i) {
    for (std::int64_t j = 0; j < c; ++j) {
      double re = 0, im = 0;
      f.read(reinterpret_cast<char*>(&re), 8);
      f.read(reinterpret_cast<char*>(&im), 8);
      m(i, j) = Cx(re, im);
    }
  }
  if (!f) throw std::runtime_error("read_matrix: truncated file " + path.string());
  return m;
}

void write_real_vector(const std::filesystem::path& path, const RVec& v) {
  Mat m(v.size(), 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) m(i, 0) = Cx(v(i), 0.0);
  write_matrix(path, m);
}

RVec read_real_vector(const std::filesystem::path& path) {
  Mat m = read_matrix(path);
  RVec v(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) v(i) = m(i, 0).real();
  return v;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t digest_matrix(const Mat& m) {
  std::uint64_t h = fnv1a(nullptr, 0);
  std::int64_t dims[2] = {m.rows(), m.cols()};
  h = fnv1a(dims, sizeof(dims), h);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double buf[2] = {m(i, j).real(), m(i, j).imag()};
      h = fnv1a(buf, sizeof(buf), h);
    }
  }
  return h;
}

std::string digest_hex(std::uint64_t d) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(d));
  return std::string(buf);
}

EigCacheResult cached_eigh(const std::filesystem::path& cache_dir, const Mat& h) {
  EigCacheResult out;
  std::string key = digest_hex(digest_matrix(h));
  std::filesystem::path vec_path, val_path;
  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    vec_path = cache_dir / (key + ".vec.htmx");
    val_path = cache_dir / (key + ".val.htmx");
    if (std::filesystem::exists(vec_path) && std::filesystem::exists(val_path)) {
      try {
        Mat evecs = read_matrix(vec_path);
        RVec evals = read_real_vector(val_path);
        Mat recon = evecs * evals.asDiagonal() * evecs.adjoint();
        if ((recon - h).norm() <= 1e-10 * std::max(1.0, h.norm())) {
          out.evecs = std::move(evecs);
          out.evals = std::move(evals);
          out.from_cache = true;
          return out;
        }
        out.cache_invalid = true;
      } catch (const std::exception&) {
        out.cache_invalid = true;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  out.evals = es.eigenvalues();
  out.evecs = es.eigenvectors();
  if (!cache_dir.empty()) {
    write_matrix(vec_path, out.evecs);
    write_real_vector(val_path, out.evals);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace halltorus
