#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "halltorus/fock.hpp"

namespace halltorus {

// little-endian binary matrix format: magic "HTMX", int64 rows, int64 cols,
// then row-major (re, im) doubles
void write_matrix(const std::filesystem::path& path, const Mat& m);
Mat read_matrix(const std::filesystem::path& path);

void write_real_vector(const std::filesystem::path& path, const RVec& v);
RVec read_real_vector(const std::filesystem::path& path);

// FNV-1a 64-bit content digest
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t digest_matrix(const Mat& m);
std::string digest_hex(std::uint64_t d);

// cached eigendecomposition keyed by the Hamiltonian's content digest;
// validated by reconstruction residual, recomputed (with a warning flag) on
// mismatch or corruption
struct EigCacheResult {
  RVec evals;
  Mat evecs;
  bool from_cache = false;
  bool cache_invalid = false;
};
EigCacheResult cached_eigh(const std::filesystem::path& cache_dir, const Mat& h);

std::string format_double(double v);  // shortest round-trip-stable decimal

}  // namespace halltorus
