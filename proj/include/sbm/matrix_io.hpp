#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sbm/model.hpp"

namespace sbm::io {

/// Binary container for symmetric samples:
///   "SBMS" | u64 N | u64 K | N*N f64, row-major, all little-endian.
struct MatrixFile {
    model::SymMatrix matrix;
    std::uint64_t n_communities = 1;
};

void write_matrix(std::ostream& out, const model::SymMatrix& m, std::uint64_t n_communities);
MatrixFile read_matrix(std::istream& in);
void write_matrix(const std::filesystem::path& path, const model::SymMatrix& m, std::uint64_t n_communities);
MatrixFile read_matrix(const std::filesystem::path& path);

/// One row per matrix row, comma separated, full precision.
void write_matrix_csv(std::ostream& out, const model::SymMatrix& m);

/// Dense column-major f64 block (eigenvectors):
///   "SBMV" | u64 rows | u64 cols | rows*cols f64, column-major, little-endian.
void write_dense(std::ostream& out, std::size_t rows, std::size_t cols, std::span<const double> col_major);
std::vector<double> read_dense(std::istream& in, std::size_t& rows, std::size_t& cols);

}  // namespace sbm::io
