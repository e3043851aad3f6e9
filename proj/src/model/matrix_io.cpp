#include "sbm/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "sbm/error.hpp"

namespace sbm::io {

namespace {

constexpr std::array<char, 4> kMatrixMagic{'S', 'B', 'M', 'S'};
constexpr std::array<char, 4> kDenseMagic{'S', 'B', 'M', 'V'};

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xFFu) << (8 * (7 - b));
    return r;
}

void put_u64(std::ostream& out, std::uint64_t v) {
    v = to_le(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw Error(ErrorCode::Io, "truncated header");
    return to_le(v);
}

void put_f64s(std::ostream& out, std::span<const double> values) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * sizeof(double)));
    } else {
        for (double d : values) put_u64(out, std::bit_cast<std::uint64_t>(d));
    }
}

void get_f64s(std::istream& in, std::span<double> values) {
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw Error(ErrorCode::Io, "truncated payload");
    if constexpr (std::endian::native != std::endian::little) {
        for (double& d : values) d = std::bit_cast<double>(to_le(std::bit_cast<std::uint64_t>(d)));
    }
}

void expect_magic(std::istream& in, const std::array<char, 4>& magic) {
    std::array<char, 4> got{};
    in.read(got.data(), 4);
    if (!in || got != magic)
        throw Error(ErrorCode::Io, std::string("bad magic, expected ") + std::string(magic.data(), 4));
}

}  // namespace

void write_matrix(std::ostream& out, const model::SymMatrix& m, std::uint64_t n_communities) {
    out.write(kMatrixMagic.data(), 4);
    put_u64(out, m.order());
    put_u64(out, n_communities);
    put_f64s(out, m.values());
    if (!out) throw Error(ErrorCode::Io, "write failed");
}

MatrixFile read_matrix(std::istream& in) {
    expect_magic(in, kMatrixMagic);
    const std::uint64_t n = get_u64(in);
    const std::uint64_t k = get_u64(in);
    std::vector<double> buf(n * n);
    get_f64s(in, buf);
    return {model::SymMatrix::from_upper(n, buf), k};
}

void write_matrix(const std::filesystem::path& path, const model::SymMatrix& m, std::uint64_t n_communities) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
    write_matrix(out, m, n_communities);
}

MatrixFile read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_matrix(in);
}

void write_matrix_csv(std::ostream& out, const model::SymMatrix& m) {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < m.order(); ++i) {
        const auto row = m.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
        out << '\n';
    }
}

void write_dense(std::ostream& out, std::size_t rows, std::size_t cols, std::span<const double> col_major) {
    if (col_major.size() != rows * cols) throw Error(ErrorCode::DimensionMismatch, "dense block size");
    out.write(kDenseMagic.data(), 4);
    put_u64(out, rows);
    put_u64(out, cols);
    put_f64s(out, col_major);
    if (!out) throw Error(ErrorCode::Io, "write failed");
}

std::vector<double> read_dense(std::istream& in, std::size_t& rows, std::size_t& cols) {
    expect_magic(in, kDenseMagic);
    rows = get_u64(in);
    cols = get_u64(in);
    std::vector<double> buf(rows * cols);
    get_f64s(in, buf);
    return buf;
}

}  // namespace sbm::io
