#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gf2/bit_matrix.hpp"

// Two on-disk formats.
//
// Binary ("gf2b"):
//   bytes 0..4   magic  'G' 'F' '2' 'B' 0x01
//   bytes 5..12  nrows, unsigned 64-bit little endian
//   bytes 13..20 ncols, little endian
//   then nrows * ceil(ncols/64) words, each little endian; the bits of the
//   last word of a row past ncols-1 must be zero. Loaders reject files whose
//   padding is dirty rather than silently masking it, since dirty padding
//   means the producer was broken.
//
// Text ("ascii"):
//   "nrows ncols\n" then one line of '0'/'1' per row.
//
// Loading autodetects by magic. All failures throw io_error.

namespace gf2 {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::array<unsigned char, 5> gf2b_magic = {'G', 'F', '2', 'B', 0x01};

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (unsigned char)(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw io_error("truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

} // namespace detail

inline void save_gf2b(std::ostream& out, const BitMatrix& a) {
    out.write(reinterpret_cast<const char*>(detail::gf2b_magic.data()),
              std::streamsize(detail::gf2b_magic.size()));
    detail::put_u64_le(out, a.nrows());
    detail::put_u64_le(out, a.ncols());
    for (std::size_t i = 0; i < a.nrows(); ++i)
        for (std::size_t w = 0; w < a.stride(); ++w) detail::put_u64_le(out, a.row_words(i)[w]);
    if (!out) throw io_error("write failed");
}

inline void save_ascii(std::ostream& out, const BitMatrix& a) {
    out << a.nrows() << ' ' << a.ncols() << '\n';
    std::string line(a.ncols(), '0');
    for (std::size_t i = 0; i < a.nrows(); ++i) {
        for (std::size_t j = 0; j < a.ncols(); ++j) line[j] = a.get(i, j) ? '1' : '0';
        out << line << '\n';
    }
    if (!out) throw io_error("write failed");
}

inline BitMatrix load_gf2b(std::istream& in) {
    std::array<unsigned char, 5> magic{};
    in.read(reinterpret_cast<char*>(magic.data()), std::streamsize(magic.size()));
    if (!in || magic != detail::gf2b_magic) throw io_error("bad magic");
    const std::uint64_t rows = detail::get_u64_le(in);
    const std::uint64_t cols = detail::get_u64_le(in);
    if (rows > (std::uint64_t(1) << 32) || cols > (std::uint64_t(1) << 32))
        throw io_error("header dimensions implausibly large");
    BitMatrix a((std::size_t)rows, (std::size_t)cols);
    for (std::size_t i = 0; i < a.nrows(); ++i)
        for (std::size_t w = 0; w < a.stride(); ++w) a.row_words(i)[w] = detail::get_u64_le(in);
    if (!a.padding_clean()) throw io_error("nonzero bits in row padding");
    char extra;
    if (in.read(&extra, 1)) throw io_error("trailing bytes after matrix data");
    return a;
}

inline BitMatrix load_ascii(std::istream& in) {
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw io_error("bad text header");
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    BitMatrix a(rows, cols);
    std::string line;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw io_error("truncated text matrix");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() != cols) throw io_error("row length mismatch");
        for (std::size_t j = 0; j < cols; ++j) {
            if (line[j] == '1')
                a.set(i, j, true);
            else if (line[j] != '0')
                throw io_error("row contains characters other than 0/1");
        }
    }
    return a;
}

// Peeks at the magic; binary and text inputs share one entry point.
inline BitMatrix load_matrix(std::istream& in) {
    std::array<unsigned char, 5> magic{};
    in.read(reinterpret_cast<char*>(magic.data()), std::streamsize(magic.size()));
    const std::streamsize got = in.gcount();
    in.clear();
    for (std::streamsize i = got; i-- > 0;) in.putback(char(magic[std::size_t(i)]));
    if (got == std::streamsize(magic.size()) && magic == detail::gf2b_magic)
        return load_gf2b(in);
    return load_ascii(in);
}

} // namespace gf2
