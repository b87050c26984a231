#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoflow/image.hpp"

namespace aniso {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io_detail {

inline int next_pnm_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return 1;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok.empty() ? 0 : 1;
}

inline void put_u32le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("float-raw: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace io_detail

/// Binary PGM (P5), maxval 255 or 65535 (16-bit big-endian), values mapped
/// linearly onto [0, 1].
inline Image2D read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string tok;
    if (!io_detail::next_pnm_token(in, tok) || tok != "P5")
        throw IoError(path + ": not a binary PGM (P5)");
    long w = 0, h = 0, maxval = 0;
    auto next_int = [&](long& v) {
        if (!io_detail::next_pnm_token(in, tok)) throw IoError(path + ": truncated PGM header");
        try {
            v = std::stol(tok);
        } catch (...) {
            throw IoError(path + ": bad PGM header token '" + tok + "'");
        }
    };
    next_int(w);
    next_int(h);
    next_int(maxval);
    if (w < 1 || h < 1 || w > 100000 || h > 100000)
        throw IoError(path + ": unreasonable PGM dimensions");
    if (maxval != 255 && maxval != 65535)
        throw IoError(path + ": unsupported PGM maxval (need 255 or 65535)");
    Image2D img(static_cast<int>(w), static_cast<int>(h));
    const std::size_t n = img.size();
    if (maxval == 255) {
        std::vector<unsigned char> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (!in) throw IoError(path + ": truncated PGM data");
        for (std::size_t i = 0; i < n; ++i) img.data()[i] = buf[i] / 255.0;
    } else {
        std::vector<unsigned char> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
        if (!in) throw IoError(path + ": truncated PGM data");
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned v = (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1];
            img.data()[i] = v / 65535.0;
        }
    }
    return img;
}

/// Write PGM; values are clipped to [0,1] and quantized to maxval levels.
inline void write_pgm(const Image2D& img, const std::string& path, int maxval = 255) {
    if (maxval != 255 && maxval != 65535)
        throw IoError("write_pgm: maxval must be 255 or 65535");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width() << " " << img.height() << "\n" << maxval << "\n";
    const std::size_t n = img.size();
    if (maxval == 255) {
        std::vector<unsigned char> buf(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::clamp(img.data()[i], 0.0, 1.0);
            buf[i] = static_cast<unsigned char>(v * 255.0 + 0.5);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(n));
    } else {
        std::vector<unsigned char> buf(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::clamp(img.data()[i], 0.0, 1.0);
            const unsigned q = static_cast<unsigned>(v * 65535.0 + 0.5);
            buf[2 * i] = static_cast<unsigned char>(q >> 8);
            buf[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(2 * n));
    }
    if (!out) throw IoError("write failure on " + path);
}

/// Lossless float-raw format: 16-byte header = magic "AGF2", width (u32 LE),
/// height (u32 LE), 4 reserved zero bytes; then width*height f64 LE samples,
/// row-major.
inline void write_float_raw(const Image2D& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write("AGF2", 4);
    io_detail::put_u32le(out, static_cast<std::uint32_t>(img.width()));
    io_detail::put_u32le(out, static_cast<std::uint32_t>(img.height()));
    io_detail::put_u32le(out, 0);
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(img.data()),
              static_cast<std::streamsize>(img.size() * 8));
    if (!out) throw IoError("write failure on " + path);
}

inline Image2D read_float_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "AGF2", 4) != 0) throw IoError(path + ": bad magic");
    const std::uint32_t w = io_detail::get_u32le(in);
    const std::uint32_t h = io_detail::get_u32le(in);
    io_detail::get_u32le(in);  // reserved
    if (w < 1 || h < 1 || w > 100000 || h > 100000)
        throw IoError(path + ": unreasonable dimensions");
    Image2D img(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(img.data()), static_cast<std::streamsize>(img.size() * 8));
    if (!in) throw IoError(path + ": truncated sample data");
    return img;
}

/// Binary PPM (P6) writer for 8-bit RGB renderings.
struct RgbImage {
    int width = 0, height = 0;
    std::vector<unsigned char> rgb;  // 3 bytes per pixel, row-major
};

inline void write_ppm(const RgbImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    if (!out) throw IoError("write failure on " + path);
}

/// Minimal RFC-4180-style CSV writer: header row, '.' decimal separator,
/// fields quoted only when needed.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size())
            throw std::invalid_argument("CsvWriter: row width mismatch");
        rows_.push_back(std::move(row));
    }

    std::string to_string() const {
        std::ostringstream os;
        emit(os, header_);
        for (const auto& r : rows_) emit(os, r);
        return os.str();
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path);
        out << to_string();
        if (!out) throw IoError("write failure on " + path);
    }

    static std::string num(double v) {
        std::ostringstream os;
        os.precision(10);
        os << v;
        return os.str();
    }

private:
    static void emit(std::ostringstream& os, const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            const std::string& f = row[i];
            if (f.find_first_of(",\"\r\n") != std::string::npos) {
                os << '"';
                for (char c : f) {
                    if (c == '"') os << '"';
                    os << c;
                }
                os << '"';
            } else {
                os << f;
            }
        }
        os << "\r\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace aniso
