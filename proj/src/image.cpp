#include "sswm/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "sswm/error.hpp"

namespace sswm {

Matrix to_matrix(const GrayImage& img) {
    Matrix m(img.rows(), img.cols());
    auto dst = m.values();
    auto src = img.pixels();
    std::transform(src.begin(), src.end(), dst.begin(), [](std::uint8_t v) { return double(v); });
    return m;
}

GrayImage to_gray(const Matrix& m) {
    GrayImage img(m.rows(), m.cols());
    auto dst = img.pixels();
    auto src = m.values();
    std::transform(src.begin(), src.end(), dst.begin(), [](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0));
    });
    return img;
}

namespace {

class PgmReader {
public:
    explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t read_number(const char* what) {
        skip_space_and_comments();
        std::size_t value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            require(value < (1U << 24), ErrorKind::format, std::string("PGM ") + what + " too large");
            ++pos_;
            ++digits;
        }
        require(digits > 0, ErrorKind::format, std::string("PGM header: missing ") + what);
        return value;
    }

    std::size_t pos_ = 0;
    std::span<const std::uint8_t> bytes_;
};

std::string printable_magic(std::span<const std::uint8_t> bytes) {
    std::string s;
    for (std::size_t i = 0; i < std::min<std::size_t>(2, bytes.size()); ++i) {
        const auto c = bytes[i];
        if (std::isprint(c)) {
            s.push_back(static_cast<char>(c));
        } else {
            static constexpr char digits[] = "0123456789abcdef";
            s += "\\x";
            s.push_back(digits[c >> 4]);
            s.push_back(digits[c & 0xF]);
        }
    }
    return s;
}

} // namespace

GrayImage parse_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        fail(ErrorKind::format, "not a binary PGM (P5): magic bytes '" + printable_magic(bytes) + "'");
    PgmReader rd(bytes);
    rd.pos_ = 2;
    const auto width = rd.read_number("width");
    const auto height = rd.read_number("height");
    const auto maxval = rd.read_number("maxval");
    require(width > 0 && height > 0, ErrorKind::format, "PGM has zero extent");
    require(maxval == 255, ErrorKind::format, "PGM maxval must be 255 (8-bit), got " + std::to_string(maxval));
    require(rd.pos_ < bytes.size() && std::isspace(bytes[rd.pos_]), ErrorKind::format,
            "PGM header not terminated by whitespace");
    ++rd.pos_;
    require(bytes.size() - rd.pos_ >= width * height, ErrorKind::format, "PGM raster truncated");
    GrayImage img(height, width);
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(rd.pos_), width * height, img.pixels().begin());
    return img;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorKind::io, "write to '" + path.string() + "' failed");
}

GrayImage read_pgm(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return parse_pgm(bytes);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    write_file(path, encode_pgm(img));
}

} // namespace sswm
