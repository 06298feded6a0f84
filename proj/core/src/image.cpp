#include "vaclab/image.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "vaclab/errors.hpp"

namespace vaclab {

Image8 Image8::filled(int width, int height, std::uint8_t value) {
    Image8 img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, value);
    return img;
}

void write_pgm(std::ostream& out, const Image8& image) {
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
}

void write_pgm_file(const std::string& path, const Image8& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_pgm(out, image);
    if (!out) throw ConfigError("failed while writing: " + path);
}

namespace {

// Next whitespace-delimited token, skipping `#` comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(in.get()));
            return tok;
        }
    }
    throw ConfigError("truncated PGM header");
}

}  // namespace

Image8 read_pgm(std::istream& in) {
    if (next_token(in) != "P5") throw ConfigError("not a binary PGM (P5) stream");
    Image8 img;
    img.width = std::stoi(next_token(in));
    img.height = std::stoi(next_token(in));
    const int maxval = std::stoi(next_token(in));
    if (img.width <= 0 || img.height <= 0 || maxval != 255) {
        throw ConfigError("unsupported PGM geometry or depth");
    }
    in.get();  // single whitespace after maxval
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw ConfigError("truncated PGM pixel data");
    }
    return img;
}

Image8 read_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    return read_pgm(in);
}

Image8 mirror_horizontal(const Image8& image) {
    Image8 out = image;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            out.at(x, y) = image.at(image.width - 1 - x, y);
        }
    }
    return out;
}

Image8 cross_fuse_montage(const Image8& left_eye, const Image8& right_eye, int gap_px,
                          std::uint8_t gap_value) {
    if (left_eye.height != right_eye.height) {
        throw DomainError("cross_fuse_montage: eye images must share a height");
    }
    Image8 out = Image8::filled(left_eye.width + right_eye.width + gap_px, left_eye.height,
                                gap_value);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < right_eye.width; ++x) out.at(x, y) = right_eye.at(x, y);
        for (int x = 0; x < left_eye.width; ++x) {
            out.at(right_eye.width + gap_px + x, y) = left_eye.at(x, y);
        }
    }
    return out;
}

}  // namespace vaclab
