#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// 8-bit grayscale rasters with binary PGM (P5) I/O. PGM is the interchange
// format for all emitted stimuli; it is dependency-free and byte-stable,
// which keeps golden-image tests meaningful.

namespace vaclab {

struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row major

    static Image8 filled(int width, int height, std::uint8_t value);

    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const Image8&) const = default;
};

void write_pgm(std::ostream& out, const Image8& image);
void write_pgm_file(const std::string& path, const Image8& image);
Image8 read_pgm(std::istream& in);
Image8 read_pgm_file(const std::string& path);

// Flip around the vertical axis through the image center.
Image8 mirror_horizontal(const Image8& image);

// Right-eye image on the left, left-eye image on the right, separated by a
// neutral gap, so the pair fuses when the eyes are crossed.
Image8 cross_fuse_montage(const Image8& left_eye, const Image8& right_eye,
                          int gap_px = 16, std::uint8_t gap_value = 128);

}  // namespace vaclab
