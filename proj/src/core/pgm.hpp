// pgm.hpp -- 8-bit grayscale PGM input/output (binary P5 and ASCII P2).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pfrss {

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, width*height entries

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

RasterImage load_pgm(const std::string& path);
void save_pgm(const RasterImage& image, const std::string& path);  // written as binary P5

}  // namespace pfrss
