#include "pgm.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace pfrss {

namespace {

// next whitespace-delimited token, skipping '#' comments
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_int(const std::string& tok, const std::string& path, const char* what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::io, path + ": malformed PGM header (" + std::string(what) + ")");
    }
}

}  // namespace

RasterImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, path + ": cannot open");
    std::string magic = next_token(in);
    if (magic != "P5" && magic != "P2") fail(ErrorCode::io, path + ": not a P2/P5 PGM file");
    RasterImage img;
    img.width = parse_int(next_token(in), path, "width");
    img.height = parse_int(next_token(in), path, "height");
    int maxval = parse_int(next_token(in), path, "maxval");
    if (img.width <= 0 || img.height <= 0) fail(ErrorCode::io, path + ": bad dimensions");
    if (maxval != 255) fail(ErrorCode::io, path + ": only maxval 255 is supported");
    std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    img.pixels.resize(count);
    if (magic == "P5") {
        // single whitespace byte separates the header from the payload
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count)
            fail(ErrorCode::io, path + ": truncated P5 payload");
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::string tok = next_token(in);
            if (tok.empty()) fail(ErrorCode::io, path + ": truncated P2 payload");
            int v = parse_int(tok, path, "pixel");
            if (v < 0 || v > 255) fail(ErrorCode::io, path + ": pixel out of range");
            img.pixels[i] = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

void save_pgm(const RasterImage& image, const std::string& path) {
    if (static_cast<std::size_t>(image.width) * image.height != image.pixels.size())
        fail(ErrorCode::invalid_argument, "save_pgm: pixel count does not match dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, path + ": cannot open for writing");
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) fail(ErrorCode::io, path + ": write failed");
}

}  // namespace pfrss
