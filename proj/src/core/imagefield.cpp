#include "imagefield.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace pfrss {

GridField image_to_field(const RasterImage& image, FieldRange target) {
    if (image.width != image.height)
        fail(ErrorCode::invalid_argument, "image_to_field: image must be square");
    const int n = image.width;
    if (n < 2) fail(ErrorCode::invalid_argument, "image_to_field: image too small");
    GridField f(n, 2, domain_spacing(n));
    auto mm = std::minmax_element(image.pixels.begin(), image.pixels.end());
    double lo = *mm.first, hi = *mm.second;
    double a = target == FieldRange::symmetric ? -1.0 : 0.0;
    double b = 1.0;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double v;
            if (hi == lo)
                v = 0.5 * (a + b);
            else
                v = a + (b - a) * (image.at(x, y) - lo) / (hi - lo);
            // image row y maps to the second grid axis
            f.values[static_cast<std::size_t>(y) * n + x] = v;
        }
    return f;
}

RasterImage field_to_image(const GridField& field) {
    if (field.dim != 2) fail(ErrorCode::invalid_argument, "field_to_image: 2D fields only");
    RasterImage img;
    img.width = img.height = field.n;
    img.pixels.resize(field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        double v = std::clamp(field.values[i], -1.0, 1.0);
        img.pixels[i] = static_cast<std::uint8_t>(std::lround((v + 1.0) * 127.5));
    }
    return img;
}

GridField threshold(const GridField& field) {
    GridField out = field;
    for (double& v : out.values) v = v >= 0.0 ? 1.0 : 0.0;
    return out;
}

int count_components(const GridField& binary) {
    if (binary.dim != 2) fail(ErrorCode::invalid_argument, "count_components: 2D fields only");
    const int n = binary.n;
    std::vector<int> label(binary.values.size(), 0);
    int count = 0;
    auto idx = [n](int x, int y) { return static_cast<std::size_t>(y) * n + x; };
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            if (binary.values[idx(x, y)] == 0.0 || label[idx(x, y)] != 0) continue;
            ++count;
            std::deque<std::pair<int, int>> queue{{x, y}};
            label[idx(x, y)] = count;
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                const int dx[4] = {1, -1, 0, 0};
                const int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int nx = cx + dx[k], ny = cy + dy[k];
                    if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                    if (binary.values[idx(nx, ny)] != 0.0 && label[idx(nx, ny)] == 0) {
                        label[idx(nx, ny)] = count;
                        queue.emplace_back(nx, ny);
                    }
                }
            }
        }
    return count;
}

}  // namespace pfrss
