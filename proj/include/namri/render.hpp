// 8-bit grayscale montage output (binary PGM). Images are laid out left to
// right with a fixed dark gutter; 3D volumes contribute their central slice.

#pragma once

#include <cmath>
#include <filesystem>
#include <vector>

#include "namri/core.hpp"
#include "namri/volume_io.hpp"

namespace namri {

inline constexpr int kPanelGutter = 2;

namespace detail {

inline unsigned char window_to_byte(double v, double lo, double hi)
{
    if (v <= lo) return 0;
    if (v >= hi) return 255;
    return static_cast<unsigned char>(std::lround((v - lo) / (hi - lo) * 255.0));
}

} // namespace detail

inline void render_panel(const std::vector<Image>& images, double window_lo, double window_hi,
                         const std::filesystem::path& path)
{
    require(!images.empty(), "render_panel needs at least one image");
    require(window_lo < window_hi, "render window must satisfy lo < hi");
    const int w = images[0].dims.nx;
    const int h = images[0].dims.ny;
    for (const Image& img : images)
        require(img.dims.nx == w && img.dims.ny == h,
                "all panel images must share in-plane dimensions");

    const int k = int(images.size());
    const int out_w = k * w + (k - 1) * kPanelGutter;
    std::vector<unsigned char> pixels(std::size_t(out_w) * h, 0);

    for (int i = 0; i < k; ++i) {
        const Image& img = images[std::size_t(i)];
        const int z = img.dims.nz / 2;
        const int x0 = i * (w + kPanelGutter);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double v = img.at(x, y, z);
                pixels[std::size_t(y) * out_w + x0 + x] =
                    detail::window_to_byte(v, window_lo, window_hi);
            }
    }

    std::string buf = "P5\n" + std::to_string(out_w) + " " + std::to_string(h) + "\n255\n";
    buf.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    detail::atomic_write_file(path, buf);
}

} // namespace namri
