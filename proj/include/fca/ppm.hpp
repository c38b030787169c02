#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fca {

struct Image {
    size_t width = 0;
    size_t height = 0;
    std::vector<uint8_t> rgb;  // 3 bytes per pixel, rows top to bottom

    void set(size_t x, size_t y, std::array<uint8_t, 3> c) {
        size_t i = (y * width + x) * 3;
        rgb[i] = c[0];
        rgb[i + 1] = c[1];
        rgb[i + 2] = c[2];
    }
};

Image make_image(size_t width, size_t height, std::array<uint8_t, 3> fill = {255, 255, 255});

/// Binary P6 encoding: "P6\n<w> <h>\n255\n" followed by the pixel payload.
std::string ppm_bytes(const Image& img);

/// Write-temp-then-rename so partial output is never observed.
void write_file_atomic(const std::string& path, const std::string& bytes);

/// Deterministic 12-color cycle for color ids >= 1; id 0 is white.
std::array<uint8_t, 3> default_color(int id);

}  // namespace fca
