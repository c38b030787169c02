#include "fca/ppm.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fca {

Image make_image(size_t width, size_t height, std::array<uint8_t, 3> fill) {
    Image img;
    img.width = width;
    img.height = height;
    img.rgb.resize(width * height * 3);
    for (size_t i = 0; i < width * height; ++i) {
        img.rgb[i * 3] = fill[0];
        img.rgb[i * 3 + 1] = fill[1];
        img.rgb[i * 3 + 2] = fill[2];
    }
    return img;
}

std::string ppm_bytes(const Image& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    return out;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + tmp + " -> " + path);
}

std::array<uint8_t, 3> default_color(int id) {
    static const std::array<uint8_t, 3> table[12] = {
        {230, 25, 75},   {60, 180, 75},   {0, 130, 200},  {255, 225, 25},
        {245, 130, 48},  {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
        {128, 128, 0},   {0, 128, 128},   {170, 110, 40}, {128, 0, 0},
    };
    if (id <= 0) return {255, 255, 255};
    return table[static_cast<size_t>(id - 1) % 12];
}

}  // namespace fca
