#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ensemblekit/data.hpp"

namespace ensemblekit {

/// 8-bit RGB image, row-major, channels interleaved.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h);
    Image(int w, int h, std::vector<std::uint8_t> data);

    std::uint8_t& at(int row, int col, int channel) {
        return pixels[(static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(col)) * 3 + static_cast<std::size_t>(channel)];
    }
    std::uint8_t at(int row, int col, int channel) const {
        return pixels[(static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(col)) * 3 + static_cast<std::size_t>(channel)];
    }

    friend bool operator==(const Image&, const Image&) = default;
};

enum class Augmentation { hflip, rot90, rot180, rot270 };

struct LabeledImages {
    std::vector<Image> images;
    std::vector<Label> labels;
    ClassRegistry registry;
};

/// Binary PPM (P6), maxval 255. Header comments (`#` to end of line) are skipped.
Image decode_ppm(std::span<const std::uint8_t> bytes, const std::string& source = "<memory>");
std::vector<std::uint8_t> encode_ppm(const Image& img);
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const Image& img, const std::filesystem::path& path);

/// `<root>/<class>/*.ppm`; classes sorted lexicographically, files sorted by name.
LabeledImages load_image_dir(const std::filesystem::path& root);

/// Nearest neighbour: source index = floor(dst_index * src_dim / dst_dim).
Image resize(const Image& img, int width, int height);

/// hflip mirrors columns; rot90 is clockwise, so (r, c) lands at (c, rows - 1 - r).
Image augment(const Image& img, Augmentation op);

}  // namespace ensemblekit
