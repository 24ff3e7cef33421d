#include "ensemblekit/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "ensemblekit/errors.hpp"

namespace ensemblekit {

Image::Image(int w, int h) : Image(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0)) {}

Image::Image(int w, int h, std::vector<std::uint8_t> data) : width(w), height(h), pixels(std::move(data)) {
    if (w < 1 || h < 1) throw DataError("image dimensions must be positive");
    if (pixels.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3)
        throw DataError("image buffer length does not match " + std::to_string(w) + "x" + std::to_string(h) + "x3");
}

namespace {

class HeaderReader {
public:
    HeaderReader(std::span<const std::uint8_t> bytes, const std::string& source) : bytes_(bytes), source_(source) {}

    long next_int() {
        skip_space_and_comments();
        long value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000) fail("header value too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0) fail("malformed PPM header");
        return value;
    }

    void expect_magic() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '6') fail("not a binary PPM (P6)");
        pos_ = 2;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("malformed PPM header");
        return pos_ + 1;
    }

    [[noreturn]] void fail(const std::string& what) const { throw DataError(source_ + ": " + what); }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    const std::string& source_;
    std::size_t pos_ = 0;
};

}  // namespace

Image decode_ppm(std::span<const std::uint8_t> bytes, const std::string& source) {
    HeaderReader header(bytes, source);
    header.expect_magic();
    const long w = header.next_int();
    const long h = header.next_int();
    const long maxval = header.next_int();
    if (w < 1 || h < 1) header.fail("PPM dimensions must be positive");
    if (maxval != 255) header.fail("only maxval 255 is supported, got " + std::to_string(maxval));
    const std::size_t offset = header.raster_offset();
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
    const std::size_t have = bytes.size() - std::min(offset, bytes.size());
    if (have < need)
        header.fail("truncated pixel data: " + std::to_string(w) + "x" + std::to_string(h) + " needs " +
                    std::to_string(need) + " bytes, found " + std::to_string(have));
    return Image(static_cast<int>(w), static_cast<int>(h),
                 std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                           bytes.begin() + static_cast<std::ptrdiff_t>(offset + need)));
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
    const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_ppm(bytes, path.string());
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    const auto bytes = encode_ppm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("cannot write '" + path.string() + "'");
}

LabeledImages load_image_dir(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw DataError("'" + root.string() + "' is not a directory");
    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) throw DataError("'" + root.string() + "' has no class subdirectories");

    LabeledImages out;
    std::vector<std::string> names;
    for (const auto& dir : class_dirs) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
        if (files.empty()) throw DataError("class directory '" + dir.string() + "' contains no .ppm images");
        std::sort(files.begin(), files.end());
        const auto label = static_cast<Label>(names.size());
        names.push_back(dir.filename().string());
        for (const auto& f : files) {
            out.images.push_back(read_ppm(f));
            out.labels.push_back(label);
        }
    }
    out.registry = ClassRegistry(std::move(names));
    return out;
}

Image resize(const Image& img, int width, int height) {
    if (width < 1 || height < 1) throw ConfigError("resize: target dimensions must be positive");
    Image out(width, height);
    for (int r = 0; r < height; ++r) {
        const int sr = static_cast<int>(static_cast<long long>(r) * img.height / height);
        for (int c = 0; c < width; ++c) {
            const int sc = static_cast<int>(static_cast<long long>(c) * img.width / width);
            for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = img.at(sr, sc, ch);
        }
    }
    return out;
}

Image augment(const Image& img, Augmentation op) {
    const int rows = img.height;
    const int cols = img.width;
    switch (op) {
        case Augmentation::hflip: {
            Image out(cols, rows);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    for (int ch = 0; ch < 3; ++ch) out.at(r, cols - 1 - c, ch) = img.at(r, c, ch);
            return out;
        }
        case Augmentation::rot90: {
            Image out(rows, cols);  // width = old rows, height = old cols
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    for (int ch = 0; ch < 3; ++ch) out.at(c, rows - 1 - r, ch) = img.at(r, c, ch);
            return out;
        }
        case Augmentation::rot180: {
            Image out(cols, rows);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    for (int ch = 0; ch < 3; ++ch) out.at(rows - 1 - r, cols - 1 - c, ch) = img.at(r, c, ch);
            return out;
        }
        case Augmentation::rot270: {
            Image out(rows, cols);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    for (int ch = 0; ch < 3; ++ch) out.at(cols - 1 - c, r, ch) = img.at(r, c, ch);
            return out;
        }
    }
    throw InvariantError("augment: unknown operation");
}

}  // namespace ensemblekit
