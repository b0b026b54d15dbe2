#include "panofuse/io/image_io.hpp"

#include <png.h>

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>

#include "panofuse/util.hpp"

namespace panofuse::io {

using geom::BitMask;
using geom::DepthMap;
using geom::EqrImage;

namespace {

struct PngWriteSink {
    std::vector<std::uint8_t>* out;
};

void png_sink_write(png_structp png, png_bytep data, png_size_t length) {
    auto* sink = static_cast<PngWriteSink*>(png_get_io_ptr(png));
    sink->out->insert(sink->out->end(), data, data + length);
}

void png_sink_flush(png_structp) {}

struct PngReadSource {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t offset;
};

void png_source_read(png_structp png, png_bytep out, png_size_t length) {
    auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
    if (src->offset + length > src->size) png_error(png, "png: truncated stream");
    std::memcpy(out, src->data + src->offset, length);
    src->offset += length;
}

std::vector<std::uint8_t> encode_png_gray_or_rgb(int width, int height, int channels,
                                                 const std::vector<std::uint8_t>& rows) {
    std::vector<std::uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png: create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("png: create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("png: encode failed");
    }
    PngWriteSink sink{&out};
    png_set_write_fn(png, &sink, png_sink_write, png_sink_flush);
    png_set_IHDR(png, info, width, height, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> row_ptrs(height);
    for (int y = 0; y < height; ++y)
        row_ptrs[y] = const_cast<png_bytep>(rows.data() + static_cast<std::size_t>(y) * width * channels);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

struct DecodedPng {
    int width = 0, height = 0, channels = 0;
    std::vector<std::uint8_t> data;  // 8-bit, interleaved
};

DecodedPng decode_png(const std::vector<std::uint8_t>& bytes) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png: create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("png: create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error("png: decode failed");
    }
    PngReadSource src{bytes.data(), bytes.size(), 0};
    png_set_read_fn(png, &src, png_source_read);
    png_read_info(png, info);

    png_set_expand(png);          // palettes, low bit depths, tRNS
    png_set_strip_16(png);        // 16 -> 8
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    DecodedPng out;
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = static_cast<int>(png_get_channels(png, info));
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
    std::vector<png_bytep> row_ptrs(out.height);
    for (int y = 0; y < out.height; ++y)
        row_ptrs[y] = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

std::uint8_t to_byte(float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for write: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

std::vector<std::uint8_t> encode_png(const EqrImage& image) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(image.width) * image.height * 3);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        rgb[3 * i + 0] = to_byte(image.pixels[i].x());
        rgb[3 * i + 1] = to_byte(image.pixels[i].y());
        rgb[3 * i + 2] = to_byte(image.pixels[i].z());
    }
    return encode_png_gray_or_rgb(image.width, image.height, 3, rgb);
}

std::vector<std::uint8_t> encode_png(const BitMask& mask) {
    std::vector<std::uint8_t> gray(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i) gray[i] = mask.bits[i] ? 255 : 0;
    return encode_png_gray_or_rgb(mask.width, mask.height, 1, gray);
}

EqrImage decode_png_rgb(const std::vector<std::uint8_t>& bytes) {
    DecodedPng png = decode_png(bytes);
    EqrImage image(png.width, png.height);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        if (png.channels >= 3) {
            image.pixels[i] = Eigen::Vector3f(png.data[png.channels * i + 0],
                                              png.data[png.channels * i + 1],
                                              png.data[png.channels * i + 2]) /
                              255.0f;
        } else {
            image.pixels[i] = Eigen::Vector3f::Constant(png.data[png.channels * i] / 255.0f);
        }
    }
    return image;
}

BitMask decode_png_mask(const std::vector<std::uint8_t>& bytes) {
    DecodedPng png = decode_png(bytes);
    BitMask mask(png.width, png.height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        mask.bits[i] = png.data[png.channels * i] >= 128 ? 1 : 0;
    return mask;
}

void write_png(const std::filesystem::path& path, const EqrImage& image) {
    write_bytes(path, encode_png(image));
}

void write_png(const std::filesystem::path& path, const BitMask& mask) {
    write_bytes(path, encode_png(mask));
}

std::vector<std::uint8_t> encode_pfm(const DepthMap& depth) {
    std::string header =
        "Pf\n" + std::to_string(depth.width) + " " + std::to_string(depth.height) + "\n-1.0\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + depth.values.size() * 4);
    for (int y = depth.height - 1; y >= 0; --y) {  // PFM rows run bottom-up
        for (int x = 0; x < depth.width; ++x) {
            float v = static_cast<float>(depth.at(x, y));
            auto bits = std::bit_cast<std::array<std::uint8_t, 4>>(v);
            out.insert(out.end(), bits.begin(), bits.end());
        }
    }
    return out;
}

DepthMap decode_pfm(const std::vector<std::uint8_t>& bytes) {
    auto fail = [&](const std::string& why) { throw Error("pfm: " + why); };
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
        if (start == pos) fail("truncated header");
        return std::string(bytes.begin() + start, bytes.begin() + pos);
    };
    std::string magic = token();
    if (magic != "Pf") fail("expected grayscale magic 'Pf'");
    int width = std::stoi(token());
    int height = std::stoi(token());
    double scale = std::stod(token());
    if (pos < bytes.size()) ++pos;  // single whitespace after the scale line
    if (width <= 0 || height <= 0) fail("bad dimensions");
    if (scale >= 0.0) fail("big-endian data not supported");
    std::size_t need = static_cast<std::size_t>(width) * height * 4;
    if (bytes.size() - pos < need) fail("truncated pixel data");

    DepthMap depth(width, height);
    for (int y = height - 1; y >= 0; --y) {
        for (int x = 0; x < width; ++x) {
            std::array<std::uint8_t, 4> raw;
            std::memcpy(raw.data(), bytes.data() + pos, 4);
            pos += 4;
            depth.at(x, y) = static_cast<double>(std::bit_cast<float>(raw));
        }
    }
    return depth;
}

void write_pfm(const std::filesystem::path& path, const DepthMap& depth) {
    write_bytes(path, encode_pfm(depth));
}

DepthMap read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_pfm(bytes);
}

namespace {
constexpr char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        std::uint32_t chunk = bytes[i] << 16;
        if (i + 1 < bytes.size()) chunk |= bytes[i + 1] << 8;
        if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
        out.push_back(kB64Chars[(chunk >> 18) & 63]);
        out.push_back(kB64Chars[(chunk >> 12) & 63]);
        out.push_back(i + 1 < bytes.size() ? kB64Chars[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < bytes.size() ? kB64Chars[chunk & 63] : '=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    static const auto lookup = [] {
        std::array<std::int8_t, 256> table;
        table.fill(-1);
        for (int i = 0; i < 64; ++i) table[static_cast<unsigned char>(kB64Chars[i])] = static_cast<std::int8_t>(i);
        return table;
    }();
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t chunk = 0;
    int have = 0;
    for (char c : text) {
        if (c == '=' || std::isspace(static_cast<unsigned char>(c))) continue;
        std::int8_t v = lookup[static_cast<unsigned char>(c)];
        if (v < 0) throw Error("base64: invalid character");
        chunk = (chunk << 6) | static_cast<std::uint32_t>(v);
        if (++have == 4) {
            out.push_back(static_cast<std::uint8_t>((chunk >> 16) & 0xff));
            out.push_back(static_cast<std::uint8_t>((chunk >> 8) & 0xff));
            out.push_back(static_cast<std::uint8_t>(chunk & 0xff));
            chunk = 0;
            have = 0;
        }
    }
    if (have == 2) {
        out.push_back(static_cast<std::uint8_t>((chunk >> 4) & 0xff));
    } else if (have == 3) {
        out.push_back(static_cast<std::uint8_t>((chunk >> 10) & 0xff));
        out.push_back(static_cast<std::uint8_t>((chunk >> 2) & 0xff));
    } else if (have != 0) {
        throw Error("base64: truncated input");
    }
    return out;
}

}  // namespace panofuse::io
