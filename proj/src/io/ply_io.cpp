#include "panofuse/io/ply_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace panofuse::io {

using geom::PointCloud;

void write_ply(const std::filesystem::path& path, const PointCloud& cloud) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for write: " + path.string());
    out << "ply\n"
        << "format binary_little_endian 1.0\n"
        << "element vertex " << cloud.size() << "\n"
        << "property float x\n"
        << "property float y\n"
        << "property float z\n"
        << "property uchar red\n"
        << "property uchar green\n"
        << "property uchar blue\n"
        << "end_header\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::array<float, 3> pos = {static_cast<float>(cloud.positions[i].x()),
                                    static_cast<float>(cloud.positions[i].y()),
                                    static_cast<float>(cloud.positions[i].z())};
        out.write(reinterpret_cast<const char*>(pos.data()), 12);
        for (int c = 0; c < 3; ++c) {
            float v = std::clamp(cloud.colors[i][c], 0.0f, 1.0f);
            std::uint8_t byte = static_cast<std::uint8_t>(std::lround(v * 255.0f));
            out.write(reinterpret_cast<const char*>(&byte), 1);
        }
    }
    if (!out) throw Error("write failed: " + path.string());
}

PointCloud read_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t pos = 0;
    auto read_line = [&]() {
        std::size_t start = pos;
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        if (pos >= bytes.size()) throw PlyParseError("unterminated header line", start);
        std::string line(bytes.begin() + start, bytes.begin() + pos);
        ++pos;  // consume newline
        return line;
    };

    if (read_line() != "ply") throw PlyParseError("missing 'ply' magic", 0);
    std::size_t vertex_count = 0;
    bool saw_format = false;
    std::vector<std::string> properties;
    while (true) {
        std::size_t line_start = pos;
        std::string line = read_line();
        if (line == "end_header") break;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word == "comment") continue;
        if (word == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt != "binary_little_endian")
                throw PlyParseError("unsupported format '" + fmt + "'", line_start);
            saw_format = true;
        } else if (word == "element") {
            std::string name;
            ss >> name >> vertex_count;
            if (name != "vertex")
                throw PlyParseError("unsupported element '" + name + "'", line_start);
        } else if (word == "property") {
            std::string type, name;
            ss >> type >> name;
            properties.push_back(type + " " + name);
        } else {
            throw PlyParseError("unrecognized header line '" + line + "'", line_start);
        }
    }
    if (!saw_format) throw PlyParseError("missing format line", pos);
    const std::vector<std::string> expected = {"float x",  "float y",  "float z",
                                              "uchar red", "uchar green", "uchar blue"};
    if (properties != expected) throw PlyParseError("unexpected vertex layout", pos);

    const std::size_t stride = 15;
    if (bytes.size() - pos < vertex_count * stride)
        throw PlyParseError("truncated vertex data", bytes.size());

    PointCloud cloud;
    cloud.reserve(vertex_count);
    for (std::size_t i = 0; i < vertex_count; ++i) {
        std::array<std::uint8_t, 4> raw;
        Eigen::Vector3d p;
        for (int c = 0; c < 3; ++c) {
            std::memcpy(raw.data(), bytes.data() + pos, 4);
            float v = std::bit_cast<float>(raw);
            if (!std::isfinite(v)) throw PlyParseError("non-finite vertex coordinate", pos);
            p[c] = v;
            pos += 4;
        }
        Eigen::Vector3f color;
        for (int c = 0; c < 3; ++c) {
            color[c] = static_cast<std::uint8_t>(bytes[pos]) / 255.0f;
            ++pos;
        }
        cloud.append(p, color);
    }
    return cloud;
}

}  // namespace panofuse::io
