#pragma once

#include <cstddef>
#include <filesystem>

#include "panofuse/geom/pointcloud.hpp"
#include "panofuse/util.hpp"

namespace panofuse::io {

class PlyParseError : public Error {
public:
    PlyParseError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset(byte_offset) {}
    std::size_t byte_offset = 0;
};

/// Binary little-endian PLY: x,y,z float32 + red,green,blue uchar per vertex.
void write_ply(const std::filesystem::path& path, const geom::PointCloud& cloud);

/// Reads the format written above (tolerating extra trailing vertex
/// properties is out of scope). Malformed input raises PlyParseError with the
/// offending byte offset.
geom::PointCloud read_ply(const std::filesystem::path& path);

}  // namespace panofuse::io
