// SNAV volume format:
//   "SNAV" | version u8 | header_len u32 LE | header (UTF-8 "key=value\n")
//   | payload (f32 LE, or interleaved f32 re/im pairs for dtype c64)
// Header keys: dims=nx,ny,nz  dtype=f32|c64  voxel_size_mm=x,y,z  units=...
// seed=N. Round-trips are bit-exact for the 32-bit payload. Files are
// written atomically (temp + rename).

#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "namri/core.hpp"

static_assert(std::endian::native == std::endian::little,
              "volume/k-space formats assume a little-endian host");

namespace namri {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};
struct BadMagicError : IoError {
    explicit BadMagicError(const std::string& what) : IoError(what) {}
};
struct TruncatedError : IoError {
    explicit TruncatedError(const std::string& what) : IoError(what) {}
};
struct SizeMismatchError : IoError {
    explicit SizeMismatchError(const std::string& what) : IoError(what) {}
};

namespace detail {

inline void append_u32(std::string& buf, std::uint32_t v)
{
    char tmp[4];
    std::memcpy(tmp, &v, 4);
    buf.append(tmp, 4);
}

inline void append_f32(std::string& buf, float v)
{
    char tmp[4];
    std::memcpy(tmp, &v, 4);
    buf.append(tmp, 4);
}

inline void append_f64(std::string& buf, double v)
{
    char tmp[8];
    std::memcpy(tmp, &v, 8);
    buf.append(tmp, 8);
}

// Whole-file atomic write: temp file in the same directory, then rename.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& bytes)
{
    namespace fs = std::filesystem;
    static std::atomic<std::uint64_t> counter{0};
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    const fs::path tmp =
        path.string() + ".tmp" + std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(bytes.data(), std::streamsize(bytes.size()));
        if (!out) throw IoError("short write: " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct BinReader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n, const char* what) const
    {
        if (pos + n > buf.size())
            throw TruncatedError(std::string("truncated file while reading ") + what);
    }
    std::uint8_t u8(const char* what)
    {
        need(1, what);
        return std::uint8_t(buf[pos++]);
    }
    std::uint32_t u32(const char* what)
    {
        need(4, what);
        std::uint32_t v;
        std::memcpy(&v, buf.data() + pos, 4);
        pos += 4;
        return v;
    }
    float f32(const char* what)
    {
        need(4, what);
        float v;
        std::memcpy(&v, buf.data() + pos, 4);
        pos += 4;
        return v;
    }
    double f64(const char* what)
    {
        need(8, what);
        double v;
        std::memcpy(&v, buf.data() + pos, 8);
        pos += 8;
        return v;
    }
    std::string bytes(std::size_t n, const char* what)
    {
        need(n, what);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
    std::size_t remaining() const { return buf.size() - pos; }
};

inline std::map<std::string, std::string> parse_header(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("malformed header line: '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

inline const std::string& header_get(const std::map<std::string, std::string>& kv,
                                     const std::string& key)
{
    auto it = kv.find(key);
    if (it == kv.end()) throw IoError("missing header key '" + key + "'");
    return it->second;
}

inline std::vector<double> parse_csv_doubles(const std::string& s, std::size_t expect,
                                             const std::string& key)
{
    std::vector<double> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.size() != expect)
        throw IoError("header key '" + key + "' expects " + std::to_string(expect) + " values");
    return out;
}

} // namespace detail

struct VolumeHeader {
    GridDims dims;
    std::string dtype; // "f32" or "c64"
    VoxelSize voxel;
    std::string units;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string volume_header_text(const VolumeHeader& h)
{
    std::ostringstream ss;
    ss.precision(17);
    ss << "dims=" << h.dims.nx << "," << h.dims.ny << "," << h.dims.nz << "\n";
    ss << "dtype=" << h.dtype << "\n";
    ss << "voxel_size_mm=" << h.voxel.x << "," << h.voxel.y << "," << h.voxel.z << "\n";
    ss << "units=" << h.units << "\n";
    ss << "seed=" << h.seed << "\n";
    return ss.str();
}

inline std::pair<VolumeHeader, BinReader> open_volume(const std::string& bytes)
{
    BinReader r{bytes};
    if (r.bytes(4, "magic") != "SNAV") throw BadMagicError("not a SNAV volume (bad magic)");
    const int version = r.u8("version");
    if (version != 1) throw IoError("unsupported SNAV version " + std::to_string(version));
    const std::uint32_t hlen = r.u32("header length");
    const auto kv = parse_header(r.bytes(hlen, "header"));

    VolumeHeader h;
    const auto dims = parse_csv_doubles(header_get(kv, "dims"), 3, "dims");
    h.dims = {int(dims[0]), int(dims[1]), int(dims[2])};
    h.dtype = header_get(kv, "dtype");
    if (h.dtype != "f32" && h.dtype != "c64")
        throw IoError("unknown dtype '" + h.dtype + "'");
    const auto vs = parse_csv_doubles(header_get(kv, "voxel_size_mm"), 3, "voxel_size_mm");
    h.voxel = {vs[0], vs[1], vs[2]};
    h.units = header_get(kv, "units");
    h.seed = std::stoull(header_get(kv, "seed"));
    if (h.dims.nx < 1 || h.dims.ny < 1 || h.dims.nz < 1)
        throw IoError("invalid dims in header");

    const std::size_t scalars = h.dims.total() * (h.dtype == "c64" ? 2 : 1);
    if (r.remaining() != scalars * 4)
        throw SizeMismatchError("payload size " + std::to_string(r.remaining()) +
                                " does not match header dims (expected " +
                                std::to_string(scalars * 4) + " bytes)");
    return {h, r};
}

} // namespace detail

inline void write_volume(const Image& img, const std::filesystem::path& path,
                         std::uint64_t seed = 0)
{
    VolumeHeader h{img.dims, "f32", img.voxel, img.units, seed};
    const std::string header = detail::volume_header_text(h);

    std::string buf;
    buf.reserve(9 + header.size() + img.data.size() * 4);
    buf += "SNAV";
    buf += char(1);
    detail::append_u32(buf, std::uint32_t(header.size()));
    buf += header;
    for (double v : img.data) detail::append_f32(buf, float(v));
    detail::atomic_write_file(path, buf);
}

inline void write_volume(const CImage& img, const std::filesystem::path& path,
                         std::uint64_t seed = 0)
{
    VolumeHeader h{img.dims, "c64", img.voxel, img.units, seed};
    const std::string header = detail::volume_header_text(h);

    std::string buf;
    buf.reserve(9 + header.size() + img.data.size() * 8);
    buf += "SNAV";
    buf += char(1);
    detail::append_u32(buf, std::uint32_t(header.size()));
    buf += header;
    for (const cdouble& v : img.data) {
        detail::append_f32(buf, float(v.real()));
        detail::append_f32(buf, float(v.imag()));
    }
    detail::atomic_write_file(path, buf);
}

inline VolumeHeader peek_volume(const std::filesystem::path& path)
{
    const std::string bytes = detail::read_file(path);
    return detail::open_volume(bytes).first;
}

inline Image read_image(const std::filesystem::path& path)
{
    const std::string bytes = detail::read_file(path);
    auto [h, r] = detail::open_volume(bytes);
    if (h.dtype != "f32")
        throw IoError("expected dtype f32, file holds " + h.dtype + ": " + path.string());
    Image img(h.dims, h.voxel, h.units);
    for (auto& v : img.data) v = double(r.f32("payload"));
    return img;
}

inline CImage read_cimage(const std::filesystem::path& path)
{
    const std::string bytes = detail::read_file(path);
    auto [h, r] = detail::open_volume(bytes);
    if (h.dtype != "c64")
        throw IoError("expected dtype c64, file holds " + h.dtype + ": " + path.string());
    CImage img(h.dims, h.voxel, h.units);
    for (auto& v : img.data) {
        const double re = double(r.f32("payload"));
        const double im = double(r.f32("payload"));
        v = cdouble(re, im);
    }
    return img;
}

} // namespace namri
