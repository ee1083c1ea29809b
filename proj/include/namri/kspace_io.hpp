// SNAK k-space format:
//   "SNAK" | version u8 | header_len u32 LE | header (UTF-8 "key=value\n")
//   | samples f32 interleaved re/im, ordered [coil][spoke][sample]
//   | radii   f64 × samples_per_spoke (cycles/voxel)
//   | directions f64 × n_spokes × ndim (unit vectors; ndim inferred
//     from the remaining payload size)
// Header keys: dims, n_coils, n_spokes, n_samples, mode, k0_fraction,
// sigma, seed. Shell weights are recomputed from the radii on read.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "namri/kspace.hpp"
#include "namri/trajectory.hpp"
#include "namri/volume_io.hpp"

namespace namri {

namespace detail {

inline std::string traj_mode_name(TrajMode m)
{
    return m == TrajMode::DensityAdapted ? "density_adapted" : "uniform";
}

inline TrajMode parse_traj_mode(const std::string& s)
{
    if (s == "uniform") return TrajMode::UniformRadial;
    if (s == "density_adapted") return TrajMode::DensityAdapted;
    throw IoError("unknown trajectory mode '" + s + "'");
}

} // namespace detail

inline void write_kspace(const KSpaceData& data, const std::filesystem::path& path)
{
    require(data.shape_consistent(), "k-space data has inconsistent shape");
    const Trajectory& traj = data.traj;

    std::ostringstream hs;
    hs.precision(17);
    hs << "dims=" << data.dims.nx << "," << data.dims.ny << "," << data.dims.nz << "\n";
    hs << "n_coils=" << data.n_coils << "\n";
    hs << "n_spokes=" << traj.n_spokes << "\n";
    hs << "n_samples=" << traj.samples_per_spoke << "\n";
    hs << "mode=" << detail::traj_mode_name(traj.mode) << "\n";
    hs << "k0_fraction=" << traj.k0_fraction << "\n";
    hs << "sigma=" << data.noise_sigma << "\n";
    hs << "seed=" << data.seed << "\n";
    const std::string header = hs.str();

    std::string buf;
    buf.reserve(9 + header.size() + data.samples.size() * 8 +
                traj.radii.size() * 8 + traj.directions.size() * 8 * traj.ndim);
    buf += "SNAK";
    buf += char(1);
    detail::append_u32(buf, std::uint32_t(header.size()));
    buf += header;
    for (const cdouble& s : data.samples) {
        detail::append_f32(buf, float(s.real()));
        detail::append_f32(buf, float(s.imag()));
    }
    for (double r : traj.radii) detail::append_f64(buf, r);
    for (const auto& d : traj.directions)
        for (int a = 0; a < traj.ndim; ++a) detail::append_f64(buf, d[std::size_t(a)]);
    detail::atomic_write_file(path, buf);
}

inline KSpaceData read_kspace(const std::filesystem::path& path)
{
    const std::string bytes = detail::read_file(path);
    detail::BinReader r{bytes};
    if (r.bytes(4, "magic") != "SNAK") throw BadMagicError("not a SNAK k-space file (bad magic)");
    const int version = r.u8("version");
    if (version != 1) throw IoError("unsupported SNAK version " + std::to_string(version));
    const std::uint32_t hlen = r.u32("header length");
    const auto kv = detail::parse_header(r.bytes(hlen, "header"));

    const auto dims_v = detail::parse_csv_doubles(detail::header_get(kv, "dims"), 3, "dims");
    const GridDims dims{int(dims_v[0]), int(dims_v[1]), int(dims_v[2])};
    const int n_coils = std::stoi(detail::header_get(kv, "n_coils"));
    const int n_spokes = std::stoi(detail::header_get(kv, "n_spokes"));
    const int n_samples = std::stoi(detail::header_get(kv, "n_samples"));
    const TrajMode mode = detail::parse_traj_mode(detail::header_get(kv, "mode"));
    const double k0_fraction = std::stod(detail::header_get(kv, "k0_fraction"));
    const double sigma = std::stod(detail::header_get(kv, "sigma"));
    const std::uint64_t seed = std::stoull(detail::header_get(kv, "seed"));
    if (n_coils < 1 || n_spokes < 1 || n_samples < 1)
        throw IoError("invalid shape in SNAK header");

    const std::size_t n_total = std::size_t(n_coils) * n_spokes * n_samples;
    const std::size_t fixed = n_total * 8 + std::size_t(n_samples) * 8;
    if (r.remaining() < fixed)
        throw TruncatedError("SNAK payload smaller than samples + radii");
    const std::size_t dir_bytes = r.remaining() - fixed;
    const std::size_t per_spoke = dir_bytes / (std::size_t(n_spokes) * 8);
    if (dir_bytes != std::size_t(n_spokes) * 8 * per_spoke || (per_spoke != 2 && per_spoke != 3))
        throw SizeMismatchError("SNAK direction block does not hold 2 or 3 components per spoke");
    const int ndim = int(per_spoke);

    KSpaceData out;
    out.dims = dims;
    out.n_coils = n_coils;
    out.noise_sigma = sigma;
    out.seed = seed;
    out.samples.resize(n_total);
    for (auto& s : out.samples) {
        const double re = double(r.f32("samples"));
        const double im = double(r.f32("samples"));
        s = cdouble(re, im);
    }

    Trajectory traj;
    traj.ndim = ndim;
    traj.n_spokes = n_spokes;
    traj.samples_per_spoke = n_samples;
    traj.mode = mode;
    traj.k0_fraction = k0_fraction;
    traj.radii.resize(std::size_t(n_samples));
    for (auto& v : traj.radii) v = r.f64("radii");
    traj.directions.resize(std::size_t(n_spokes));
    for (auto& d : traj.directions) {
        d = {0.0, 0.0, 0.0};
        for (int a = 0; a < ndim; ++a) d[std::size_t(a)] = r.f64("directions");
    }
    traj.weights = detail::shell_weights(traj.radii, n_spokes, ndim);
    out.traj = std::move(traj);

    require(out.shape_consistent(), "SNAK file decoded to inconsistent shape");
    return out;
}

} // namespace namri
