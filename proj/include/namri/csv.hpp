// Deterministic CSV emission: fixed "%.10g" float formatting so identical
// runs serialize byte-identically.

#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "namri/core.hpp"
#include "namri/recon.hpp"
#include "namri/volume_io.hpp"

namespace namri {

inline std::string csv_num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string csv_int(long long v) { return std::to_string(v); }

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    explicit CsvTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

    void add_row(std::vector<std::string> cells)
    {
        require(cells.size() == columns.size(), "CSV row width does not match header");
        rows.push_back(std::move(cells));
    }

    std::string serialize() const
    {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out += ',';
            out += columns[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += row[i];
            }
            out += '\n';
        }
        return out;
    }
};

inline void write_csv(const CsvTable& table, const std::filesystem::path& path)
{
    detail::atomic_write_file(path, table.serialize());
}

inline void write_convergence_csv(const std::vector<ConvRow>& log,
                                  const std::filesystem::path& path)
{
    CsvTable t({"iteration", "objective", "data_residual", "primal_residual", "dual_residual"});
    for (const ConvRow& r : log)
        t.add_row({csv_int(r.iter), csv_num(r.objective), csv_num(r.data_residual),
                   csv_num(r.primal_residual), csv_num(r.dual_residual)});
    write_csv(t, path);
}

} // namespace namri
