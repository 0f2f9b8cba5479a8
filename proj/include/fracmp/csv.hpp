#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracmp {

// CSV output: comma separator, '.' decimal point, 17 significant digits, one
// header row, LF line endings. Written atomically (temp file + rename) so a
// crashed run never leaves a truncated file behind.
inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string body;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) body += ',';
        body += header[c];
    }
    body += '\n';
    char buf[64];
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::invalid_argument("write_csv: ragged row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) body += ',';
            std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
            body += buf;
        }
        body += '\n';
    }

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_csv: cannot open " + tmp.string());
        out << body;
        if (!out) throw std::runtime_error("write_csv: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& body) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_text_atomic: cannot open " + tmp.string());
        out << body;
        if (!out) throw std::runtime_error("write_text_atomic: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace fracmp
