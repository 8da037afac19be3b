// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/jsonl.hpp"

#include <fstream>
#include <istream>

#include "momentkit/core.hpp"

namespace momentkit::jsonl {

void for_each(std::istream& in, const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::format, "line " + std::to_string(line_no) + ": " + e.what());
        }
        fn(line_no, row);
    }
}

std::vector<nlohmann::json> read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
    std::vector<nlohmann::json> rows;
    for_each(in, [&](std::size_t, const nlohmann::json& row) { rows.push_back(row); });
    return rows;
}

void write_file(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    for (const auto& row : rows) out << row.dump() << '\n';
}

}  // namespace momentkit::jsonl
