// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace momentkit::jsonl {

/// Calls `fn(line_number, json)` for every non-blank line. Throws io/format errors.
void for_each(std::istream& in, const std::function<void(std::size_t, const nlohmann::json&)>& fn);

std::vector<nlohmann::json> read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

template <typename T>
std::vector<T> read_as(const std::filesystem::path& path) {
    std::vector<T> out;
    for (const auto& row : read_file(path)) out.push_back(row.template get<T>());
    return out;
}

template <typename T>
void write_as(const std::filesystem::path& path, const std::vector<T>& items) {
    std::vector<nlohmann::json> rows;
    rows.reserve(items.size());
    for (const auto& item : items) rows.emplace_back(item);
    write_file(path, rows);
}

}  // namespace momentkit::jsonl
