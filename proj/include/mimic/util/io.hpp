#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mimic::util {

std::string read_file(const std::string& path);

// write via temp file + rename so readers never observe partial contents
void write_file_atomic(const std::string& path, const std::string& contents);

// exact double <-> string round trip (C99 hexfloat)
std::string double_to_hex(double v);
double hex_to_double(const std::string& s);

// parses JSON, tolerating // comments (init-config emits annotated files)
nlohmann::json parse_json(const std::string& text, const std::string& origin);
nlohmann::json load_json_file(const std::string& path);

// rows -> RFC-ish CSV (numbers pre-formatted by the caller)
std::string to_csv(const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v, int precision = 6);

}  // namespace mimic::util
