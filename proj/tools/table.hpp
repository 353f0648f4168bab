#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace spherehit::cli {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Shortest representation that round-trips.
std::string format_real(double v);

// RFC 4180, CRLF line ends.
void write_csv(std::ostream& os, const Table& table);

// {"job": ..., "timestamp": ..., key: [row objects]}
void write_json(std::ostream& os, const nlohmann::ordered_json& job, const std::string& key,
                const Table& table, bool timestamp);

nlohmann::ordered_json to_json(const Cell& c);

}  // namespace spherehit::cli
