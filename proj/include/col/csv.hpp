#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "col/regret.hpp"

namespace col {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

// Writes content to a sibling temp file and renames it into place.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

inline constexpr const char* kRoundsCsvHeader =
    "round,loss,dyn_regret,static_regret,delta_n,thm2_bound,cor1_bound,residual";

struct RoundsCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

std::string rounds_csv_content(const RegretReport& report);
void write_rounds_csv(const std::filesystem::path& path, const RegretReport& report);
RoundsCsv read_rounds_csv(const std::filesystem::path& path);
RoundsCsv parse_rounds_csv(const std::string& content, const std::string& origin);

}  // namespace col
