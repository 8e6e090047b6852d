#include "col/csv.hpp"

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "col/errors.hpp"

namespace col {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError("not a real number: '" + text + "'");
  return value;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.parent_path() /
                   (path.filename().string() + ".tmp" + std::to_string(::getpid()) + "." +
                    std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw ConfigError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("rename failed for " + path.string() + ": " + ec.message());
  }
}

std::string rounds_csv_content(const RegretReport& report) {
  std::ostringstream os;
  os << kRoundsCsvHeader << "\n";
  for (long n = 0; n < report.rounds; ++n) {
    os << (n + 1);
    os << ',' << format_double(report.loss[n]);
    os << ',' << format_double(report.dynamic_regret[n]);
    if (report.has_comparator) {
      os << ',' << format_double(report.static_regret[n]);
      os << ',' << format_double(report.delta[n]);
      os << ',' << format_double(report.reduction_bound[n]);
      if (!report.static_reduction_bound.empty())
        os << ',' << format_double(report.static_reduction_bound[n]);
      else
        os << ',';
    } else {
      os << ",,,,";
    }
    os << ',' << format_double(report.residual[n]);
    os << "\n";
  }
  return os.str();
}

void write_rounds_csv(const std::filesystem::path& path, const RegretReport& report) {
  atomic_write_file(path, rounds_csv_content(report));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

RoundsCsv parse_rounds_csv(const std::string& content, const std::string& origin) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(origin + ": empty CSV");
  RoundsCsv csv;
  csv.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != csv.header.size())
      throw ConfigError(origin + ": ragged CSV row '" + line + "'");
    std::vector<std::optional<double>> row;
    row.reserve(fields.size());
    for (const auto& f : fields)
      row.push_back(f.empty() ? std::nullopt : std::optional<double>(parse_double(f)));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

RoundsCsv read_rounds_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open CSV: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rounds_csv(buf.str(), path.string());
}

}  // namespace col
