#pragma once

// CSV records and alignment dumps.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stocon/batch.hpp"
#include "stocon/cost.hpp"
#include "stocon/error.hpp"
#include "stocon/search.hpp"

namespace stocon {

/// 10 significant digits, '.' decimal point.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline constexpr const char* kResultHeader =
    "case_id,profile,total_cost,n_moves,n_sync,n_log_moves,n_model_moves,explored_nodes,wall_time_ms";

/// One result row per aligned trace; failed traces are omitted here and
/// reported separately.
inline std::string result_csv(const LogAlignment& result, ProfileKind profile) {
  std::ostringstream out;
  out << kResultHeader << "\n";
  for (const auto& o : result.outcomes) {
    if (!o.alignment) continue;
    const auto& a = *o.alignment;
    out << o.case_id << ',' << to_string(profile) << ',' << format_number(a.total_cost) << ',' << a.moves.size()
        << ',' << a.count(MoveKind::Sync) << ',' << a.count(MoveKind::LogMove) << ','
        << a.count(MoveKind::ModelMove) << ',' << a.explored_nodes << ',' << format_number(o.wall_time_ms)
        << "\n";
  }
  return out.str();
}

/// One move per line: kind, model label, trace label, weight, cost.
inline std::string alignment_dump(const Alignment& a) {
  std::ostringstream out;
  for (const auto& m : a.moves) {
    out << to_string(m.kind) << '\t' << display(m.model_label) << '\t' << display(m.trace_label) << '\t'
        << (m.weight ? format_number(*m.weight) : std::string("-")) << '\t' << format_number(m.cost) << "\n";
  }
  return out.str();
}

/// Minimal CSV table: header plus rows, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size())
        throw ParseError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                         std::to_string(table.header.size()));
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw ParseError("empty CSV");
  return table;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace stocon
