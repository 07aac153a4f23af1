#include "hcd/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <system_error>

#include <json.hpp>

#include "hcd/error.hpp"

namespace hcd {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) token.remove_suffix(1);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("not a number: '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value: '" + std::string(token) + "'");
  return value;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line.
    if (!(record.size() == 1 && record[0].empty())) table.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError("CSV: unterminated quoted field");
  if (field_started || !record.empty()) end_record();
  return table;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (const auto& record : table) {
    for (std::size_t i = 0; i < record.size(); ++i) {
      if (i) out += ',';
      const std::string& f = record[i];
      if (f.find_first_of(",\"\r\n") != std::string::npos) {
        out += '"';
        for (char c : f) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      } else {
        out += f;
      }
    }
    out += "\r\n";
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void write_vector_csv(const std::filesystem::path& path, const DenseVector& v,
                      std::string_view header) {
  CsvTable table;
  table.reserve(v.size() + 1);
  table.push_back({std::string(header)});
  for (double x : v) table.push_back({format_double(x)});
  write_text(path, to_csv(table));
}

DenseVector read_vector_csv(const std::filesystem::path& path) {
  const CsvTable table = parse_csv(read_text(path));
  if (table.empty()) throw ParseError(path.string() + ": missing header row");
  std::vector<double> values;
  values.reserve(table.size() - 1);
  for (std::size_t r = 1; r < table.size(); ++r) {
    if (table[r].size() != 1) {
      throw ParseError(path.string() + ": row " + std::to_string(r) + " must have one field");
    }
    values.push_back(parse_double(table[r][0]));
  }
  return DenseVector(std::move(values));
}

void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m) {
  std::string out;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j) out += ',';
    out += 'c' + std::to_string(j);
  }
  out += "\r\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += "\r\n";
  }
  write_text(path, out);
}

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  const CsvTable table = parse_csv(read_text(path));
  if (table.empty()) throw ParseError(path.string() + ": missing header row");
  const std::size_t cols = table[0].size();
  const std::size_t rows = table.size() - 1;
  if (rows == 0 || cols == 0) throw ParseError(path.string() + ": empty matrix");
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& rec = table[i + 1];
    if (rec.size() != cols) {
      throw ParseError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(rec.size()) + " fields, expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) data[j * rows + i] = parse_double(rec[j]);
  }
  return DenseMatrix(rows, cols, std::move(data));
}

std::string metrics_to_json(const Metrics& metrics, std::string_view method) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "metrics";
  j["method"] = method;
  j["recon_error"] = metrics.recon_error;
  j["obj_gap"] = metrics.obj_gap ? json(*metrics.obj_gap) : json(nullptr);
  j["phi_star"] = metrics.phi_star ? json(*metrics.phi_star) : json(nullptr);
  j["phi_star_source"] = to_string(metrics.phi_star_source);
  j["nnz"] = metrics.nnz;
  j["wall_time_s"] = metrics.wall_time_s;
  return j.dump(2);
}

std::string trace_to_json(const RunTrace& trace) {
  json stages = json::array();
  for (const StageTrace& s : trace.stages) {
    stages.push_back({
        {"lambda", s.lambda},
        {"start_objective", s.start_objective},
        {"middle_iters", s.middle_iters},
        {"inner_sweeps_total", s.inner_sweeps_total},
        {"strong_rule_admitted", s.strong_rule_admitted},
        {"objective_checkpoints", s.objective_checkpoints},
        {"nnz_checkpoints", s.nnz_checkpoints},
        {"admitted_coords", s.admitted_coords},
        {"pruned_active_sizes", s.pruned_active_sizes},
        {"admitted_active_sizes", s.admitted_active_sizes},
        {"inner_cap_hits", s.inner_cap_hits},
        {"stop", to_string(s.stop)},
        {"wall_time_s", s.wall_time_s},
    });
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "trace";
  j["method"] = trace.method;
  j["lambda0"] = trace.lambda0;
  j["total_middle_iters"] = trace.total_middle_iters;
  j["cap_warnings"] = trace.cap_warnings;
  j["stages"] = std::move(stages);
  return j.dump(2);
}

std::string trace_to_csv(const RunTrace& trace) {
  CsvTable table;
  table.push_back({"method", "stage", "lambda", "checkpoint", "objective", "nnz"});
  for (std::size_t n = 0; n < trace.stages.size(); ++n) {
    const StageTrace& s = trace.stages[n];
    for (std::size_t c = 0; c < s.objective_checkpoints.size(); ++c) {
      table.push_back({trace.method, std::to_string(n + 1), format_double(s.lambda),
                       std::to_string(c), format_double(s.objective_checkpoints[c]),
                       std::to_string(s.nnz_checkpoints[c])});
    }
  }
  return to_csv(table);
}

}  // namespace hcd
