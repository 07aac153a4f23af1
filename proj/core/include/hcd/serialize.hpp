#pragma once

// File formats: CSV (RFC 4180, header row, shortest round-trip decimals) for
// matrices, vectors and flattened traces; JSON with "schema_version": 1 for
// metrics and traces.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hcd/linalg.hpp"
#include "hcd/metrics.hpp"
#include "hcd/trace.hpp"

namespace hcd {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal that parses back to the identical double.
std::string format_double(double value);
// Throws ParseError unless the whole token is a finite double.
double parse_double(std::string_view token);

// One RFC 4180 record per inner vector; the first is the header.
using CsvTable = std::vector<std::vector<std::string>>;
CsvTable parse_csv(std::string_view text);
std::string to_csv(const CsvTable& table);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// Single column with the given header.
void write_vector_csv(const std::filesystem::path& path, const DenseVector& v,
                      std::string_view header);
DenseVector read_vector_csv(const std::filesystem::path& path);

// rows x cols grid with header c0..c{cols-1}.
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);

std::string metrics_to_json(const Metrics& metrics, std::string_view method);
std::string trace_to_json(const RunTrace& trace);
// One row per objective checkpoint: method,stage,lambda,checkpoint,objective,nnz.
std::string trace_to_csv(const RunTrace& trace);

}  // namespace hcd
