#pragma once

#include <string>
#include <vector>

#include "rlct/internal_map.hpp"
#include "rlct/synthesis.hpp"
#include "rlct/types.hpp"

namespace rlct {

/// JSON document with fields n, m, p, A, B, C, D and optional sigma_int, sigma_ext, class_tag, partition.
std::string write_realization(const StructuredRealization& real);
StructuredRealization read_realization(const std::string& text);

/// Realization fields of the controller plus impl_hint.
std::string write_controller(const Controller& k);
Controller read_controller(const std::string& text);

/// Realization fields plus theta, gamma, phi, sigma_int_dagger, n_C, n_L and permutation.
std::string write_internal(const StructuredRealization& real, const InternalData& data);
std::pair<StructuredRealization, InternalData> read_internal(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  bool operator==(const CsvTable&) const = default;
};

/// Header row, then comma-separated values with 17 significant digits.
std::string write_csv(const CsvTable& table);
CsvTable read_csv(const std::string& text);

/// Whitespace or comma separated numeric matrix, one row per line.
MatrixXd read_matrix_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace rlct
