#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace magkit {

/// Point-cloud CSV: one point per row, comma-separated numeric columns,
/// '.' decimal. A header row is skipped when it contains any non-numeric
/// token.  Errors: FileNotFound, EmptyInput, InvalidCsv.
Eigen::MatrixXd read_points_csv(const std::string& path);

/// Distance-matrix CSV: n rows of n numeric columns (same header handling).
Eigen::MatrixXd read_dist_csv(const std::string& path);

/// FNV-1a 64-bit digest of the raw file bytes, as "fnv1a:<hex>".
std::string file_digest(const std::string& path);

}  // namespace magkit
