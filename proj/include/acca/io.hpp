#pragma once

#include <filesystem>
#include <string>

#include "acca/matrix.hpp"

namespace acca {

// Writes content to path atomically (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Headerless CSV of reals, row-major, LF line endings, round-trip precision.
void write_csv_matrix(const std::filesystem::path& path, const Mat& m);
Mat read_csv_matrix(const std::filesystem::path& path);

std::string format_csv_matrix(const Mat& m);

// 8-bit grayscale PGM (P2 text variant); pixel = round(255 * (1 - p)) after
// clamping to [0, 1], so larger entries render darker.
void write_pgm(const std::filesystem::path& path, const Mat& m);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace acca
