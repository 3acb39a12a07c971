#ifndef SKEWMIX_IO_HPP
#define SKEWMIX_IO_HPP

#include "skewmix/distributions.hpp"
#include "skewmix/types.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace skewmix {

struct Dataset {
  Matrix matrix;  // n x p
  std::vector<std::string> column_names;
  /// 1..k by order of first appearance, kUnknownLabel (0) for missing.
  std::optional<std::vector<int>> labels;
  std::vector<std::string> label_names;  // label_names[k - 1]
  bool scaled = false;
  Vector center;  // per-column mean removed by scale_columns
  Vector spread;  // per-column sd (n - 1 denominator)

  Index rows() const noexcept { return matrix.rows(); }
  Index cols() const noexcept { return matrix.cols(); }
  /// Number of distinct non-missing labels.
  int label_count() const noexcept {
    return static_cast<int>(label_names.size());
  }
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  /// Column name, or a 1-based column number; empty for no label column.
  std::string label_column;
  std::string missing_label = "?";
};

/// Malformed CSV content; line() is the 1-based physical line.
class CsvError : public InputError {
 public:
  CsvError(const std::string& what, Index line)
      : InputError("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  Index line() const noexcept { return line_; }

 private:
  Index line_;
};

/// RFC-4180 fields: quoted fields may hold delimiters, doubled quotes and
/// newlines. Blank lines are skipped. Throws CsvError for ragged rows,
/// non-numeric or non-finite feature cells and files without data rows.
Dataset read_csv(std::istream& in, const CsvOptions& options = {});
Dataset ingest_csv(const std::filesystem::path& path,
                   const CsvOptions& options = {});

/// Standardizes columns to mean 0, sd 1 (n - 1 denominator). Throws
/// InputError naming any zero-variance column.
Dataset scale_columns(const Dataset& ds);
/// Inverse of scale_columns; identity for unscaled data.
Dataset unscale(const Dataset& ds);

/// Maps parameters fitted on scaled data back to the original units.
ComponentParams unscale_params(const ComponentParams& params,
                               const Dataset& scaled);

/// Writes a header row then one row per observation.
void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<int>& labels);

}  // namespace skewmix

#endif  // SKEWMIX_IO_HPP
