#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qmupl::cli {

struct Column {
  std::string name;
  std::vector<double> values;
};

/// Columns must have equal length. Numbers are written with %.17g so equal
/// inputs give byte-identical files.
std::string csv_text(const std::vector<Column>& columns);

/// Text table with a leading string column.
struct Row {
  std::string label;
  std::vector<double> values;
};
std::string table_text(const std::vector<std::string>& header, const std::vector<Row>& rows);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

std::string svg_text(const Chart& chart);

/// Collects the files of one run and writes them plus manifest.json.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, bool csv, bool svg);

  [[nodiscard]] bool csv() const { return csv_; }
  [[nodiscard]] bool svg() const { return svg_; }
  void write_csv(const std::string& name, const std::vector<Column>& columns);
  void write_svg(const std::string& name, const Chart& chart);
  void write_text(const std::string& name, const std::string& content);
  /// `config` is the effective configuration as INI text.
  void write_manifest(const std::string& command, unsigned long long seed, const std::string& config);
  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  bool csv_;
  bool svg_;
  std::vector<std::string> files_;
  std::vector<std::string> hashes_;
};

}  // namespace qmupl::cli
