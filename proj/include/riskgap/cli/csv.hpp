#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace riskgap::cli {

/// %.6g, with "inf"/"-inf"/"nan" spelled out.
std::string fmt(double v);
std::string fmt(const std::optional<double>& v);

/// Row-oriented CSV writer; fields with commas or quotes are quoted. LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::vector<std::string>>& data() const noexcept { return rows_; }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace riskgap::cli
