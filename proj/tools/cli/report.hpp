#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ncspace::cli {

enum class Status { Pass, Fail, Skip, Info };

std::string_view to_string(Status s);

struct CheckRecord {
  std::string name;
  Status status = Status::Info;
  double defect = 0.0;
  double tolerance = 0.0;
  std::string note;
};

/// Hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

/// Collects check records for one command run and renders report.txt.
class Report {
 public:
  Report(std::string command, double tolerance, std::uint64_t seed);

  void add_input(std::string label, std::string_view content);

  /// Pass iff `defect` is finite and <= `tol`.
  void check(std::string name, double defect, double tol, std::string note = {});
  /// Asserted boolean condition; the defect is recorded as given.
  void require(std::string name, bool ok, double defect, double tol, std::string note = {});
  void skip(std::string name, std::string reason);
  /// Reported number, not asserted.
  void info(std::string name, double value, std::string note = {});

  double tolerance() const { return tolerance_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<CheckRecord>& records() const { return records_; }
  bool passed() const;

  void write(std::ostream& os, double elapsed_ms) const;

 private:
  std::string command_;
  double tolerance_;
  std::uint64_t seed_;
  std::vector<std::pair<std::string, std::string>> inputs_;  // label, digest
  std::vector<CheckRecord> records_;
};

/// CSV table written as <dir>/<name>.csv.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const std::filesystem::path& dir, const Table& table);

}  // namespace ncspace::cli
