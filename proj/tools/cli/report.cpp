#include "cli/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>


namespace ncspace::cli {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
    case Status::Info: return "INFO";
  }
  return "?";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

Report::Report(std::string command, double tolerance, std::uint64_t seed)
    : command_(std::move(command)), tolerance_(tolerance), seed_(seed) {}

void Report::add_input(std::string label, std::string_view content) {
  inputs_.emplace_back(std::move(label), sha256_hex(content));
}

void Report::check(std::string name, double defect, double tol, std::string note) {
  require(std::move(name), std::isfinite(defect) && defect <= tol, defect, tol, std::move(note));
}

void Report::require(std::string name, bool ok, double defect, double tol, std::string note) {
  records_.push_back({std::move(name), ok ? Status::Pass : Status::Fail, defect, tol, std::move(note)});
}

void Report::skip(std::string name, std::string reason) {
  records_.push_back({std::move(name), Status::Skip, 0.0, 0.0, std::move(reason)});
}

void Report::info(std::string name, double value, std::string note) {
  records_.push_back({std::move(name), Status::Info, value, 0.0, std::move(note)});
}

bool Report::passed() const {
  for (const auto& r : records_)
    if (r.status == Status::Fail) return false;
  return true;
}

void Report::write(std::ostream& os, double elapsed_ms) const {
  char buf[64];
  os << "command: " << command_ << "\n";
  for (const auto& [label, digest] : inputs_) os << "input: " << label << " sha256=" << digest << "\n";
  std::snprintf(buf, sizeof buf, "%.3g", tolerance_);
  os << "tolerance: " << buf << "\n";
  os << "seed: " << seed_ << "\n";
  std::size_t failed = 0, skipped = 0;
  for (const auto& r : records_) {
    os << to_string(r.status) << "  " << r.name;
    if (r.status == Status::Info) {
      std::snprintf(buf, sizeof buf, "%.17g", r.defect);
      os << "  value=" << buf;
    } else if (r.status != Status::Skip) {
      std::snprintf(buf, sizeof buf, "  defect=%.3e  tol=%.3g", r.defect, r.tolerance);
      os << buf;
    }
    if (!r.note.empty()) os << "  " << r.note;
    os << "\n";
    failed += r.status == Status::Fail;
    skipped += r.status == Status::Skip;
  }
  std::snprintf(buf, sizeof buf, "%.3f", elapsed_ms);
  os << "elapsed_ms: " << buf << "\n";
  os << "result: " << (failed == 0 ? "PASS" : "FAIL") << " (" << records_.size() << " records, " << failed
     << " failed, " << skipped << " skipped)\n";
}

void write_table(const std::filesystem::path& dir, const Table& table) {
  std::ofstream os(dir / (table.name + ".csv"), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (dir / (table.name + ".csv")).string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

}  // namespace ncspace::cli
