#pragma once

// Result rows and the CSV format shared by every experiment: one line
// "# {json metadata}", the header row, then data rows.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ppe::harness {

inline constexpr const char* kCsvHeader = "experiment,N,R,S,E,gamma_eff,p_eff,t,observable,mean,stderr,samples";

struct ResultRecord {
  std::string experiment;
  int n = 0;
  int r = 0, s = 0, e = 0;
  double gamma_eff = 0.0;
  double p_eff = 0.0;
  int t = -1;  // -1 for static observables
  std::string observable;
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

// gamma_eff and p_eff are taken from the integer sizes.
ResultRecord make_record(std::string experiment, int r, int s, int e, int t, std::string observable, double mean,
                         double std_error, int samples);

std::string format_row(const ResultRecord& rec);

void write_csv(std::ostream& out, const nlohmann::json& metadata, const std::vector<ResultRecord>& rows);

struct CsvDocument {
  nlohmann::json metadata;
  std::vector<ResultRecord> rows;
};

// Inverse of write_csv; throws std::runtime_error on a malformed document.
CsvDocument read_csv(std::istream& in);

}  // namespace ppe::harness
