#include "ppe/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ppe::harness {

ResultRecord make_record(std::string experiment, int r, int s, int e, int t, std::string observable, double mean,
                         double std_error, int samples) {
  ResultRecord rec;
  rec.experiment = std::move(experiment);
  rec.n = r + s + e;
  rec.r = r;
  rec.s = s;
  rec.e = e;
  rec.gamma_eff = rec.n > 0 ? double(r) / rec.n : 0.0;
  rec.p_eff = rec.n > 0 ? double(s) / rec.n : 0.0;
  rec.t = t;
  rec.observable = std::move(observable);
  rec.mean = mean;
  rec.std_error = std_error;
  rec.samples = samples;
  return rec;
}

std::string format_row(const ResultRecord& rec) {
  // {} prints the shortest representation that round-trips
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", rec.experiment, rec.n, rec.r, rec.s, rec.e, rec.gamma_eff,
                     rec.p_eff, rec.t, rec.observable, rec.mean, rec.std_error, rec.samples);
}

void write_csv(std::ostream& out, const nlohmann::json& metadata, const std::vector<ResultRecord>& rows) {
  out << "# " << metadata.dump() << '\n' << kCsvHeader << '\n';
  for (const auto& rec : rows) out << format_row(rec) << '\n';
}

CsvDocument read_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw std::runtime_error("missing '# ' metadata line");
  doc.metadata = nlohmann::json::parse(line.substr(2));
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("unexpected CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 12) throw std::runtime_error(fmt::format("row has {} fields: {}", f.size(), line));
    ResultRecord rec;
    rec.experiment = f[0];
    rec.n = std::stoi(f[1]);
    rec.r = std::stoi(f[2]);
    rec.s = std::stoi(f[3]);
    rec.e = std::stoi(f[4]);
    rec.gamma_eff = std::stod(f[5]);
    rec.p_eff = std::stod(f[6]);
    rec.t = std::stoi(f[7]);
    rec.observable = f[8];
    rec.mean = std::stod(f[9]);
    rec.std_error = std::stod(f[10]);
    rec.samples = std::stoi(f[11]);
    doc.rows.push_back(std::move(rec));
  }
  return doc;
}

}  // namespace ppe::harness
