#pragma once

// Report emitters. Every float is printed with 17 significant digits in the
// C locale, rows end in '\n', and files are written to a temporary sibling
// and renamed into place.

#include <string>
#include <vector>

#include <json.hpp>

#include "gibc/fem2d.hpp"
#include "gibc/sobolev.hpp"
#include "gibc/spectrum.hpp"

namespace gibc::io {

using nlohmann::json;

std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string str() const;
};

// Serializes with format_double for floating values, two-space indent.
std::string dump_json(const json& j);

json complex_json(linalg::cplx z);
json matrix_json(const linalg::ComplexMatrix& a);  // rows of [re, im]
// Accepts rows of [re, im] pairs or of plain reals. Throws InvalidInput.
linalg::ComplexMatrix matrix_from_json(const json& j);

CsvTable spectrum_csv(const SpectrumReport& r);
CsvTable gate_csv(const sobolev::CompactnessReport& r);
json gate_json(const sobolev::CompactnessReport& r);
CsvTable energy_csv(const fem::EnergyTrace& t);
CsvTable convergence_csv(const fem::ConvergenceTable& t);

// Throws IoFailure when the parent directory is missing or the write fails.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace gibc::io
