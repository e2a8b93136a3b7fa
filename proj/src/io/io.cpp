#include "gibc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "gibc/errors.hpp"

namespace gibc::io {

namespace fs = std::filesystem;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string CsvTable::str() const {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        s += c;
        continue;
      }
      s += '"';
      for (char ch : c) {
        if (ch == '"') s += '"';
        s += ch;
      }
      s += '"';
    }
    s += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

namespace {

void dump_into(const json& j, std::string& out, int indent) {
  const std::string pad(indent + 2, ' '), close(indent, ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no inf or nan.
      out += std::isfinite(x) ? format_double(x) : json(format_double(x)).dump();
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      // Short numeric arrays stay on one line: pairs, rows of numbers.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!flat) out += pad;
        dump_into(j[i], out, indent + 2);
        if (i + 1 < j.size()) out += flat ? ", " : ",\n";
      }
      out += flat ? "]" : "\n" + close + "]";
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad + json(it.key()).dump() + ": ";
        dump_into(it.value(), out, indent + 2);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += close + "}";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += '\n';
  return out;
}

json complex_json(linalg::cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const linalg::ComplexMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(complex_json(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

linalg::ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InvalidInput("matrix must be a non-empty array of rows");
  const std::size_t n = j.size(), m = j[0].size();
  linalg::ComplexMatrix a(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != m) throw InvalidInput("matrix rows differ in length");
    for (std::size_t c = 0; c < m; ++c) {
      const json& e = j[r][c];
      if (e.is_number())
        a(r, c) = e.get<double>();
      else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        a(r, c) = {e[0].get<double>(), e[1].get<double>()};
      else
        throw InvalidInput("matrix entries must be numbers or [re, im] pairs");
    }
  }
  return a;
}

CsvTable spectrum_csv(const SpectrumReport& r) {
  CsvTable t{{"re_lambda", "im_lambda", "residual", "mode_tag", "multiplicity"}, {}};
  for (const auto& e : r.values) {
    std::string tag = e.tag;
    if (e.artifact) tag = tag.empty() ? "quotient-artifact" : tag + ";quotient-artifact";
    t.add({format_double(e.lambda.real()), format_double(e.lambda.imag()), format_double(e.residual),
           tag, std::to_string(e.multiplicity)});
  }
  return t;
}

CsvTable gate_csv(const sobolev::CompactnessReport& r) {
  CsvTable t{{"N", "k", "sigma_k"}, {}};
  for (std::size_t i = 0; i < r.sections.size(); ++i)
    for (std::size_t k = 0; k < r.singular_profiles[i].size(); ++k)
      t.add({std::to_string(r.sections[i]), std::to_string(k + 1),
             format_double(r.singular_profiles[i][k])});
  return t;
}

json gate_json(const sobolev::CompactnessReport& r) {
  return {{"verdict", sobolev::to_string(r.verdict)},
          {"rule", r.rule},
          {"s", r.s},
          {"sections", r.sections},
          {"tail_indicator", r.tail_indicator},
          {"decay_rates", r.decay_rates},
          {"accretivity_defect", r.accretivity_defect},
          {"thresholds",
           {{"theta_c", r.thresholds.theta_c},
            {"theta_n", r.thresholds.theta_n},
            {"min_rate", r.thresholds.min_rate},
            {"monotone_slack", r.thresholds.monotone_slack}}}};
}

CsvTable energy_csv(const fem::EnergyTrace& tr) {
  CsvTable t{{"step", "time", "energy"}, {}};
  for (std::size_t k = 0; k < tr.energy.size(); ++k)
    t.add({std::to_string(k), format_double(tr.time[k]), format_double(tr.energy[k])});
  return t;
}

CsvTable convergence_csv(const fem::ConvergenceTable& ct) {
  CsvTable t{{"h", "dofs", "re_reference", "im_reference", "re_computed", "im_computed", "error",
              "matched", "observed_order"},
             {}};
  for (const auto& r : ct.rows)
    t.add({format_double(r.h), std::to_string(r.dofs), format_double(r.reference.real()),
           format_double(r.reference.imag()), format_double(r.computed.real()),
           format_double(r.computed.imag()), format_double(r.error), r.matched ? "1" : "0",
           format_double(r.observed_order)});
  return t;
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(parent, ec)) throw IoFailure("output directory does not exist: " + parent.string());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoFailure("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp, ec);
      throw IoFailure("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoFailure("cannot rename into " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace gibc::io
