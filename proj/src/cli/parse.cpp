#include <charconv>
#include <sstream>

#include "gibc/cli.hpp"
#include "gibc/errors.hpp"
#include "gibc/io.hpp"

namespace gibc::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidInput("cannot parse " + what + " '" + raw + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// Non-empty, non-comment lines split on whitespace and commas.
std::vector<std::vector<std::string>> table_lines(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find('#'); c != std::string::npos) line.resize(c);
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    std::vector<std::string> cells;
    for (std::string w; ls >> w;) cells.push_back(w);
    if (!cells.empty()) out.push_back(std::move(cells));
  }
  return out;
}

}  // namespace

linalg::cplx parse_complex(const std::string& raw) {
  std::string s = trim(raw);
  if (starts_with(s, "const:")) s = s.substr(6);
  const auto parts = split(s, ',');
  if (parts.size() == 1) return parse_double(parts[0], "number");
  if (parts.size() == 2) return {parse_double(parts[0], "real part"), parse_double(parts[1], "imaginary part")};
  throw InvalidInput("expected 're' or 're,im', got '" + raw + "'");
}

std::vector<std::size_t> parse_schedule(const std::string& spec) {
  std::vector<std::size_t> out;
  for (const auto& p : split(spec, ',')) {
    const double x = parse_double(p, "schedule entry");
    if (x < 1 || x != std::floor(x)) throw InvalidInput("schedule entries must be positive integers");
    const auto n = static_cast<std::size_t>(x);
    if (!out.empty() && n <= out.back()) throw InvalidInput("schedule must be strictly increasing");
    out.push_back(n);
  }
  if (out.empty()) throw InvalidInput("empty schedule");
  return out;
}

sobolev::ImpedanceCoefficient parse_circle_zeta(const std::string& raw) {
  const std::string spec = trim(raw);
  if (starts_with(spec, "power:")) {
    double a = -1.0;
    linalg::cplx c{1.0, 0.0};
    for (const auto& kv : split(spec.substr(6), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InvalidInput("power spec expects key=value, got '" + kv + "'");
      const std::string key = trim(kv.substr(0, eq)), val = kv.substr(eq + 1);
      if (key == "a")
        a = parse_double(val, "exponent");
      else if (key == "c")
        c = {parse_double(val, "strength"), c.imag()};
      else if (key == "ci")
        c = {c.real(), parse_double(val, "strength")};
      else
        throw InvalidInput("unknown power spec key '" + key + "'");
    }
    if (a < 0.0) throw InvalidInput("power spec needs a=<exponent>");
    auto z = sobolev::ImpedanceCoefficient::power(a, c);
    z.validate();
    return z;
  }
  if (starts_with(spec, "file:")) {
    std::vector<linalg::cplx> samples;
    for (const auto& cells : table_lines(io::read_file(spec.substr(5)))) {
      if (cells.size() > 2) throw InvalidInput("coefficient file lines hold 're' or 're im'");
      samples.emplace_back(parse_double(cells[0], "sample"),
                           cells.size() == 2 ? parse_double(cells[1], "sample") : 0.0);
    }
    if (samples.empty()) throw InvalidInput("coefficient file has no samples");
    auto z = sobolev::ImpedanceCoefficient::sampled(std::move(samples));
    z.label = spec;
    return z;
  }
  return sobolev::ImpedanceCoefficient::constant(parse_complex(spec));
}

fem::BoundaryZeta parse_mesh_zeta(const std::string& raw, const fem::Mesh& mesh,
                                  const std::vector<std::string>& overrides) {
  const std::string spec = trim(raw);
  fem::BoundaryZeta z;
  if (starts_with(spec, "power:"))
    throw InvalidInput("power-singular coefficients are defined on the circle only");
  if (starts_with(spec, "file:")) {
    for (const auto& cells : table_lines(io::read_file(spec.substr(5)))) {
      if (cells.size() < 2 || cells.size() > 3)
        throw InvalidInput("boundary coefficient lines hold 'label re [im]'");
      const double label = parse_double(cells[0], "label");
      z.constant[static_cast<int>(label)] = {parse_double(cells[1], "coefficient"),
                                             cells.size() == 3 ? parse_double(cells[2], "coefficient") : 0.0};
    }
  } else {
    z = fem::BoundaryZeta::uniform(mesh, parse_complex(spec));
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw InvalidInput("edge override must be label=value, got '" + o + "'");
    z.constant[static_cast<int>(parse_double(o.substr(0, eq), "label"))] = parse_complex(o.substr(eq + 1));
  }
  for (int l : mesh.labels())
    if (!z.defined(l)) throw InvalidInput("no impedance given for boundary label " + std::to_string(l));
  return z;
}

}  // namespace gibc::cli
