#include "capillary/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "capillary/errors.hpp"

namespace capillary {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(const ScalarField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  const CapDomain& d = f.domain();
  out << "rho,phi,value\n";
  for (int i = 0; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi(); ++j)
      out << format_full(d.grid.rho[i]) << ',' << format_full(d.grid.phi[j]) << ','
          << format_full(f.at(i, j)) << '\n';
  if (!out) throw Error("write failed: " + path);
}

ScalarField read_field_csv(DomainPtr domain, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  const CapDomain& d = *domain;
  ScalarField f(domain, 0.0);

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  ++line_no;

  for (int i = 0; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi(); ++j) {
      if (!std::getline(in, line))
        throw Error(path + ": unexpected end of file at line " +
                    std::to_string(line_no + 1));
      ++line_no;
      double rho, phi, value;
      char c1, c2;
      std::istringstream row(line);
      if (!(row >> rho >> c1 >> phi >> c2 >> value) || c1 != ',' || c2 != ',')
        throw Error(path + ": malformed row at line " + std::to_string(line_no));
      if (std::abs(rho - d.grid.rho[i]) > 1e-9 || std::abs(phi - d.grid.phi[j]) > 1e-9)
        throw ParameterMismatchError(path + ": node coordinates at line " +
                                     std::to_string(line_no) +
                                     " do not match the target grid");
      f.at(i, j) = value;
    }
  if (std::getline(in, line) && !line.empty())
    throw Error(path + ": trailing data at line " + std::to_string(line_no + 1));
  return f;
}

void write_profile_csv(const RadialProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << "rho,s\n";
  for (size_t i = 0; i < profile.rho.size(); ++i)
    out << format_full(profile.rho[i]) << ',' << format_full(profile.s[i]) << '\n';
  if (!out) throw Error("write failed: " + path);
}

void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  for (const auto& [key, value] : entries) out << key << ": " << value << '\n';
  if (!out) throw Error("write failed: " + path);
}

} // namespace capillary
