// SPDX-License-Identifier: MIT
#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ence/states.hpp"

namespace ence {

// Density-matrix text format:
//   line 1:  dims: d1 d2 ... dm
//   then D lines (D = Π dims) of 2*D whitespace-separated floats,
//   the row's entries as real imag pairs, row-major.
// Readers accept scientific notation and free whitespace; writers emit 17
// significant digits so doubles round-trip exactly.

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

inline void write_density(std::ostream& out, const DensityMatrix& rho) {
  out << "dims:";
  for (int d : rho.dims) out << ' ' << d;
  out << '\n';
  const long n = rho.matrix.rows();
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < n; ++c) {
      if (c) out << ' ';
      out << detail::format_double(rho.matrix(r, c).real()) << ' '
          << detail::format_double(rho.matrix(r, c).imag());
    }
    out << '\n';
  }
}

inline void write_density_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw IoError("IoError: cannot open '" + path + "' for writing");
  write_density(out, rho);
  out.flush();
  if (!out) throw IoError("IoError: write to '" + path + "' failed");
}

// Parses and fully validates; parse-level problems are reported as
// ValidationError ("ParseError: ...") since the content fails to describe
// any state, while unreadable streams/paths are IoError.
inline DensityMatrix read_density(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw ValidationError("ParseError: missing 'dims:' header line");
  std::istringstream hs(header);
  std::string tag;
  hs >> tag;
  if (tag != "dims:")
    throw ValidationError("ParseError: first line must start with 'dims:', got '" +
                          tag + "'");
  std::vector<int> dims;
  long dim_val = 0;
  while (hs >> dim_val) {
    if (dim_val < 1 || dim_val > 1 << 20)
      throw ValidationError("ParseError: bad subsystem dimension " +
                            std::to_string(dim_val));
    dims.push_back(static_cast<int>(dim_val));
  }
  if (!hs.eof())
    throw ValidationError("ParseError: non-integer token in dims header");
  if (dims.empty())
    throw ValidationError("ParseError: dims header lists no dimensions");

  long d = 1;
  for (int k : dims) {
    d *= k;
    if (d > 1 << 20)
      throw ValidationError("ParseError: total dimension too large");
  }

  ComplexMatrix m(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw ValidationError("ParseError: expected " + std::to_string(2 * d * d) +
                              " floats after the header, stopped at entry (" +
                              std::to_string(r) + "," + std::to_string(c) + ")");
      m(r, c) = std::complex<double>(re, im);
    }
  std::string extra;
  if (in >> extra)
    throw ValidationError("ParseError: trailing data '" + extra + "' after matrix");

  return validate(dims, m);
}

inline DensityMatrix read_density_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("IoError: cannot open '" + path + "' for reading");
  return read_density(in);
}

} // namespace ence
