#pragma once

#include <string>
#include <vector>

#include "atlas/saddle.hpp"

namespace atlas::io {

inline constexpr int kGraphFormatVersion = 1;

// RE+IMi, RE, IMi, i, -i with optional sign and exponent; "3+0.5i", "-1e-3i".
cplx parse_complex(const std::string& s);
std::string format_complex(cplx z, int digits = 17);
std::string format_real(double x, int digits = 17);
Domain parse_domain(const std::string& s);  // x0,x1,y0,y1
std::vector<double> parse_beta(const std::string& s);

std::string graph_to_json(const StokesGraph& g);
StokesGraph graph_from_json(const std::string& text);

// S-table: label,z,S12,...,S34.  sigma-table: label,z,sigma1..sigma4.
std::string stokes_table_csv(const std::vector<RegionRow>& rows);
std::string sigma_table_csv(const std::vector<RegionRow>& rows, const std::vector<double>* beta = nullptr);

enum class Filter { all, active, relevant };
std::string render_svg(const StokesGraph& g, const std::vector<CurvePiece>& pieces, Filter filter);

std::string read_file(const std::string& path);
// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace atlas::io
