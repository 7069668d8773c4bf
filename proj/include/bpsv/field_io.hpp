#pragma once

#include <string>
#include <vector>

#include "bpsv/diagnostics.hpp"

namespace bpsv {

// CSV with header x,y,u,v,kappa,phi_abs,a12,b12, one row per node in storage
// order, 17 significant digits.
void dump_fields_csv(const std::string& path, const Discretization& disc, const PhysicalFields& ph);

struct NamedField {
  std::string name;
  ScalarField field;
};

// Little-endian float64, fields stored one after another, each row-major with
// x fastest. Metadata goes to `path + ".json"`.
void dump_fields_binary(const std::string& path, const Discretization& disc,
                        const PhysicalFields& ph, const std::string& config_hash);

struct BinaryDump {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::string config_hash;
  std::vector<NamedField> fields;
};
BinaryDump read_fields_binary(const std::string& path);

void write_radial_profile_csv(const std::string& path, const std::vector<RadialBin>& bins);

struct BoundaryRow {
  std::size_t index = 0;
  double p1 = 0.0;
  double p2 = 0.0;
  double lambda_area = 0.0;
  double first_line = 0.0;   // 2 pi (m + n)
  double second_line = 0.0;  // pi (3m + n)
  double margin = 0.0;
  bool solvable = false;
};
void write_sweep_boundary_csv(const std::string& path, const std::vector<BoundaryRow>& rows);

// Creates parent directories; throws IoError on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace bpsv
