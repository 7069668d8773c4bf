#include "bpsv/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bpsv/error.hpp"

namespace bpsv {
namespace {

namespace fs = std::filesystem;

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create directory " + parent.string());
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  ensure_parent(path);
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write to " + path + " failed");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

std::vector<NamedField> named(const PhysicalFields& ph) {
  return {{"u", ph.u},         {"v", ph.v},     {"kappa", ph.kappa},
          {"phi_abs", ph.phi_abs}, {"a12", ph.a12}, {"b12", ph.b12}};
}

}  // namespace

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  finish(out, path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump_fields_csv(const std::string& path, const Discretization& disc, const PhysicalFields& ph) {
  std::ofstream out = open_out(path);
  out << "x,y,u,v,kappa,phi_abs,a12,b12\n";
  for (std::size_t j = 0; j < disc.ny(); ++j)
    for (std::size_t i = 0; i < disc.nx(); ++i) {
      const Point x = disc.node(i, j);
      const std::size_t k = j * disc.nx() + i;
      out << num(x.x) << ',' << num(x.y) << ',' << num(ph.u[k]) << ',' << num(ph.v[k]) << ','
          << num(ph.kappa[k]) << ',' << num(ph.phi_abs[k]) << ',' << num(ph.a12[k]) << ','
          << num(ph.b12[k]) << '\n';
    }
  finish(out, path);
}

void dump_fields_binary(const std::string& path, const Discretization& disc,
                        const PhysicalFields& ph, const std::string& config_hash) {
  const auto fields = named(ph);
  {
    std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
    for (const NamedField& f : fields)
      for (double v : f.field.values()) {
        const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
        out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
      }
    finish(out, path);
  }
  nlohmann::json meta;
  meta["format"] = "float64-le";
  meta["order"] = "row-major, x fastest, fields concatenated";
  meta["nx"] = disc.nx();
  meta["ny"] = disc.ny();
  meta["geometry"] = disc.geometry() == Geometry::Torus ? "torus" : "plane";
  const Point p0 = disc.node(0, 0);
  const Point p1 = disc.node(1, 1);
  meta["origin"] = {p0.x, p0.y};
  meta["spacing"] = {p1.x - p0.x, p1.y - p0.y};
  meta["fields"] = nlohmann::json::array();
  for (const NamedField& f : fields) meta["fields"].push_back(f.name);
  meta["config_hash"] = config_hash;
  write_text_file(path + ".json", meta.dump(2) + "\n");
}

BinaryDump read_fields_binary(const std::string& path) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text_file(path + ".json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::IoError, "bad sidecar " + path + ".json: " + e.what());
  }
  BinaryDump d;
  d.nx = meta.at("nx").get<std::size_t>();
  d.ny = meta.at("ny").get<std::size_t>();
  d.config_hash = meta.value("config_hash", "");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  for (const auto& name : meta.at("fields")) {
    NamedField f{name.get<std::string>(), ScalarField(d.nx, d.ny)};
    for (double& v : f.field.values()) {
      std::uint64_t bits = 0;
      in.read(reinterpret_cast<char*>(&bits), sizeof bits);
      if (!in) throw Error(ErrorKind::IoError, path + " is shorter than its sidecar says");
      v = std::bit_cast<double>(to_le(bits));
    }
    d.fields.push_back(std::move(f));
  }
  return d;
}

void write_radial_profile_csv(const std::string& path, const std::vector<RadialBin>& bins) {
  std::ofstream out = open_out(path);
  out << "r,mean_u2v2,mean_grad2\n";
  for (const RadialBin& b : bins)
    out << num(b.r) << ',' << num(b.mean_u2v2) << ',' << num(b.mean_grad2) << '\n';
  finish(out, path);
}

void write_sweep_boundary_csv(const std::string& path, const std::vector<BoundaryRow>& rows) {
  std::ofstream out = open_out(path);
  out << "index,p1,p2,lambda_area,first_line,second_line,margin,solvable\n";
  for (const BoundaryRow& r : rows)
    out << r.index << ',' << num(r.p1) << ',' << num(r.p2) << ',' << num(r.lambda_area) << ','
        << num(r.first_line) << ',' << num(r.second_line) << ',' << num(r.margin) << ','
        << (r.solvable ? 1 : 0) << '\n';
  finish(out, path);
}

}  // namespace bpsv
