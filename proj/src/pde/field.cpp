#include "meancurve/pde/field.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <json.hpp>

namespace meancurve {

DensityField::DensityField(const LatticeTorus& lat, std::vector<double> values, double time)
    : lattice(lat), u(std::move(values)), t(time) {
  if (u.size() != lattice.size()) throw std::invalid_argument("DensityField: size does not match lattice");
}

void DensityField::validate() const {
  for (std::size_t x = 0; x < u.size(); ++x)
    if (!std::isfinite(u[x]) || u[x] < 0.0)
      throw std::invalid_argument("DensityField: invalid value at site " + std::to_string(x));
}

double step_function_view(const DensityField& field, const Point& v) {
  const auto& lat = field.lattice;
  const int N = lat.side();
  Offset x{0, 0, 0};
  for (int i = 0; i < lat.dim(); ++i) {
    long k = static_cast<long>(std::floor(v[i] * N + 0.5)) % N;
    if (k < 0) k += N;
    x[i] = static_cast<int>(k);
  }
  return field.u[lat.index(x)];
}

void write_field_csv(const DensityField& field, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const auto& lat = field.lattice;
  out << "t";
  for (int i = 0; i < lat.dim(); ++i) out << ",x" << (i + 1);
  out << ",u\n" << std::setprecision(17);
  for (std::size_t x = 0; x < lat.size(); ++x) {
    const auto c = lat.coords(x);
    out << field.t;
    for (int i = 0; i < lat.dim(); ++i) out << ',' << c[i];
    out << ',' << field.u[x] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_field_binary(const DensityField& field, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(field.u.data()), static_cast<std::streamsize>(field.u.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  auto side = path;
  side += ".json";
  std::ofstream meta(side);
  meta << std::setprecision(17)
       << nlohmann::json{{"d", field.lattice.dim()}, {"N", field.lattice.side()}, {"t", field.t}}.dump(2) << '\n';
}

DensityField read_field_binary(const std::filesystem::path& path) {
  auto side = path;
  side += ".json";
  std::ifstream meta_in(side);
  if (!meta_in) throw std::runtime_error("missing sidecar " + side.string());
  const auto meta = nlohmann::json::parse(meta_in);
  DensityField field(LatticeTorus(meta.at("d").get<int>(), meta.at("N").get<int>()));
  field.t = meta.at("t").get<double>();
  std::ifstream in(path, std::ios::binary);
  in.read(reinterpret_cast<char*>(field.u.data()), static_cast<std::streamsize>(field.u.size() * sizeof(double)));
  if (!in || in.peek() != std::char_traits<char>::eof())
    throw std::runtime_error("field size does not match sidecar: " + path.string());
  return field;
}

}  // namespace meancurve
