#include "meancurve/particle/snapshot_io.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <json.hpp>

namespace meancurve {
namespace {

static_assert(std::endian::native == std::endian::little, "binary snapshots assume a little-endian host");

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

}  // namespace

void write_snapshot_csv(const Configuration& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const auto& lat = config.lattice;
  out << "t";
  for (int i = 0; i < lat.dim(); ++i) out << ",x" << (i + 1);
  out << ",eta\n";
  out << std::setprecision(17);
  for (std::size_t x = 0; x < lat.size(); ++x) {
    const auto c = lat.coords(x);
    out << config.time;
    for (int i = 0; i < lat.dim(); ++i) out << ',' << c[i];
    out << ',' << config.eta[x] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_snapshot_binary(const Configuration& config, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(config.eta.data()),
              static_cast<std::streamsize>(config.eta.size() * sizeof(std::int32_t)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  nlohmann::json meta{{"d", config.lattice.dim()}, {"N", config.lattice.side()}, {"t", config.time}};
  std::ofstream side(sidecar(path));
  side << std::setprecision(17) << meta.dump(2) << '\n';
  if (!side) throw std::runtime_error("write failed: " + sidecar(path).string());
}

Configuration read_snapshot_binary(const std::filesystem::path& path) {
  std::ifstream side(sidecar(path));
  if (!side) throw std::runtime_error("missing sidecar " + sidecar(path).string());
  const auto meta = nlohmann::json::parse(side);
  const LatticeTorus lat(meta.at("d").get<int>(), meta.at("N").get<int>());
  std::vector<std::int32_t> eta(lat.size());
  std::ifstream in(path, std::ios::binary);
  in.read(reinterpret_cast<char*>(eta.data()), static_cast<std::streamsize>(eta.size() * sizeof(std::int32_t)));
  if (!in || in.peek() != std::char_traits<char>::eof())
    throw std::runtime_error("snapshot size does not match sidecar: " + path.string());
  return Configuration(lat, std::move(eta), meta.at("t").get<double>());
}

}  // namespace meancurve
