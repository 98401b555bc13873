#include "meancurve/harness/metrics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "meancurve/core/errors.hpp"

namespace meancurve {

bool MetricsRow::operator==(const MetricsRow& o) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  return experiment == o.experiment && config_hash == o.config_hash && same(t, o.t) && observable == o.observable &&
         same(value, o.value) && same(stderr_, o.stderr_) && seed == o.seed;
}

void MetricsSink::add(double t, std::string observable, double value, double stderr_value) {
  rows_.push_back({experiment_, hash_, t, std::move(observable), value, stderr_value, seed_});
}

void MetricsSink::add(double t, std::string observable, double value) {
  add(t, std::move(observable), value, std::numeric_limits<double>::quiet_NaN());
}

double MetricsSink::last(const std::string& observable) const {
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it)
    if (it->observable == observable) return it->value;
  throw std::out_of_range("no metric '" + observable + "'");
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_metrics(const std::vector<MetricsRow>& rows, const std::string& config_hash,
                   const std::filesystem::path& path) {
  for (const auto& r : rows)
    if (r.config_hash != config_hash) throw Error("metrics row '" + r.observable + "' has a foreign config hash");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# meancurve metrics config_hash=" << config_hash << " written=" << timestamp() << '\n';
  out << "experiment,config_hash,t,observable,value,stderr,seed\n";
  for (const auto& r : rows)
    out << r.experiment << ',' << r.config_hash << ',' << format_double(r.t) << ',' << r.observable << ','
        << format_double(r.value) << ',' << format_double(r.stderr_) << ',' << r.seed << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

MetricsFile read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  MetricsFile file;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("config_hash=");
      if (pos != std::string::npos) file.config_hash = line.substr(pos + 12, 16);
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 7) throw Error("malformed metrics row: " + line);
    MetricsRow r;
    r.experiment = f[0];
    r.config_hash = f[1];
    r.t = std::stod(f[2]);
    r.observable = f[3];
    r.value = f[4].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[4]);
    r.stderr_ = f[5].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[5]);
    r.seed = std::stoull(f[6]);
    file.rows.push_back(std::move(r));
  }
  return file;
}

}  // namespace meancurve
