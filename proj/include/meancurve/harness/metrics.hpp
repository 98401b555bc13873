#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace meancurve {

struct MetricsRow {
  std::string experiment;
  std::string config_hash;
  double t = 0.0;
  std::string observable;
  double value = 0.0;
  /// NaN for deterministic observables (written as an empty field).
  double stderr_ = 0.0;
  std::uint64_t seed = 0;

  /// Field-wise, with NaN equal to NaN.
  bool operator==(const MetricsRow& o) const;
};

/// Append-only collector that stamps every row with one experiment id, hash and seed.
class MetricsSink {
 public:
  MetricsSink(std::string experiment, std::string config_hash, std::uint64_t seed)
      : experiment_(std::move(experiment)), hash_(std::move(config_hash)), seed_(seed) {}

  void add(double t, std::string observable, double value, double stderr_value);
  void add(double t, std::string observable, double value);

  const std::vector<MetricsRow>& rows() const noexcept { return rows_; }
  const std::string& config_hash() const noexcept { return hash_; }
  /// Last value recorded for `observable`; throws std::out_of_range if absent.
  double last(const std::string& observable) const;

 private:
  std::string experiment_, hash_;
  std::uint64_t seed_;
  std::vector<MetricsRow> rows_;
};

/// CSV with a `# ...` comment line carrying the config hash and a timestamp,
/// then `experiment,config_hash,t,observable,value,stderr,seed`.
/// Throws Error if a row carries a hash other than `config_hash`.
void write_metrics(const std::vector<MetricsRow>& rows, const std::string& config_hash,
                   const std::filesystem::path& path);

struct MetricsFile {
  std::string config_hash;
  std::vector<MetricsRow> rows;
};

MetricsFile read_metrics(const std::filesystem::path& path);

}  // namespace meancurve
