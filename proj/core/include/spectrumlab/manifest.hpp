#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "spectrumlab/scenario.hpp"

namespace spectrumlab {

// FNV-1a over the canonical scenario JSON, hex encoded.
std::string config_hash(const ScenarioConfig& cfg);

struct RunManifest {
  std::string run_id;
  std::string config_hash;
  std::string algorithm;
  std::vector<std::uint64_t> seeds;
  int episodes = 0;
  std::string out_dir;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;

  std::string to_json() const;
};

std::string iso8601_now();
std::string make_run_id(const std::string& algorithm, const std::string& hash);

// Creates the directory (recursively) and writes manifest.json inside it.
void write_manifest(const RunManifest& m);

// Worker-count resolution: SPECTRUM_LAB_THREADS when set, otherwise the
// hardware concurrency.
int worker_threads();

// Small CSV writer; floats are printed with nine significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header);
  ~CsvWriter();
  void row(const std::string& line);
  const std::string& path() const { return path_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string path_;
};

std::string csv_double(double v);

}  // namespace spectrumlab
