#include "spectrumlab/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "spectrumlab/errors.hpp"

namespace spectrumlab {

std::string config_hash(const ScenarioConfig& cfg) {
  std::string canon = scenario_canonical_json(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string iso8601_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string make_run_id(const std::string& algorithm, const std::string& hash) {
  return algorithm + "-" + hash.substr(0, 8);
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["run_id"] = run_id;
  j["config_hash"] = config_hash;
  j["algorithm"] = algorithm;
  j["seeds"] = seeds;
  j["episodes"] = episodes;
  j["out_dir"] = out_dir;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  return j.dump(2);
}

void write_manifest(const RunManifest& m) {
  std::filesystem::create_directories(m.out_dir);
  std::ofstream out(m.out_dir + "/manifest.json");
  if (!out) throw ConfigError("cannot write manifest in " + m.out_dir);
  out << m.to_json() << "\n";
}

int worker_threads() {
  if (const char* env = std::getenv("SPECTRUM_LAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : impl_(new Impl), path_(path) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  impl_->out.open(path_);
  if (!impl_->out) throw ConfigError("cannot open CSV for writing: " + path_);
  impl_->out << header << "\n";
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(const std::string& line) { impl_->out << line << "\n"; }

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace spectrumlab
