#include "covmeas/record.hpp"

#include <charconv>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace covmeas {

using detail::Json;

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Json record_to_json(const ResultRecord& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["timestamp"] = r.timestamp;
  j["config"] = detail::config_to_json(r.result.config);
  Json res;
  res["trials"] = r.result.trials;
  res["wall_seconds"] = r.result.wall_seconds;
  res["reference_fidelity"] = optional_number(r.result.reference_fidelity);
  res["reference_per_axis_infidelity"] = optional_number(r.result.reference_per_axis_infidelity);
  Json est = Json::array();
  for (const auto& e : r.result.estimates)
    est.push_back({{"name", e.name}, {"mean", e.mean}, {"std_error", e.std_error}});
  res["estimates"] = std::move(est);
  j["result"] = std::move(res);
  return j;
}

ResultRecord record_from_json(const Json& j) {
  ResultRecord r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kRecordSchemaVersion)
      throw DomainError("unsupported schema version " + std::to_string(r.schema_version));
    r.timestamp = j.at("timestamp").get<std::string>();
    r.result.config = detail::config_from_json(j.at("config"));
    const Json& res = j.at("result");
    r.result.trials = res.at("trials").get<std::int64_t>();
    r.result.wall_seconds = res.at("wall_seconds").get<double>();
    r.result.reference_fidelity = read_optional(res, "reference_fidelity");
    r.result.reference_per_axis_infidelity = read_optional(res, "reference_per_axis_infidelity");
    for (const auto& e : res.at("estimates"))
      r.result.estimates.push_back(
          {e.at("name").get<std::string>(), e.at("mean").get<double>(), e.at("std_error").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed record: ") + e.what());
  }
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_versions(const std::vector<ResultRecord>& records) {
  if (records.empty()) throw DomainError("no records");
  for (const auto& r : records)
    if (r.schema_version != records.front().schema_version) throw DomainError("mixed schema versions");
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ResultRecord make_record(const RunResult& result) { return {kRecordSchemaVersion, utc_timestamp(), result}; }

std::string serialize_record(const ResultRecord& record) { return record_to_json(record).dump(2) + "\n"; }

ResultRecord parse_record(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("malformed record: ") + e.what());
  }
  return record_from_json(j);
}

void write_record(const std::string& path, const ResultRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize_record(record);
  if (!out) throw IoError("write failed for '" + path + "'");
}

ResultRecord read_record(const std::string& path) { return parse_record(read_file(path)); }

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
  check_versions(records);
  std::ostringstream os;
  os << "protocol,N,encoding,decoder,trials,seed,fidelity,stderr,per_axis_infidelity,n_sq_infidelity\n";
  for (const auto& r : records) {
    const RunResult& res = r.result;
    const ProtocolSpec& p = res.config.protocol;
    const Estimate& f = res.estimate("fidelity");
    const Estimate* axis = res.find("per_axis_infidelity");
    const double n = p.num_spins;
    os << to_string(p.kind) << ',' << p.num_spins << ',' << to_string(p.encoding) << ',' << to_string(p.decoder)
       << ',' << res.trials << ',' << res.config.seed << ',' << format_number(f.mean) << ','
       << format_number(f.std_error) << ',' << (axis ? format_number(axis->mean) : std::string()) << ','
       << format_number(n * n * (1.0 - f.mean)) << '\n';
  }
  return os.str();
}

std::string records_to_json(const std::vector<ResultRecord>& records) {
  check_versions(records);
  Json arr = Json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return arr.dump(2) + "\n";
}

}  // namespace covmeas
