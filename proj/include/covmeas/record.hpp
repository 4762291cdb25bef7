#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "covmeas/harness.hpp"

namespace covmeas {

inline constexpr int kRecordSchemaVersion = 1;

struct ResultRecord {
  int schema_version = kRecordSchemaVersion;
  std::string timestamp;  // UTC, ISO 8601
  RunResult result;       // carries the config echo
};

std::string utc_timestamp();
ResultRecord make_record(const RunResult& result);

/// Pretty JSON with a trailing newline; parse(serialize(r)) reserializes to
/// the same bytes.
std::string serialize_record(const ResultRecord& record);
ResultRecord parse_record(std::string_view text);

void write_record(const std::string& path, const ResultRecord& record);
ResultRecord read_record(const std::string& path);

/// Throws DomainError on an empty list or mixed schema versions.
std::string records_to_csv(const std::vector<ResultRecord>& records);
std::string records_to_json(const std::vector<ResultRecord>& records);

/// %.12g with '.' as decimal separator regardless of locale.
std::string format_number(double v);

}  // namespace covmeas
