#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prlqual/asset.hpp"
#include "prlqual/gating.hpp"
#include "prlqual/paths.hpp"
#include "prlqual/sha256.hpp"
#include "prlqual/timeutil.hpp"

namespace prlqual {

inline constexpr std::string_view kRegistryDirName = "registry";
inline constexpr std::string_view kRegistryFileName = "records.jsonl";
inline constexpr std::string_view kRegistryLockName = ".lock";
inline constexpr std::string_view kGenesisHash =
    "0000000000000000000000000000000000000000000000000000000000000000";

// ---------------------------------------------------------------------------
// Records. Each qualification is chained to its predecessor: record_hash is
// the SHA-256 of the record's canonical serialization without record_hash,
// and the next record's prev_hash must equal it.
// ---------------------------------------------------------------------------

struct RegistryRecord {
  std::int64_t record_seq = 0;
  std::string recorded_at;  // ISO 8601 instant
  std::string asset_id;
  std::string version;
  AssetFingerprint fingerprint;
  QualificationResult result;
  std::string profile_id;
  std::string prev_hash;    // 64 zeros for the first record
  std::string record_hash;

  friend bool operator==(const RegistryRecord&, const RegistryRecord&) = default;
};

struct RegistryIndex {
  std::vector<RegistryRecord> records;

  friend bool operator==(const RegistryIndex&, const RegistryIndex&) = default;
};

inline json registry_record_to_json(const RegistryRecord& record, bool include_hash) {
  json j = json::object();
  j["record_seq"] = record.record_seq;
  j["recorded_at"] = record.recorded_at;
  j["asset_id"] = record.asset_id;
  j["version"] = record.version;
  j["fingerprint"] = record.fingerprint.digest;
  j["result"] = qualification_result_to_json(record.result);
  j["profile_id"] = record.profile_id;
  j["prev_hash"] = record.prev_hash;
  if (include_hash) j["record_hash"] = record.record_hash;
  return j;
}

inline std::string compute_record_hash(const RegistryRecord& record) {
  return sha256_hex(canonical_dump(registry_record_to_json(record, /*include_hash=*/false)));
}

inline std::string require_hex_digest(const json& value, const std::string& path) {
  std::string digest = get_nonempty_string(value, path);
  if (!is_hex_digest(digest))
    throw Error(ErrorCode::invalid_value, path, "expected 64 lowercase hex characters");
  return digest;
}

inline RegistryRecord parse_registry_record(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  RegistryRecord record;
  record.record_seq = get_integer(reader.require("record_seq"), reader.member("record_seq"));
  if (record.record_seq < 0)
    throw Error(ErrorCode::invalid_value, reader.member("record_seq"),
                "must be non-negative");
  record.recorded_at =
      get_nonempty_string(reader.require("recorded_at"), reader.member("recorded_at"));
  if (!is_rfc3339_instant(record.recorded_at))
    throw Error(ErrorCode::invalid_value, reader.member("recorded_at"),
                "expected an RFC 3339 instant");
  record.asset_id = get_nonempty_string(reader.require("asset_id"), reader.member("asset_id"));
  record.version = get_nonempty_string(reader.require("version"), reader.member("version"));
  record.fingerprint.digest =
      require_hex_digest(reader.require("fingerprint"), reader.member("fingerprint"));
  record.result = parse_qualification_result(reader.require("result"), "result");
  record.profile_id =
      get_nonempty_string(reader.require("profile_id"), reader.member("profile_id"));
  record.prev_hash = require_hex_digest(reader.require("prev_hash"), reader.member("prev_hash"));
  record.record_hash =
      require_hex_digest(reader.require("record_hash"), reader.member("record_hash"));
  reader.reject_unknown();
  return record;
}

// ---------------------------------------------------------------------------
// Chain verification. Findings are collected in sequence order, so the first
// entry names the earliest break. Link checks compare stored hashes, which
// keeps a single mutated record from cascading into its neighbours.
// ---------------------------------------------------------------------------

inline std::vector<Finding> verify_chain(const RegistryIndex& index) {
  std::vector<Finding> findings;
  for (std::size_t k = 0; k < index.records.size(); ++k) {
    const RegistryRecord& record = index.records[k];
    const std::string subject = "seq " + std::to_string(record.record_seq);
    if (record.record_seq != static_cast<std::int64_t>(k))
      findings.push_back({Severity::error, "SEQ_MISMATCH", subject,
                          "expected record_seq " + std::to_string(k)});
    const std::string expected_prev =
        k == 0 ? std::string(kGenesisHash) : index.records[k - 1].record_hash;
    if (record.prev_hash != expected_prev)
      findings.push_back({Severity::error, "CHAIN_BREAK", subject,
                          "prev_hash does not match the preceding record"});
    if (compute_record_hash(record) != record.record_hash)
      findings.push_back({Severity::error, "HASH_MISMATCH", subject,
                          "record content does not match its record_hash"});
  }
  return findings;
}

inline std::vector<RegistryRecord> history(const RegistryIndex& index,
                                           std::string_view asset_id) {
  std::vector<RegistryRecord> out;
  for (const RegistryRecord& record : index.records)
    if (record.asset_id == asset_id) out.push_back(record);
  return out;
}

// ---------------------------------------------------------------------------
// Storage: registry/records.jsonl, one canonical JSON record per line, LF
// terminated. Reading never takes the lock; it verifies instead.
// ---------------------------------------------------------------------------

struct LoadedRegistry {
  RegistryIndex index;
  std::vector<Finding> findings;  // malformed or non-canonical lines
};

inline std::filesystem::path registry_file_path(const std::filesystem::path& registry_dir) {
  return registry_dir / std::filesystem::path(std::string(kRegistryFileName));
}

inline std::filesystem::path registry_lock_path(const std::filesystem::path& registry_dir) {
  return registry_dir / std::filesystem::path(std::string(kRegistryLockName));
}

inline LoadedRegistry read_registry(const std::filesystem::path& registry_dir) {
  LoadedRegistry loaded;
  const std::filesystem::path file = registry_file_path(registry_dir);
  std::error_code ec;
  if (!std::filesystem::exists(file, ec) || ec) return loaded;

  const std::string bytes = read_file_bytes(file);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < bytes.size()) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) end = bytes.size();
    std::string_view line(bytes.data() + pos, end - pos);
    ++line_no;
    const std::string subject = "line " + std::to_string(line_no);
    if (line.empty()) {
      loaded.findings.push_back(
          {Severity::error, "MALFORMED_RECORD", subject, "blank line in record file"});
    } else {
      try {
        RegistryRecord record =
            parse_registry_record(parse_json_text(line, subject), subject);
        // Canonical storage is part of the tamper-evidence contract: the
        // stored bytes must be exactly the canonical serialization.
        if (canonical_dump(registry_record_to_json(record, true)) != line)
          loaded.findings.push_back({Severity::error, "NONCANONICAL_RECORD", subject,
                                     "stored bytes differ from canonical form"});
        else
          loaded.index.records.push_back(std::move(record));
      } catch (const Error& e) {
        loaded.findings.push_back(
            {Severity::error, "MALFORMED_RECORD", subject, e.what()});
      }
    }
    pos = end + 1;
  }
  return loaded;
}

// Full integrity read: storage findings plus chain findings.
inline std::vector<Finding> verify_registry(const std::filesystem::path& registry_dir) {
  LoadedRegistry loaded = read_registry(registry_dir);
  std::vector<Finding> findings = std::move(loaded.findings);
  std::vector<Finding> chain = verify_chain(loaded.index);
  findings.insert(findings.end(), chain.begin(), chain.end());
  return findings;
}

// ---------------------------------------------------------------------------
// Single-writer advisory lock: presence-based, created with O_EXCL, holding
// the writer's pid and acquisition time. Removed on release.
// ---------------------------------------------------------------------------

class RegistryLock {
 public:
  RegistryLock(const std::filesystem::path& registry_dir, std::string_view acquired_at)
      : path_(registry_lock_path(registry_dir)) {
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      if (errno == EEXIST)
        throw Error(ErrorCode::lock_held, path_.string(),
                    "another writer holds the registry lock");
      throw Error(ErrorCode::io_failure, path_.string(), "cannot create lock file");
    }
    json holder = json::object();
    holder["pid"] = static_cast<std::int64_t>(::getpid());
    holder["acquired_at"] = std::string(acquired_at);
    const std::string body = canonical_dump(holder) + "\n";
    ssize_t written = ::write(fd, body.data(), body.size());
    ::close(fd);
    if (written != static_cast<ssize_t>(body.size())) {
      std::error_code ec;
      std::filesystem::remove(path_, ec);
      throw Error(ErrorCode::io_failure, path_.string(), "cannot write lock file");
    }
  }

  RegistryLock(const RegistryLock&) = delete;
  RegistryLock& operator=(const RegistryLock&) = delete;

  ~RegistryLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

 private:
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Append. Refuses to extend a registry that no longer verifies; the write is
// temp-then-rename so readers only ever see complete files.
// ---------------------------------------------------------------------------

inline RegistryRecord append_record(const std::filesystem::path& registry_dir,
                                    std::string_view asset_id, std::string_view version,
                                    const AssetFingerprint& fingerprint,
                                    const QualificationResult& result,
                                    std::string_view recorded_at) {
  if (!is_rfc3339_instant(recorded_at))
    throw Error(ErrorCode::invalid_value, "recorded_at", "expected an RFC 3339 instant");
  std::error_code ec;
  std::filesystem::create_directories(registry_dir, ec);
  if (ec)
    throw Error(ErrorCode::io_failure, registry_dir.string(), "cannot create registry dir");

  RegistryLock lock(registry_dir, recorded_at);
  LoadedRegistry loaded = read_registry(registry_dir);
  std::vector<Finding> chain = verify_chain(loaded.index);
  if (!loaded.findings.empty() || !chain.empty()) {
    const Finding& first = loaded.findings.empty() ? chain.front() : loaded.findings.front();
    throw Error(ErrorCode::chain_corrupt, first.subject,
                "registry fails verification; refusing to append (" + first.message + ")");
  }

  RegistryRecord record;
  record.record_seq = static_cast<std::int64_t>(loaded.index.records.size());
  record.recorded_at = std::string(recorded_at);
  record.asset_id = std::string(asset_id);
  record.version = std::string(version);
  record.fingerprint = fingerprint;
  record.result = result;
  record.profile_id = result.profile_id;
  record.prev_hash = loaded.index.records.empty() ? std::string(kGenesisHash)
                                                  : loaded.index.records.back().record_hash;
  record.record_hash = compute_record_hash(record);

  std::string content;
  for (const RegistryRecord& existing : loaded.index.records)
    content += canonical_dump(registry_record_to_json(existing, true)) + "\n";
  content += canonical_dump(registry_record_to_json(record, true)) + "\n";
  write_file_atomic(registry_file_path(registry_dir), content);
  return record;
}

}  // namespace prlqual
