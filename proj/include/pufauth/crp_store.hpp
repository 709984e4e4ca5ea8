#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "pufauth/bitvec.hpp"
#include "pufauth/hamming.hpp"

namespace pufauth {

// Verifier-side enrolled reference for one (device, challenge window).
struct CrpRecord {
    std::string device_id;
    std::uint32_t offset = 0;
    std::uint32_t n = 0;
    unsigned votes = 1;
    std::optional<HammingVariant> variant;
    bool ec_at_verifier = false;
    BitVector enrolled_response;  // post-MV reference
    std::vector<std::uint8_t> helper_blob;  // helper file image; only when ec_at_verifier
    std::string enrolled_at;  // ISO 8601 UTC
};

// Append-compacted JSON-lines store keyed by (device_id, offset, n).
// Later lines win; compact() rewrites one line per live key. Reads may run
// concurrently; writes are serialized (single-writer contract).
class CrpStore {
public:
    explicit CrpStore(std::filesystem::path path);

    // Returns false when the key exists and overwrite is not set.
    bool put(const CrpRecord& record, bool overwrite);
    std::optional<CrpRecord> find(const std::string& device_id, std::uint32_t offset,
                                  std::uint32_t n) const;
    // The device's most recently enrolled record.
    std::optional<CrpRecord> latest(const std::string& device_id) const;
    std::vector<CrpRecord> all() const;
    std::size_t size() const;
    void compact();

    const std::filesystem::path& path() const { return path_; }

    static std::string to_json_line(const CrpRecord& record);
    static CrpRecord from_json_line(const std::string& line);

private:
    std::size_t index_of_unlocked(const std::string& device_id, std::uint32_t offset,
                                  std::uint32_t n) const;

    std::filesystem::path path_;
    std::vector<CrpRecord> records_;  // live set, insertion-ordered
    mutable std::shared_mutex mutex_;
};

// Current time as ISO 8601 UTC, shared by the store and the audit log.
std::string iso8601_utc_now();

}  // namespace pufauth
