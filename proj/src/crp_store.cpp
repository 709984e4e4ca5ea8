#include "pufauth/crp_store.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace pufauth {
namespace {

std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

std::vector<std::uint8_t> hex_decode(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::runtime_error("crp_store: odd hex length");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
        throw std::runtime_error("crp_store: bad hex digit");
    };
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

}  // namespace

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string CrpStore::to_json_line(const CrpRecord& r) {
    nlohmann::json j;
    j["device_id"] = r.device_id;
    j["offset"] = r.offset;
    j["n"] = r.n;
    j["votes"] = r.votes;
    j["variant"] = variant_name(r.variant);
    j["ec_at_verifier"] = r.ec_at_verifier;
    j["response_hex"] = hex_encode(r.enrolled_response.to_bytes());
    j["helper_hex"] = hex_encode(r.helper_blob);
    j["enrolled_at"] = r.enrolled_at;
    return j.dump();
}

CrpRecord CrpStore::from_json_line(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    CrpRecord r;
    r.device_id = j.at("device_id").get<std::string>();
    r.offset = j.at("offset").get<std::uint32_t>();
    r.n = j.at("n").get<std::uint32_t>();
    r.votes = j.at("votes").get<unsigned>();
    r.variant = parse_variant(j.at("variant").get<std::string>());
    r.ec_at_verifier = j.at("ec_at_verifier").get<bool>();
    r.enrolled_response = BitVector::from_bytes(hex_decode(j.at("response_hex").get<std::string>()), r.n);
    r.helper_blob = hex_decode(j.at("helper_hex").get<std::string>());
    r.enrolled_at = j.at("enrolled_at").get<std::string>();
    return r;
}

CrpStore::CrpStore(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ifstream in(path_);
    if (!in) return;  // fresh store
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        CrpRecord r;
        try {
            r = from_json_line(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("crp_store: bad record at " + path_.string() + ":" +
                                     std::to_string(lineno) + ": " + e.what());
        }
        const std::size_t idx = index_of_unlocked(r.device_id, r.offset, r.n);
        if (idx == records_.size())
            records_.push_back(std::move(r));
        else {
            // Later lines win, and the key moves to the back so "latest"
            // reflects re-enrollment order.
            records_.erase(records_.begin() + static_cast<std::ptrdiff_t>(idx));
            records_.push_back(std::move(r));
        }
    }
}

std::size_t CrpStore::index_of_unlocked(const std::string& device_id, std::uint32_t offset,
                                        std::uint32_t n) const {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.device_id == device_id && r.offset == offset && r.n == n) return i;
    }
    return records_.size();
}

bool CrpStore::put(const CrpRecord& record, bool overwrite) {
    if (record.enrolled_response.size() != record.n)
        throw std::invalid_argument("crp_store: response length does not match n");
    std::unique_lock lock(mutex_);
    const std::size_t idx = index_of_unlocked(record.device_id, record.offset, record.n);
    if (idx != records_.size() && !overwrite) return false;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("crp_store: cannot open " + path_.string() + " for append");
    out << to_json_line(record) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("crp_store: append failed");
    if (idx != records_.size()) records_.erase(records_.begin() + static_cast<std::ptrdiff_t>(idx));
    records_.push_back(record);
    return true;
}

std::optional<CrpRecord> CrpStore::find(const std::string& device_id, std::uint32_t offset,
                                        std::uint32_t n) const {
    std::shared_lock lock(mutex_);
    const std::size_t idx = index_of_unlocked(device_id, offset, n);
    if (idx == records_.size()) return std::nullopt;
    return records_[idx];
}

std::optional<CrpRecord> CrpStore::latest(const std::string& device_id) const {
    std::shared_lock lock(mutex_);
    for (auto it = records_.rbegin(); it != records_.rend(); ++it)
        if (it->device_id == device_id) return *it;
    return std::nullopt;
}

std::vector<CrpRecord> CrpStore::all() const {
    std::shared_lock lock(mutex_);
    return records_;
}

std::size_t CrpStore::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

void CrpStore::compact() {
    std::unique_lock lock(mutex_);
    const auto tmp = path_.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("crp_store: cannot open " + tmp);
        for (const auto& r : records_) out << to_json_line(r) << '\n';
        out.flush();
        if (!out) throw std::runtime_error("crp_store: compaction write failed");
    }
    std::filesystem::rename(tmp, path_);
}

}  // namespace pufauth
