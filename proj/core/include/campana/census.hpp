#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "campana/arith.hpp"

namespace campana {

/// One elliptic-curve row: LMFDB-style label, conductor, and rational
/// torsion subgroup as invariant factors ([n] or [2, 2n]).
struct CurveRecord {
    std::string label;
    std::int64_t conductor = 0;
    std::vector<int> torsion;
    std::string source;  // "remote-api" or "local-file"

    bool operator==(const CurveRecord&) const = default;
};

/// Torsion structures that occur over Q: Z/n for n <= 10 or 12, and
/// Z/2 x Z/2n for n <= 4.
bool torsion_structure_valid(std::span<const int> torsion);

struct IngestStats {
    std::size_t parsed = 0;
    std::size_t skipped = 0;  // malformed rows, counted and warned
    std::size_t pages = 0;
    bool from_cache = false;
};

struct IngestResult {
    std::vector<CurveRecord> records;
    IngestStats stats;
};

class census_network_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV with header `label,conductor,torsion`; the torsion column is a
/// bracketed integer list and must come last.
IngestResult ingest_csv(const std::string& path, std::size_t limit);

struct RemoteConfig {
    /// must contain {offset} and {limit} placeholders
    std::string endpoint_template;
    int page_size = 100;
    int rate_limit_ms = 250;
    int max_retries = 3;
    /// defaults to $CAMPANA_CENSUS_CACHE, then ".census-cache"
    std::string cache_dir;
};

/// Paged, rate-limited fetch with retry/backoff, cached as JSON-lines keyed
/// by a hash of the query, so reruns are offline and byte-stable. Throws
/// census_network_error when the network fails and no cache exists.
IngestResult ingest_remote(const RemoteConfig& config, std::size_t limit);

/// Path of the cache file ingest_remote would use.
std::string remote_cache_path(const RemoteConfig& config, std::size_t limit);

/// Squarefree conductor; primes in s_primes are exempt from the check.
bool is_semistable(const BigInt& conductor);
bool is_semistable(const BigInt& conductor, std::span<const std::int64_t> s_primes);

struct TorsionLevelReport {
    std::int64_t curves = 0;
    int max_level = 0;
    /// m -> number of curves whose largest invariant factor is divisible by m
    std::map<int, std::int64_t> level_counts;
};

TorsionLevelReport max_torsion_level(std::span<const CurveRecord> records, bool semistable_only,
                                     std::span<const std::int64_t> s_primes = {});

struct CensusReport {
    std::size_t records = 0;
    TorsionLevelReport all;
    TorsionLevelReport semistable;
    std::string proxy_caveat;
};

CensusReport build_census_report(std::span<const CurveRecord> records,
                                 std::span<const std::int64_t> s_primes = {});

std::string census_json_text(const CensusReport& r);

}  // namespace campana
