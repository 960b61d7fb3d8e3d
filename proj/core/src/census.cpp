#include "campana/census.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace campana {

namespace {

using nlohmann::ordered_json;

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_torsion_text(const std::string& text, std::vector<int>& out) {
    const std::string t = strip(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') return false;
    out.clear();
    std::string inner = t.substr(1, t.size() - 2);
    std::istringstream in(inner);
    std::string part;
    while (std::getline(in, part, ',')) {
        const std::string p = strip(part);
        if (p.empty() || !std::all_of(p.begin(), p.end(), [](unsigned char c) {
                return std::isdigit(c) != 0;
            })) {
            return false;
        }
        try {
            out.push_back(std::stoi(p));
        } catch (const std::exception&) {
            return false;
        }
    }
    if (out.empty() && !strip(inner).empty()) return false;
    if (out.empty()) return false;
    return true;
}

std::string record_json_line(const CurveRecord& r) {
    ordered_json j;
    j["label"] = r.label;
    j["conductor"] = r.conductor;
    j["torsion"] = r.torsion;
    return j.dump();
}

bool record_from_json(const ordered_json& j, CurveRecord& out) {
    try {
        if (!j.is_object()) return false;
        if (!j.contains("label") || !j["label"].is_string()) return false;
        out.label = j["label"].get<std::string>();
        if (!j.contains("conductor") || !j["conductor"].is_number_integer()) return false;
        out.conductor = j["conductor"].get<std::int64_t>();
        const char* key = j.contains("torsion") ? "torsion"
                          : j.contains("torsion_structure") ? "torsion_structure"
                                                            : nullptr;
        if (key == nullptr || !j[key].is_array()) return false;
        out.torsion.clear();
        for (const auto& v : j[key]) {
            if (!v.is_number_integer()) return false;
            out.torsion.push_back(v.get<int>());
        }
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

bool record_valid(const CurveRecord& r) {
    return !r.label.empty() && r.conductor >= 1 && torsion_structure_valid(r.torsion);
}

struct ParsedUrl {
    std::string base;    // scheme://host[:port]
    std::string target;  // /path?query
    bool https = false;
};

ParsedUrl split_url(const std::string& url) {
    ParsedUrl out;
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw census_network_error("malformed endpoint URL: " + url);
    }
    out.https = url.substr(0, scheme_end) == "https";
    std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        out.base = url;
        out.target = "/";
    } else {
        out.base = url.substr(0, path_start);
        out.target = url.substr(path_start);
    }
    return out;
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
    std::size_t pos;
    while ((pos = text.find(key)) != std::string::npos) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

IngestResult load_cache(const std::string& path) {
    IngestResult out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (strip(line).empty()) continue;
        CurveRecord r;
        const auto j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !record_from_json(j, r) || !record_valid(r)) {
            out.stats.skipped += 1;
            continue;
        }
        r.source = "remote-api";
        out.records.push_back(std::move(r));
        out.stats.parsed += 1;
    }
    out.stats.from_cache = true;
    return out;
}

}  // namespace

bool torsion_structure_valid(std::span<const int> torsion) {
    if (torsion.size() == 1) {
        const int n = torsion[0];
        return (n >= 1 && n <= 10) || n == 12;
    }
    if (torsion.size() == 2) {
        if (torsion[0] != 2) return false;
        const int n = torsion[1];
        return n == 2 || n == 4 || n == 6 || n == 8;
    }
    return false;
}

IngestResult ingest_csv(const std::string& path, std::size_t limit) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("ingest_csv: cannot open " + path);
    IngestResult out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        const std::string row = strip(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != "label,conductor,torsion") {
                throw std::invalid_argument("ingest_csv: expected header 'label,conductor,torsion'");
            }
            header_seen = true;
            continue;
        }
        if (out.records.size() >= limit) break;
        // torsion is last and may contain a comma: split on the first two only
        const std::size_t c1 = row.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : row.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            out.stats.skipped += 1;
            std::cerr << "census: skipping malformed row: " << row << "\n";
            continue;
        }
        CurveRecord r;
        r.label = strip(row.substr(0, c1));
        const std::string cond = strip(row.substr(c1 + 1, c2 - c1 - 1));
        bool ok = !cond.empty() && std::all_of(cond.begin(), cond.end(), [](unsigned char c) {
            return std::isdigit(c) != 0;
        });
        if (ok) {
            try {
                r.conductor = std::stoll(cond);
            } catch (const std::exception&) {
                ok = false;
            }
        }
        ok = ok && parse_torsion_text(row.substr(c2 + 1), r.torsion);
        r.source = "local-file";
        if (!ok || !record_valid(r)) {
            out.stats.skipped += 1;
            std::cerr << "census: skipping malformed row: " << row << "\n";
            continue;
        }
        out.records.push_back(std::move(r));
        out.stats.parsed += 1;
    }
    return out;
}

std::string remote_cache_path(const RemoteConfig& config, std::size_t limit) {
    std::string dir = config.cache_dir;
    if (dir.empty()) {
        const char* env = std::getenv("CAMPANA_CENSUS_CACHE");
        dir = env != nullptr && *env != '\0' ? env : ".census-cache";
    }
    const std::string key = config.endpoint_template + "|" + std::to_string(config.page_size) +
                            "|" + std::to_string(limit);
    return dir + "/census-" + hex64(fnv1a64(key)) + ".jsonl";
}

IngestResult ingest_remote(const RemoteConfig& config, std::size_t limit) {
    IngestResult out;
    if (limit == 0) return out;
    if (config.endpoint_template.find("{offset}") == std::string::npos ||
        config.endpoint_template.find("{limit}") == std::string::npos) {
        throw std::invalid_argument("ingest_remote: endpoint template needs {offset} and {limit}");
    }
    const std::string cache_path = remote_cache_path(config, limit);
    if (std::filesystem::exists(cache_path)) {
        return load_cache(cache_path);
    }

    std::vector<std::string> lines;
    std::size_t offset = 0;
    while (out.records.size() < limit) {
        const std::size_t want =
            std::min<std::size_t>(static_cast<std::size_t>(config.page_size),
                                  limit - out.records.size());
        const std::string url =
            substitute(substitute(config.endpoint_template, "{offset}", std::to_string(offset)),
                       "{limit}", std::to_string(want));
        const ParsedUrl parsed = split_url(url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (parsed.https) {
            throw census_network_error(
                "built without TLS support; use an http endpoint or a prefilled cache at " +
                cache_path);
        }
#endif
        ordered_json page;
        bool got = false;
        std::string last_error;
        for (int attempt = 0; attempt <= config.max_retries && !got; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
            }
            httplib::Client client(parsed.base);
            client.set_connection_timeout(10);
            client.set_read_timeout(30);
            auto res = client.Get(parsed.target);
            if (!res) {
                last_error = "transport error " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "HTTP status " + std::to_string(res->status);
                continue;
            }
            page = ordered_json::parse(res->body, nullptr, false);
            if (page.is_discarded()) {
                last_error = "response is not JSON";
                continue;
            }
            got = true;
        }
        if (!got) {
            throw census_network_error("remote fetch failed (" + last_error +
                                       "); no cache at " + cache_path);
        }
        out.stats.pages += 1;
        if (!page.contains("data") || !page["data"].is_array()) {
            throw census_network_error("response missing 'data' array; no cache at " + cache_path);
        }
        std::size_t page_items = 0;
        for (const auto& item : page["data"]) {
            ++page_items;
            if (out.records.size() >= limit) break;
            CurveRecord r;
            if (!record_from_json(item, r) || !record_valid(r)) {
                out.stats.skipped += 1;
                std::cerr << "census: skipping malformed record from remote page\n";
                continue;
            }
            r.source = "remote-api";
            lines.push_back(record_json_line(r));
            out.records.push_back(std::move(r));
            out.stats.parsed += 1;
        }
        if (page_items < want) break;  // last page
        offset += page_items;
        if (out.records.size() < limit && config.rate_limit_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(config.rate_limit_ms));
        }
    }

    // write-once cache: tmp file then rename, so partial writes never count
    std::filesystem::path path(cache_path);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::string tmp = cache_path + ".tmp";
    {
        std::ofstream outf(tmp, std::ios::trunc);
        for (const std::string& l : lines) outf << l << "\n";
    }
    std::filesystem::rename(tmp, cache_path);
    return out;
}

bool is_semistable(const BigInt& conductor) {
    return is_semistable(conductor, std::span<const std::int64_t>{});
}

bool is_semistable(const BigInt& conductor, std::span<const std::int64_t> s_primes) {
    if (conductor < 1) throw std::invalid_argument("is_semistable: conductor must be positive");
    if (conductor == 1) return true;
    for (const auto& [p, e] : factorize(conductor).factors) {
        if (e == 1) continue;
        const bool exempt = p <= std::numeric_limits<std::int64_t>::max() &&
                            std::find(s_primes.begin(), s_primes.end(),
                                      static_cast<std::int64_t>(p)) != s_primes.end();
        if (!exempt) return false;
    }
    return true;
}

TorsionLevelReport max_torsion_level(std::span<const CurveRecord> records, bool semistable_only,
                                     std::span<const std::int64_t> s_primes) {
    TorsionLevelReport report;
    for (const CurveRecord& r : records) {
        if (semistable_only && !is_semistable(BigInt(r.conductor), s_primes)) continue;
        report.curves += 1;
        const int largest = r.torsion.empty() ? 1 : r.torsion.back();
        report.max_level = std::max(report.max_level, largest);
        for (int m = 1; m <= largest; ++m) {
            if (largest % m == 0) report.level_counts[m] += 1;
        }
    }
    return report;
}

CensusReport build_census_report(std::span<const CurveRecord> records,
                                 std::span<const std::int64_t> s_primes) {
    CensusReport report;
    report.records = records.size();
    report.all = max_torsion_level(records, false, s_primes);
    report.semistable = max_torsion_level(records, true, s_primes);
    report.proxy_caveat =
        "level counts use the order of a rational torsion point as a proxy; a rational point "
        "of order m is strictly weaker than full level-m structure, so these tallies bound the "
        "dataset from above, they certify nothing";
    return report;
}

std::string census_json_text(const CensusReport& r) {
    ordered_json j;
    j["proxy_caveat"] = r.proxy_caveat;
    j["records"] = r.records;
    auto level_json = [](const TorsionLevelReport& t) {
        ordered_json out;
        out["curves"] = t.curves;
        out["max_level"] = t.max_level;
        ordered_json counts = ordered_json::object();
        for (const auto& [m, c] : t.level_counts) counts[std::to_string(m)] = c;
        out["level_counts"] = std::move(counts);
        return out;
    };
    j["all"] = level_json(r.all);
    j["semistable"] = level_json(r.semistable);
    return j.dump(2) + "\n";
}

}  // namespace campana
