#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "campana/census.hpp"
#include "campana/enumerate.hpp"
#include "campana/heights.hpp"
#include "campana/model_io.hpp"
#include "campana/oracle.hpp"

namespace {

using namespace campana;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBoundary = 3;
constexpr int kExitNetwork = 4;

struct CommonOptions {
    std::string model_path;
    std::string set_s;
    std::string set_eps;
    std::string out_base;
    bool json = false;
    int threads = 0;
};

std::vector<BigInt> parse_point(const std::string& text) {
    std::vector<BigInt> coords;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        std::size_t a = part.find_first_not_of(" \t");
        std::size_t b = part.find_last_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty coordinate in point");
        coords.emplace_back(part.substr(a, b - a + 1));
    }
    if (coords.empty()) throw std::invalid_argument("empty point");
    return coords;
}

std::vector<std::int64_t> parse_prime_list(const std::string& text) {
    std::vector<std::int64_t> out;
    if (text.empty()) return out;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) out.push_back(std::stoll(part));
    return out;
}

OrbifoldModel load_model(const CommonOptions& opts) {
    OrbifoldModel m = parse_model_file(opts.model_path);
    bool changed = false;
    if (!opts.set_s.empty()) {
        m.s_primes = parse_prime_list(opts.set_s);
        changed = true;
    }
    if (!opts.set_eps.empty()) {
        std::vector<Rational> eps;
        std::istringstream in(opts.set_eps);
        std::string part;
        while (std::getline(in, part, ',')) eps.push_back(parse_rational(part));
        if (eps.size() != m.components.size()) {
            throw std::invalid_argument("--set-eps needs one weight per component");
        }
        for (std::size_t i = 0; i < eps.size(); ++i) m.components[i].weight = eps[i];
        changed = true;
    }
    if (changed) {
        m = make_model(m.ambient_dim, std::move(m.components), std::move(m.s_primes));
        const auto report = validate_model(m);
        if (!report.ok()) {
            std::string msg = "model invalid after overrides:";
            for (const auto& v : report.violations) msg += "\n  - " + v;
            throw std::invalid_argument(msg);
        }
    }
    return m;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

void write_meta(const std::string& base, double elapsed_seconds, int threads) {
    // timestamps live here so the main outputs stay byte-reproducible
    const auto now = std::chrono::system_clock::now();
    const auto epoch =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    ordered_json meta;
    meta["timestamp_unix"] = epoch;
    meta["elapsed_seconds"] = elapsed_seconds;
    meta["threads"] = threads;
    write_file(base + ".meta.json", meta.dump(2) + "\n");
}

std::string rational_text(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

int run_classify(const CommonOptions& opts, const std::string& point_text) {
    const OrbifoldModel m = load_model(opts);
    const auto x = ProjectivePoint::normalize(parse_point(point_text));
    if (x.coords().size() != static_cast<std::size_t>(m.ambient_dim) + 1) {
        throw std::invalid_argument("point has wrong number of coordinates for the model");
    }
    const Classification c = classify(m, x);
    if (c.cls == PointClass::OnBoundary) {
        std::cerr << "point " << x.to_string() << " lies on component "
                  << *c.boundary_component << "\n";
        return kExitBoundary;
    }

    const auto support = support_primes(m, x);
    const auto weights = m.weights();
    if (opts.json) {
        ordered_json j;
        std::vector<std::string> coord_text;
        for (const auto& coord : x.coords()) coord_text.push_back(coord.str());
        j["point"] = coord_text;
        j["class"] = point_class_name(c.cls);
        j["witness"] = c.witness ? ordered_json(c.witness->str()) : ordered_json(nullptr);
        j["support"] = ordered_json::array();
        for (const BigInt& p : support) {
            const auto mv = multiplicity_vector(m, x, p);
            const Rational w = weighted_multiplicity(m, x, p, weights);
            ordered_json row;
            row["p"] = p.str();
            row["multiplicities"] = mv.entries;
            row["weighted"] = rational_text(w);
            row["ok"] = w >= 1;
            j["support"].push_back(std::move(row));
        }
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }

    std::cout << "point " << x.to_string() << "\n";
    std::cout << "model " << m.summary() << "\n";
    std::cout << "class: " << point_class_name(c.cls);
    if (c.witness) std::cout << " (witness prime " << *c.witness << ")";
    std::cout << "\n";
    for (const BigInt& p : support) {
        const auto mv = multiplicity_vector(m, x, p);
        const Rational w = weighted_multiplicity(m, x, p, weights);
        std::cout << "  p=" << p << ": v=[";
        for (std::size_t i = 0; i < mv.entries.size(); ++i) {
            if (i) std::cout << ",";
            std::cout << mv.entries[i];
        }
        std::cout << "] weighted=" << rational_text(w) << (w >= 1 ? " ok" : " fails") << "\n";
    }
    return kExitOk;
}

int run_enumerate(const CommonOptions& opts, std::int64_t bound, bool include_boundary) {
    const OrbifoldModel m = load_model(opts);
    CountOptions copts;
    copts.threads = opts.threads;
    copts.include_boundary = include_boundary;
    const auto start = std::chrono::steady_clock::now();
    const CountingReport report = count_campana(m, bound, copts);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string json_text = report_json_text(report);
    if (!opts.out_base.empty()) {
        write_file(opts.out_base + ".csv", report_csv(report));
        write_file(opts.out_base + ".json", json_text);
        write_meta(opts.out_base, elapsed, copts.threads);
    }
    if (opts.json || opts.out_base.empty()) std::cout << json_text;
    return kExitOk;
}

int run_vojta_gap(const CommonOptions& opts, std::int64_t bound, const std::string& delta_text) {
    const OrbifoldModel m = load_model(opts);
    const Rational delta = parse_rational(delta_text);
    if (delta < 0) throw std::invalid_argument("--delta must be >= 0");

    const auto start = std::chrono::steady_clock::now();
    const auto campana_points = collect_campana_points(m, bound, opts.threads);
    const auto eps = m.weights();

    std::ostringstream csv;
    csv << "point,height,n1,n_eps,height_bound,gap\n";
    std::int64_t violations = 0;
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& raw : campana_points) {
        std::vector<BigInt> coords(raw.begin(), raw.end());
        const auto x = ProjectivePoint::from_canonical(std::move(coords));
        const LogSum n1 = counting_N1(m, x);
        const LogSum n_eps = counting_N(m, x, eps);
        const LogSum bound_ls = divisor_height(m, x, eps) + height_bound_constant(m, eps);
        if (!n1.leq(n_eps) || !n_eps.leq(bound_ls)) ++violations;
        const double gap = vojta_gap(m, x, delta);
        std::string label;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (i) label += ":";
            label += std::to_string(raw[i]);
        }
        csv << label << "," << fmt(weil_height(x).value()) << "," << fmt(n1.value()) << ","
            << fmt(n_eps.value()) << "," << fmt(bound_ls.value()) << "," << fmt(gap) << "\n";
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ordered_json summary;
    summary["model"] = m.summary();
    summary["height_bound"] = bound;
    summary["delta"] = rational_text(delta);
    summary["campana_points"] = campana_points.size();
    summary["chain_violations"] = violations;

    if (!opts.out_base.empty()) {
        write_file(opts.out_base + ".csv", csv.str());
        write_file(opts.out_base + ".json", summary.dump(2) + "\n");
        write_meta(opts.out_base, elapsed, opts.threads);
    } else {
        std::cout << csv.str();
    }
    std::cout << "campana points: " << campana_points.size() << "\n";
    std::cout << "chain violations: " << violations << "\n";
    return kExitOk;
}

int run_verify(const CommonOptions& opts, std::int64_t bound, const std::string& oracle_name) {
    const OrbifoldModel m = load_model(opts);
    OracleKind kind;
    if (oracle_name == "squarefull") kind = OracleKind::SquarefullPairs;
    else if (oracle_name == "s-unit") kind = OracleKind::SUnit;
    else if (oracle_name == "all-points") kind = OracleKind::AllPoints;
    else throw std::invalid_argument("unknown oracle: " + oracle_name);

    const auto cv = cross_validate(m, bound, kind, opts.threads);
    if (opts.json) {
        ordered_json j;
        j["oracle"] = oracle_kind_name(kind);
        j["height_bound"] = bound;
        j["points_checked"] = cv.points_checked;
        j["boundary_skipped"] = cv.boundary_skipped;
        j["disagreements"] = cv.disagreement_count;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "oracle: " << oracle_kind_name(kind) << "\n";
        std::cout << "points checked: " << cv.points_checked << "\n";
        std::cout << "boundary skipped: " << cv.boundary_skipped << "\n";
        std::cout << "disagreements: " << cv.disagreement_count << "\n";
        for (std::size_t i = 0; i < cv.disagreements.size() && i < 10; ++i) {
            const auto& d = cv.disagreements[i];
            std::cout << "  point (";
            for (std::size_t k = 0; k < d.point.size(); ++k) {
                if (k) std::cout << ":";
                std::cout << d.point[k];
            }
            std::cout << ") expected " << (d.expected_in_set ? "in" : "out") << " got "
                      << point_class_name(d.actual) << "\n";
        }
    }
    return cv.disagreement_count == 0 ? kExitOk : 1;
}

int run_census(const CommonOptions& opts, const std::string& source, std::int64_t limit,
               const std::string& cache_dir, int page_size, int rate_limit_ms) {
    IngestResult ingest;
    const auto start = std::chrono::steady_clock::now();
    if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) {
        RemoteConfig config;
        config.endpoint_template = source;
        config.page_size = page_size;
        config.rate_limit_ms = rate_limit_ms;
        config.cache_dir = cache_dir;
        ingest = ingest_remote(config, static_cast<std::size_t>(limit));
    } else {
        ingest = ingest_csv(source, static_cast<std::size_t>(limit));
    }
    std::vector<std::int64_t> s = parse_prime_list(opts.set_s);
    const CensusReport report = build_census_report(ingest.records, s);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string text = census_json_text(report);
    if (!opts.out_base.empty()) {
        write_file(opts.out_base + ".json", text);
        write_meta(opts.out_base, elapsed, 1);
    }
    if (opts.json || opts.out_base.empty()) std::cout << text;
    std::cerr << "records: " << ingest.stats.parsed << ", skipped: " << ingest.stats.skipped
              << (ingest.stats.from_cache ? ", from cache" : "") << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epsilon-Campana points on projective orbifold models over Q"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string point_text;
    std::int64_t bound = 100;
    std::string delta_text = "1/10";
    bool include_boundary = false;
    std::string oracle_name = "squarefull";
    std::string source;
    std::int64_t limit = 1000;
    std::string cache_dir;
    int page_size = 100;
    int rate_limit_ms = 250;

    auto add_common = [&](CLI::App* cmd, bool needs_model) {
        auto* model = cmd->add_option("--model", opts.model_path, "model file (TOML subset)");
        if (needs_model) model->required();
        cmd->add_option("--set-s", opts.set_s, "override S as comma-separated primes");
        cmd->add_option("--set-eps", opts.set_eps,
                        "override weights, comma-separated fractions");
        cmd->add_option("--out", opts.out_base, "output path base (writes <base>.csv/.json)");
        cmd->add_flag("--json", opts.json, "machine-readable output on stdout");
        cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    };

    auto* classify_cmd = app.add_subcommand("classify", "classify a single point");
    add_common(classify_cmd, true);
    classify_cmd->add_option("--point", point_text, "comma-separated integer coordinates")
        ->required();

    auto* enumerate_cmd =
        app.add_subcommand("enumerate", "sweep all points up to a height bound");
    add_common(enumerate_cmd, true);
    enumerate_cmd->add_option("--height-bound,-B", bound, "height bound")->required();
    enumerate_cmd->add_flag("--include-boundary", include_boundary,
                            "emit on_boundary tallies in reports");

    auto* gap_cmd = app.add_subcommand("vojta-gap", "gap scatter over Campana points");
    add_common(gap_cmd, true);
    gap_cmd->add_option("--height-bound,-B", bound, "height bound")->required();
    gap_cmd->add_option("--delta", delta_text, "delta as a fraction string (default 1/10)");

    auto* verify_cmd =
        app.add_subcommand("verify", "cross-validate against a brute-force oracle");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--height-bound,-B", bound, "height bound")->required();
    verify_cmd->add_option("--oracle", oracle_name, "squarefull | s-unit | all-points");

    auto* census_cmd = app.add_subcommand("census", "elliptic-curve census: ingest and report");
    add_common(census_cmd, false);
    census_cmd->add_option("--source", source, "CSV path or http(s) endpoint template")
        ->required();
    census_cmd->add_option("--limit", limit, "maximum records to ingest");
    census_cmd->add_option("--cache-dir", cache_dir,
                           "cache directory (default $CAMPANA_CENSUS_CACHE)");
    census_cmd->add_option("--page-size", page_size, "records per remote page");
    census_cmd->add_option("--rate-limit-ms", rate_limit_ms, "pause between remote pages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ? kExitOk
                                                                                 : kExitConfig;
    }

    try {
        if (classify_cmd->parsed()) return run_classify(opts, point_text);
        if (enumerate_cmd->parsed()) return run_enumerate(opts, bound, include_boundary);
        if (gap_cmd->parsed()) return run_vojta_gap(opts, bound, delta_text);
        if (verify_cmd->parsed()) return run_verify(opts, bound, oracle_name);
        if (census_cmd->parsed()) {
            return run_census(opts, source, limit, cache_dir, page_size, rate_limit_ms);
        }
    } catch (const census_network_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetwork;
    } catch (const on_component_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBoundary;
    } catch (const model_parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
