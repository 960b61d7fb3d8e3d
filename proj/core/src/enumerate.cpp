#include "campana/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace campana {

namespace {

constexpr std::int64_t kSpfCap = std::int64_t{1} << 23;
constexpr std::size_t kMaxFastComponents = 16;
constexpr std::size_t kTargetTasks = 64;
constexpr std::size_t kMaxLineProbePoints = 5000;

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void check_dim(int ambient_dim) {
    if (ambient_dim != 1 && ambient_dim != 2) {
        throw std::invalid_argument("enumeration supports ambient dimension 1 and 2 only");
    }
}

std::size_t bucket_index(std::int64_t h) {
    return h <= 1 ? 0 : std::bit_width(static_cast<std::uint64_t>(h - 1));
}

// coprime-pair tree: every (a, b) with a, b >= 1 and gcd(a, b) = 1 appears
// exactly once below the root (1, 1) under (a, b) -> (a + b, b), (a, a + b)
void walk_coprime_tree(std::int64_t bound,
                       const std::function<void(std::span<const std::int64_t>)>& fn) {
    std::array<std::int64_t, 2> pt{};
    std::vector<std::pair<std::int64_t, std::int64_t>> stack;
    stack.emplace_back(1, 1);
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        if (std::max(a, b) > bound) continue;
        pt = {a, b};
        fn(pt);
        pt = {a, -b};
        fn(pt);
        stack.emplace_back(a + b, b);
        stack.emplace_back(a, a + b);
    }
}

template <typename Fn>
void scan_range_p1(std::int64_t lo, std::int64_t hi, Fn&& fn) {
    std::array<std::int64_t, 2> pt{};
    for (std::int64_t h = std::max<std::int64_t>(1, lo); h <= hi; ++h) {
        if (h == 1) {
            pt = {1, 0};
            fn(pt);
            pt = {0, 1};
            fn(pt);
            pt = {1, 1};
            fn(pt);
            pt = {1, -1};
            fn(pt);
            continue;
        }
        for (std::int64_t b = 1; b < h; ++b) {
            if (std::gcd(h, b) != 1) continue;
            pt = {h, b};
            fn(pt);
            pt = {h, -b};
            fn(pt);
            pt = {b, h};
            fn(pt);
            pt = {b, -h};
            fn(pt);
        }
    }
}

template <typename Fn>
void scan_range_p2(std::int64_t lo, std::int64_t hi, Fn&& fn) {
    std::array<std::int64_t, 3> pt{};
    auto emit = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
        std::int64_t g = std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
        if (g != 1) return;
        pt = {a, b, c};
        fn(pt);
    };
    for (std::int64_t h = std::max<std::int64_t>(1, lo); h <= hi; ++h) {
        // face x0 = h
        for (std::int64_t b = -h; b <= h; ++b) {
            for (std::int64_t c = -h; c <= h; ++c) emit(h, b, c);
        }
        // faces |x1| = h, x0 < h; x0 = 0 forces x1 > 0
        for (std::int64_t a = 0; a < h; ++a) {
            for (std::int64_t c = -h; c <= h; ++c) {
                emit(a, h, c);
                if (a > 0) emit(a, -h, c);
            }
        }
        // faces |x2| = h, x0 < h, |x1| < h; leading zeros force x2 > 0
        for (std::int64_t a = 0; a < h; ++a) {
            for (std::int64_t b = -(h - 1); b <= h - 1; ++b) {
                if (a == 0 && b < 0) continue;
                emit(a, b, h);
                if (a > 0 || b > 0) emit(a, b, -h);
            }
        }
    }
}

std::string json_dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

void for_each_point(int ambient_dim, std::int64_t bound,
                    const std::function<void(std::span<const std::int64_t>)>& fn) {
    check_dim(ambient_dim);
    if (bound < 1) throw std::invalid_argument("for_each_point: bound must be >= 1");
    if (ambient_dim == 1) {
        std::array<std::int64_t, 2> pt{1, 0};
        fn(pt);
        pt = {0, 1};
        fn(pt);
        walk_coprime_tree(bound, fn);
    } else {
        scan_range_p2(1, bound, fn);
    }
}

std::vector<std::vector<std::int64_t>> points_up_to(int ambient_dim, std::int64_t bound) {
    std::vector<std::vector<std::int64_t>> out;
    for_each_point(ambient_dim, bound, [&](std::span<const std::int64_t> pt) {
        out.emplace_back(pt.begin(), pt.end());
    });
    return out;
}

void for_each_point_in_range(int ambient_dim, std::int64_t lo, std::int64_t hi,
                             const std::function<void(std::span<const std::int64_t>)>& fn) {
    check_dim(ambient_dim);
    if (ambient_dim == 1) {
        scan_range_p1(lo, hi, fn);
    } else {
        scan_range_p2(lo, hi, fn);
    }
}

SweepClassifier::SweepClassifier(const OrbifoldModel& m, std::int64_t height_bound)
    : model_(&m), s_primes_(m.s_primes) {
    const BigInt i64_budget = BigInt(1) << 62;
    bool ok = m.components.size() <= kMaxFastComponents && m.ambient_dim <= 2;

    BigInt scale = 1;
    for (const DivisorComponent& c : m.components) {
        scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(c.weight));
    }
    BigInt weighted_cap = 0;
    std::vector<BigInt> scaled;
    for (const DivisorComponent& c : m.components) {
        BigInt s = boost::multiprecision::numerator(c.weight) *
                   (scale / boost::multiprecision::denominator(c.weight));
        scaled.push_back(s);
        weighted_cap += s * 64;
    }
    if (scale > i64_budget || weighted_cap > i64_budget) ok = false;

    BigInt max_value_bound = 1;
    for (const DivisorComponent& c : m.components) {
        BigInt bound = c.coeff_l1();
        for (int d = 0; d < c.degree(); ++d) bound *= height_bound;
        max_value_bound = std::max(max_value_bound, bound);
        if (bound > i64_budget) ok = false;
        for (const Monomial& mono : c.monomials) {
            for (int e : mono.exponents) {
                if (e > 255) ok = false;
            }
        }
    }

    if (ok) {
        weight_scale_ = static_cast<std::int64_t>(scale);
        for (std::size_t i = 0; i < m.components.size(); ++i) {
            CompiledComponent cc;
            cc.scaled_weight = static_cast<std::int64_t>(scaled[i]);
            for (const Monomial& mono : m.components[i].monomials) {
                CompiledMonomial cm{mono.coeff, {0, 0, 0}};
                for (std::size_t j = 0; j < mono.exponents.size(); ++j) {
                    cm.exps[j] = static_cast<std::uint8_t>(mono.exponents[j]);
                }
                cc.monomials.push_back(cm);
            }
            comps_.push_back(std::move(cc));
        }
        const std::int64_t limit =
            std::max<std::int64_t>(2, std::min(static_cast<std::int64_t>(max_value_bound), kSpfCap));
        sieve_ = std::make_shared<SpfSieve>(limit);
    }
    fast_ = ok;
}

SweepClassifier::Result SweepClassifier::classify_exact(
    std::span<const std::int64_t> coords) const {
    std::vector<BigInt> big(coords.begin(), coords.end());
    const Classification c = classify(*model_, ProjectivePoint::from_canonical(std::move(big)));
    Result r{c.cls, 0, 0};
    if (c.witness) {
        r.witness = *c.witness <= std::numeric_limits<std::int64_t>::max()
                        ? static_cast<std::int64_t>(*c.witness)
                        : -1;
    }
    if (c.boundary_component) r.boundary_component = *c.boundary_component;
    return r;
}

SweepClassifier::Result SweepClassifier::classify_point(
    std::span<const std::int64_t> coords) const {
    if (!fast_) return classify_exact(coords);

    std::array<SmallFactors, kMaxFastComponents> factors;
    const std::size_t nc = comps_.size();
    for (std::size_t i = 0; i < nc; ++i) {
        std::int64_t value = 0;
        for (const CompiledMonomial& mono : comps_[i].monomials) {
            std::int64_t term = mono.coeff;
            for (std::size_t j = 0; j < coords.size(); ++j) {
                for (int e = 0; e < mono.exps[j]; ++e) term *= coords[j];
            }
            value += term;
        }
        if (value == 0) return Result{PointClass::OnBoundary, 0, i};
        factors[i] = SmallFactors{};
        factorize_i64(value, sieve_.get(), factors[i]);
    }

    std::array<std::int64_t, kMaxFastComponents * 15> primes{};
    std::size_t np = 0;
    for (std::size_t i = 0; i < nc; ++i) {
        for (const PrimePower& pp : factors[i]) {
            if (!std::binary_search(s_primes_.begin(), s_primes_.end(), pp.prime)) {
                primes[np++] = pp.prime;
            }
        }
    }
    std::sort(primes.begin(), primes.begin() + np);
    np = static_cast<std::size_t>(std::unique(primes.begin(), primes.begin() + np) -
                                  primes.begin());
    if (np == 0) return Result{PointClass::Integral, 0, 0};

    for (std::size_t k = 0; k < np; ++k) {
        const std::int64_t p = primes[k];
        std::int64_t weighted = 0;
        for (std::size_t i = 0; i < nc; ++i) {
            if (comps_[i].scaled_weight == 0) continue;
            for (const PrimePower& pp : factors[i]) {
                if (pp.prime == p) {
                    weighted += comps_[i].scaled_weight * pp.exponent;
                    break;
                }
            }
        }
        if (weighted < weight_scale_) return Result{PointClass::NonCampana, p, 0};
    }
    return Result{PointClass::Campana, 0, 0};
}

std::vector<std::int64_t> bucket_edges(std::int64_t bound) {
    std::vector<std::int64_t> edges;
    for (std::int64_t e = 1; e < bound; e *= 2) edges.push_back(e);
    edges.push_back(bound);
    if (edges.size() >= 2 && edges[edges.size() - 2] == bound) edges.pop_back();
    return edges;
}

std::optional<GrowthFit> fit_growth_exponent(std::span<const std::int64_t> edges,
                                             std::span<const std::int64_t> cumulative,
                                             std::int64_t min_count) {
    if (edges.size() != cumulative.size()) {
        throw std::invalid_argument("fit_growth_exponent: size mismatch");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    std::int64_t first_edge = -1;
    bool distinct = false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (cumulative[i] < min_count) continue;
        const double x = std::log(static_cast<double>(edges[i]));
        const double y = std::log(static_cast<double>(cumulative[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
        if (first_edge < 0) first_edge = edges[i];
        else if (edges[i] != first_edge) distinct = true;
    }
    if (n < 2 || !distinct) return std::nullopt;
    const double denom = n * sxx - sx * sx;
    GrowthFit fit;
    fit.theta = (n * sxy - sx * sy) / denom;
    fit.coefficient = std::exp((sy - fit.theta * sx) / n);
    fit.buckets_used = n;
    return fit;
}

std::vector<std::pair<std::int64_t, std::int64_t>> height_range_tasks(int ambient_dim,
                                                                      std::int64_t bound) {
    check_dim(ambient_dim);
    // work per height shell: ~h pairs for P^1, ~h^2 cells for P^2
    long double total = 0;
    for (std::int64_t h = 1; h <= bound; ++h) {
        total += ambient_dim == 1 ? static_cast<long double>(h)
                                  : static_cast<long double>(h) * static_cast<long double>(h);
    }
    const std::size_t task_count = std::min<std::size_t>(kTargetTasks,
                                                         static_cast<std::size_t>(bound));
    std::vector<std::pair<std::int64_t, std::int64_t>> tasks;
    long double acc = 0;
    std::int64_t lo = 1;
    for (std::int64_t h = 1; h <= bound; ++h) {
        acc += ambient_dim == 1 ? static_cast<long double>(h)
                                : static_cast<long double>(h) * static_cast<long double>(h);
        const auto filled = static_cast<std::size_t>(tasks.size() + 1);
        if (acc >= total * filled / task_count && filled <= task_count) {
            tasks.emplace_back(lo, h);
            lo = h + 1;
        }
    }
    if (lo <= bound) tasks.emplace_back(lo, bound);
    return tasks;
}

void run_height_tasks(int ambient_dim, std::int64_t bound, int threads,
                      const std::function<void(std::size_t, std::int64_t, std::int64_t)>& fn) {
    const auto tasks = height_range_tasks(ambient_dim, bound);
    const int workers = std::min<int>(resolve_threads(threads), static_cast<int>(tasks.size()));
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            fn(i, tasks[i].first, tasks[i].second);
        }
    };
    if (workers <= 1) {
        drain();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(drain);
}

namespace {

std::vector<CollinearLine> probe_collinear_lines(
    const std::vector<std::vector<std::int64_t>>& pts, int top_k) {
    std::vector<CollinearLine> out;
    if (pts.size() < 3 || pts.size() > kMaxLineProbePoints || top_k <= 0) return out;
    std::map<std::array<std::int64_t, 3>, std::int64_t> pair_counts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const auto& u = pts[i];
            const auto& v = pts[j];
            std::array<std::int64_t, 3> line{u[1] * v[2] - u[2] * v[1],
                                             u[2] * v[0] - u[0] * v[2],
                                             u[0] * v[1] - u[1] * v[0]};
            std::int64_t g = std::gcd(std::gcd(std::abs(line[0]), std::abs(line[1])),
                                      std::abs(line[2]));
            if (g == 0) continue;
            for (auto& c : line) c /= g;
            for (auto& c : line) {
                if (c != 0) {
                    if (c < 0) {
                        for (auto& d : line) d = -d;
                    }
                    break;
                }
            }
            pair_counts[line] += 1;
        }
    }
    for (const auto& [line, c] : pair_counts) {
        // c = k(k-1)/2 pairs on a line through k points
        const auto k = static_cast<std::int64_t>(
            (1 + static_cast<std::int64_t>(std::sqrt(static_cast<double>(1 + 8 * c)))) / 2);
        if (k >= 3) out.push_back(CollinearLine{line, k});
    }
    std::sort(out.begin(), out.end(), [](const CollinearLine& a, const CollinearLine& b) {
        if (a.point_count != b.point_count) return a.point_count > b.point_count;
        return a.line < b.line;
    });
    if (out.size() > static_cast<std::size_t>(top_k)) out.resize(static_cast<std::size_t>(top_k));
    return out;
}

}  // namespace

CountingReport count_campana(const OrbifoldModel& m, std::int64_t bound,
                             const CountOptions& opts) {
    check_dim(m.ambient_dim);
    if (bound < 1) throw std::invalid_argument("count_campana: bound must be >= 1");

    const SweepClassifier classifier(m, bound);
    const auto edges = bucket_edges(bound);

    struct TaskState {
        std::vector<BucketTally> tallies;
        std::vector<std::vector<std::int64_t>> campana_points;
    };
    const auto tasks = height_range_tasks(m.ambient_dim, bound);
    std::vector<TaskState> states(tasks.size());
    const bool collect_points = m.ambient_dim == 2 && opts.top_lines_k > 0;

    run_height_tasks(m.ambient_dim, bound, opts.threads,
                     [&](std::size_t task, std::int64_t lo, std::int64_t hi) {
                         TaskState& st = states[task];
                         st.tallies.assign(edges.size(), BucketTally{});
                         for_each_point_in_range(
                             m.ambient_dim, lo, hi, [&](std::span<const std::int64_t> pt) {
                                 std::int64_t h = 0;
                                 for (std::int64_t c : pt) h = std::max(h, std::abs(c));
                                 BucketTally& tally = st.tallies[bucket_index(h)];
                                 tally.total += 1;
                                 const auto r = classifier.classify_point(pt);
                                 switch (r.cls) {
                                     case PointClass::Integral: tally.integral += 1; break;
                                     case PointClass::Campana: tally.campana += 1; break;
                                     case PointClass::NonCampana: tally.non_campana += 1; break;
                                     case PointClass::OnBoundary: tally.on_boundary += 1; break;
                                 }
                                 if (collect_points && (r.cls == PointClass::Campana ||
                                                        r.cls == PointClass::Integral)) {
                                     if (st.campana_points.size() <= kMaxLineProbePoints) {
                                         st.campana_points.emplace_back(pt.begin(), pt.end());
                                     }
                                 }
                             });
                     });

    CountingReport report;
    report.model_summary = m.summary();
    report.ambient_dim = m.ambient_dim;
    report.height_bound = bound;
    report.edges = edges;
    report.buckets.assign(edges.size(), BucketTally{});
    report.boundary_detail = opts.include_boundary;
    for (const TaskState& st : states) {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            report.buckets[i].total += st.tallies[i].total;
            report.buckets[i].integral += st.tallies[i].integral;
            report.buckets[i].campana += st.tallies[i].campana;
            report.buckets[i].non_campana += st.tallies[i].non_campana;
            report.buckets[i].on_boundary += st.tallies[i].on_boundary;
        }
    }
    report.campana_set_cumulative.assign(edges.size(), 0);
    std::int64_t running = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        running += report.buckets[i].campana + report.buckets[i].integral;
        report.campana_set_cumulative[i] = running;
    }
    report.fit = fit_growth_exponent(report.edges, report.campana_set_cumulative,
                                     opts.fit_min_count);
    report.bigness = bigness_margin(m);

    if (collect_points) {
        std::vector<std::vector<std::int64_t>> campana_points;
        bool overflow = false;
        for (TaskState& st : states) {
            if (st.campana_points.size() > kMaxLineProbePoints) overflow = true;
            for (auto& p : st.campana_points) campana_points.push_back(std::move(p));
        }
        if (!overflow && campana_points.size() <= kMaxLineProbePoints) {
            report.top_lines = probe_collinear_lines(campana_points, opts.top_lines_k);
        }
    }
    return report;
}

std::vector<std::vector<std::int64_t>> collect_campana_points(const OrbifoldModel& m,
                                                              std::int64_t bound, int threads) {
    check_dim(m.ambient_dim);
    if (bound < 1) throw std::invalid_argument("collect_campana_points: bound must be >= 1");
    const SweepClassifier classifier(m, bound);
    const auto tasks = height_range_tasks(m.ambient_dim, bound);
    std::vector<std::vector<std::vector<std::int64_t>>> per_task(tasks.size());
    run_height_tasks(m.ambient_dim, bound, threads,
                     [&](std::size_t task, std::int64_t lo, std::int64_t hi) {
                         for_each_point_in_range(
                             m.ambient_dim, lo, hi, [&](std::span<const std::int64_t> pt) {
                                 const auto r = classifier.classify_point(pt);
                                 if (r.cls == PointClass::Campana ||
                                     r.cls == PointClass::Integral) {
                                     per_task[task].emplace_back(pt.begin(), pt.end());
                                 }
                             });
                     });
    std::vector<std::vector<std::int64_t>> out;
    for (auto& v : per_task) {
        for (auto& p : v) out.push_back(std::move(p));
    }
    return out;
}

std::string report_csv(const CountingReport& r) {
    std::ostringstream os;
    os << "edge,total,integral,campana,non_campana";
    if (r.boundary_detail) os << ",on_boundary";
    os << ",campana_set_cumulative\n";
    for (std::size_t i = 0; i < r.edges.size(); ++i) {
        os << r.edges[i] << "," << r.buckets[i].total << "," << r.buckets[i].integral << ","
           << r.buckets[i].campana << "," << r.buckets[i].non_campana;
        if (r.boundary_detail) os << "," << r.buckets[i].on_boundary;
        os << "," << r.campana_set_cumulative[i] << "\n";
    }
    return os.str();
}

std::string report_json_text(const CountingReport& r) {
    nlohmann::ordered_json j;
    j["model"] = r.model_summary;
    j["ambient_dim"] = r.ambient_dim;
    j["height_bound"] = r.height_bound;
    {
        std::ostringstream os;
        os << r.bigness;
        j["bigness_margin"] = os.str();
    }
    j["buckets"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.edges.size(); ++i) {
        nlohmann::ordered_json b;
        b["edge"] = r.edges[i];
        b["total"] = r.buckets[i].total;
        b["integral"] = r.buckets[i].integral;
        b["campana"] = r.buckets[i].campana;
        b["non_campana"] = r.buckets[i].non_campana;
        if (r.boundary_detail) b["on_boundary"] = r.buckets[i].on_boundary;
        b["campana_set_cumulative"] = r.campana_set_cumulative[i];
        j["buckets"].push_back(std::move(b));
    }
    if (r.fit) {
        j["fit"] = {{"theta", r.fit->theta},
                    {"coefficient", r.fit->coefficient},
                    {"buckets_used", r.fit->buckets_used}};
    } else {
        j["fit"] = nullptr;
    }
    if (r.ambient_dim == 2) {
        j["top_lines"] = nlohmann::ordered_json::array();
        for (const CollinearLine& l : r.top_lines) {
            j["top_lines"].push_back({{"line", l.line}, {"points", l.point_count}});
        }
    }
    return json_dump(j);
}

}  // namespace campana
