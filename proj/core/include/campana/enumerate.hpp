#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>

#include "campana/heights.hpp"

namespace campana {

/// Streams every canonical point of P^n(Q) (n = 1 or 2) with
/// max |x_j| <= bound, each exactly once, in a deterministic order.
/// n = 1 walks the coprime-pair tree (no gcd tests); n = 2 sweeps cube
/// shells with a gcd filter.
void for_each_point(int ambient_dim, std::int64_t bound,
                    const std::function<void(std::span<const std::int64_t>)>& fn);

/// Collects the stream; for tests and small bounds.
std::vector<std::vector<std::int64_t>> points_up_to(int ambient_dim, std::int64_t bound);

/// Classifier compiled against a model and a height bound. Uses a pure
/// int64 path with a smallest-prime-factor sieve whenever form values are
/// provably within range, and falls back to the exact big-integer path
/// otherwise. Both paths implement the same predicate.
class SweepClassifier {
public:
    SweepClassifier(const OrbifoldModel& m, std::int64_t height_bound);

    struct Result {
        PointClass cls;
        std::int64_t witness = 0;             // violating prime (NonCampana, fast path)
        std::size_t boundary_component = 0;   // vanishing component (OnBoundary)
    };

    Result classify_point(std::span<const std::int64_t> coords) const;
    bool fast_path() const { return fast_; }
    const OrbifoldModel& model() const { return *model_; }
    const SpfSieve* sieve() const { return sieve_.get(); }

private:
    struct CompiledMonomial {
        std::int64_t coeff;
        std::array<std::uint8_t, 3> exps;
    };
    struct CompiledComponent {
        std::vector<CompiledMonomial> monomials;
        std::int64_t scaled_weight;
    };

    Result classify_exact(std::span<const std::int64_t> coords) const;

    const OrbifoldModel* model_;
    std::vector<CompiledComponent> comps_;
    std::int64_t weight_scale_ = 1;
    std::vector<std::int64_t> s_primes_;
    std::shared_ptr<const SpfSieve> sieve_;
    bool fast_ = false;
};

/// Height buckets at powers of two: 1, 2, 4, ..., clamped to end at bound.
std::vector<std::int64_t> bucket_edges(std::int64_t bound);

struct BucketTally {
    std::int64_t total = 0;
    std::int64_t integral = 0;
    std::int64_t campana = 0;
    std::int64_t non_campana = 0;
    std::int64_t on_boundary = 0;
};

struct GrowthFit {
    double theta = 0;
    double coefficient = 0;
    int buckets_used = 0;
};

/// Log-log least squares over (edge, cumulative count), restricted to
/// entries with cumulative count >= min_count. Needs two distinct edges.
std::optional<GrowthFit> fit_growth_exponent(std::span<const std::int64_t> edges,
                                             std::span<const std::int64_t> cumulative,
                                             std::int64_t min_count = 10);

struct CollinearLine {
    std::array<std::int64_t, 3> line;  // primitive, sign-normalized coefficients
    std::int64_t point_count = 0;
};

struct CountingReport {
    std::string model_summary;
    int ambient_dim = 1;
    std::int64_t height_bound = 0;
    std::vector<std::int64_t> edges;
    std::vector<BucketTally> buckets;
    /// cumulative size of the Campana set (Campana + Integral) per edge
    std::vector<std::int64_t> campana_set_cumulative;
    std::optional<GrowthFit> fit;
    Rational bigness;
    std::vector<CollinearLine> top_lines;  // n = 2 only, capped probe
    bool boundary_detail = false;
};

struct CountOptions {
    int threads = 0;               // 0 = hardware concurrency
    bool include_boundary = false; // emit on_boundary tallies in CSV/JSON
    int top_lines_k = 10;
    std::int64_t fit_min_count = 10;
};

/// Classifies every point of height <= bound and tallies per bucket.
/// The task grid is fixed by (model, bound) alone, so reports are identical
/// for every thread count.
CountingReport count_campana(const OrbifoldModel& m, std::int64_t bound,
                             const CountOptions& opts = {});

/// Campana-set points (Campana + Integral) of height <= bound, in the
/// deterministic sweep order.
std::vector<std::vector<std::int64_t>> collect_campana_points(const OrbifoldModel& m,
                                                              std::int64_t bound,
                                                              int threads = 0);

/// Fixed task grid of height ranges [lo, hi], balanced by sweep work; tasks
/// run on a pool but per-task results must be merged in task order.
std::vector<std::pair<std::int64_t, std::int64_t>> height_range_tasks(int ambient_dim,
                                                                      std::int64_t bound);

/// Runs fn(task_index, lo, hi) over the task grid with `threads` workers.
void run_height_tasks(int ambient_dim, std::int64_t bound, int threads,
                      const std::function<void(std::size_t, std::int64_t, std::int64_t)>& fn);

/// Streams points with height in [lo, hi] (shell enumeration, gcd filter).
void for_each_point_in_range(int ambient_dim, std::int64_t lo, std::int64_t hi,
                             const std::function<void(std::span<const std::int64_t>)>& fn);

std::string report_csv(const CountingReport& r);
std::string report_json_text(const CountingReport& r);

}  // namespace campana
