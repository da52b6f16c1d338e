#include "dwell/spectral_scan.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <set>
#include <stdexcept>

namespace dwell {

std::string_view to_string(StateClass c)
{
    switch (c) {
    case StateClass::T11: return "T11";
    case StateClass::T20: return "T20";
    case StateClass::Mixed: return "mixed";
    }
    return "?";
}

StateClassification classify_state(const EigenPair& pair, const RegionOverlaps& regions, double threshold)
{
    const Vector& x = pair.coefficients;
    StateClassification c;
    c.w_I = x.dot(regions.region_I * x);
    c.w_II = x.dot(regions.region_II * x);
    c.w_III = x.dot(regions.region_III * x);
    if (c.w_II >= threshold) c.state_class = StateClass::T11;
    else if (c.w_I + c.w_III >= threshold) c.state_class = StateClass::T20;
    else c.state_class = StateClass::Mixed;
    return c;
}

double hellmann_feynman_slope(const EigenPair& pair, const SymmetricSparseMatrix& interaction)
{
    return pair.coefficients.dot(interaction * pair.coefficients);
}

// ---------------------------------------------------------------------------

std::vector<long> BranchTracker::assign(const Eigen::MatrixXd& vectors, const std::vector<double>& energies,
                                        const SymmetricSparseMatrix& mass)
{
    const long k = vectors.cols();
    std::vector<long> ids(static_cast<std::size_t>(k), -1);
    overlaps_.assign(static_cast<std::size_t>(k), 0.0);

    if (prev_.cols() > 0) {
        if (prev_m_.cols() != prev_.cols()) prev_m_ = mass * prev_;
        const Eigen::MatrixXd o = (prev_m_.transpose() * vectors).cwiseAbs();
        struct Candidate {
            double overlap;
            long prev, next;
        };
        std::vector<Candidate> cands;
        for (long j = 0; j < k; ++j) {
            for (long i = 0; i < o.rows(); ++i) {
                if (o(i, j) >= 1e-3) cands.push_back({o(i, j), i, j});
            }
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& a, const Candidate& b) { return a.overlap > b.overlap; });
        std::vector<bool> used(static_cast<std::size_t>(o.rows()), false);
        for (const auto& c : cands) {
            const auto j = static_cast<std::size_t>(c.next);
            if (ids[j] >= 0 || used[static_cast<std::size_t>(c.prev)]) continue;
            // Near-tie between previous levels: prefer the closest energy.
            long best = c.prev;
            bool tie = false;
            for (long i = 0; i < o.rows(); ++i) {
                if (i == c.prev || used[static_cast<std::size_t>(i)]) continue;
                if (o(i, c.next) >= c.overlap - ambiguity_) {
                    tie = true;
                    if (std::abs(prev_energy_[static_cast<std::size_t>(i)] - energies[j]) <
                        std::abs(prev_energy_[static_cast<std::size_t>(best)] - energies[j])) {
                        best = i;
                    }
                }
            }
            if (tie) ++ambiguous_;
            used[static_cast<std::size_t>(best)] = true;
            ids[j] = prev_ids_[static_cast<std::size_t>(best)];
            overlaps_[j] = o(best, c.next);
        }
    }
    for (auto& id : ids) {
        if (id < 0) id = static_cast<long>(next_++);
    }
    prev_ = vectors;
    prev_m_ = mass * vectors;
    prev_energy_ = energies;
    prev_ids_ = ids;
    return ids;
}

void BranchTracker::reset(const Eigen::MatrixXd& vectors, const std::vector<double>& energies, std::vector<long> ids,
                          std::size_t next_branch)
{
    prev_ = vectors;
    prev_energy_ = energies;
    prev_ids_ = std::move(ids);
    next_ = next_branch;
    prev_m_.resize(0, 0);
}

namespace {

Eigen::MatrixXd stack(const std::vector<EigenPair>& pairs)
{
    Eigen::MatrixXd phi(pairs.front().coefficients.size(), static_cast<long>(pairs.size()));
    for (std::size_t n = 0; n < pairs.size(); ++n) phi.col(static_cast<long>(n)) = pairs[n].coefficients;
    return phi;
}

std::vector<double> energies_of(const std::vector<EigenPair>& pairs)
{
    std::vector<double> e;
    for (const auto& p : pairs) e.push_back(p.energy);
    return e;
}

}  // namespace

ScanPoint evaluate_point(const Simulator& sim, double strength, const ScanOptions& options,
                         std::vector<EigenPair>* pairs_out)
{
    QuenchPoint q = sim.analyze(strength);
    const auto& ops = sim.operators();
    ScanPoint p;
    p.strength = strength;
    p.initial_energy = q.initial.energy;
    p.captured_norm = q.decomposition.captured_norm;
    p.levels.resize(q.pairs.size());
    for (std::size_t n = 0; n < q.pairs.size(); ++n) {
        auto& rec = p.levels[n];
        rec.energy = q.pairs[n].energy;
        rec.residual = q.pairs[n].residual_norm;
        rec.slope = hellmann_feynman_slope(q.pairs[n], ops.interaction);
        const double c = q.decomposition.overlaps[n];
        rec.weight = c * c;
        auto& cl = rec.classification;
        cl.w_I = q.regions.region_I(static_cast<long>(n), static_cast<long>(n));
        cl.w_II = q.regions.region_II(static_cast<long>(n), static_cast<long>(n));
        cl.w_III = q.regions.region_III(static_cast<long>(n), static_cast<long>(n));
        if (cl.w_II >= options.class_threshold) cl.state_class = StateClass::T11;
        else if (cl.w_I + cl.w_III >= options.class_threshold) cl.state_class = StateClass::T20;
        else cl.state_class = StateClass::Mixed;
        p.resonance += rec.weight * cl.w_II;
    }
    p.dominant = q.dominant.components;
    for (const auto& c : q.spectrum.components) p.amplitude_sum += c.amplitude;
    if (pairs_out) *pairs_out = std::move(q.pairs);
    return p;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count)
{
    if (count == 0) throw std::invalid_argument("uniform_grid: empty grid");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double a = static_cast<double>(count - 1 - i);
        const double b = static_cast<double>(i);
        g[i] = count == 1 ? lo : (lo * a + hi * b) / static_cast<double>(count - 1);
        // Snap round-off so that grids through zero hit it exactly.
        if (std::abs(g[i]) < 1e-12 * std::max(std::abs(lo), std::abs(hi))) g[i] = 0.0;
    }
    return g;
}

ScanResult scan_levels(const Simulator& sim, const std::vector<double>& grid, const ScanOptions& options,
                       const ScanSink& sink, std::vector<ScanPoint> resume)
{
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("scan_levels: U grid must be sorted");
    ScanResult result;
    BranchTracker tracker(options.ambiguity);
    const auto& mass = sim.operators().mass;

    std::size_t start = 0;
    if (!resume.empty()) {
        if (resume.size() > grid.size()) throw std::invalid_argument("scan_levels: resume longer than grid");
        for (std::size_t i = 0; i < resume.size(); ++i) {
            if (std::abs(resume[i].strength - grid[i]) > 1e-12 * (1.0 + std::abs(grid[i]))) {
                throw std::invalid_argument("scan_levels: resumed records do not match the grid");
            }
        }
        // Re-solve the last resumed point to continue tracking from it.
        std::vector<EigenPair> pairs;
        evaluate_point(sim, resume.back().strength, options, &pairs);
        std::vector<long> ids;
        long max_id = -1;
        for (const auto& pt : resume) {
            for (const auto& l : pt.levels) max_id = std::max(max_id, l.branch);
        }
        for (const auto& l : resume.back().levels) ids.push_back(l.branch);
        tracker.reset(stack(pairs), energies_of(pairs), ids, static_cast<std::size_t>(max_id + 1));
        start = resume.size();
        result.points = std::move(resume);
    }

    const std::size_t batch = std::max<std::size_t>(1, options.threads);
    for (std::size_t i = start; i < grid.size(); i += batch) {
        const std::size_t end = std::min(grid.size(), i + batch);
        std::vector<std::future<std::pair<ScanPoint, std::vector<EigenPair>>>> jobs;
        for (std::size_t j = i; j < end; ++j) {
            jobs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred, [&, j] {
                std::vector<EigenPair> pairs;
                ScanPoint p = evaluate_point(sim, grid[j], options, &pairs);
                return std::make_pair(std::move(p), std::move(pairs));
            }));
        }
        for (auto& job : jobs) {
            auto [p, pairs] = job.get();
            const auto ids = tracker.assign(stack(pairs), energies_of(pairs), mass);
            for (std::size_t n = 0; n < ids.size(); ++n) p.levels[n].branch = ids[n];
            if (sink) sink(p);
            result.points.push_back(std::move(p));
        }
    }
    result.ambiguous_matches = tracker.ambiguous();
    result.next_branch = tracker.next_branch();

    std::function<ScanPoint(double)> probe;
    std::size_t cached = result.points.size();
    std::vector<EigenPair> base_pairs;
    if (options.refine) {
        probe = [&](double u) {
            // Branch ids for a probe come from the nearest base grid point.
            std::size_t nearest = 0;
            for (std::size_t i = 1; i < result.points.size(); ++i) {
                if (std::abs(result.points[i].strength - u) < std::abs(result.points[nearest].strength - u)) {
                    nearest = i;
                }
            }
            if (nearest != cached) {
                evaluate_point(sim, result.points[nearest].strength, options, &base_pairs);
                cached = nearest;
            }
            std::vector<long> ids;
            for (const auto& l : result.points[nearest].levels) ids.push_back(l.branch);
            BranchTracker local(options.ambiguity);
            local.reset(stack(base_pairs), energies_of(base_pairs), ids, result.next_branch);

            std::vector<EigenPair> pairs;
            ScanPoint p = evaluate_point(sim, u, options, &pairs);
            const auto new_ids = local.assign(stack(pairs), energies_of(pairs), mass);
            for (std::size_t n = 0; n < new_ids.size(); ++n) p.levels[n].branch = new_ids[n];
            result.next_branch = std::max(result.next_branch, local.next_branch());
            p.refined = true;
            return p;
        };
    }
    result.crossings = detect_avoided_crossings(result, options, probe);
    return result;
}

namespace {

bool in_window(const ScanOptions& options, double e)
{
    return !options.window || (e >= options.window->first && e <= options.window->second);
}

AvoidedCrossing describe(const ScanPoint& center, const std::vector<const ScanPoint*>& nearby,
                         const ScanOptions& options)
{
    AvoidedCrossing x;
    x.center = center.strength;
    x.resonance = center.resonance;
    std::set<std::size_t> chosen;
    std::map<long, std::size_t> by_branch;
    for (std::size_t n = 0; n < center.levels.size(); ++n) by_branch[center.levels[n].branch] = n;
    for (std::size_t n = 0; n < center.levels.size(); ++n) {
        const auto& l = center.levels[n];
        if (l.weight >= options.participation_threshold && in_window(options, l.energy)) chosen.insert(n);
    }
    for (const ScanPoint* q : nearby) {
        for (const auto& l : q->levels) {
            if (l.weight < options.participation_threshold || !in_window(options, l.energy)) continue;
            auto it = by_branch.find(l.branch);
            if (it != by_branch.end()) chosen.insert(it->second);
        }
    }
    x.participants.assign(chosen.begin(), chosen.end());
    for (std::size_t n : x.participants) x.types.push_back(center.levels[n].classification.state_class);
    x.gap = 0.0;
    for (std::size_t k = 1; k < x.participants.size(); ++k) {
        const double g = center.levels[x.participants[k]].energy - center.levels[x.participants[k - 1]].energy;
        if (k == 1 || g < x.gap) x.gap = g;
    }
    return x;
}

bool is_crossing(const AvoidedCrossing& x)
{
    if (x.participants.size() < 3) return false;
    return std::any_of(x.types.begin(), x.types.end(), [](StateClass c) { return c != StateClass::T20; });
}

}  // namespace

std::vector<AvoidedCrossing> detect_avoided_crossings(ScanResult& scan, const ScanOptions& options,
                                                      const std::function<ScanPoint(double)>& probe)
{
    const auto& pts = scan.points;
    if (pts.size() < 3) throw std::invalid_argument("detect_avoided_crossings: need at least 3 U samples");
    std::vector<AvoidedCrossing> found;
    scan.unresolved.clear();

    // Edge maxima cannot be bracketed.
    if (pts.front().resonance > pts[1].resonance && pts.front().resonance >= options.candidate_floor) {
        scan.unresolved.push_back(pts.front().strength);
    }
    if (pts.back().resonance > pts[pts.size() - 2].resonance && pts.back().resonance >= options.candidate_floor) {
        scan.unresolved.push_back(pts.back().strength);
    }

    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double r = pts[i].resonance;
        if (r < options.candidate_floor || r < pts[i - 1].resonance || r < pts[i + 1].resonance) continue;
        // Plateaus: only the first point of equal neighbours.
        if (r == pts[i - 1].resonance) continue;

        std::vector<ScanPoint> probes;
        const ScanPoint* best = &pts[i];
        if (probe) {
            // Golden-section maximization of the resonance inside the bracket,
            // always keeping the best point interior.
            const double gold = 0.3819660112501051;
            double a = pts[i - 1].strength;
            double b = pts[i + 1].strength;
            double x = pts[i].strength;
            double fx = r;
            probes.reserve(64);
            while (b - a > 2.0 * options.refine_tolerance && probes.size() < 60) {
                const bool right = (b - x) > (x - a);
                const double u = right ? x + gold * (b - x) : x - gold * (x - a);
                probes.push_back(probe(u));
                const double fu = probes.back().resonance;
                if (fu > fx) {
                    if (right) a = x;
                    else b = x;
                    x = u;
                    fx = fu;
                } else {
                    if (right) b = u;
                    else a = u;
                }
            }
            for (const auto& q : probes) {
                if (q.resonance > best->resonance) best = &q;
            }
        }
        std::vector<const ScanPoint*> nearby;
        for (const auto& q : probes) {
            if (&q != best && std::abs(q.strength - best->strength) <= 2.0 * options.refine_tolerance) {
                nearby.push_back(&q);
            }
        }
        AvoidedCrossing x = describe(*best, nearby, options);
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const AvoidedCrossing& y) {
            return std::abs(y.center - x.center) <= 2.0 * options.refine_tolerance;
        });
        if (is_crossing(x) && !duplicate) found.push_back(std::move(x));
        for (auto& q : probes) scan.refinements.push_back(std::move(q));
    }
    std::sort(scan.refinements.begin(), scan.refinements.end(),
              [](const ScanPoint& a, const ScanPoint& b) { return a.strength < b.strength; });
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.center < b.center; });
    scan.crossings = found;
    return found;
}

double select_off_resonance(const ScanResult& scan, std::size_t min_steps)
{
    if (scan.points.size() < 2) throw std::invalid_argument("select_off_resonance: scan too short");
    const double step = scan.points[1].strength - scan.points[0].strength;
    double best_u = scan.points.front().strength;
    double best_r = -1.0;
    for (const auto& p : scan.points) {
        bool far = true;
        for (const auto& x : scan.crossings) {
            if (std::abs(p.strength - x.center) < static_cast<double>(min_steps) * step) far = false;
        }
        if (!far) continue;
        if (best_r < 0.0 || p.resonance < best_r) {
            best_r = p.resonance;
            best_u = p.strength;
        }
    }
    if (best_r < 0.0) throw std::runtime_error("select_off_resonance: every grid point is near a crossing");
    return best_u;
}

}  // namespace dwell
