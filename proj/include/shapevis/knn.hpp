#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "shapevis/parallel.hpp"
#include "shapevis/rng.hpp"
#include "shapevis/types.hpp"

namespace shapevis {

struct Neighbor {
    NodeId id = 0;
    double dist = 0.0;
};

/// Per-point neighbor lists of length min(k, M-1), ascending by
/// (distance, id). Ties always resolve toward the smaller point id.
struct KnnResult {
    std::size_t k = 0;
    std::vector<std::vector<Neighbor>> lists;
};

namespace detail {

// Four independent accumulators break the FP dependency chain; the scans
// over millions of point pairs are latency-bound otherwise.
inline double squared_euclidean(const double* a, const double* b, std::size_t d) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        const double d0 = a[i] - b[i];
        const double d1 = a[i + 1] - b[i + 1];
        const double d2 = a[i + 2] - b[i + 2];
        const double d3 = a[i + 3] - b[i + 3];
        acc0 += d0 * d0;
        acc1 += d1 * d1;
        acc2 += d2 * d2;
        acc3 += d3 * d3;
    }
    for (; i < d; ++i) {
        const double diff = a[i] - b[i];
        acc0 += diff * diff;
    }
    return (acc0 + acc1) + (acc2 + acc3);
}

inline double dot(const double* a, const double* b, std::size_t d) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        acc0 += a[i] * b[i];
        acc1 += a[i + 1] * b[i + 1];
        acc2 += a[i + 2] * b[i + 2];
        acc3 += a[i + 3] * b[i + 3];
    }
    for (; i < d; ++i) acc0 += a[i] * b[i];
    return (acc0 + acc1) + (acc2 + acc3);
}

// Internal comparison distance: squared Euclidean, or 1 - cosine similarity.
// Monotone in the reported metric, so orderings and ties agree.
struct DistanceKernel {
    MatrixView points;
    Metric metric = Metric::euclidean;
    std::vector<double> norms;   // Euclidean norms, used by the cosine metric

    DistanceKernel(MatrixView pts, Metric m) : points(pts), metric(m) {
        if (metric == Metric::cosine) {
            norms.resize(points.rows);
            for (std::size_t i = 0; i < points.rows; ++i)
                norms[i] = std::sqrt(dot(points.row(i), points.row(i), points.cols));
        }
    }

    double operator()(std::size_t a, std::size_t b) const {
        if (metric == Metric::euclidean)
            return squared_euclidean(points.row(a), points.row(b), points.cols);
        const double denom = norms[a] * norms[b];
        if (denom == 0.0) return 1.0;
        return 1.0 - dot(points.row(a), points.row(b), points.cols) / denom;
    }

    // Maps the comparison distance back to the reported one.
    double finalize(double d) const {
        return metric == Metric::euclidean ? std::sqrt(d) : d;
    }
};

inline bool closer(double da, NodeId ia, double db, NodeId ib) {
    return da < db || (da == db && ia < ib);
}

} // namespace detail

struct NnDescentParams {
    unsigned iters = 10;
    double sample_rate = 0.5;
    double early_exit_fraction = 0.001;   // stop when fewer lists change
};

/// Number of points at or below which the approximate search simply runs the
/// exact scan; brute force is cheaper than NN-descent bookkeeping there.
inline constexpr std::size_t kExactFallbackMax = 1000;

/// Exact k-nearest neighbors by full pairwise scan.
inline KnnResult exact_knn(MatrixView points, std::size_t k,
                           Metric metric = Metric::euclidean, unsigned threads = 0,
                           std::vector<std::string>* warnings = nullptr) {
    const std::size_t m = points.rows;
    KnnResult result;
    if (m == 0) return result;
    if (k >= m) {
        detail::push_warning(warnings, "k = " + std::to_string(k) + " >= M = " +
                                           std::to_string(m) + "; clamping to M-1");
        k = m - 1;
    }
    result.k = k;
    result.lists.assign(m, {});
    if (k == 0) return result;

    const detail::DistanceKernel dist(points, metric);
    parallel_for(m, threads, [&](std::size_t q) {
        // Max-heap on (dist, id): the current worst sits on top.
        auto worse = [](const Neighbor& a, const Neighbor& b) {
            return detail::closer(a.dist, a.id, b.dist, b.id);
        };
        std::vector<Neighbor> heap;
        heap.reserve(k + 1);
        for (std::size_t c = 0; c < m; ++c) {
            if (c == q) continue;
            const double d = dist(q, c);
            const NodeId id = static_cast<NodeId>(c);
            if (heap.size() < k) {
                heap.push_back({id, d});
                std::push_heap(heap.begin(), heap.end(), worse);
            } else if (detail::closer(d, id, heap.front().dist, heap.front().id)) {
                std::pop_heap(heap.begin(), heap.end(), worse);
                heap.back() = {id, d};
                std::push_heap(heap.begin(), heap.end(), worse);
            }
        }
        std::sort(heap.begin(), heap.end(), [](const Neighbor& a, const Neighbor& b) {
            return detail::closer(a.dist, a.id, b.dist, b.id);
        });
        for (auto& n : heap) n.dist = dist.finalize(n.dist);
        result.lists[q] = std::move(heap);
    });
    return result;
}

namespace detail {

struct NndEntry {
    double dist = 0.0;
    NodeId id = 0;
    bool is_new = false;
};

// Sorted-insert into a bounded list; returns true when the list changed.
inline bool nnd_insert(std::vector<NndEntry>& list, std::size_t cap, NodeId id, double d) {
    auto pos = std::lower_bound(list.begin(), list.end(), std::pair<double, NodeId>{d, id},
                                [](const NndEntry& e, const std::pair<double, NodeId>& key) {
                                    return closer(e.dist, e.id, key.first, key.second);
                                });
    if (list.size() >= cap && pos == list.end()) return false;
    for (const auto& e : list)
        if (e.id == id) return false;
    if (list.size() >= cap) list.pop_back();
    list.insert(pos, NndEntry{d, id, true});
    return true;
}

} // namespace detail

/// Approximate k-nearest neighbors via NN-descent. Per-(point, iteration)
/// random streams derived from the seed make the output identical across
/// thread counts, and running more iterations can only refine the lists.
/// Falls back to the exact scan for small inputs.
inline KnnResult nn_descent_knn(MatrixView points, std::size_t k, std::uint64_t seed,
                                const NnDescentParams& params = {},
                                Metric metric = Metric::euclidean, unsigned threads = 0,
                                std::vector<std::string>* warnings = nullptr) {
    const std::size_t m = points.rows;
    if (m <= kExactFallbackMax) return exact_knn(points, k, metric, threads, warnings);
    if (k >= m) {
        detail::push_warning(warnings, "k = " + std::to_string(k) + " >= M = " +
                                           std::to_string(m) + "; clamping to M-1");
        k = m - 1;
    }
    KnnResult result;
    result.k = k;
    result.lists.assign(m, {});
    if (k == 0) return result;

    const detail::DistanceKernel dist(points, metric);
    std::vector<std::vector<detail::NndEntry>> lists(m);

    // Random initialization, one stream per point.
    parallel_for(m, threads, [&](std::size_t v) {
        SplitMix64 rng(mix_seed(seed, 0x6e6e64 /*"nnd"*/, v, 0));
        auto& list = lists[v];
        list.reserve(k);
        while (list.size() < k) {
            NodeId cand = static_cast<NodeId>(rng.below(m - 1));
            if (cand >= v) ++cand;   // skip self
            bool dup = false;
            for (const auto& e : list)
                if (e.id == cand) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            detail::nnd_insert(list, k, cand, dist(v, cand));
        }
    });

    const std::size_t rho_k = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                           params.sample_rate * double(k) + 0.5));
    std::vector<std::vector<NodeId>> fwd_new(m), fwd_old(m), rev_new(m), rev_old(m);
    std::vector<std::uint64_t> cand_offsets(m + 1);

    struct Candidate {
        NodeId target;
        NodeId id;
        double dist;
    };

    for (unsigned iter = 1; iter <= params.iters; ++iter) {
        // Sampling phase: split each list into "new" (up to rho*k sampled
        // entries, then unflagged) and "old" entries.
        parallel_for(m, threads, [&](std::size_t v) {
            auto& nw = fwd_new[v];
            auto& od = fwd_old[v];
            nw.clear();
            od.clear();
            std::vector<std::size_t> flagged;
            for (std::size_t i = 0; i < lists[v].size(); ++i) {
                if (lists[v][i].is_new)
                    flagged.push_back(i);
                else
                    od.push_back(lists[v][i].id);
            }
            SplitMix64 rng(mix_seed(seed, 0x73616d70 /*"samp"*/, v, iter));
            if (flagged.size() > rho_k) {
                for (std::size_t i = 0; i < rho_k; ++i) {
                    const std::size_t j = i + rng.below(flagged.size() - i);
                    std::swap(flagged[i], flagged[j]);
                }
                flagged.resize(rho_k);
                std::sort(flagged.begin(), flagged.end());
            }
            for (std::size_t idx : flagged) {
                lists[v][idx].is_new = false;
                nw.push_back(lists[v][idx].id);
            }
        });

        // Reverse lists, built in ascending source order.
        for (auto& r : rev_new) r.clear();
        for (auto& r : rev_old) r.clear();
        for (std::size_t v = 0; v < m; ++v) {
            for (NodeId u : fwd_new[v]) rev_new[u].push_back(static_cast<NodeId>(v));
            for (NodeId u : fwd_old[v]) rev_old[u].push_back(static_cast<NodeId>(v));
        }

        // Join sets per point: forward entries plus a sample of the reverse.
        std::vector<std::vector<NodeId>> join_new(m), join_old(m);
        std::vector<std::uint64_t> counts(m, 0);
        parallel_for(m, threads, [&](std::size_t v) {
            SplitMix64 rng(mix_seed(seed, 0x72657673 /*"revs"*/, v, iter));
            auto sample_into = [&](std::vector<NodeId>& dst, std::vector<NodeId>& src) {
                if (src.size() > rho_k) {
                    for (std::size_t i = 0; i < rho_k; ++i) {
                        const std::size_t j = i + rng.below(src.size() - i);
                        std::swap(src[i], src[j]);
                    }
                    src.resize(rho_k);
                }
                dst.insert(dst.end(), src.begin(), src.end());
            };
            join_new[v] = fwd_new[v];
            sample_into(join_new[v], rev_new[v]);
            join_old[v] = fwd_old[v];
            sample_into(join_old[v], rev_old[v]);
            auto dedupe = [](std::vector<NodeId>& xs) {
                std::sort(xs.begin(), xs.end());
                xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            };
            dedupe(join_new[v]);
            dedupe(join_old[v]);
            const std::size_t nn = join_new[v].size();
            counts[v] = nn * (nn - 1) / 2 + nn * join_old[v].size();
        });

        // Local joins write candidate updates into per-source slots at
        // deterministic offsets, so the merge ignores thread scheduling.
        cand_offsets[0] = 0;
        for (std::size_t v = 0; v < m; ++v) cand_offsets[v + 1] = cand_offsets[v] + 2 * counts[v];
        std::vector<Candidate> candidates(cand_offsets[m]);
        parallel_for(m, threads, [&](std::size_t v) {
            std::uint64_t w = cand_offsets[v];
            const auto& nw = join_new[v];
            const auto& od = join_old[v];
            for (std::size_t i = 0; i < nw.size(); ++i) {
                for (std::size_t j = i + 1; j < nw.size(); ++j) {
                    const double d = dist(nw[i], nw[j]);
                    candidates[w++] = {nw[i], nw[j], d};
                    candidates[w++] = {nw[j], nw[i], d};
                }
                // Emit unconditionally so slot offsets stay exact; the apply
                // step drops self-pairs from rare new/old overlaps.
                for (NodeId o : od) {
                    const double d = dist(nw[i], o);
                    candidates[w++] = {nw[i], o, d};
                    candidates[w++] = {o, nw[i], d};
                }
            }
        });

        // Bucket candidates by target (stable counting sort), then apply each
        // target's updates in (dist, id) order.
        std::vector<std::uint64_t> bucket_count(m + 1, 0);
        for (const auto& c : candidates) ++bucket_count[c.target + 1];
        for (std::size_t v = 0; v < m; ++v) bucket_count[v + 1] += bucket_count[v];
        std::vector<Candidate> buckets(candidates.size());
        {
            std::vector<std::uint64_t> cursor(bucket_count.begin(), bucket_count.end() - 1);
            for (const auto& c : candidates) buckets[cursor[c.target]++] = c;
        }
        std::vector<std::uint32_t> changed(m, 0);
        parallel_for(m, threads, [&](std::size_t v) {
            const std::uint64_t begin = bucket_count[v], end = bucket_count[v + 1];
            if (begin == end) return;
            std::sort(buckets.begin() + begin, buckets.begin() + end,
                      [](const Candidate& a, const Candidate& b) {
                          return detail::closer(a.dist, a.id, b.dist, b.id);
                      });
            bool touched = false;
            auto& lst = lists[v];
            for (std::uint64_t i = begin; i < end; ++i) {
                const auto& c = buckets[i];
                if (c.id == v) continue;
                // Candidates arrive ascending; once one fails against the
                // current worst, all later ones fail too.
                if (lst.size() >= k &&
                    !detail::closer(c.dist, c.id, lst.back().dist, lst.back().id))
                    break;
                touched |= detail::nnd_insert(lst, k, c.id, c.dist);
            }
            changed[v] = touched ? 1 : 0;
        });
        const std::uint64_t changed_lists =
            std::accumulate(changed.begin(), changed.end(), std::uint64_t{0});
        if (double(changed_lists) < params.early_exit_fraction * double(m)) break;
    }

    for (std::size_t v = 0; v < m; ++v) {
        auto& out = result.lists[v];
        out.reserve(lists[v].size());
        for (const auto& e : lists[v]) out.push_back({e.id, dist.finalize(e.dist)});
    }
    return result;
}

/// Symmetrizes directed neighbor lists into the undirected graph G_M:
/// an edge exists when either endpoint lists the other.
inline NeighborGraph knn_to_graph(const KnnResult& r) {
    NeighborGraph g;
    g.resize(r.lists.size());
    for (NodeId v = 0; v < g.node_count; ++v)
        for (const Neighbor& n : r.lists[v]) g.add_edge(v, n.id);
    return g;
}

} // namespace shapevis
