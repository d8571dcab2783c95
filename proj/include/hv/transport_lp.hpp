#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

namespace hv {

/// Cumulative solver counters (diagnostics for run manifests).
struct LpStats {
    std::atomic<long> calls{0};
    std::atomic<long> pivots{0};
    std::atomic<long> micros{0};
    void reset() {
        calls = 0;
        pivots = 0;
        micros = 0;
    }
};
inline LpStats& lp_stats() {
    static LpStats s;
    return s;
}

enum class LpStatus { optimal, degenerate, iteration_limit };

struct TransportResult {
    double cost = 0.0;
    LpStatus status = LpStatus::optimal;
    long pivots = 0;
    int refine_rounds = 0;
    /// The solve stopped as soon as the objective fell below the caller's
    /// acceptance bound; cost is then a valid upper bound on the optimum.
    bool early_stopped = false;
};

namespace transport_detail {

/// Primal network simplex for a balanced transportation problem, pricing
/// over a caller-supplied (growable) arc set.  The initial basis is the
/// boundary star: every real source ships to the last sink, the last source
/// feeds every real sink, and the corner arc closes the tree.  In the alpha
/// programs the last row/column are the absorbing boundary, so this start is
/// feasible by construction and keeps the basis tree shallow.
template <class CostFn>
class TransportSimplex {
   public:
    TransportSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                     CostFn& cost)
        : supply_(supply), demand_(demand), cost_(cost) {
        m_ = static_cast<int>(supply.size());
        n_ = static_cast<int>(demand.size());
        N_ = m_ + n_;
        build_star_basis();
    }

    void add_arcs(const std::vector<uint64_t>& arcs) {
        arcs_.insert(arcs_.end(), arcs.begin(), arcs.end());
        std::sort(arcs_.begin(), arcs_.end());
        arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
    }

    double basis_cost() const { return objective(); }

    /// Pivot until no arc in the restricted set has negative reduced cost, or
    /// until the objective falls below `early_stop_cost` (then the current
    /// basis cost upper-bounds the optimum and `early` is set).
    LpStatus run(long hard_limit, long& pivots, double early_stop_cost, bool& early) {
        double obj = early_stop_cost > -1e290 ? objective() : 0.0;
        if (early_stop_cost > -1e290 && obj <= early_stop_cost) {
            early = true;
            return LpStatus::optimal;
        }
        const size_t narcs = arcs_.size();
        const size_t block = std::max<size_t>(256, narcs / 64);
        size_t cursor = 0;
        bool bland = false;
        long local = 0;
        const long soft_limit = 40L * N_ + 10000;
        while (true) {
            int bi = -1, bj = -1;
            double brc = -rc_tol_;
            if (!bland) {
                size_t scanned = 0;
                while (scanned < narcs) {
                    size_t stop = std::min(block, narcs - scanned);
                    for (size_t s = 0; s < stop; ++s) {
                        size_t a = cursor + s;
                        if (a >= narcs) a -= narcs;
                        int i = static_cast<int>(arcs_[a] >> 32);
                        int j = static_cast<int>(arcs_[a] & 0xffffffffu);
                        double rc = cost_(i, j) - u_[i] - v_[j];
                        if (rc < brc) {
                            brc = rc;
                            bi = i;
                            bj = j;
                        }
                    }
                    scanned += stop;
                    cursor += stop;
                    if (cursor >= narcs) cursor -= narcs;
                    if (bi >= 0) break;
                }
            } else {
                for (size_t a = 0; a < narcs; ++a) {
                    int i = static_cast<int>(arcs_[a] >> 32);
                    int j = static_cast<int>(arcs_[a] & 0xffffffffu);
                    double rc = cost_(i, j) - u_[i] - v_[j];
                    if (rc < -rc_tol_) {
                        brc = rc;
                        bi = i;
                        bj = j;
                        break;
                    }
                }
            }
            if (bi < 0) return LpStatus::optimal;
            ++local;
            ++pivots;
            if (pivots > hard_limit) return LpStatus::iteration_limit;
            if (local > soft_limit) bland = true;
            double theta = pivot(bi, bj, brc);
            if (early_stop_cost > -1e290) {
                obj += theta * brc;
                if (obj <= early_stop_cost) {
                    early = true;
                    return LpStatus::optimal;
                }
            }
        }
    }

    double objective() const {
        double total = 0.0;
        for (int x = 0; x < N_; ++x) {
            if (parent_[x] < 0 || flow_[x] == 0.0) continue;
            int i = x < m_ ? x : parent_[x];
            int j = x < m_ ? parent_[x] - m_ : x - m_;
            total += flow_[x] * cost_(i, j);
        }
        return total;
    }

    const std::vector<double>& potentials_u() const { return u_; }
    const std::vector<double>& potentials_v() const { return v_; }

   private:
    const std::vector<double>& supply_;
    const std::vector<double>& demand_;
    CostFn& cost_;
    int m_ = 0, n_ = 0, N_ = 0;
    std::vector<uint64_t> arcs_;
    std::vector<int> parent_, depth_, pos_in_parent_;
    std::vector<double> flow_;
    std::vector<std::vector<int>> children_;
    std::vector<double> u_, v_;
    double rc_tol_ = 1e-12;
    std::vector<int> path_, chain_, stack_;

    void build_star_basis() {
        double absorbed = 0.0;
        for (int i = 0; i + 1 < m_; ++i) absorbed += supply_[i];
        double corner = demand_[n_ - 1] - absorbed;
        double total = absorbed + supply_[m_ - 1];
        if (corner < -1e-9 * std::max(total, 1e-300)) {
            build_nw_basis();
            return;
        }
        parent_.assign(N_, -1);
        depth_.assign(N_, 0);
        pos_in_parent_.assign(N_, -1);
        flow_.assign(N_, 0.0);
        children_.assign(N_, {});
        u_.assign(m_, 0.0);
        v_.assign(n_, 0.0);
        // root: last source (the boundary feeder)
        int root = m_ - 1;
        int bsink = m_ + n_ - 1;
        parent_[root] = -1;
        // last source -> every sink
        for (int j = 0; j < n_; ++j) {
            int node = m_ + j;
            parent_[node] = root;
            depth_[node] = 1;
            attach_child(root, node);
            flow_[node] = (j == n_ - 1) ? std::max(corner, 0.0) : demand_[j];
            v_[j] = cost_(root, j);
        }
        // every real source -> last sink
        for (int i = 0; i + 1 < m_; ++i) {
            parent_[i] = bsink;
            depth_[i] = 2;
            attach_child(bsink, i);
            flow_[i] = supply_[i];
            u_[i] = cost_(i, n_ - 1) - v_[n_ - 1];
        }
        u_[m_ - 1] = 0.0;
        set_tolerance();
    }

    void build_nw_basis() {
        parent_.assign(N_, -1);
        depth_.assign(N_, 0);
        pos_in_parent_.assign(N_, -1);
        flow_.assign(N_, 0.0);
        children_.assign(N_, {});
        u_.assign(m_, 0.0);
        v_.assign(n_, 0.0);
        std::vector<double> arem = supply_, brem = demand_;
        int i = 0, j = 0;
        std::vector<std::pair<int, int>> tree_arcs;
        std::vector<double> arcflow;
        while (true) {
            double q = std::min(arem[i], brem[j]);
            if (i == m_ - 1 && j == n_ - 1) q = std::max(arem[i], brem[j]);
            q = std::max(q, 0.0);
            tree_arcs.emplace_back(i, j);
            arcflow.push_back(q);
            arem[i] -= q;
            brem[j] -= q;
            if (i == m_ - 1 && j == n_ - 1) break;
            if (arem[i] <= 0.0 && i < m_ - 1)
                ++i;
            else
                ++j;
        }
        std::vector<std::vector<std::pair<int, double>>> adj(N_);
        for (size_t a = 0; a < tree_arcs.size(); ++a) {
            int s = tree_arcs[a].first, t = m_ + tree_arcs[a].second;
            adj[s].push_back({t, arcflow[a]});
            adj[t].push_back({s, arcflow[a]});
            arcs_.push_back((static_cast<uint64_t>(static_cast<uint32_t>(tree_arcs[a].first)) << 32) |
                            static_cast<uint32_t>(tree_arcs[a].second));
        }
        std::vector<int> stack = {0};
        std::vector<char> seen(N_, 0);
        seen[0] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto& [y, f] : adj[x]) {
                if (seen[y]) continue;
                seen[y] = 1;
                parent_[y] = x;
                flow_[y] = f;
                depth_[y] = depth_[x] + 1;
                attach_child(x, y);
                stack.push_back(y);
            }
        }
        std::vector<int> order = {0};
        order.reserve(N_);
        for (size_t q2 = 0; q2 < order.size(); ++q2)
            for (int ch : children_[order[q2]]) order.push_back(ch);
        for (int x : order) {
            int p = parent_[x];
            if (p < 0) continue;
            if (x >= m_)
                v_[x - m_] = cost_(p, x - m_) - u_[p];
            else
                u_[x] = cost_(x, p - m_) - v_[p - m_];
        }
        set_tolerance();
    }

    void attach_child(int p, int x) {
        pos_in_parent_[x] = static_cast<int>(children_[p].size());
        children_[p].push_back(x);
    }

    void detach_child(int p, int x) {
        auto& ch = children_[p];
        int idx = pos_in_parent_[x];
        int last = ch.back();
        ch[idx] = last;
        pos_in_parent_[last] = idx;
        ch.pop_back();
    }

    void set_tolerance() {
        double scale = 1.0;
        for (int i = 0; i < m_; i += std::max(1, m_ / 9))
            for (int j = 0; j < n_; j += std::max(1, n_ / 9))
                scale = std::max(scale, std::fabs(cost_(i, j)));
        rc_tol_ = 1e-12 * scale;
    }

    double pivot(int bi, int bj, double brc) {
        int a_node = bi, b_node = m_ + bj;
        path_.clear();
        int lca_pos = 0;
        {
            int x = a_node, y = b_node;
            static thread_local std::vector<int> up_a, up_b;
            up_a.clear();
            up_b.clear();
            while (depth_[x] > depth_[y]) {
                up_a.push_back(x);
                x = parent_[x];
            }
            while (depth_[y] > depth_[x]) {
                up_b.push_back(y);
                y = parent_[y];
            }
            while (x != y) {
                up_a.push_back(x);
                up_b.push_back(y);
                x = parent_[x];
                y = parent_[y];
            }
            up_a.push_back(x);
            lca_pos = static_cast<int>(up_a.size()) - 1;
            path_ = up_a;
            for (size_t q = up_b.size(); q-- > 0;) path_.push_back(up_b[q]);
        }

        double theta = 1e300;
        int leave_pos = -1;
        for (size_t p = 0; p + 1 < path_.size(); ++p) {
            if (p % 2 != 0) continue;
            int x = path_[p], y = path_[p + 1];
            int child = depth_[x] > depth_[y] ? x : y;
            if (flow_[child] < theta) {
                theta = flow_[child];
                leave_pos = static_cast<int>(p);
            }
        }
        for (size_t p = 0; p + 1 < path_.size(); ++p) {
            int x = path_[p], y = path_[p + 1];
            int child = depth_[x] > depth_[y] ? x : y;
            flow_[child] += (p % 2 == 0) ? -theta : theta;
        }

        int lx = path_[leave_pos], ly = path_[leave_pos + 1];
        int leave_child = depth_[lx] > depth_[ly] ? lx : ly;
        bool on_a_side = (leave_pos + 1 <= lca_pos);
        int sub_root = on_a_side ? a_node : b_node;
        int anchor = on_a_side ? b_node : a_node;

        chain_.clear();
        for (int x = sub_root;; x = parent_[x]) {
            chain_.push_back(x);
            if (x == leave_child) break;
        }
        for (size_t q = 0; q + 1 < chain_.size(); ++q) detach_child(chain_[q + 1], chain_[q]);
        detach_child(parent_[leave_child], leave_child);
        double carry = theta;
        int prev = anchor;
        for (size_t q = 0; q < chain_.size(); ++q) {
            int x = chain_[q];
            double old_flow = flow_[x];
            parent_[x] = prev;
            flow_[x] = carry;
            attach_child(prev, x);
            prev = x;
            carry = old_flow;
        }

        stack_.clear();
        stack_.push_back(sub_root);
        while (!stack_.empty()) {
            int x = stack_.back();
            stack_.pop_back();
            depth_[x] = depth_[parent_[x]] + 1;
            if (on_a_side) {
                if (x < m_)
                    u_[x] += brc;
                else
                    v_[x - m_] -= brc;
            } else {
                if (x < m_)
                    u_[x] -= brc;
                else
                    v_[x - m_] += brc;
            }
            for (int ch : children_[x]) stack_.push_back(ch);
        }
        return theta;
    }
};

}  // namespace transport_detail

/// Balanced transportation problem whose last row and column are absorbing
/// boundary nodes (the alpha programs): min sum flow_ij cost(i,j) with row
/// sums = supply, column sums = demand.  Restricted network simplex warm-
/// started between column-generation rounds; each round certifies the node
/// potentials against the full dense arc set and adds violating columns, so
/// the returned cost is the exact dense optimum.
template <class CostFn>
TransportResult solve_transport(const std::vector<double>& supply_in,
                                const std::vector<double>& demand_in, CostFn&& cost,
                                long hard_pivot_limit = -1, double early_stop_cost = -1e300) {
    TransportResult result;
    const int m = static_cast<int>(supply_in.size());
    const int n = static_cast<int>(demand_in.size());
    if (m == 0 || n == 0) return result;
    auto tick = std::chrono::steady_clock::now();
    struct Stamp {
        std::chrono::steady_clock::time_point t0;
        TransportResult* r;
        ~Stamp() {
            lp_stats().calls += 1;
            lp_stats().pivots += r->pivots;
            lp_stats().micros += std::chrono::duration_cast<std::chrono::microseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
        }
    } stamp{tick, &result};

    const std::vector<double>& supply = supply_in;
    const std::vector<double>& demand = demand_in;

    auto pack = [](int i, int j) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) | static_cast<uint32_t>(j);
    };

    std::vector<uint64_t> arcs;
    arcs.reserve(static_cast<size_t>(m) * 9 + 3 * n + 64);
    for (int i = 0; i < m; ++i) arcs.push_back(pack(i, n - 1));
    for (int j = 0; j < n; ++j) arcs.push_back(pack(m - 1, j));
    const int krow = 6;
    {
        std::vector<std::pair<double, int>> rowheap;
        std::vector<double> colbest1(n, 1e300), colbest2(n, 1e300);
        std::vector<int> colarg1(n, -1), colarg2(n, -1);
        for (int i = 0; i < m; ++i) {
            rowheap.clear();
            for (int j = 0; j < n; ++j) {
                double c = cost(i, j);
                if (static_cast<int>(rowheap.size()) < krow) {
                    rowheap.push_back({c, j});
                    std::push_heap(rowheap.begin(), rowheap.end());
                } else if (c < rowheap.front().first) {
                    std::pop_heap(rowheap.begin(), rowheap.end());
                    rowheap.back() = {c, j};
                    std::push_heap(rowheap.begin(), rowheap.end());
                }
                if (c < colbest1[j]) {
                    colbest2[j] = colbest1[j];
                    colarg2[j] = colarg1[j];
                    colbest1[j] = c;
                    colarg1[j] = i;
                } else if (c < colbest2[j]) {
                    colbest2[j] = c;
                    colarg2[j] = i;
                }
            }
            for (auto& [c, j] : rowheap) arcs.push_back(pack(i, j));
        }
        for (int j = 0; j < n; ++j) {
            if (colarg1[j] >= 0) arcs.push_back(pack(colarg1[j], j));
            if (colarg2[j] >= 0) arcs.push_back(pack(colarg2[j], j));
        }
    }

    double cscale = 1.0;
    {
        int si = std::max(1, m / 7), sj = std::max(1, n / 7);
        for (int i = 0; i < m; i += si)
            for (int j = 0; j < n; j += sj) cscale = std::max(cscale, std::fabs(cost(i, j)));
    }
    const double rc_tol = 1e-11 * cscale;
    const long hard_limit =
        hard_pivot_limit > 0 ? hard_pivot_limit : 400L * (m + n) + 2000000;

    transport_detail::TransportSimplex<std::remove_reference_t<CostFn>> simplex(supply, demand,
                                                                                cost);
    simplex.add_arcs(arcs);

    for (int round = 0; round < 64; ++round) {
        bool early = false;
        LpStatus st = simplex.run(hard_limit, result.pivots, early_stop_cost, early);
        result.refine_rounds = round + 1;
        if (early) {
            result.cost = simplex.objective();
            result.early_stopped = true;
            return result;
        }
        if (st == LpStatus::iteration_limit) {
            result.status = st;
            result.cost = simplex.objective();
            return result;
        }
        const auto& u = simplex.potentials_u();
        const auto& v = simplex.potentials_v();
        std::vector<std::pair<double, uint64_t>> viol;
        for (int i = 0; i < m; ++i) {
            double ui = u[i];
            for (int j = 0; j < n; ++j) {
                double rc = cost(i, j) - ui - v[j];
                if (rc < -rc_tol) viol.push_back({rc, pack(i, j)});
            }
        }
        if (viol.empty()) {
            result.cost = simplex.objective();
            result.status =
                result.pivots > 40L * (m + n) + 10000 ? LpStatus::degenerate : LpStatus::optimal;
            return result;
        }
        std::sort(viol.begin(), viol.end());
        size_t keep = std::min<size_t>(viol.size(), 32768);
        std::vector<uint64_t> extra(keep);
        for (size_t s = 0; s < keep; ++s) extra[s] = viol[s].second;
        simplex.add_arcs(extra);
    }
    result.status = LpStatus::iteration_limit;
    result.cost = simplex.objective();
    return result;
}

}  // namespace hv
