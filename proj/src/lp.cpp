#include "dic/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <utility>

namespace dic::lp {

// ---------------------------------------------------------------------------
// LinearProgram container
// ---------------------------------------------------------------------------

LinearProgram::LinearProgram(int n_vars, Sense sense)
    : n_vars_(n_vars), sense_(sense), obj_(n_vars, 0.0), lower_(n_vars, 0.0),
      upper_(n_vars, kInf) {
    if (n_vars < 1) throw std::invalid_argument("LinearProgram: n_vars must be >= 1");
}

void LinearProgram::set_objective(int var, double coef) {
    if (var < 0 || var >= n_vars_) throw std::invalid_argument("set_objective: bad index");
    obj_[var] = coef;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
    if (var < 0 || var >= n_vars_) throw std::invalid_argument("set_bounds: bad index");
    lower_[var] = lower;
    upper_[var] = upper;
}

int LinearProgram::add_row(Relation rel, double rhs, std::vector<int> idx,
                           std::vector<double> coef) {
    if (idx.size() != coef.size()) throw std::invalid_argument("add_row: size mismatch");
    Row r;
    r.rel = rel;
    r.rhs = rhs;
    r.idx = std::move(idx);
    r.coef = std::move(coef);
    nonzeros_ += r.idx.size();
    rows_.push_back(std::move(r));
    return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::validate() const {
    for (int j = 0; j < n_vars_; ++j) {
        if (std::isnan(obj_[j]) || std::isinf(obj_[j]))
            throw std::invalid_argument("LinearProgram: non-finite objective coefficient");
        if (std::isnan(lower_[j]) || std::isnan(upper_[j]))
            throw std::invalid_argument("LinearProgram: NaN bound");
        if (lower_[j] > upper_[j])
            throw std::invalid_argument("LinearProgram: lower > upper for var " +
                                        std::to_string(j));
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Row& r = rows_[i];
        if (!std::isfinite(r.rhs))
            throw std::invalid_argument("LinearProgram: non-finite rhs in row " +
                                        std::to_string(i));
        for (std::size_t k = 0; k < r.idx.size(); ++k) {
            if (r.idx[k] < 0 || r.idx[k] >= n_vars_)
                throw std::invalid_argument("LinearProgram: bad column index in row " +
                                            std::to_string(i));
            if (!std::isfinite(r.coef[k]))
                throw std::invalid_argument("LinearProgram: non-finite coefficient in row " +
                                            std::to_string(i));
        }
    }
}

// ---------------------------------------------------------------------------
// Presolve: fixed variables, pairwise-equality merges, duplicate rows
// ---------------------------------------------------------------------------

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorMin = 128;
constexpr int kBlandTrigger = 400;
constexpr std::int64_t kMaxIterations = 2'000'000;

struct CanonRow {
    std::vector<int> idx;  // reduced var ids, sorted, unique
    std::vector<double> coef;
    Relation rel;
    double rhs;
    int origin;  // index into the original row list
};

struct MergeEvent {
    int origin_row;
    int var_a;  // literal variable ids appearing in the row
    int var_b;
};

struct Presolved {
    int n = 0;                        // reduced vars
    std::vector<double> obj, lo, up;  // internal sense: maximize
    std::vector<CanonRow> rows;
    std::vector<int> red_of;      // orig var -> reduced id (-1 if fixed)
    std::vector<double> fix_val;  // orig var -> value when fixed
    std::vector<char> is_fixed;
    std::vector<int> rep_of;  // orig var -> class representative (-1 if fixed)
    std::vector<MergeEvent> merges;
    bool infeasible = false;
};

int uf_find(std::vector<int>& parent, int v) {
    while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    return v;
}

Presolved presolve(const LinearProgram& lp) {
    const double flip = lp.sense() == Sense::Maximize ? 1.0 : -1.0;
    const int n0 = lp.n_vars();
    Presolved ps;
    ps.red_of.assign(n0, -1);
    ps.fix_val.assign(n0, 0.0);
    ps.is_fixed.assign(n0, 0);
    ps.rep_of.assign(n0, -1);

    for (int j = 0; j < n0; ++j) {
        if (lp.lower()[j] == lp.upper()[j]) {
            ps.is_fixed[j] = 1;
            ps.fix_val[j] = lp.lower()[j];
        }
    }

    std::vector<int> parent(n0);
    for (int j = 0; j < n0; ++j) parent[j] = j;

    struct Pending {
        std::vector<int> idx;
        std::vector<double> coef;
        Relation rel;
        double rhs;
        int origin;
    };
    std::vector<Pending> pending;
    std::vector<std::pair<int, double>> buf;
    for (int i = 0; i < lp.n_rows(); ++i) {
        const Row& r = lp.rows()[i];
        buf.clear();
        double rhs = r.rhs;
        for (std::size_t k = 0; k < r.idx.size(); ++k) {
            const int j = r.idx[k];
            if (ps.is_fixed[j]) rhs -= r.coef[k] * ps.fix_val[j];
            else buf.emplace_back(j, r.coef[k]);
        }
        std::sort(buf.begin(), buf.end());
        std::vector<int> idx;
        std::vector<double> coef;
        for (std::size_t k = 0; k < buf.size();) {
            double c = 0.0;
            std::size_t k2 = k;
            while (k2 < buf.size() && buf[k2].first == buf[k].first) c += buf[k2++].second;
            if (c != 0.0) {
                idx.push_back(buf[k].first);
                coef.push_back(c);
            }
            k = k2;
        }
        // Pairwise-equality merge: a*(v_i - v_j) = 0 with identical bounds.
        if (r.rel == Relation::Equal && rhs == 0.0 && idx.size() == 2 &&
            coef[0] == -coef[1] && lp.lower()[idx[0]] == lp.lower()[idx[1]] &&
            lp.upper()[idx[0]] == lp.upper()[idx[1]]) {
            int a = uf_find(parent, idx[0]);
            int b = uf_find(parent, idx[1]);
            if (a != b) {
                parent[std::max(a, b)] = std::min(a, b);
                ps.merges.push_back({i, idx[0], idx[1]});
            }
            continue;  // consumed (or trivially 0 = 0)
        }
        pending.push_back({std::move(idx), std::move(coef), r.rel, rhs, i});
    }

    for (int j = 0; j < n0; ++j)
        if (!ps.is_fixed[j]) ps.rep_of[j] = uf_find(parent, j);

    for (int j = 0; j < n0; ++j)
        if (!ps.is_fixed[j] && ps.rep_of[j] == j) ps.red_of[j] = ps.n++;
    for (int j = 0; j < n0; ++j)
        if (!ps.is_fixed[j]) ps.red_of[j] = ps.red_of[ps.rep_of[j]];

    ps.obj.assign(ps.n, 0.0);
    ps.lo.assign(ps.n, 0.0);
    ps.up.assign(ps.n, 0.0);
    for (int j = 0; j < n0; ++j) {
        if (ps.is_fixed[j]) continue;
        const int rj = ps.red_of[j];
        ps.obj[rj] += flip * lp.objective()[j];
        ps.lo[rj] = lp.lower()[j];  // identical across the class by merge rule
        ps.up[rj] = lp.upper()[j];
    }

    std::map<std::vector<std::pair<int, double>>, int> seen;
    for (Pending& p : pending) {
        buf.clear();
        for (std::size_t k = 0; k < p.idx.size(); ++k)
            buf.emplace_back(ps.red_of[p.idx[k]], p.coef[k]);
        std::sort(buf.begin(), buf.end());
        CanonRow cr;
        cr.rel = p.rel;
        cr.rhs = p.rhs;
        cr.origin = p.origin;
        for (std::size_t k = 0; k < buf.size();) {
            double c = 0.0;
            std::size_t k2 = k;
            while (k2 < buf.size() && buf[k2].first == buf[k].first) c += buf[k2++].second;
            if (c != 0.0) {
                cr.idx.push_back(buf[k].first);
                cr.coef.push_back(c);
            }
            k = k2;
        }
        if (cr.idx.empty()) {
            const double act_minus_rhs = -cr.rhs;
            const bool bad =
                (cr.rel == Relation::Equal && std::abs(act_minus_rhs) > kFeasTol) ||
                (cr.rel == Relation::LessEq && act_minus_rhs > kFeasTol) ||
                (cr.rel == Relation::GreaterEq && act_minus_rhs < -kFeasTol);
            if (bad) ps.infeasible = true;
            continue;
        }
        std::vector<std::pair<int, double>> key;
        key.reserve(cr.idx.size() + 1);
        for (std::size_t k = 0; k < cr.idx.size(); ++k) key.emplace_back(cr.idx[k], cr.coef[k]);
        key.emplace_back(-1 - static_cast<int>(cr.rel), cr.rhs);
        if (!seen.insert({std::move(key), 1}).second) continue;  // duplicate: dual 0
        ps.rows.push_back(std::move(cr));
    }
    return ps;
}

// ---------------------------------------------------------------------------
// Bounded-variable revised simplex with a dense product-form inverse
// ---------------------------------------------------------------------------

enum VStat : char { kBasic, kAtLower, kAtUpper, kFreeNB };

class Simplex {
public:
    Simplex(const Presolved& ps, std::vector<double> row_scale, std::vector<double> col_scale)
        : ps_(ps), rscale_(std::move(row_scale)), cscale_(std::move(col_scale)), n_(ps.n) {
        obj_.resize(n_);
        lo_.resize(n_);
        up_.resize(n_);
        for (int j = 0; j < n_; ++j) {
            obj_[j] = ps.obj[j] * cscale_[j];
            lo_[j] = ps.lo[j] == -kInf ? -kInf : ps.lo[j] / cscale_[j];
            up_[j] = ps.up[j] == kInf ? kInf : ps.up[j] / cscale_[j];
        }
        const int m_all = static_cast<int>(ps.rows.size());
        std::vector<int> count(n_, 0);
        for (const CanonRow& r : ps.rows)
            for (int j : r.idx) ++count[j];
        col_ptr_.assign(n_ + 1, 0);
        for (int j = 0; j < n_; ++j) col_ptr_[j + 1] = col_ptr_[j] + count[j];
        col_row_.resize(col_ptr_[n_]);
        col_val_.resize(col_ptr_[n_]);
        std::vector<int> fill(col_ptr_.begin(), col_ptr_.end() - 1);
        for (int i = 0; i < m_all; ++i) {
            const CanonRow& r = ps.rows[i];
            for (std::size_t k = 0; k < r.idx.size(); ++k) {
                const int j = r.idx[k];
                col_row_[fill[j]] = i;
                col_val_[fill[j]] = r.coef[k] * rscale_[i] * cscale_[j];
                ++fill[j];
            }
        }
        slot_of_row_.assign(m_all, -1);
        vstat_.assign(n_, kAtLower);
        xval_.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) drop_to_bound(j);
    }

    int active_rows() const { return static_cast<int>(active_.size()); }
    std::int64_t iterations() const { return iterations_; }

    // Swap in a new (scaled, reduced) objective; the current basis stays
    // primal feasible, so the next run needs only phase 2.
    void set_objective(const std::vector<double>& obj_scaled) { obj_ = obj_scaled; }

    void activate(const std::vector<int>& row_ids) {
        for (int i : row_ids) {
            if (slot_of_row_[i] >= 0) continue;
            const CanonRow& r = ps_.rows[i];
            const int slot = static_cast<int>(active_.size());
            active_.push_back(i);
            slot_of_row_[i] = slot;
            rhs_.push_back(r.rhs * rscale_[i]);
            double slo = 0.0, sup = 0.0;
            switch (r.rel) {
                case Relation::LessEq: slo = 0.0; sup = kInf; break;
                case Relation::Equal: slo = 0.0; sup = 0.0; break;
                case Relation::GreaterEq: slo = -kInf; sup = 0.0; break;
            }
            slack_lo_.push_back(slo);
            slack_up_.push_back(sup);
            vstat_.push_back(kBasic);
            xval_.push_back(0.0);
            basic_.push_back(n_ + slot);
        }
        dirty_ = true;
    }

    SolveStatus run() {
        if (active_rows() == 0) return solve_unconstrained();
        if (!phase1()) return SolveStatus::Infeasible;
        return phase2();
    }

    std::vector<double> primal_reduced() {
        rebuild_xcache();
        std::vector<double> x(n_);
        for (int j = 0; j < n_; ++j) x[j] = xcache_[j] * cscale_[j];
        return x;
    }

    // Duals for every presolved row, unscaled, internal (max) sense.
    std::vector<double> duals_reduced() const {
        std::vector<double> y(ps_.rows.size(), 0.0);
        const int m = active_rows();
        if (m == 0) return y;
        std::vector<double> cb(m, 0.0);
        for (int k = 0; k < m; ++k)
            if (basic_[k] < n_) cb[k] = obj_[basic_[k]];
        std::vector<double> ys = btran(cb);
        for (int k = 0; k < m; ++k) y[active_[k]] = ys[k] * rscale_[active_[k]];
        return y;
    }

    // Violation of a presolved row at the current point, in scaled units.
    double scaled_violation(int row_id) const {
        const CanonRow& r = ps_.rows[row_id];
        double act = 0.0;
        for (std::size_t k = 0; k < r.idx.size(); ++k) {
            const int j = r.idx[k];
            act += r.coef[k] * cscale_[j] * xcache_[j];
        }
        act *= rscale_[row_id];
        const double b = r.rhs * rscale_[row_id];
        switch (r.rel) {
            case Relation::LessEq: return act - b;
            case Relation::Equal: return std::abs(act - b);
            case Relation::GreaterEq: return b - act;
        }
        return 0.0;
    }

    // Rate of violation growth along the unbounded ray (unscaled vars).
    double ray_rate(int row_id) const {
        const CanonRow& r = ps_.rows[row_id];
        double rate = 0.0;
        for (std::size_t k = 0; k < r.idx.size(); ++k) rate += r.coef[k] * ray_[r.idx[k]];
        switch (r.rel) {
            case Relation::LessEq: return rate;
            case Relation::Equal: return std::abs(rate);
            case Relation::GreaterEq: return -rate;
        }
        return 0.0;
    }

    void refresh_point_cache() { rebuild_xcache(); }

private:
    const Presolved& ps_;
    std::vector<double> rscale_, cscale_;
    int n_;
    std::vector<double> obj_, lo_, up_;
    std::vector<int> col_ptr_, col_row_;
    std::vector<double> col_val_;

    std::vector<int> active_;
    std::vector<int> slot_of_row_;
    std::vector<double> rhs_, slack_lo_, slack_up_;

    std::vector<char> vstat_;  // structural then logical
    std::vector<double> xval_;
    std::vector<int> basic_;
    std::vector<double> xb_;
    std::vector<double> binv_;  // dense m*m row-major
    std::vector<double> xcache_;
    bool dirty_ = true;
    int pivots_since_refactor_ = 0;
    std::int64_t iterations_ = 0;
    int bland_countdown_ = 0;
    int degenerate_streak_ = 0;
    std::vector<double> ray_;

    double var_lo(int v) const { return v < n_ ? lo_[v] : slack_lo_[v - n_]; }
    double var_up(int v) const { return v < n_ ? up_[v] : slack_up_[v - n_]; }

    // Balance O(m^3) refactorizations against O(m^2) product-form updates.
    int refactor_period() const {
        return std::max(kRefactorMin, std::min(active_rows() / 2, 4000));
    }

    void rebuild_xcache() {
        xcache_.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j)
            if (vstat_[j] != kBasic) xcache_[j] = xval_[j];
        for (int k = 0; k < active_rows(); ++k)
            if (basic_[k] < n_) xcache_[basic_[k]] = xb_[k];
    }

    void drop_to_bound(int v) {
        const double l = var_lo(v), u = var_up(v);
        if (l == -kInf && u == kInf) {
            vstat_[v] = kFreeNB;
            xval_[v] = 0.0;
        } else if (l == -kInf) {
            vstat_[v] = kAtUpper;
            xval_[v] = u;
        } else {
            vstat_[v] = kAtLower;
            xval_[v] = l;
        }
    }

    SolveStatus solve_unconstrained() {
        ray_.assign(n_, 0.0);
        bool unbounded = false;
        for (int j = 0; j < n_; ++j) {
            if (obj_[j] > kDualTol) {
                if (up_[j] == kInf) {
                    ray_[j] = cscale_[j];
                    unbounded = true;
                } else {
                    vstat_[j] = kAtUpper;
                    xval_[j] = up_[j];
                }
            } else if (obj_[j] < -kDualTol) {
                if (lo_[j] == -kInf) {
                    ray_[j] = -cscale_[j];
                    unbounded = true;
                } else {
                    vstat_[j] = kAtLower;
                    xval_[j] = lo_[j];
                }
            }
        }
        rebuild_xcache();
        return unbounded ? SolveStatus::Unbounded : SolveStatus::Optimal;
    }

    std::vector<double> btran(const std::vector<double>& c) const {
        const int m = active_rows();
        std::vector<double> y(m, 0.0);
        for (int k = 0; k < m; ++k) {
            const double ck = c[k];
            if (ck == 0.0) continue;
            const double* row = &binv_[static_cast<std::size_t>(k) * m];
            for (int i = 0; i < m; ++i) y[i] += ck * row[i];
        }
        return y;
    }

    std::vector<double> ftran(int v) const {
        const int m = active_rows();
        std::vector<double> alpha(m, 0.0);
        if (v >= n_) {
            const int slot = v - n_;
            for (int k = 0; k < m; ++k)
                alpha[k] = binv_[static_cast<std::size_t>(k) * m + slot];
            return alpha;
        }
        for (int p = col_ptr_[v]; p < col_ptr_[v + 1]; ++p) {
            const int slot = slot_of_row_[col_row_[p]];
            if (slot < 0) continue;
            const double a = col_val_[p];
            if (a == 0.0) continue;
            for (int k = 0; k < m; ++k)
                alpha[k] += a * binv_[static_cast<std::size_t>(k) * m + slot];
        }
        return alpha;
    }

    double dot_column(const std::vector<double>& y, int v) const {
        if (v >= n_) return y[v - n_];
        double s = 0.0;
        for (int p = col_ptr_[v]; p < col_ptr_[v + 1]; ++p) {
            const int slot = slot_of_row_[col_row_[p]];
            if (slot >= 0) s += col_val_[p] * y[slot];
        }
        return s;
    }

    void refactor(int depth = 0) {
        const int m = active_rows();
        if (depth > 4) throw NumericError("lp: singular basis beyond repair");
        std::vector<double> B(static_cast<std::size_t>(m) * m, 0.0);
        for (int k = 0; k < m; ++k) {
            const int v = basic_[k];
            if (v >= n_) {
                B[static_cast<std::size_t>(v - n_) * m + k] = 1.0;
            } else {
                for (int p = col_ptr_[v]; p < col_ptr_[v + 1]; ++p) {
                    const int slot = slot_of_row_[col_row_[p]];
                    if (slot >= 0) B[static_cast<std::size_t>(slot) * m + k] = col_val_[p];
                }
            }
        }
        binv_.assign(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) binv_[static_cast<std::size_t>(i) * m + i] = 1.0;
        int bad_col = -1;
        for (int c = 0; c < m; ++c) {
            int piv = -1;
            double best = 1e-11;
            for (int r = c; r < m; ++r) {
                const double a = std::abs(B[static_cast<std::size_t>(r) * m + c]);
                if (a > best) {
                    best = a;
                    piv = r;
                }
            }
            if (piv < 0) {
                bad_col = c;
                break;
            }
            if (piv != c) {
                for (int j = 0; j < m; ++j) {
                    std::swap(B[static_cast<std::size_t>(piv) * m + j],
                              B[static_cast<std::size_t>(c) * m + j]);
                    std::swap(binv_[static_cast<std::size_t>(piv) * m + j],
                              binv_[static_cast<std::size_t>(c) * m + j]);
                }
            }
            const double d = 1.0 / B[static_cast<std::size_t>(c) * m + c];
            double* bc = &B[static_cast<std::size_t>(c) * m];
            double* ic = &binv_[static_cast<std::size_t>(c) * m];
            for (int j = 0; j < m; ++j) {
                bc[j] *= d;
                ic[j] *= d;
            }
            for (int r = 0; r < m; ++r) {
                if (r == c) continue;
                const double f = B[static_cast<std::size_t>(r) * m + c];
                if (f == 0.0) continue;
                double* br = &B[static_cast<std::size_t>(r) * m];
                double* ir = &binv_[static_cast<std::size_t>(r) * m];
                for (int j = 0; j < m; ++j) {
                    br[j] -= f * bc[j];
                    ir[j] -= f * ic[j];
                }
            }
        }
        if (bad_col >= 0) {
            // Dependent column: kick the offending variable to a bound and
            // bring in an unused logical instead.
            const int victim = basic_[bad_col];
            drop_to_bound(victim);
            int replacement = -1;
            for (int s = 0; s < m; ++s) {
                if (vstat_[n_ + s] != kBasic) {
                    replacement = n_ + s;
                    break;
                }
            }
            if (replacement < 0) throw NumericError("lp: basis repair failed");
            basic_[bad_col] = replacement;
            vstat_[replacement] = kBasic;
            refactor(depth + 1);
            return;
        }
        compute_basic_values();
        pivots_since_refactor_ = 0;
        dirty_ = false;
    }

    void compute_basic_values() {
        const int m = active_rows();
        std::vector<double> r(rhs_);
        for (int j = 0; j < n_; ++j) {
            if (vstat_[j] == kBasic || xval_[j] == 0.0) continue;
            const double xv = xval_[j];
            for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
                const int slot = slot_of_row_[col_row_[p]];
                if (slot >= 0) r[slot] -= col_val_[p] * xv;
            }
        }
        for (int s = 0; s < m; ++s) {
            const int v = n_ + s;
            if (vstat_[v] != kBasic && xval_[v] != 0.0) r[s] -= xval_[v];
        }
        xb_.assign(m, 0.0);
        for (int k = 0; k < m; ++k) {
            const double* row = &binv_[static_cast<std::size_t>(k) * m];
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += row[i] * r[i];
            xb_[k] = s;
        }
    }

    double total_infeasibility(std::vector<double>* w = nullptr) {
        const int m = active_rows();
        if (w) w->assign(m, 0.0);
        double total = 0.0;
        for (int k = 0; k < m; ++k) {
            const int v = basic_[k];
            const double l = var_lo(v), u = var_up(v);
            if (xb_[k] < l - kFeasTol) {
                total += l - xb_[k];
                if (w) (*w)[k] = 1.0;  // gradient of (-infeasibility)
            } else if (xb_[k] > u + kFeasTol) {
                total += xb_[k] - u;
                if (w) (*w)[k] = -1.0;
            }
        }
        return total;
    }

    // Shared pricing: returns entering var and direction for the given duals
    // and costs, or enter < 0 when none improves.
    std::pair<int, int> price(const std::vector<double>& y, bool use_obj) {
        int enter = -1, enter_dir = 0;
        double best = kDualTol;
        const bool bland = bland_countdown_ > 0;
        const int total_vars = n_ + active_rows();
        for (int j = 0; j < total_vars; ++j) {
            if (vstat_[j] == kBasic) continue;
            const double c = (use_obj && j < n_) ? obj_[j] : 0.0;
            const double d = c - dot_column(y, j);
            int dir = 0;
            if (vstat_[j] == kAtLower && d > kDualTol) dir = 1;
            else if (vstat_[j] == kAtUpper && d < -kDualTol) dir = -1;
            else if (vstat_[j] == kFreeNB && std::abs(d) > kDualTol) dir = d > 0 ? 1 : -1;
            if (dir == 0) continue;
            if (bland) return {j, dir};
            if (std::abs(d) > best) {
                best = std::abs(d);
                enter = j;
                enter_dir = dir;
            }
        }
        return {enter, enter_dir};
    }

    bool phase1() {
        const int m = active_rows();
        std::vector<double> w;
        while (true) {
            if (dirty_ || pivots_since_refactor_ >= refactor_period()) refactor();
            const double infeas = total_infeasibility(&w);
            if (infeas <= kFeasTol * (1 + m)) return true;
            std::vector<double> y = btran(w);
            auto [enter, dir] = price(y, /*use_obj=*/false);
            if (enter < 0) return total_infeasibility() <= kFeasTol * (1 + m);
            if (pivot_step(enter, dir, /*phase1_mode=*/true) == 0) return false;
        }
    }

    SolveStatus phase2() {
        const int m = active_rows();
        std::vector<double> cb(m);
        while (true) {
            if (dirty_ || pivots_since_refactor_ >= refactor_period()) {
                refactor();
                if (total_infeasibility() > 10 * kFeasTol * (1 + m) && !phase1())
                    return SolveStatus::Infeasible;
            }
            for (int k = 0; k < m; ++k) cb[k] = basic_[k] < n_ ? obj_[basic_[k]] : 0.0;
            std::vector<double> y = btran(cb);
            auto [enter, dir] = price(y, /*use_obj=*/true);
            if (enter < 0) {
                rebuild_xcache();
                return SolveStatus::Optimal;
            }
            const int rc = pivot_step(enter, dir, /*phase1_mode=*/false);
            if (rc == 2) return SolveStatus::Unbounded;
            if (rc == 0) throw NumericError("lp: lost feasibility in phase 2");
        }
    }

    // Returns 1 on a pivot or flip, 0 on a phase-1 dead end, 2 on unbounded.
    int pivot_step(int enter, int dir, bool phase1_mode) {
        if (++iterations_ > kMaxIterations) throw NumericError("lp: iteration limit");
        const int m = active_rows();
        std::vector<double> alpha = ftran(enter);
        const double sigma = static_cast<double>(dir);

        double best_step = kInf;
        int leave_slot = -1;
        double leave_alpha = 0.0;
        int leave_to_upper = 0;
        double own_range = kInf;
        const double el = var_lo(enter), eu = var_up(enter);
        if (el > -kInf && eu < kInf) own_range = eu - el;

        for (int k = 0; k < m; ++k) {
            const double a = alpha[k];
            if (std::abs(a) < 1e-11) continue;
            const double rate = -sigma * a;
            const int v = basic_[k];
            const double l = var_lo(v), u = var_up(v);
            double bound;
            int to_upper;
            if (phase1_mode && xb_[k] < l - kFeasTol) {
                if (rate <= 0) continue;
                bound = l;
                to_upper = 0;
            } else if (phase1_mode && xb_[k] > u + kFeasTol) {
                if (rate >= 0) continue;
                bound = u;
                to_upper = 1;
            } else if (rate > 0) {
                if (u == kInf) continue;
                bound = u;
                to_upper = 1;
            } else {
                if (l == -kInf) continue;
                bound = l;
                to_upper = 0;
            }
            double step = (bound - xb_[k]) / rate;
            if (step < 0.0) step = 0.0;
            const bool better =
                step < best_step - 1e-10 ||
                (step < best_step + 1e-10 && leave_slot >= 0 &&
                 (bland_countdown_ > 0 ? v < basic_[leave_slot]
                                       : std::abs(a) > std::abs(leave_alpha)));
            if (leave_slot < 0 ? step < best_step : better) {
                best_step = step;
                leave_slot = k;
                leave_alpha = a;
                leave_to_upper = to_upper;
            }
        }

        if (own_range < best_step) {
            for (int k = 0; k < m; ++k) xb_[k] -= sigma * own_range * alpha[k];
            vstat_[enter] = dir > 0 ? kAtUpper : kAtLower;
            xval_[enter] = dir > 0 ? eu : el;
            note_progress(own_range);
            return 1;
        }
        if (leave_slot < 0) {
            if (phase1_mode) return 0;
            ray_.assign(n_, 0.0);
            if (enter < n_) ray_[enter] = sigma * cscale_[enter];
            for (int k = 0; k < m; ++k) {
                const int v = basic_[k];
                if (v < n_ && std::abs(alpha[k]) > 1e-12)
                    ray_[v] = -sigma * alpha[k] * cscale_[v];
            }
            rebuild_xcache();
            return 2;
        }
        if (std::abs(leave_alpha) < kPivotTol) {
            refactor();
            alpha = ftran(enter);
            if (std::abs(alpha[leave_slot]) < kPivotTol)
                throw NumericError("lp: pivot element vanished");
            leave_alpha = alpha[leave_slot];
        }

        const double step = best_step;
        for (int k = 0; k < m; ++k) xb_[k] -= sigma * step * alpha[k];
        const int leaving = basic_[leave_slot];
        const double enter_value = xval_[enter] + sigma * step;
        vstat_[leaving] = leave_to_upper ? kAtUpper : kAtLower;
        xval_[leaving] = leave_to_upper ? var_up(leaving) : var_lo(leaving);
        basic_[leave_slot] = enter;
        vstat_[enter] = kBasic;
        xb_[leave_slot] = enter_value;
        update_binv(leave_slot, alpha);
        ++pivots_since_refactor_;
        note_progress(step);
        return 1;
    }

    void note_progress(double step) {
        if (step > 1e-10) {
            degenerate_streak_ = 0;
            if (bland_countdown_ > 0) --bland_countdown_;
        } else if (++degenerate_streak_ > kBlandTrigger) {
            bland_countdown_ = 5000;  // smallest-index rule until progress resumes
            degenerate_streak_ = 0;
        }
    }

    void update_binv(int slot, const std::vector<double>& alpha) {
        const int m = active_rows();
        const double inv_piv = 1.0 / alpha[slot];
        double* prow = &binv_[static_cast<std::size_t>(slot) * m];
        for (int j = 0; j < m; ++j) prow[j] *= inv_piv;
        for (int k = 0; k < m; ++k) {
            if (k == slot) continue;
            const double f = alpha[k];
            if (f == 0.0) continue;
            double* krow = &binv_[static_cast<std::size_t>(k) * m];
            for (int j = 0; j < m; ++j) krow[j] -= f * prow[j];
        }
    }
};

std::pair<std::vector<double>, std::vector<double>> equilibrate(const Presolved& ps) {
    const int m = static_cast<int>(ps.rows.size());
    std::vector<double> r(m, 1.0), c(ps.n, 1.0);
    auto pow2 = [](double x) {
        if (x <= 0.0 || !std::isfinite(x)) return 1.0;
        return std::exp2(std::round(std::log2(x)));
    };
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < m; ++i) {
            double mx = 0.0;
            const CanonRow& row = ps.rows[i];
            for (std::size_t k = 0; k < row.idx.size(); ++k)
                mx = std::max(mx, std::abs(row.coef[k] * r[i] * c[row.idx[k]]));
            if (mx > 0.0) r[i] /= pow2(mx);
        }
        std::vector<double> colmax(ps.n, 0.0);
        for (int i = 0; i < m; ++i) {
            const CanonRow& row = ps.rows[i];
            for (std::size_t k = 0; k < row.idx.size(); ++k) {
                const int j = row.idx[k];
                colmax[j] = std::max(colmax[j], std::abs(row.coef[k] * r[i] * c[j]));
            }
        }
        for (int j = 0; j < ps.n; ++j)
            if (colmax[j] > 0.0) c[j] /= pow2(colmax[j]);
    }
    return {r, c};
}

}  // namespace

// ---------------------------------------------------------------------------
// solve(): presolve + lazy row activation around the simplex core
// ---------------------------------------------------------------------------

LpSolution solve(const LinearProgram& lp) {
    lp.validate();
    Presolved ps = presolve(lp);
    LpSolution sol;
    sol.primal.assign(lp.n_vars(), 0.0);
    sol.row_dual.assign(lp.n_rows(), 0.0);
    if (ps.infeasible) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }

    auto [rscale, cscale] = equilibrate(ps);
    Simplex sx(ps, rscale, cscale);

    const int m_all = static_cast<int>(ps.rows.size());
    constexpr int kEagerRows = 3000;
    std::vector<int> initial;
    if (m_all <= kEagerRows) {
        initial.resize(m_all);
        for (int i = 0; i < m_all; ++i) initial[i] = i;
    } else {
        for (int i = 0; i < m_all; ++i)
            if (ps.rows[i].rel == Relation::Equal) initial.push_back(i);
    }
    sx.activate(initial);

    SolveStatus status;
    while (true) {
        status = sx.run();
        if (status == SolveStatus::Infeasible) break;
        sx.refresh_point_cache();
        std::vector<std::pair<double, int>> pend;
        for (int i = 0; i < m_all; ++i) {
            double score = sx.scaled_violation(i);
            if (status == SolveStatus::Unbounded)
                score = std::max(score, sx.ray_rate(i));
            if (score > 1e-9) pend.emplace_back(-score, i);
        }
        if (pend.empty()) break;
        std::sort(pend.begin(), pend.end());
        const std::size_t cap =
            std::max<std::size_t>(50, std::min<std::size_t>(static_cast<std::size_t>(ps.n), 1000));
        std::vector<int> add;
        for (std::size_t k = 0; k < pend.size() && add.size() < cap; ++k)
            add.push_back(pend[k].second);
        const int before = sx.active_rows();
        sx.activate(add);
        if (sx.active_rows() == before) break;
    }
    sol.iterations = sx.iterations();
    sol.status = status;
    if (status != SolveStatus::Optimal) return sol;

    std::vector<double> xr = sx.primal_reduced();
    for (int j = 0; j < lp.n_vars(); ++j)
        sol.primal[j] = ps.is_fixed[j] ? ps.fix_val[j] : xr[ps.red_of[j]];

    std::vector<double> yr = sx.duals_reduced();
    std::vector<double> y(lp.n_rows(), 0.0);
    for (std::size_t i = 0; i < ps.rows.size(); ++i) y[ps.rows[i].origin] = yr[i];

    if (!ps.merges.empty()) {
        // Recover duals of the merged-away equality rows: set the reduced
        // cost of every non-representative variable to zero and peel the
        // union-find forest from its leaves.
        const double flip = lp.sense() == Sense::Maximize ? 1.0 : -1.0;
        std::map<int, std::vector<std::pair<int, double>>> col_of;
        std::map<int, std::vector<int>> merge_rows_of;
        std::vector<char> resolved(ps.merges.size(), 0);
        for (std::size_t k = 0; k < ps.merges.size(); ++k) {
            merge_rows_of[ps.merges[k].var_a].push_back(static_cast<int>(k));
            merge_rows_of[ps.merges[k].var_b].push_back(static_cast<int>(k));
        }
        for (int i = 0; i < lp.n_rows(); ++i) {
            const Row& r = lp.rows()[i];
            for (std::size_t k = 0; k < r.idx.size(); ++k)
                if (merge_rows_of.count(r.idx[k]))
                    col_of[r.idx[k]].emplace_back(i, r.coef[k]);
        }
        std::map<int, int> unresolved_count;
        for (auto& [v, rowsv] : merge_rows_of)
            unresolved_count[v] = static_cast<int>(rowsv.size());
        auto owns_equation = [&](int v) { return ps.rep_of[v] != v; };
        std::vector<int> queue;
        for (auto& [v, cnt] : unresolved_count)
            if (cnt == 1 && owns_equation(v)) queue.push_back(v);
        while (!queue.empty()) {
            const int v = queue.back();
            queue.pop_back();
            if (!owns_equation(v) || unresolved_count[v] != 1) continue;
            int target = -1;
            for (int k : merge_rows_of[v])
                if (!resolved[k]) target = k;
            if (target < 0) continue;
            const MergeEvent& ev = ps.merges[static_cast<std::size_t>(target)];
            const Row& mrow = lp.rows()[ev.origin_row];
            double coef_v = 0.0;
            for (std::size_t k = 0; k < mrow.idx.size(); ++k)
                if (mrow.idx[k] == v) coef_v += mrow.coef[k];
            double rest = 0.0;
            for (auto& [ri, cv] : col_of[v])
                if (ri != ev.origin_row) rest += y[ri] * cv;
            y[ev.origin_row] = (flip * lp.objective()[v] - rest) / coef_v;
            resolved[target] = 1;
            unresolved_count[v] = 0;
            const int other = ev.var_a == v ? ev.var_b : ev.var_a;
            if (--unresolved_count[other] == 1 && owns_equation(other)) queue.push_back(other);
        }
    }

    const double flip = lp.sense() == Sense::Maximize ? 1.0 : -1.0;
    for (int i = 0; i < lp.n_rows(); ++i) sol.row_dual[i] = flip * y[i];

    double obj = 0.0;
    for (int j = 0; j < lp.n_vars(); ++j) obj += lp.objective()[j] * sol.primal[j];
    sol.objective = obj;

    double presid = 0.0;
    for (int i = 0; i < lp.n_rows(); ++i) {
        const Row& r = lp.rows()[i];
        double act = 0.0, mx = 1.0;
        for (std::size_t k = 0; k < r.idx.size(); ++k) {
            act += r.coef[k] * sol.primal[r.idx[k]];
            mx = std::max(mx, std::abs(r.coef[k]));
        }
        double viol = 0.0;
        if (r.rel == Relation::LessEq) viol = act - r.rhs;
        else if (r.rel == Relation::GreaterEq) viol = r.rhs - act;
        else viol = std::abs(act - r.rhs);
        presid = std::max(presid, viol / mx);
    }
    sol.primal_residual = presid;

    std::vector<double> d(lp.n_vars());
    for (int j = 0; j < lp.n_vars(); ++j) d[j] = flip * lp.objective()[j];
    for (int i = 0; i < lp.n_rows(); ++i) {
        const Row& r = lp.rows()[i];
        if (y[i] == 0.0) continue;
        for (std::size_t k = 0; k < r.idx.size(); ++k) d[r.idx[k]] -= y[i] * r.coef[k];
    }
    double dual_obj = 0.0;
    for (int i = 0; i < lp.n_rows(); ++i) dual_obj += y[i] * lp.rows()[i].rhs;
    bool dual_ok = true;
    for (int j = 0; j < lp.n_vars(); ++j) {
        const double lj = lp.lower()[j], uj = lp.upper()[j];
        if (lj == uj) dual_obj += d[j] * lj;
        else if (d[j] > 1e-7) {
            if (uj == kInf) dual_ok = false;
            else dual_obj += d[j] * uj;
        } else if (d[j] < -1e-7) {
            if (lj == -kInf) dual_ok = false;
            else dual_obj += d[j] * lj;
        }
    }
    sol.duality_gap = dual_ok ? std::abs(flip * obj - dual_obj) : kInf;
    return sol;
}

// ---------------------------------------------------------------------------
// Exchange dump
// ---------------------------------------------------------------------------

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_exchange(const LinearProgram& lp, std::ostream& os, const char* name) {
    os << "NAME " << name << "\n";
    os << "SENSE " << (lp.sense() == Sense::Maximize ? "MAX" : "MIN") << "\n";
    os << "ROWS " << lp.n_rows() << "\n";
    for (int i = 0; i < lp.n_rows(); ++i) {
        const char rel = lp.rows()[i].rel == Relation::LessEq  ? 'L'
                         : lp.rows()[i].rel == Relation::Equal ? 'E'
                                                               : 'G';
        os << " " << rel << " R" << i << "\n";
    }
    os << "COLUMNS " << lp.n_vars() << "\n";
    for (int j = 0; j < lp.n_vars(); ++j)
        if (lp.objective()[j] != 0.0)
            os << " C" << j << " OBJ " << fmt17(lp.objective()[j]) << "\n";
    for (int i = 0; i < lp.n_rows(); ++i) {
        const Row& r = lp.rows()[i];
        for (std::size_t k = 0; k < r.idx.size(); ++k)
            os << " C" << r.idx[k] << " R" << i << " " << fmt17(r.coef[k]) << "\n";
    }
    os << "RHS\n";
    for (int i = 0; i < lp.n_rows(); ++i)
        if (lp.rows()[i].rhs != 0.0) os << " R" << i << " " << fmt17(lp.rows()[i].rhs) << "\n";
    os << "BOUNDS\n";
    for (int j = 0; j < lp.n_vars(); ++j) {
        const double l = lp.lower()[j], u = lp.upper()[j];
        if (l == 0.0 && u == kInf) continue;
        if (l == -kInf) os << " MI C" << j << "\n";
        else if (l != 0.0) os << " LO C" << j << " " << fmt17(l) << "\n";
        if (u != kInf) os << " UP C" << j << " " << fmt17(u) << "\n";
    }
    os << "ENDATA\n";
}

}  // namespace dic::lp
