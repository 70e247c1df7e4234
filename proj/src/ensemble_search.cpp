#include "channelforge/ensemble_search.hpp"

#include <algorithm>
#include <atomic>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "channelforge/rng.hpp"

namespace channelforge {

namespace {

constexpr double kPi = std::numbers::pi;

/// Derivative-free 1-d minimizer (Brent: golden section with parabolic
/// steps) on [a, b]. Returns the argmin; f is evaluated ~20-40 times.
template <typename F>
double brent_minimize(F&& f, double a, double b, double tol, int max_iter) {
    const double golden = 0.3819660112501051;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x);
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double mid = 0.5 * (a + b);
        const double tol1 = tol * std::abs(x) + 1e-14;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
            break;
        }
        bool use_golden = true;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) {
                p = -p;
            }
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = x < mid ? tol1 : -tol1;
                }
                use_golden = false;
            }
        }
        if (use_golden) {
            e = x < mid ? b - x : a - x;
            d = golden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x) {
                a = u;
            } else {
                b = u;
            }
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return x;
}

struct PairAttempt {
    std::uint64_t version_i = 0;
    std::uint64_t version_k = 0;
};

struct RestartOutcome {
    std::vector<CMat> branches;
    double value = 0.0;
    int iterations = 0;
    bool reached_floor = false;
};

class RestartRunner {
  public:
    RestartRunner(const std::vector<CMat>& basis, int n_out, const EnsembleObjective& objective,
                  const OptimizerOptions& options, int restart_index)
        : basis_(basis), objective_(objective), options_(options),
          n_out_(n_out), rng_(Prng::mix(options.seed, 0x52455354u + static_cast<std::uint64_t>(restart_index))) {
        init_branches(restart_index);
        costs_.resize(n_out_);
        versions_.assign(n_out_, 1);
        for (int i = 0; i < n_out_; ++i) {
            costs_[i] = objective_.branch_cost(branches_[i]);
        }
        total_ = 0.0;
        for (double c : costs_) {
            total_ += c;
        }
        const int pair_count = n_out_ * (n_out_ - 1) / 2;
        attempts_.assign(static_cast<std::size_t>(pair_count) * kMaxQuadratures, PairAttempt{});
        pair_order_.resize(pair_count);
        int idx = 0;
        for (int i = 0; i < n_out_; ++i) {
            for (int k = i + 1; k < n_out_; ++k) {
                pair_order_[idx++] = {i, k};
            }
        }
    }

    RestartOutcome run() {
        RestartOutcome outcome;
        int stall_sweeps = 0;
        bool escalated = false;
        int sweep = 0;
        for (; sweep < options_.max_iterations; ++sweep) {
            if (at_floor()) {
                outcome.reached_floor = true;
                break;
            }
            const double before = total_;
            const int accepted = run_sweep(escalated ? 4 : 2);
            refresh_total(sweep);
            if (at_floor()) {
                outcome.reached_floor = true;
                ++sweep;
                break;
            }
            if (accepted == 0) {
                if (escalated) {
                    ++sweep;
                    break;
                }
                escalated = true;
                mark_all_dirty();
                continue;
            }
            if (before - total_ < options_.improvement_tol) {
                if (++stall_sweeps >= options_.improvement_window) {
                    ++sweep;
                    break;
                }
            } else {
                stall_sweeps = 0;
            }
        }
        outcome.branches = branches_;
        outcome.value = recompute_total();
        outcome.iterations = sweep;
        return outcome;
    }

  private:
    static constexpr int kMaxQuadratures = 4;

    void init_branches(int restart_index) {
        const int n = static_cast<int>(basis_.size());
        const Eigen::Index rows = basis_.front().rows();
        const Eigen::Index cols = basis_.front().cols();
        branches_.assign(n_out_, CMat::Zero(rows, cols));
        if (restart_index == 0) {
            for (int j = 0; j < n; ++j) {
                branches_[j] = basis_[static_cast<std::size_t>(j)];
            }
            return;
        }
        const CMat u = random_unitary(n_out_, rng_);
        for (int i = 0; i < n_out_; ++i) {
            CMat b = CMat::Zero(rows, cols);
            for (int j = 0; j < n; ++j) {
                b += u(i, j) * basis_[static_cast<std::size_t>(j)];
            }
            branches_[i] = std::move(b);
        }
    }

    bool at_floor() const {
        return total_ <= objective_.floor + objective_.floor_slack;
    }

    void mark_all_dirty() {
        std::fill(attempts_.begin(), attempts_.end(), PairAttempt{});
    }

    int pair_index(int i, int k) const {
        // linear index of (i,k), i<k, in row-major upper-triangular order
        return i * n_out_ - i * (i + 1) / 2 + (k - i - 1);
    }

    void refresh_total(int sweep) {
        if (sweep % 32 == 31) {
            for (int i = 0; i < n_out_; ++i) {
                costs_[i] = objective_.branch_cost(branches_[i]);
            }
        }
        double sum = 0.0;
        for (double c : costs_) {
            sum += c;
        }
        total_ = sum;
    }

    double recompute_total() {
        double sum = 0.0;
        for (int i = 0; i < n_out_; ++i) {
            costs_[i] = objective_.branch_cost(branches_[i]);
            sum += costs_[i];
        }
        total_ = sum;
        return sum;
    }

    int run_sweep(int quadratures) {
        // Seeded shuffle keeps the refinement deterministic per restart.
        for (std::size_t a = pair_order_.size(); a > 1; --a) {
            const std::size_t b = static_cast<std::size_t>(rng_.next_u64() % a);
            std::swap(pair_order_[a - 1], pair_order_[b]);
        }
        int accepted = 0;
        for (const auto& [i, k] : pair_order_) {
            for (int q = 0; q < quadratures; ++q) {
                if (try_rotation(i, k, q)) {
                    ++accepted;
                }
                if (at_floor()) {
                    return accepted;
                }
            }
        }
        return accepted;
    }

    bool try_rotation(int i, int k, int quadrature) {
        PairAttempt& attempt =
            attempts_[static_cast<std::size_t>(pair_index(i, k)) * kMaxQuadratures +
                      static_cast<std::size_t>(quadrature)];
        if (attempt.version_i == versions_[i] && attempt.version_k == versions_[k]) {
            return false;
        }
        attempt.version_i = versions_[i];
        attempt.version_k = versions_[k];

        const CMat& bi = branches_[i];
        const CMat& bk = branches_[k];
        if (bi.squaredNorm() + bk.squaredNorm() < 1e-28) {
            return false;
        }
        constexpr std::array<double, kMaxQuadratures> kChi = {0.0, kPi / 2.0, kPi / 4.0,
                                                              3.0 * kPi / 4.0};
        const Complex phase = std::polar(1.0, kChi[static_cast<std::size_t>(quadrature)]);
        const auto pair_cost = [&](double t) {
            const double c = std::cos(t);
            const double s = std::sin(t);
            tmp_i_ = c * bi + (phase * s) * bk;
            tmp_k_ = (-std::conj(phase) * s) * bi + c * bk;
            return objective_.branch_cost(tmp_i_) + objective_.branch_cost(tmp_k_);
        };

        const double h0 = costs_[i] + costs_[k];
        // Coarse grid to pick a basin, then a bounded Brent refinement. The
        // grid is offset so +-pi/4 style optima are bracketed, and a probe
        // near t = 0 catches small descent directions the grid misses.
        constexpr int kGrid = 8;
        double best_t = 0.0;
        double best_h = h0;
        for (int g = 0; g < kGrid; ++g) {
            const double t = -kPi / 2.0 + kPi * (static_cast<double>(g) + 0.5) / kGrid;
            const double h = pair_cost(t);
            if (h < best_h) {
                best_h = h;
                best_t = t;
            }
        }
        const double probe = 1e-3;
        for (const double t : {-probe, probe}) {
            const double h = pair_cost(t);
            if (h < best_h) {
                best_h = h;
                best_t = t;
            }
        }
        const double half_width = std::abs(best_t) <= probe ? 2.0 * probe : kPi / kGrid;
        const double refined =
            brent_minimize(pair_cost, best_t - half_width, best_t + half_width, 1e-12, 60);
        const double h_refined = pair_cost(refined);
        double final_t = best_t;
        double final_h = best_h;
        if (h_refined < best_h) {
            final_t = refined;
            final_h = h_refined;
        }
        if (final_h >= h0 - 1e-15 * (1.0 + std::abs(h0))) {
            return false;
        }

        const double c = std::cos(final_t);
        const double s = std::sin(final_t);
        const CMat new_i = c * bi + (phase * s) * bk;
        const CMat new_k = (-std::conj(phase) * s) * bi + c * bk;
        branches_[i] = new_i;
        branches_[k] = new_k;
        const double cost_i = objective_.branch_cost(branches_[i]);
        const double cost_k = objective_.branch_cost(branches_[k]);
        total_ += cost_i + cost_k - costs_[i] - costs_[k];
        costs_[i] = cost_i;
        costs_[k] = cost_k;
        ++versions_[i];
        ++versions_[k];
        return true;
    }

    const std::vector<CMat>& basis_;
    const EnsembleObjective& objective_;
    const OptimizerOptions& options_;
    int n_out_;
    Prng rng_;
    std::vector<CMat> branches_;
    std::vector<double> costs_;
    std::vector<std::uint64_t> versions_;
    std::vector<PairAttempt> attempts_;
    std::vector<std::pair<int, int>> pair_order_;
    double total_ = 0.0;
    CMat tmp_i_, tmp_k_;
};

}  // namespace

int resolve_thread_count(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("CHANNELFORGE_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) {
            return parsed;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

EnsembleSearchResult minimize_ensemble_cost(const std::vector<CMat>& basis,
                                            int n_out,
                                            const EnsembleObjective& objective,
                                            const OptimizerOptions& options) {
    if (basis.empty()) {
        throw Error(ErrorCode::BadArgument, "ensemble search needs a non-empty basis");
    }
    if (n_out < static_cast<int>(basis.size())) {
        throw Error(ErrorCode::BadArgument, "n_out must be at least the basis size");
    }
    const int restarts = std::max(options.restarts, 1);
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
    const int workers = std::min(resolve_thread_count(options.threads), restarts);

    const auto run_one = [&](int index) {
        RestartRunner runner(basis, n_out, objective, options, index);
        outcomes[static_cast<std::size_t>(index)] = runner.run();
    };

    if (workers <= 1) {
        for (int r = 0; r < restarts; ++r) {
            run_one(r);
            if (outcomes[static_cast<std::size_t>(r)].reached_floor) {
                outcomes.resize(static_cast<std::size_t>(r) + 1);
                break;
            }
        }
    } else {
        std::atomic<int> next{0};
        std::atomic<int> first_floor{restarts};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                while (true) {
                    const int index = next.fetch_add(1);
                    if (index >= restarts || index > first_floor.load()) {
                        return;
                    }
                    run_one(index);
                    if (outcomes[static_cast<std::size_t>(index)].reached_floor) {
                        int expected = first_floor.load();
                        while (index < expected &&
                               !first_floor.compare_exchange_weak(expected, index)) {
                        }
                    }
                }
            });
        }
        for (std::thread& t : pool) {
            t.join();
        }
        // Restarts past the first floor hit are discarded so the merge does
        // not depend on scheduling.
        const int cut = first_floor.load();
        if (cut < restarts) {
            outcomes.resize(static_cast<std::size_t>(cut) + 1);
        }
    }

    EnsembleSearchResult result;
    result.trace.best_restart = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        const RestartOutcome& outcome = outcomes[r];
        if (outcome.branches.empty()) {
            continue;
        }
        result.trace.restarts.push_back(
            {static_cast<int>(r), outcome.value, outcome.iterations});
        if (outcome.value < best) {
            best = outcome.value;
            result.trace.best_restart = static_cast<int>(r);
            result.branches = outcome.branches;
            result.value = outcome.value;
        }
        if (outcome.reached_floor) {
            result.trace.reached_floor = true;
        }
    }
    if (result.branches.empty()) {
        throw Error(ErrorCode::Optimizer, "ensemble search produced no usable restart");
    }
    return result;
}

}  // namespace channelforge
