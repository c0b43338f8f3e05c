#include "otbdp/sdot.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

#include "otbdp/parallel.hpp"
#include "otbdp/rng.hpp"

namespace otbdp {

void SolveConfig::validate() const {
  if (!(mass_tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass tolerance must be positive");
  if (mc_budget < 1000) throw Error(ErrorCode::InvalidArgument, "Monte-Carlo budget must be at least 1000");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
}

TransportMap::TransportMap(PowerDiagram diagram, DiscreteMeasure target, Point shift, double residual,
                           SolveStats stats)
    : diagram_(std::move(diagram)),
      target_(std::move(target)),
      shift_(std::move(shift)),
      residual_(residual),
      stats_(std::move(stats)) {
  if (diagram_.size() != target_.size() || diagram_.dim() != target_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "diagram and target disagree in size or dimension");
  }
  require_dim(shift_, target_.dim());
}

std::vector<double> TransportMap::atom_weights() const {
  const auto& omega = diagram_.weights();
  std::vector<double> w(omega.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = omega[i] + 2.0 * dot(target_.atom(i), shift_);
  const double gauge = w.front();
  for (auto& x : w) x -= gauge;
  return w;
}

DualEvaluation evaluate_dual(const PointSet& sites, std::span<const double> lambda, const PointSet& sample,
                             std::span<const double> weights) {
  const std::size_t n = sites.size();
  const std::size_t d = sites.dim();
  const std::size_t N = sample.size();
  const double* x0 = sites.data().data();
  const double* u0 = sample.data().data();

  std::vector<double> partial_sum(chunk_count(N), 0.0);
  std::vector<std::vector<std::size_t>> partial_counts(chunk_count(N));
  for_each_chunk(N, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& counts = partial_counts[c];
    counts.assign(n, 0);
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const double* u = u0 + k * d;
      const double* x = x0;
      std::size_t best = 0;
      double best_value = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i, x += d) {
        double dist = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double t = u[j] - x[j];
          dist += t * t;
        }
        const double value = dist - weights[i];
        if (value < best_value) {
          best_value = value;
          best = i;
        }
      }
      acc += best_value;
      ++counts[best];
    }
    partial_sum[c] = acc;
  });

  DualEvaluation out;
  out.counts.assign(n, 0);
  double total = 0.0;
  for (std::size_t c = 0; c < partial_sum.size(); ++c) {
    total += partial_sum[c];
    for (std::size_t i = 0; i < n; ++i) out.counts[i] += partial_counts[c][i];
  }
  out.value = total / static_cast<double>(N);
  for (std::size_t i = 0; i < n; ++i) out.value += lambda[i] * weights[i];
  out.masses.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.masses[i] = static_cast<double>(out.counts[i]) / static_cast<double>(N);
  return out;
}

namespace {

constexpr std::size_t kMemory = 8;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;
constexpr std::uint64_t kValidationStream = 0x76616c6964ULL;

double max_residual(std::span<const double> masses, std::span<const double> lambda) {
  double r = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) r = std::max(r, std::abs(masses[i] - lambda[i]));
  return r;
}

void fix_gauge(std::vector<double>& w) {
  const double g = w.front();
  for (auto& x : w) x -= g;
}

// One-dimensional cells are the intervals of the lower envelope of the lines
// u -> -2 x_i u + x_i^2 - w_i. With the sample sorted once, a full dual
// evaluation is a walk over at most n intervals with prefix sums.
class Envelope1D {
 public:
  Envelope1D(const PointSet& sites, const PointSet& sample) : x_(sites.data()), u_(sample.data()) {
    std::sort(u_.begin(), u_.end());
    s1_.assign(u_.size() + 1, 0.0L);
    s2_.assign(u_.size() + 1, 0.0L);
    for (std::size_t k = 0; k < u_.size(); ++k) {
      s1_[k + 1] = s1_[k] + u_[k];
      s2_[k + 1] = s2_[k] + static_cast<long double>(u_[k]) * u_[k];
    }
    order_.resize(x_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return x_[a] < x_[b]; });
  }

  std::size_t sample_size() const { return u_.size(); }

  /// Exact optimum of the fixed-sample dual: in one dimension the cells are
  /// consecutive intervals in atom order, cut at cumulative sample counts.
  /// Empty when two atoms share a position.
  std::optional<std::vector<double>> quantile_weights(std::span<const double> lambda) const {
    const std::size_t n = x_.size();
    const std::size_t N = u_.size();
    for (std::size_t j = 1; j < n; ++j) {
      if (!(x_[order_[j]] > x_[order_[j - 1]])) return std::nullopt;
    }
    std::vector<double> w(n, 0.0);
    double cumulative = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const std::size_t a = order_[j];
      const std::size_t b = order_[j + 1];
      cumulative += lambda[a];
      const auto cut = static_cast<std::size_t>(std::clamp(std::llround(cumulative * static_cast<double>(N)), 0LL,
                                                           static_cast<long long>(N)));
      double at;
      if (cut == 0) {
        at = u_.front() - 1.0;
      } else if (cut == N) {
        at = u_.back() + 1.0;
      } else {
        at = 0.5 * (u_[cut - 1] + u_[cut]);
      }
      // at = (x_a + x_b) / 2 + (w_a - w_b) / (2 (x_b - x_a))
      w[b] = w[a] - 2.0 * (x_[b] - x_[a]) * (at - 0.5 * (x_[a] + x_[b]));
    }
    return w;
  }
  double lowest() const { return u_.front(); }
  double highest() const { return u_.back(); }

  /// Cell counts under weights w; returns sum over the sample of min_i (u - x_i)^2 - w_i.
  double assign(std::span<const double> w, std::vector<std::size_t>& counts) const {
    const std::size_t n = x_.size();
    counts.assign(n, 0);
    const auto intercept = [&](std::size_t i) { return x_[i] * x_[i] - w[i]; };
    // Crossing of the lines of a and b (x_a < x_b).
    const auto cross = [&](std::size_t a, std::size_t b) {
      return (intercept(b) - intercept(a)) / (2.0 * (x_[b] - x_[a]));
    };
    hull_.clear();
    for (std::size_t i : order_) {
      if (!hull_.empty() && x_[hull_.back()] == x_[i]) {
        // Same slope: the lower line survives, the lower index on ties.
        if (intercept(i) < intercept(hull_.back())) {
          hull_.pop_back();
        } else {
          continue;
        }
      }
      while (hull_.size() >= 2 && cross(hull_[hull_.size() - 2], i) <= cross(hull_[hull_.size() - 2], hull_.back())) {
        hull_.pop_back();
      }
      hull_.push_back(i);
    }
    long double total = 0.0L;
    std::size_t begin = 0;
    for (std::size_t h = 0; h < hull_.size(); ++h) {
      std::size_t end = u_.size();
      if (h + 1 < hull_.size()) {
        const double b = cross(hull_[h], hull_[h + 1]);
        end = static_cast<std::size_t>(std::lower_bound(u_.begin() + static_cast<std::ptrdiff_t>(begin), u_.end(), b) -
                                       u_.begin());
      }
      const std::size_t i = hull_[h];
      const long double c = end - begin;
      total += (s2_[end] - s2_[begin]) - 2.0L * x_[i] * (s1_[end] - s1_[begin]) +
               c * (static_cast<long double>(x_[i]) * x_[i] - w[i]);
      counts[i] += end - begin;
      begin = end;
    }
    return static_cast<double>(total);
  }

 private:
  std::vector<double> x_;
  std::vector<double> u_;
  std::vector<long double> s1_, s2_;
  std::vector<std::size_t> order_;
  mutable std::vector<std::size_t> hull_;
};

class DualAscent {
 public:
  DualAscent(const PointSet& sites, std::span<const double> lambda, const PointSet& sample, SolveStats& stats)
      : sites_(sites), lambda_(lambda), sample_(sample), stats_(stats) {
    if (sites.dim() == 1) {
      line_.emplace(sites, sample);
    } else {
      tau_.resize(sample.size());
    }
  }

  std::optional<std::vector<double>> exact_start() const {
    if (!line_) return std::nullopt;
    return line_->quantile_weights(lambda_);
  }

  DualEvaluation evaluate(std::span<const double> w) {
    ++stats_.evaluations;
    if (!line_) return evaluate_dual(sites_, lambda_, sample_, w);
    DualEvaluation out;
    const double N = static_cast<double>(line_->sample_size());
    out.value = line_->assign(w, out.counts) / N;
    out.masses.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      out.value += lambda_[i] * w[i];
      out.masses[i] = static_cast<double>(out.counts[i]) / N;
    }
    return out;
  }

  /// Gauss-Seidel sweep of exact coordinate maximizations. Along e_i the
  /// dual is concave piecewise linear; its maximum is where cell i first
  /// holds ceil(lambda_i N) samples.
  void coordinate_sweep(std::vector<double>& w) {
    if (line_) {
      line_sweep(w);
    } else {
      sample_sweep(w);
    }
    fix_gauge(w);
    ++stats_.coordinate_sweeps;
    ++stats_.iterations;
  }

 private:
  std::size_t target_count(std::size_t i, std::size_t N) const {
    const double target = std::ceil(lambda_[i] * static_cast<double>(N) - 1e-9);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(target, 1.0)), 1, N);
  }

  // Smallest w_i, to bisection resolution, whose cell holds the target count.
  void line_sweep(std::vector<double>& w) {
    const std::size_t n = sites_.size();
    const auto& x = sites_.data();
    std::vector<std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = target_count(i, line_->sample_size());
      // w_i - w_j beats x_j at u iff w_i > (u - x_i)^2 - (u - x_j)^2 + w_j,
      // which is linear in u: the sample extremes bracket everything.
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        for (double u : {line_->lowest(), line_->highest()}) {
          const double edge = (u - x[i]) * (u - x[i]) - (u - x[j]) * (u - x[j]) + w[j];
          lo = std::min(lo, edge);
          hi = std::max(hi, edge);
        }
      }
      lo -= 1.0 + std::abs(lo);
      hi += 1.0 + std::abs(hi);
      for (;;) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        w[i] = mid;
        line_->assign(w, counts);
        (counts[i] >= k ? hi : lo) = mid;
      }
      w[i] = hi;
    }
  }

  void sample_sweep(std::vector<double>& w) {
    const std::size_t n = sites_.size();
    const std::size_t d = sites_.dim();
    const std::size_t N = sample_.size();
    const double* x0 = sites_.data().data();
    const double* u0 = sample_.data().data();
    for (std::size_t i = 0; i < n; ++i) {
      // tau(u) = ||u - x_i||^2 - min_{j != i} (||u - x_j||^2 - w_j); cell i = {tau <= w_i}.
      for_each_chunk(N, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          const double* u = u0 + k * d;
          double other = std::numeric_limits<double>::infinity();
          double own = 0.0;
          const double* x = x0;
          for (std::size_t j = 0; j < n; ++j, x += d) {
            double dist = 0.0;
            for (std::size_t m = 0; m < d; ++m) {
              const double t = u[m] - x[m];
              dist += t * t;
            }
            if (j == i) {
              own = dist;
            } else {
              other = std::min(other, dist - w[j]);
            }
          }
          tau_[k] = own - other;
        }
      });
      const std::size_t k = target_count(i, N);
      std::nth_element(tau_.begin(), tau_.begin() + static_cast<std::ptrdiff_t>(k - 1), tau_.end());
      const double kth = tau_[k - 1];
      double next = kth + 1.0;
      if (k < N) next = *std::min_element(tau_.begin() + static_cast<std::ptrdiff_t>(k), tau_.end());
      // Step just past the k-th sample so no sample sits on the new boundary.
      const double gap = std::min(0.5 * (next - kth), 1e-9 * std::max(1.0, std::abs(kth)));
      w[i] = kth + gap;
    }
  }

  const PointSet& sites_;
  std::span<const double> lambda_;
  const PointSet& sample_;
  SolveStats& stats_;
  std::vector<double> tau_;
  std::optional<Envelope1D> line_;
};

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Two-loop recursion for the inverse-Hessian product of the minimized
// objective G = -F, whose gradient is g = mass - lambda.
std::vector<double> quasi_newton_direction(const std::deque<CurvaturePair>& memory, const std::vector<double>& g) {
  std::vector<double> q = g;
  std::vector<double> alpha(memory.size());
  for (std::size_t idx = memory.size(); idx-- > 0;) {
    const auto& p = memory[idx];
    alpha[idx] = p.rho * dot_vec(p.s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[idx] * p.y[i];
  }
  const auto& last = memory.back();
  const double gamma = dot_vec(last.s, last.y) / dot_vec(last.y, last.y);
  for (auto& x : q) x *= gamma;
  for (std::size_t idx = 0; idx < memory.size(); ++idx) {
    const auto& p = memory[idx];
    const double beta = p.rho * dot_vec(p.y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += p.s[i] * (alpha[idx] - beta);
  }
  for (auto& x : q) x = -x;
  return q;
}

void remember(std::deque<CurvaturePair>& memory, std::vector<double> s, std::vector<double> y) {
  const double sy = dot_vec(s, y);
  if (!(sy > 1e-14 * std::sqrt(dot_vec(s, s) * dot_vec(y, y)))) return;
  memory.push_back({std::move(s), std::move(y), 1.0 / sy});
  if (memory.size() > kMemory) memory.pop_front();
}

std::vector<double> gradient_of(const DualEvaluation& ev, std::span<const double> lambda) {
  std::vector<double> g(lambda.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = ev.masses[i] - lambda[i];
  return g;
}

bool has_empty_cell(const DualEvaluation& ev) {
  return std::any_of(ev.counts.begin(), ev.counts.end(), [](std::size_t c) { return c == 0; });
}

}  // namespace

TransportMap solve(const ReferenceMeasure& reference, const DiscreteMeasure& target, const SolveConfig& config) {
  config.validate();
  if (target.dim() != reference.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "target dimension differs from the reference dimension");
  }
  const std::size_t n = target.size();
  const std::size_t d = target.dim();
  const Point shift = target.mean();
  PointSet sites(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) sites[i][k] = target.atom(i)[k] - shift[k];
  }
  const auto& lambda = target.weights();

  SolveStats stats;
  std::vector<double> w(n, 0.0);
  if (n == 1) {
    return TransportMap(PowerDiagram(reference, std::move(sites), std::move(w)), target, shift, 0.0, stats);
  }

  const PointSet fixed_sample = sample(reference, config.mc_budget, config.seed);
  DualAscent ascent(sites, lambda, fixed_sample, stats);

  DualEvaluation ev = ascent.evaluate(w);
  stats.dual_trace.push_back(ev.value);
  double residual = max_residual(ev.masses, lambda);
  std::deque<CurvaturePair> memory;

  const auto sweep = [&] {
    const std::vector<double> w_before = w;
    const std::vector<double> g_before = gradient_of(ev, lambda);
    ascent.coordinate_sweep(w);
    ev = ascent.evaluate(w);
    stats.dual_trace.push_back(ev.value);
    residual = max_residual(ev.masses, lambda);
    std::vector<double> s(n), y(n);
    const auto g_after = gradient_of(ev, lambda);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = w[i] - w_before[i];
      y[i] = g_after[i] - g_before[i];
    }
    remember(memory, std::move(s), std::move(y));
  };

  if (residual > config.mass_tolerance) {
    if (auto start = ascent.exact_start()) {
      w = std::move(*start);
      fix_gauge(w);
      ev = ascent.evaluate(w);
      stats.dual_trace.push_back(ev.value);
      residual = max_residual(ev.masses, lambda);
    } else {
      sweep();
    }
  }

  while (residual > config.mass_tolerance) {
    if (stats.iterations >= config.max_iterations) {
      throw Error(ErrorCode::NotConverged,
                  "solver stopped after " + std::to_string(stats.iterations) + " iterations with residual " +
                      std::to_string(residual),
                  residual);
    }
    if (has_empty_cell(ev)) {
      // The line search cannot leave a point with an empty cell.
      memory.clear();
      sweep();
      continue;
    }
    const auto g = gradient_of(ev, lambda);
    std::vector<double> p;
    if (!memory.empty()) p = quasi_newton_direction(memory, g);
    double slope = p.empty() ? 0.0 : dot_vec(g, p);
    if (p.empty() || !(slope < 0.0)) {
      // No usable curvature: plain gradient ascent on F.
      memory.clear();
      p.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
      slope = dot_vec(g, p);
    }

    bool accepted = false;
    double step = 1.0;
    std::vector<double> trial(n);
    for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] + step * p[i];
      fix_gauge(trial);
      if (trial == w) break;  // step below resolution
      DualEvaluation next = ascent.evaluate(trial);
      if (has_empty_cell(next)) {
        ++stats.empty_cell_rejections;
        continue;
      }
      // Armijo condition for the ascent on F (G = -F decreases).
      if (next.value >= ev.value - kArmijo * step * slope) {
        const auto g_next = gradient_of(next, lambda);
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
          s[i] = trial[i] - w[i];
          y[i] = g_next[i] - g[i];
        }
        remember(memory, std::move(s), std::move(y));
        w = trial;
        ev = std::move(next);
        accepted = true;
        break;
      }
    }
    if (accepted) {
      ++stats.iterations;
      ++stats.quasi_newton_steps;
      stats.dual_trace.push_back(ev.value);
      residual = max_residual(ev.masses, lambda);
    } else {
      memory.clear();
      sweep();
    }
  }

  PowerDiagram diagram(reference, std::move(sites), w);
  const std::size_t budget = config.mc_budget;
  const auto check = diagram.cell_masses(budget, derive_seed(config.seed, kValidationStream));
  stats.validation_residual = max_residual(check, lambda);
  const double slack = 4.0 / std::sqrt(static_cast<double>(budget));
  if (stats.validation_residual > config.mass_tolerance + slack) {
    throw Error(ErrorCode::NotConverged,
                "independent-sample residual " + std::to_string(stats.validation_residual) +
                    " exceeds tolerance plus Monte-Carlo slack",
                stats.validation_residual);
  }
  return TransportMap(std::move(diagram), target, shift, residual, std::move(stats));
}

PointSet ranks(const TransportMap& map, std::size_t budget, std::uint64_t seed) {
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "sample budget must be positive");
  const auto& diagram = map.diagram();
  const auto& reference = map.reference();
  const std::size_t n = diagram.size();
  const std::size_t d = diagram.dim();
  struct Partial {
    std::vector<double> sums;
    std::vector<std::size_t> counts;
  };
  std::vector<Partial> partial(chunk_count(budget));
  for_each_chunk(budget, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> buf((end - begin) * d);
    reference.sample_into(seed, begin, end - begin, buf);
    auto& part = partial[c];
    part.sums.assign(n * d, 0.0);
    part.counts.assign(n, 0);
    for (std::size_t k = 0; k < end - begin; ++k) {
      const double* u = buf.data() + k * d;
      const std::size_t i = diagram.classify_unchecked(u);
      ++part.counts[i];
      for (std::size_t j = 0; j < d; ++j) part.sums[i * d + j] += u[j];
    }
  });
  std::vector<double> sums(n * d, 0.0);
  std::vector<std::size_t> counts(n, 0);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < n * d; ++i) sums[i] += part.sums[i];
    for (std::size_t i = 0; i < n; ++i) counts[i] += part.counts[i];
  }
  PointSet out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0) {
      throw Error(ErrorCode::EmptyCellRank, "no sample landed in cell " + std::to_string(i),
                  static_cast<double>(i));
    }
    for (std::size_t j = 0; j < d; ++j) out[i][j] = sums[i * d + j] / static_cast<double>(counts[i]);
  }
  return out;
}

}  // namespace otbdp
