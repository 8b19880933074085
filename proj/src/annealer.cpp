#include "mrgnn/annealer.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "mrgnn/error.hpp"
#include "mrgnn/rng.hpp"

namespace mrgnn {

std::size_t var_limit_from_env(std::size_t fallback) {
  const char* env = std::getenv("MRGNN_VAR_LIMIT");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) throw InvalidInput("MRGNN_VAR_LIMIT must be a positive integer");
  return static_cast<std::size_t>(v);
}

void AnnealConfig::validate() const {
  if (sweeps < 1) throw InvalidInput("sweeps must be >= 1");
  if (restarts < 1) throw InvalidInput("restarts must be >= 1");
  if (var_limit < 1) throw InvalidInput("var_limit must be >= 1");
  if (t_start && !(*t_start > 0.0)) throw InvalidInput("t_start must be positive");
  if (t_end && !(*t_end > 0.0)) throw InvalidInput("t_end must be positive");
  if (t_start && t_end && *t_start < *t_end) throw InvalidInput("t_start must be >= t_end");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_capacity(const QuboMatrix& q, const AnnealConfig& cfg) {
  cfg.validate();
  if (q.size() > cfg.var_limit) throw CapacityError(q.size(), cfg.var_limit);
}

/// Largest off-diagonal coupling magnitude; sets the temperature scale.
double max_abs_coupling(const QuboMatrix& q) {
  double m = q.size() > 1 ? std::abs(q.uniform()) : 0.0;
  for (const auto& t : q.entries())
    if (t.i != t.j) m = std::max(m, std::abs(t.q));
  if (m == 0.0)
    for (const auto& t : q.entries()) m = std::max(m, std::abs(t.q));
  return m > 0.0 ? m : 1.0;
}

struct Schedule {
  double t_start;
  double t_end;
  double ratio;

  Schedule(const QuboMatrix& q, const AnnealConfig& cfg) {
    t_start = cfg.t_start.value_or(max_abs_coupling(q));
    t_end = cfg.t_end.value_or(std::min(t_start, 0.2 * max_abs_coupling(q)));
    ratio = cfg.sweeps > 1 ? std::pow(t_end / t_start, 1.0 / static_cast<double>(cfg.sweeps - 1)) : 1.0;
  }
};

Binary random_state(std::size_t n, Rng& rng) {
  Binary x(n);
  for (auto& v : x) v = static_cast<std::uint8_t>(rng() >> 63);
  return x;
}

bool accept(double delta, double t, Rng& rng) {
  return delta <= 0.0 || uniform01(rng) < std::exp(-delta / t);
}

}  // namespace

AnnealResult simulated_anneal(const QuboMatrix& q, const AnnealConfig& cfg) {
  check_capacity(q, cfg);
  auto t0 = Clock::now();
  const std::size_t n = q.size();
  Rng rng(mix_seed(cfg.seed));
  Schedule sched(q, cfg);
  Binary x = random_state(n, rng);
  std::size_t ones = std::accumulate(x.begin(), x.end(), std::size_t{0});
  double energy = hamiltonian(q, x);
  AnnealResult res{x, energy, {}, 0.0};
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  double t = sched.t_start;
  for (std::size_t s = 0; s < cfg.sweeps; ++s, t *= sched.ratio) {
    for (std::size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i))]);
    for (std::size_t i : order) {
      double d = flip_delta(q, x, i, ones);
      if (!accept(d, t, rng)) continue;
      ones = x[i] ? ones - 1 : ones + 1;
      x[i] ^= 1;
      energy += d;
      if (energy < res.energy_best) {
        res.energy_best = energy;
        res.x_best = x;
      }
    }
  }
  // Re-evaluate to drop accumulated rounding from the incremental updates.
  res.energy_best = hamiltonian(q, res.x_best);
  res.energy_trace = {res.energy_best};
  res.elapsed = seconds_since(t0);
  return res;
}

AnnealResult momentum_anneal(const QuboMatrix& q, const AnnealConfig& cfg) {
  check_capacity(q, cfg);
  auto t0 = Clock::now();
  const std::size_t n = q.size();
  Rng rng(mix_seed(cfg.seed));
  Schedule sched(q, cfg);

  // Momentum ramps up to 0.3 of the largest sparse row sum. Stronger locking
  // freezes the replicas early on larger instances; the dense uniform part is
  // handled inside the replica (see below) and needs no extra locking.
  double coupling_max = 0.0;
  if (cfg.coupling_max) {
    coupling_max = *cfg.coupling_max;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (const auto& nb : q.row(i)) row += std::abs(nb.w);
      coupling_max = std::max(coupling_max, row);
    }
    coupling_max *= 0.3;
  }

  // Replicas a and b. For the sparse couplings the bilayer energy
  //   E(a, b) = sum_i q_ii (a_i + b_i) / 2 + sum_{i!=j} Q_ij a_i b_j + w sum_i (a_i - b_i)^2
  // equals H(x) when a == b and is linear in a for fixed b, so one replica is
  // redrawn against the frozen other. The uniform coupling touches every pair;
  // updating it against the other replica makes the whole layer herd, so it
  // reads a running count of the replica being updated instead. Fields are
  // scaled by 2 so a single flip matches the single-replica flip delta.
  std::array<Binary, 2> rep{random_state(n, rng), random_state(n, rng)};
  std::array<std::size_t, 2> ones{};
  for (int r = 0; r < 2; ++r) ones[r] = std::accumulate(rep[r].begin(), rep[r].end(), std::size_t{0});

  AnnealResult res;
  res.x_best = rep[0];
  res.energy_best = hamiltonian(q, rep[0]);
  if (double e1 = hamiltonian(q, rep[1]); e1 < res.energy_best) {
    res.energy_best = e1;
    res.x_best = rep[1];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  double t = sched.t_start;
  for (std::size_t s = 0; s < cfg.sweeps; ++s, t *= sched.ratio) {
    const double w = cfg.sweeps > 1
                         ? coupling_max * static_cast<double>(s) / static_cast<double>(cfg.sweeps - 1)
                         : coupling_max;
    const int upd = static_cast<int>(s % 2);
    Binary& a = rep[upd];
    const Binary& b = rep[1 - upd];
    if (q.uniform() != 0.0)
      for (std::size_t k = n; k > 1; --k)
        std::swap(order[k - 1], order[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k))]);
    std::size_t count = ones[upd];
    for (std::size_t i : order) {
      double field = q.diag(i) + 2.0 * q.uniform() * static_cast<double>(count - a[i]) +
                     2.0 * w * (1.0 - 2.0 * b[i]);
      for (const auto& nb : q.row(i))
        if (b[nb.node]) field += 2.0 * nb.w;
      const double delta = a[i] ? -field : field;
      if (!accept(delta, t, rng)) continue;
      count = a[i] ? count - 1 : count + 1;
      a[i] ^= 1;
    }
    ones[upd] = count;
    double e = hamiltonian(q, a);
    if (e < res.energy_best) {
      res.energy_best = e;
      res.x_best = a;
    }
  }
  res.energy_trace = {res.energy_best};
  res.elapsed = seconds_since(t0);
  return res;
}

AnnealResult solve_am(const QuboMatrix& q, const AnnealConfig& cfg) {
  check_capacity(q, cfg);
  auto t0 = Clock::now();
  AnnealResult best;
  best.energy_trace.reserve(cfg.restarts);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    AnnealConfig run = cfg;
    // Restart r always sees the same seed, so more restarts never do worse.
    run.seed = r == 0 ? cfg.seed : derive_seed(cfg.seed, r);
    AnnealResult one = momentum_anneal(q, run);
    best.energy_trace.push_back(one.energy_best);
    if (r == 0 || one.energy_best < best.energy_best) {
      best.energy_best = one.energy_best;
      best.x_best = std::move(one.x_best);
    }
  }
  best.elapsed = seconds_since(t0);
  return best;
}

}  // namespace mrgnn
