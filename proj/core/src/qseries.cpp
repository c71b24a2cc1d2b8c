#include "rehf/qseries.hpp"

#include <atomic>
#include <thread>

namespace rehf {

cplx pairwise_sum(std::span<const cplx> xs) {
  if (xs.size() <= 8) {
    cplx s{0.0, 0.0};
    for (cplx x : xs) s += x;
    return s;
  }
  std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace {
std::atomic<int> g_jobs{0};
}

int default_jobs() {
  int j = g_jobs.load();
  if (j > 0) return j;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void set_default_jobs(int jobs) { g_jobs.store(jobs); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& block_fn,
                  int jobs) {
  if (n == 0) return;
  if (jobs <= 0) jobs = default_jobs();
  // Fixed block size: the work decomposition must not depend on thread count.
  const std::size_t block = 256;
  std::size_t nblocks = (n + block - 1) / block;
  if (jobs == 1 || nblocks == 1) {
    block_fn(0, n);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      std::size_t lo = b * block;
      std::size_t hi = lo + block < n ? lo + block : n;
      block_fn(lo, hi);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = jobs < static_cast<int>(nblocks) ? jobs : static_cast<int>(nblocks);
  pool.reserve(static_cast<std::size_t>(nthreads) - 1);
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

cplx qpochhammer_inf(cplx z, cplx p, Truncation tr) {
  if (std::abs(p) >= 1.0) throw domain_error("qpochhammer_inf: base |p| must be < 1");
  cplx acc{1.0, 0.0};
  cplx zp = z;
  for (int j = 0; j < tr.max_terms; ++j) {
    if (std::abs(zp) < tr.tail_threshold) return acc;
    acc *= (1.0 - zp);
    zp *= p;
  }
  throw convergence_error("qpochhammer_inf: term budget exhausted before tail threshold");
}

cplx theta(cplx z, cplx p, Truncation tr) {
  if (z == cplx{0.0, 0.0}) throw domain_error("theta: argument must be nonzero");
  return qpochhammer_inf(z, p, tr) * qpochhammer_inf(p / z, p, tr);
}

cplx theta_product(std::span<const cplx> args, cplx p, Truncation tr) {
  cplx acc{1.0, 0.0};
  for (cplx a : args) acc *= theta(a, p, tr);
  return acc;
}

cplx theta_pm(cplx t, cplx x, cplx p, Truncation tr) {
  return theta(t * x, p, tr) * theta(t / x, p, tr);
}

cplx elliptic_pochhammer(cplx x, long n, cplx p, cplx q, Truncation tr) {
  cplx acc{1.0, 0.0};
  if (n >= 0) {
    cplx arg = x;
    for (long j = 0; j < n; ++j) {
      acc *= theta(arg, p, tr);
      arg *= q;
    }
    return acc;
  }
  cplx arg = x;
  for (long j = 1; j <= -n; ++j) {
    arg /= q;
    cplx th = theta(arg, p, tr);
    // Relative pole test: a denominator theta this small means x sits on (or
    // within roundoff of) a zero of the shifted factorial's denominator.
    double scale = std::max(1.0, std::abs(arg));
    if (std::abs(th) <= 1e-13 * scale)
      throw pole_error("elliptic_pochhammer: denominator theta vanishes at shift " +
                       std::to_string(-j));
    acc /= th;
  }
  return acc;
}

}  // namespace rehf
