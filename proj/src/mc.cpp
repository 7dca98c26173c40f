#include "cirmax/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "cirmax/inversion.hpp"
#include "cirmax/philox.hpp"

namespace cirmax {

namespace {

// X_{t+dt} | X_t = x is c * chi'^2(nu, x*decay/c), sampled as the Poisson-J
// mixture Gamma(nu/2 + J, scale 2c).
struct ExactKernel {
    double decay;
    double c;
    double half_nu;
    double two_c;

    static ExactKernel make(const CirParams& p, double dt) {
        const double decay = std::exp(-p.beta * dt);
        const double c = p.sigma * p.sigma * (1.0 - decay) / (4.0 * p.beta);
        return {decay, c, 2.0 * p.alpha / (p.sigma * p.sigma), 2.0 * c};
    }

    double advance(double x, PhiloxStream& rng) const {
        const double mean = 0.5 * x * decay / c;
        long j = 0;
        if (mean > 1e-12) {
            std::poisson_distribution<long> pois(mean);
            j = pois(rng);
        }
        std::gamma_distribution<double> gam(half_nu + static_cast<double>(j), two_c);
        return gam(rng);
    }
};

struct EulerKernel {
    double alpha;
    double beta;
    double sigma;
    double dt;
    double sdt;

    static EulerKernel make(const CirParams& p, double dt) {
        return {p.alpha, p.beta, p.sigma, dt, std::sqrt(dt)};
    }

    double advance(double x, PhiloxStream& rng) const {
        const double xp = x > 0.0 ? x : 0.0;
        std::normal_distribution<double> norm;
        return x + (alpha - beta * xp) * dt + sigma * std::sqrt(xp) * sdt * norm(rng);
    }
};

struct BlockStats {
    std::vector<std::int64_t> hits;
    double sum = 0.0;
    double sumsq = 0.0;
};

// Distribution objects are constructed fresh per (path, step) cell: the
// library ones carry rejection-sampler state (a cached second normal) that
// would otherwise leak across cells and make results depend on the path
// partition.
template <class Kernel>
void run_block(const CirParams& p, const SimConfig& cfg, const Kernel& k,
               const std::vector<double>& zs, double z_break,
               std::int64_t lo, std::int64_t hi, BlockStats& out) {
    out.hits.assign(zs.size(), 0);
    double comp = 0.0, comp2 = 0.0;
    for (std::int64_t path = lo; path < hi; ++path) {
        double x = p.x0, m = p.x0;
        for (std::int64_t step = 0; step < cfg.n_steps; ++step) {
            PhiloxStream rng(cfg.seed, static_cast<std::uint64_t>(path),
                             static_cast<std::uint32_t>(step));
            x = k.advance(x, rng);
            if (x > m) {
                m = x;
                if (m >= z_break) break;
            }
        }
        for (std::size_t i = 0; i < zs.size(); ++i)
            if (m >= zs[i]) ++out.hits[i];
        double y = x - comp;
        double s = out.sum + y;
        comp = (s - out.sum) - y;
        out.sum = s;
        y = x * x - comp2;
        s = out.sumsq + y;
        comp2 = (s - out.sumsq) - y;
        out.sumsq = s;
    }
}

int thread_count() {
    if (const char* env = std::getenv("CIRMAX_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

BlockStats simulate(const CirParams& p, const SimConfig& cfg,
                    const std::vector<double>& zs, double z_break) {
    p.validate();
    cfg.validate();

    const double dt = p.t / static_cast<double>(cfg.n_steps);
    auto dispatch = [&](std::int64_t lo, std::int64_t hi, BlockStats& out) {
        if (cfg.scheme == McScheme::exact_transition)
            run_block(p, cfg, ExactKernel::make(p, dt), zs, z_break, lo, hi, out);
        else
            run_block(p, cfg, EulerKernel::make(p, dt), zs, z_break, lo, hi, out);
    };

    const int nt = static_cast<int>(
        std::min<std::int64_t>(thread_count(), cfg.n_paths));
    if (nt <= 1) {
        BlockStats s;
        dispatch(0, cfg.n_paths, s);
        return s;
    }

    std::vector<BlockStats> parts(nt);
    std::vector<std::thread> workers;
    const std::int64_t chunk = (cfg.n_paths + nt - 1) / nt;
    for (int i = 0; i < nt; ++i) {
        const std::int64_t lo = i * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, cfg.n_paths);
        workers.emplace_back([&, lo, hi, i] { dispatch(lo, hi, parts[i]); });
    }
    for (auto& w : workers) w.join();

    BlockStats total;
    total.hits.assign(zs.size(), 0);
    for (const auto& s : parts) {
        for (std::size_t i = 0; i < zs.size(); ++i) total.hits[i] += s.hits[i];
        total.sum += s.sum;
        total.sumsq += s.sumsq;
    }
    return total;
}

McEstimate to_estimate(std::int64_t hits, std::int64_t n) {
    const double ph = static_cast<double>(hits) / static_cast<double>(n);
    return {ph, std::sqrt(ph * (1.0 - ph) / static_cast<double>(n)), hits};
}

} // namespace

McEstimate mc_running_max_tail(const CirParams& p, const SimConfig& cfg) {
    return mc_running_max_tail_multi(p, {p.z}, cfg).front();
}

std::vector<McEstimate> mc_running_max_tail_multi(const CirParams& p,
                                                  const std::vector<double>& z_levels,
                                                  const SimConfig& cfg) {
    p.validate();
    cfg.validate();
    if (z_levels.empty())
        throw std::invalid_argument("mc_running_max_tail_multi: empty z_levels");

    std::vector<McEstimate> out(z_levels.size());
    std::vector<double> active;
    double z_break = -std::numeric_limits<double>::infinity();
    for (double z : z_levels) {
        if (!std::isfinite(z))
            throw std::invalid_argument("mc_running_max_tail_multi: z must be finite");
        if (z > p.x0) {
            active.push_back(z);
            z_break = std::max(z_break, z);
        }
    }

    BlockStats stats;
    if (!active.empty()) stats = simulate(p, cfg, active, z_break);

    std::size_t ai = 0;
    for (std::size_t i = 0; i < z_levels.size(); ++i) {
        if (z_levels[i] <= p.x0)
            out[i] = McEstimate{1.0, 0.0, cfg.n_paths};
        else
            out[i] = to_estimate(stats.hits[ai++], cfg.n_paths);
    }
    return out;
}

McMoment mc_marginal_mean(const CirParams& p, const SimConfig& cfg) {
    const BlockStats s =
        simulate(p, cfg, {}, std::numeric_limits<double>::infinity());
    const double n = static_cast<double>(cfg.n_paths);
    const double mean = s.sum / n;
    double se = 0.0;
    if (cfg.n_paths > 1) {
        const double var = std::max(0.0, (s.sumsq - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / n);
    }
    return {mean, se};
}

RateReport rate_check(const CirParams& p, const std::vector<double>& z_grid) {
    p.validate();
    if (z_grid.size() < 2)
        throw std::invalid_argument("rate_check: need at least two z values");
    for (std::size_t i = 1; i < z_grid.size(); ++i)
        if (!(z_grid[i] > z_grid[i - 1]))
            throw std::invalid_argument("rate_check: z_grid must be strictly increasing");

    RateReport r;
    r.z = z_grid;
    r.log_p.reserve(z_grid.size());
    for (double z : z_grid) {
        CirParams q = p;
        q.z = z;
        const double v = cir_running_max_cdf(q, CdfMethod::bromwich);
        if (!(v > 0.0))
            throw std::runtime_error("rate_check: tail value vanished; shrink the z grid");
        r.log_p.push_back(std::log(v));
    }

    const auto n = static_cast<double>(z_grid.size());
    double zbar = 0.0, lbar = 0.0;
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        zbar += z_grid[i];
        lbar += r.log_p[i];
    }
    zbar /= n;
    lbar /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        num += (z_grid[i] - zbar) * (r.log_p[i] - lbar);
        den += (z_grid[i] - zbar) * (z_grid[i] - zbar);
    }
    r.ols_slope = num / den;

    const std::size_t last = z_grid.size() - 1;
    r.pair_slope = (r.log_p[last] - r.log_p[last - 1]) / (z_grid[last] - z_grid[last - 1]);

    const double s2 = p.sigma * p.sigma;
    r.target_slope = -(p.beta / s2) * (1.0 + 1.0 / std::tanh(0.5 * p.beta * p.t));
    r.ldp_c = -r.pair_slope * s2;
    r.slope_ok = std::abs(r.pair_slope / r.target_slope - 1.0) <= 0.05;
    r.ldp_ok = r.ldp_c > 0.0;
    return r;
}

} // namespace cirmax
