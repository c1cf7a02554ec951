#include "hawkes/inference.hpp"

#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hawkes {

WindowFunctional::WindowFunctional(Kind kind) : kind_(kind) {
    if (kind == Kind::indicator_empty) {
        bounds_ = Bounds{0.0, 1.0};
    }
}

WindowFunctional WindowFunctional::count_capped(std::size_t cap) {
    WindowFunctional f(Kind::count_capped);
    f.cap_ = cap;
    f.bounds_ = Bounds{0.0, static_cast<double>(cap)};
    return f;
}

WindowFunctional WindowFunctional::custom(std::string name, std::function<double(std::size_t)> fn,
                                          std::optional<Bounds> bounds) {
    if (!fn) {
        throw std::invalid_argument("custom window functional needs a callable");
    }
    WindowFunctional f(Kind::custom);
    f.name_ = std::move(name);
    f.fn_ = std::move(fn);
    f.bounds_ = bounds;
    return f;
}

WindowFunctional WindowFunctional::parse(const std::string& id) {
    if (id == "count") {
        return count();
    }
    if (id == "indicator_empty") {
        return indicator_empty();
    }
    const std::string prefix = "count_capped:";
    if (id.rfind(prefix, 0) == 0) {
        const std::string n = id.substr(prefix.size());
        if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("count_capped needs a nonnegative integer cap, got '" + n + "'");
        }
        return count_capped(std::stoull(n));
    }
    throw std::invalid_argument("unknown window functional '" + id +
                                "' (expected count, indicator_empty or count_capped:<n>)");
}

double WindowFunctional::operator()(std::size_t count) const {
    switch (kind_) {
    case Kind::count:
        return static_cast<double>(count);
    case Kind::indicator_empty:
        return count == 0 ? 1.0 : 0.0;
    case Kind::count_capped:
        return static_cast<double>(std::min(count, cap_));
    case Kind::custom:
        return fn_(count);
    }
    return 0.0;
}

std::string WindowFunctional::id() const {
    switch (kind_) {
    case Kind::count:
        return "count";
    case Kind::indicator_empty:
        return "indicator_empty";
    case Kind::count_capped:
        return "count_capped:" + std::to_string(cap_);
    case Kind::custom:
        return name_;
    }
    return {};
}

double integrate_window(std::span<const double> atoms, double window, double from, double to,
                        const WindowFunctional& f) {
    if (!(to > from)) {
        return 0.0;
    }
    // count at `from`: atoms u <= from with u + A > from
    auto enter = std::upper_bound(atoms.begin(), atoms.end(), from);
    auto leave = std::partition_point(atoms.begin(), atoms.end(), [&](double u) { return u + window <= from; });
    std::size_t count = static_cast<std::size_t>(enter - leave);

    double total = 0.0;
    double t = from;
    while (true) {
        const double next_enter = enter != atoms.end() ? *enter : std::numeric_limits<double>::infinity();
        const double next_leave = leave != atoms.end() ? *leave + window : std::numeric_limits<double>::infinity();
        const double next = std::min({next_enter, next_leave, to});
        total += f(count) * (next - t);
        t = next;
        if (t >= to) {
            break;
        }
        while (enter != atoms.end() && *enter == t) {
            ++enter;
            ++count;
        }
        while (leave != atoms.end() && *leave + window == t) {
            ++leave;
            --count;
        }
    }
    return total;
}

double time_average(const SimulationPath& path, const WindowFunctional& f, double window, double T) {
    if (!(T > 0.0) || T > path.horizon) {
        throw std::invalid_argument("time average needs 0 < T <= horizon");
    }
    const auto atoms = all_atoms(path);
    return integrate_window(atoms, window, 0.0, T, f) / T;
}

std::vector<CycleStatistic> cycle_integrals(const std::vector<Excursion>& cycles, const WindowFunctional& f,
                                            double window) {
    std::vector<CycleStatistic> out;
    out.reserve(cycles.size());
    for (const auto& c : cycles) {
        out.push_back({integrate_window(c.events, window, 0.0, c.duration, f), c.duration});
    }
    return out;
}

double estimate_pi(std::span<const CycleStatistic> cycles) {
    if (cycles.empty()) {
        throw InsufficientCycles("no complete renewal cycle observed; increase the horizon");
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& c : cycles) {
        num += c.integral;
        den += c.duration;
    }
    return num / den;
}

double estimate_sigma2(std::span<const CycleStatistic> cycles, double pi_hat) {
    if (cycles.size() < 2) {
        throw InsufficientCycles("variance estimate needs at least two complete cycles; increase the horizon");
    }
    double sq = 0.0;
    double dur = 0.0;
    for (const auto& c : cycles) {
        const double centered = c.integral - pi_hat * c.duration;
        sq += centered * centered;
        dur += c.duration;
    }
    return sq / dur;
}

Interval clt_interval(double pi_hat, double sigma2_hat, double T, double level) {
    if (!(sigma2_hat >= 0.0)) {
        throw std::invalid_argument("sigma2 must be nonnegative");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    if (!(T > 0.0)) {
        throw std::invalid_argument("observation length T must be positive");
    }
    const double half = stats::normal_quantile(0.5 * (1.0 + level)) * std::sqrt(sigma2_hat / T);
    return {pi_hat - half, pi_hat + half};
}

BernsteinResult bernstein_epsilon(double range, double mean_tau, double v, double c, double T, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in (0, 1]");
    }
    if (!(T > 0.0)) {
        throw std::invalid_argument("T must be positive");
    }
    const double l = std::log(eta / 4.0);
    const double eps = (range * mean_tau - 2.0 * c * l + std::sqrt(4.0 * c * c * l * l - 8.0 * v * l)) / T;
    return {eps, v, c};
}

BernsteinResult bernstein_epsilon(double a, double b, double alpha, double alpha_limit, double mean_tau,
                                  double exp_moment, double T, double eta) {
    if (!(b > a)) {
        throw std::invalid_argument("bounds must satisfy b > a");
    }
    if (!(alpha > 0.0) || !(alpha < alpha_limit)) {
        throw std::invalid_argument("alpha must lie in (0, min(lambda, gamma+))");
    }
    if (!(mean_tau > 0.0)) {
        throw std::invalid_argument("mean cycle length must be positive");
    }
    const double range = b - a;
    const double blocks = std::floor(T / mean_tau);
    const double v = 2.0 * range * range / (alpha * alpha) * blocks * exp_moment * std::exp(alpha * mean_tau);
    const double c = range / alpha;
    return bernstein_epsilon(range, mean_tau, v, c, T, eta);
}

double bernstein_tail(double range, double mean_tau, double v, double c, double T, double eps) {
    const double x = T * eps - range * mean_tau;
    if (!(x > 0.0)) {
        return 4.0;
    }
    return 4.0 * std::exp(-x * x / (4.0 * (2.0 * v + c * x)));
}

double moment_constant(std::span<const double> centered, double denom, int k_max, bool positive) {
    if (!(denom > 0.0)) {
        return 0.0;
    }
    const double n = static_cast<double>(centered.size());
    double best = 0.0;
    for (int k = 3; k <= k_max; ++k) {
        double m = 0.0;
        for (double x : centered) {
            const double part = positive ? std::max(x, 0.0) : std::max(-x, 0.0);
            m += std::pow(part, k);
        }
        m /= n;
        const double log_ratio = std::log(2.0) - std::lgamma(k + 1.0) + std::log(m) - std::log(denom);
        if (m > 0.0) {
            best = std::max(best, std::exp(log_ratio / (k - 2)));
        }
    }
    return best;
}

ConcentrationResult concentration_bound_full(const ConcentrationInputs& in) {
    ConcentrationResult r;
    if (in.cycles.size() < 8) {
        throw InsufficientCycles("concentration constants need at least 8 complete cycles");
    }
    if (!(in.b > in.a)) {
        throw std::invalid_argument("bounds must satisfy b > a");
    }
    if (!(in.T > 0.0) || !(in.epsilon > 0.0)) {
        throw std::invalid_argument("T and epsilon must be positive");
    }
    const auto n = in.cycles.size();
    const int log_cap = static_cast<int>(std::floor(std::log2(static_cast<double>(n))));
    r.k_max_used = std::min(in.k_max, std::max(3, log_cap));
    if (r.k_max_used < in.k_max) {
        r.warnings.push_back("k_max reduced from " + std::to_string(in.k_max) + " to " +
                             std::to_string(r.k_max_used) + " for " + std::to_string(n) + " cycles");
    }

    const double pi_hat = estimate_pi(in.cycles);
    std::vector<double> centered_f;
    std::vector<double> durations;
    for (const auto& c : in.cycles) {
        centered_f.push_back(c.integral - pi_hat * c.duration);
        durations.push_back(c.duration);
    }
    const auto tau = stats::summarize(durations);
    const double sigma2 = estimate_sigma2(in.cycles, pi_hat);
    std::vector<double> centered_tau;
    for (double d : durations) {
        centered_tau.push_back(d - tau.mean);
    }
    const double second_f = tau.mean * sigma2;
    r.c_plus_f = moment_constant(centered_f, second_f, r.k_max_used, true);
    r.c_minus_f = moment_constant(centered_f, second_f, r.k_max_used, false);
    r.c_plus_tau = moment_constant(centered_tau, tau.variance, r.k_max_used, true);
    r.c_minus_tau = moment_constant(centered_tau, tau.variance, r.k_max_used, false);

    const double range = in.b - in.a;
    const double T = in.T;
    const double effective_T = in.empty_initial ? T : T - std::sqrt(T);
    const double num = effective_T * in.epsilon - range * tau.mean;
    if (!(num > 0.0)) {
        r.vacuous = true;
        r.bound = 1.0;
        return r;
    }
    auto term = [&](double variance_part, double c) {
        return std::exp(-num * num / (variance_part + 4.0 * c * num));
    };
    const double tau_variance_part = 8.0 * T * range * range * tau.variance / tau.mean;
    r.terms.push_back(term(8.0 * T * sigma2, r.c_plus_f));
    r.terms.push_back(term(8.0 * T * sigma2, r.c_minus_f));
    r.terms.push_back(term(tau_variance_part, range * r.c_plus_tau));
    r.terms.push_back(term(tau_variance_part, range * r.c_minus_tau));

    if (!in.empty_initial) {
        if (in.tau0_samples.size() < 2) {
            throw InsufficientCycles("nonempty initial condition needs tau_0 samples from delay replicas");
        }
        const auto t0 = stats::summarize(in.tau0_samples);
        std::vector<double> centered_t0;
        for (double x : in.tau0_samples) {
            centered_t0.push_back(x - t0.mean);
        }
        r.c_plus_tau0 = moment_constant(centered_t0, t0.variance, r.k_max_used, true);
        const double num0 = std::sqrt(T) * in.epsilon - 2.0 * range * t0.mean;
        if (!(num0 > 0.0)) {
            r.vacuous = true;
            r.bound = 1.0;
            return r;
        }
        r.terms.push_back(std::exp(-num0 * num0 /
                                   (8.0 * range * range * t0.variance + 4.0 * range * r.c_plus_tau0 * num0)));
    }
    double sum = 0.0;
    for (double t : r.terms) {
        sum += t;
    }
    r.bound = std::min(1.0, sum);
    return r;
}

EstimatorReport make_report(std::span<const CycleStatistic> cycles, double T, double level) {
    EstimatorReport rep;
    rep.pi_hat = estimate_pi(cycles);
    rep.sigma2_hat = estimate_sigma2(cycles, rep.pi_hat);
    std::vector<double> durations;
    durations.reserve(cycles.size());
    for (const auto& c : cycles) {
        durations.push_back(c.duration);
    }
    const auto tau = stats::summarize(durations);
    rep.mean_tau = tau.mean;
    rep.var_tau = tau.variance;
    rep.n_cycles = cycles.size();
    const auto ci = clt_interval(rep.pi_hat, rep.sigma2_hat, T, level);
    rep.ci_low = ci.low;
    rep.ci_high = ci.high;
    return rep;
}

} // namespace hawkes
