#include "hawkes/queue.hpp"

#include "hawkes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// beyond this many mean lifetimes the exponential survival is below 1e-15
constexpr double kExponentialCut = 36.0;

void require_rate(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("arrival rate lambda must be positive and finite");
    }
}

// integral of exp(-kappa x) over [0, len]
double exp_segment(double kappa, double len) {
    if (len <= 0.0) {
        return 0.0;
    }
    const double x = kappa * len;
    if (std::abs(x) < 1e-12) {
        return len * (1.0 - 0.5 * x);
    }
    return -std::expm1(-x) / kappa;
}

double step_takacs(double lambda, const ServiceModel& g, double s) {
    const auto pts = g.step_points();
    const double n = static_cast<double>(pts.size());
    double sum = 0.0;
    double left = 0.0;
    double cumulative = 0.0;    // lambda * int_0^left (1 - G)
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double right = pts[i];
        const double len = right - left;
        if (len > 0.0) {
            const double surv = (n - static_cast<double>(i)) / n;
            const double kappa = s + lambda * surv;
            sum += surv * std::exp(-s * left - cumulative) * exp_segment(kappa, len);
            cumulative += lambda * surv * len;
            left = right;
        }
    }
    return lambda * sum;
}

double quadrature_takacs(double lambda, const ServiceModel& g, double s) {
    auto integrand = [&](double t) {
        return g.survival(t) * std::exp(-s * t - lambda * g.integrated_survival(t));
    };
    if (g.has_step_survival()) {
        double total = 0.0;
        double left = 0.0;
        for (double right : g.step_points()) {
            if (right > left) {
                // integrand is smooth inside a step
                const double mid = 0.5 * (left + right);
                const double surv = g.survival(mid);
                const double base = g.integrated_survival(left);
                auto piece = [&](double t) {
                    return surv * std::exp(-s * t - lambda * (base + surv * (t - left)));
                };
                total += integrate_adaptive(piece, left, right).value;
                left = right;
            }
        }
        return lambda * total;
    }
    // exponential service: smooth body plus closed-form tail
    const double rate = g.tail_rate();
    if (!(s + rate > 0.0)) {
        return kInf;
    }
    const double cut = kExponentialCut / rate;
    const double body = integrate_adaptive(integrand, 0.0, cut).value;
    const double tail = std::exp(-lambda * g.integrated_survival(cut) - (rate + s) * cut) / (rate + s);
    return lambda * (body + tail);
}

} // namespace

ServiceModel ServiceModel::deterministic(double duration) {
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw std::invalid_argument("deterministic service must be finite and nonnegative");
    }
    ServiceModel m;
    m.kind_ = Kind::deterministic;
    m.set_table({duration});
    return m;
}

ServiceModel ServiceModel::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("exponential service rate must be positive and finite");
    }
    ServiceModel m;
    m.kind_ = Kind::exponential;
    m.rate_ = rate;
    m.tail_rate_ = rate;
    m.mean_ = 1.0 / rate;
    return m;
}

ServiceModel ServiceModel::shifted_cluster(SignedKernel k, double shift, std::size_t table_size,
                                           std::uint64_t table_seed) {
    if (!(shift >= 0.0) || !std::isfinite(shift)) {
        throw std::invalid_argument("cluster service shift must be finite and nonnegative");
    }
    if (table_size == 0) {
        throw std::invalid_argument("cluster service table needs at least one sample");
    }
    RandomStream rng(table_seed);
    std::vector<double> samples;
    samples.reserve(table_size);
    for (std::size_t i = 0; i < table_size; ++i) {
        samples.push_back(sample_cluster(k, rng).length + shift);
    }
    ServiceModel m;
    m.kind_ = Kind::shifted_cluster;
    m.shift_ = shift;
    m.set_table(std::move(samples));
    m.tail_rate_ = summarize(k).gamma;
    m.kernel_ = std::move(k);
    return m;
}

ServiceModel ServiceModel::empirical(std::vector<double> samples, std::optional<double> tail_rate) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical service needs at least one sample");
    }
    for (double x : samples) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument("empirical service samples must be finite and nonnegative");
        }
    }
    ServiceModel m;
    m.kind_ = Kind::empirical;
    m.set_table(std::move(samples));
    if (tail_rate) {
        if (!(*tail_rate > 0.0)) {
            throw std::invalid_argument("empirical service tail rate must be positive");
        }
        m.tail_rate_ = *tail_rate;
    }
    return m;
}

void ServiceModel::set_table(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    table_ = std::move(samples);
    prefix_.assign(table_.size() + 1, 0.0);
    for (std::size_t i = 0; i < table_.size(); ++i) {
        prefix_[i + 1] = prefix_[i] + table_[i];
    }
    mean_ = prefix_.back() / static_cast<double>(table_.size());
}

double ServiceModel::survival(double t) const {
    if (t < 0.0) {
        return 1.0;
    }
    if (kind_ == Kind::exponential) {
        return std::exp(-rate_ * t);
    }
    const auto above = table_.end() - std::upper_bound(table_.begin(), table_.end(), t);
    return static_cast<double>(above) / static_cast<double>(table_.size());
}

double ServiceModel::integrated_survival(double t) const {
    if (t <= 0.0) {
        return 0.0;
    }
    if (kind_ == Kind::exponential) {
        return -std::expm1(-rate_ * t) / rate_;
    }
    // (1/n) sum_i min(x_i, t)
    const auto idx = static_cast<std::size_t>(std::upper_bound(table_.begin(), table_.end(), t) - table_.begin());
    const double n = static_cast<double>(table_.size());
    return (prefix_[idx] + t * (n - static_cast<double>(idx))) / n;
}

double ServiceModel::draw(RandomStream& rng) const {
    switch (kind_) {
    case Kind::deterministic:
        return table_.front();
    case Kind::exponential:
        return rng.exponential(rate_);
    case Kind::shifted_cluster:
        return sample_cluster(*kernel_, rng).length + shift_;
    case Kind::empirical: {
        const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(table_.size()));
        return table_[std::min(i, table_.size() - 1)];
    }
    }
    return 0.0;
}

std::size_t QueueTrajectory::customers_at(double t) const {
    const auto in = std::upper_bound(arrivals.begin(), arrivals.end(), t) - arrivals.begin();
    const auto out = std::upper_bound(departures.begin(), departures.end(), t) - departures.begin();
    return static_cast<std::size_t>(in - out);
}

QueueTrajectory build_queue(std::span<const double> arrivals, std::span<const double> departures, double horizon) {
    if (arrivals.size() != departures.size()) {
        throw std::invalid_argument("arrivals and departures must pair up");
    }
    QueueTrajectory q;
    q.horizon = horizon;
    q.arrivals.assign(arrivals.begin(), arrivals.end());
    q.departures.assign(departures.begin(), departures.end());
    std::sort(q.departures.begin(), q.departures.end());

    bool busy = false;
    double start = 0.0;
    double last_departure = 0.0;
    double free_since = 0.0;
    auto close = [&] {
        busy = false;
        if (last_departure <= horizon) {
            q.return_times.push_back(last_departure);
            q.busy_periods.push_back(last_departure - start);
            free_since = last_departure;
        }
    };
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        const double a = arrivals[i];
        if (departures[i] < a) {
            throw std::invalid_argument("departure before arrival");
        }
        if (busy && a > last_departure) {
            close();
        }
        if (!busy) {
            busy = true;
            start = a;
            last_departure = departures[i];
            q.idle_time += std::min(a, horizon) - free_since;
        } else {
            last_departure = std::max(last_departure, departures[i]);
        }
    }
    if (busy) {
        close();
        if (last_departure <= horizon) {
            q.idle_time += horizon - free_since;
        }
    } else {
        q.idle_time += horizon - free_since;
    }
    return q;
}

QueueTrajectory simulate_mg_infty(double lambda, const ServiceModel& service, double horizon, std::uint64_t seed) {
    require_rate(lambda);
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    RandomStream rng(seed);
    std::vector<double> arrivals;
    std::vector<double> departures;
    double v = rng.exponential(lambda);
    while (v <= horizon) {
        arrivals.push_back(v);
        departures.push_back(v + service.draw(rng));
        v += rng.exponential(lambda);
    }
    return build_queue(arrivals, departures, horizon);
}

QueueTrajectory cluster_queue(const ClusterPath& path, double window) {
    std::vector<double> departures;
    departures.reserve(path.last_births.size());
    for (double last : path.last_births) {
        departures.push_back(last + window);
    }
    return build_queue(path.ancestors, departures, path.horizon);
}

FirstReturn sample_first_return(double lambda, const ServiceModel& service, RandomStream& rng) {
    require_rate(lambda);
    const double first = rng.exponential(lambda);
    double last_departure = first + service.draw(rng);
    double next = first + rng.exponential(lambda);
    while (next <= last_departure) {
        last_departure = std::max(last_departure, next + service.draw(rng));
        next += rng.exponential(lambda);
    }
    return {first, last_departure - first};
}

double takacs_integral(double lambda, const ServiceModel& service, double s, TakacsRoute route) {
    require_rate(lambda);
    if (service.has_step_survival() && route == TakacsRoute::automatic) {
        return step_takacs(lambda, service, s);
    }
    return quadrature_takacs(lambda, service, s);
}

namespace {

// 1 - J(s), after checking s lies right of the abscissa
double checked_gap(double lambda, const ServiceModel& service, double s) {
    if (!std::isfinite(s)) {
        throw std::domain_error("transform argument must be finite");
    }
    if (!(s > -service.tail_rate())) {
        throw std::domain_error("transform argument at or left of -gamma");
    }
    const double gap = 1.0 - takacs_integral(lambda, service, s);
    if (!(gap > 0.0)) {
        throw std::domain_error("transform argument at or left of the abscissa theta");
    }
    return gap;
}

} // namespace

double takacs_laplace_T1(double lambda, const ServiceModel& service, double s) {
    require_rate(lambda);
    if (s == 0.0) {
        return 1.0;
    }
    if (!(lambda + s > 0.0)) {
        throw std::domain_error("transform of T_1 needs s > -lambda (first arrival is exponential)");
    }
    const double gap = checked_gap(lambda, service, s);
    return 1.0 - s / ((lambda + s) * gap);
}

double takacs_laplace_B(double lambda, const ServiceModel& service, double s) {
    require_rate(lambda);
    if (s == 0.0) {
        return 1.0;
    }
    const double gap = checked_gap(lambda, service, s);
    return (lambda + s) / lambda - (s / lambda) / gap;
}

double theta_abscissa(double lambda, const ServiceModel& service, double gamma) {
    require_rate(lambda);
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("tail rate gamma must be positive (or +inf)");
    }
    auto above_one = [&](double s) { return !(takacs_integral(lambda, service, s) < 1.0); };

    double lo;
    if (std::isfinite(gamma)) {
        lo = -gamma;
        if (!above_one(lo)) {
            return -gamma;
        }
    } else {
        lo = -1.0;
        while (!above_one(lo)) {
            lo *= 2.0;
            if (lo < -1e12) {
                throw NumericalError("no root of the abscissa condition found", 1.0);
            }
        }
    }
    double hi = 0.0;
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (above_one(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::max(0.5 * (lo + hi), -gamma);
}

TailRate tail_rate(double lambda, double gamma) {
    if (lambda < gamma) {
        return {lambda, true};
    }
    return {gamma, false};
}

double usable_rate(const TailRate& r, double open_fraction) {
    return r.attained ? r.rate : open_fraction * r.rate;
}

double hitting_after_bound(double lambda, double gamma, double constant, double E, double t, double open_fraction) {
    if (!(E >= 0.0)) {
        throw std::invalid_argument("E must be nonnegative");
    }
    if (t < E) {
        throw std::invalid_argument("hitting bound needs t >= E");
    }
    const double alpha = usable_rate(tail_rate(lambda, gamma), open_fraction);
    return lambda * constant * E * std::exp(-alpha * (t - E));
}

} // namespace hawkes
