#include "hawkes/commands.hpp"

#include "hawkes/cluster.hpp"
#include "hawkes/inference.hpp"
#include "hawkes/quadrature.hpp"
#include "hawkes/queue.hpp"
#include "hawkes/renewal.hpp"
#include "hawkes/replicas.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulation.hpp"
#include "hawkes/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace hawkes::cli {

namespace {

using nlohmann::json;

std::uint64_t replica_seed(const RunConfig& c, std::size_t r) {
    return derive_seed(c.seed, c.first_replica + r);
}

std::size_t replica_id(const RunConfig& c, std::size_t r) {
    return c.first_replica + r;
}

// CSV file whose first line records the configuration hash.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, const std::string& hash, const std::string& columns)
        : out_(file) {
        if (!out_) {
            throw std::runtime_error("cannot write " + file.string());
        }
        out_ << "# config_hash=" << hash << '\n' << columns << '\n';
    }

    template <class... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(values), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(bool x) { return x ? "1" : "0"; }
    static std::string cell(const std::string& s) { return s; }

    std::ofstream out_;
};

void write_json(const std::filesystem::path& file, const json& doc) {
    std::ofstream out(file);
    if (!out) {
        throw std::runtime_error("cannot write " + file.string());
    }
    out << doc.dump(2) << '\n';
}

SimulationPath simulate_replica(const RunConfig& c, std::size_t r, bool coupled) {
    SimulationOptions options;
    options.keep_embedding_log = false;
    const auto seed = replica_seed(c, r);
    return coupled ? simulate_coupled(c.kernel, c.lambda, c.initial, c.horizon, seed, options)
                   : simulate_hawkes(c.kernel, c.lambda, c.initial, c.horizon, seed, options);
}

/// Limit min(lambda, gamma+) on the exponential-moment order.
double alpha_limit(const RunConfig& c) {
    return std::min(c.lambda, summarize(c.kernel).gamma);
}

int cmd_simulate(const RunConfig& c, const std::filesystem::path& out, const std::string& hash) {
    const auto paths = parallel_map(c.replicas, [&](std::size_t r) { return simulate_replica(c, r, c.coupled); });
    if (!c.coupled) {
        CsvWriter csv(out / "events.csv", hash, "replica,event_time");
        for (std::size_t r = 0; r < paths.size(); ++r) {
            for (double t : paths[r].events) {
                csv.row(replica_id(c, r), t);
            }
        }
        return exit_ok;
    }
    // Coupled output lists every atom of the dominating path and flags which of
    // them are also events of N^h.
    CsvWriter csv(out / "events.csv", hash, "replica,event_time,in_events,in_dominating");
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& events = paths[r].events;
        std::size_t i = 0;
        for (double t : *paths[r].dominating_events) {
            const bool in_h = i < events.size() && events[i] == t;
            if (in_h) {
                ++i;
            }
            csv.row(replica_id(c, r), t, in_h, true);
        }
    }
    return exit_ok;
}

int cmd_cluster_stats(const RunConfig& c, const std::filesystem::path& out, const std::string& hash) {
    if (!c.kernel.is_nonnegative()) {
        throw std::invalid_argument("cluster-stats needs a nonnegative kernel");
    }
    const auto summary = summarize(c.kernel);
    const auto samples = parallel_map(c.replicas, [&](std::size_t r) {
        RandomStream rng(replica_seed(c, r));
        std::vector<std::pair<std::size_t, double>> rows;
        rows.reserve(c.cluster_samples);
        for (std::size_t i = 0; i < c.cluster_samples; ++i) {
            const auto cl = sample_cluster(c.kernel, rng);
            rows.emplace_back(cl.size(), cl.length);
        }
        return rows;
    });

    CsvWriter csv(out / "clusters.csv", hash, "replica,sample_index,size,H");
    std::vector<double> sizes;
    std::vector<double> lengths;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        for (std::size_t i = 0; i < samples[r].size(); ++i) {
            csv.row(replica_id(c, r), i, samples[r][i].first, samples[r][i].second);
            sizes.push_back(static_cast<double>(samples[r][i].first));
            lengths.push_back(samples[r][i].second);
        }
    }
    const auto size_stats = stats::summarize(sizes);
    const auto length_stats = stats::summarize(lengths);

    CsvWriter sum(out / "cluster_summary.csv", hash, "statistic,value");
    sum.row(std::string("samples"), sizes.size());
    sum.row(std::string("mean_size"), size_stats.mean);
    sum.row(std::string("mean_size_se"), size_stats.standard_error);
    sum.row(std::string("expected_mean_size"), 1.0 / (1.0 - summary.l1_positive));
    sum.row(std::string("mean_H"), length_stats.mean);
    sum.row(std::string("gamma"), summary.gamma);

    CsvWriter tail(out / "cluster_tail.csv", hash, "x,empirical_tail,empirical_se,bound");
    std::sort(lengths.begin(), lengths.end());
    const double step = 0.75 * std::max(summary.support_bound, 1.0 / 0.75);
    for (int j = 0; j < 20; ++j) {
        const double x = step * j;
        const auto above = static_cast<std::size_t>(lengths.end() - std::upper_bound(lengths.begin(), lengths.end(), x));
        const double p = lengths.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(lengths.size());
        const double bound = summary.l1_positive > 0.0 ? cluster_tail_bound(summary, x) : (x > 0.0 ? 0.0 : 1.0);
        tail.row(x, p, stats::binomial_se(p, lengths.size()), bound);
    }
    return exit_ok;
}

ServiceModel make_service(const RunConfig& c) {
    const auto& s = c.service;
    if (s.kind == "deterministic") {
        return ServiceModel::deterministic(s.value);
    }
    if (s.kind == "exponential") {
        return ServiceModel::exponential(s.value);
    }
    if (s.kind == "empirical") {
        return ServiceModel::empirical(s.samples, s.gamma);
    }
    if (!c.kernel.is_nonnegative()) {
        throw std::invalid_argument("shifted_cluster service needs a nonnegative kernel");
    }
    return ServiceModel::shifted_cluster(c.kernel, c.window, 200'000, derive_seed(c.seed, 0x7a61ULL));
}

int cmd_queue_tail(const RunConfig& c, const std::filesystem::path& out, const std::string& hash) {
    const auto service = make_service(c);
    const double gamma = c.service.gamma.value_or(service.tail_rate());

    const auto draws = parallel_map(c.replicas, [&](std::size_t r) {
        RandomStream rng(replica_seed(c, r));
        std::vector<double> t1(c.mc_samples);
        for (auto& t : t1) {
            t = sample_first_return(c.lambda, service, rng).return_time();
        }
        return t1;
    });
    std::vector<double> pooled;
    for (const auto& d : draws) {
        pooled.insert(pooled.end(), d.begin(), d.end());
    }

    CsvWriter csv(out / "queue_tail.csv", hash, "s,laplace_T1,laplace_B,mc_T1,mc_T1_se");
    for (double s : c.s_grid) {
        double t1 = std::nan("");
        double b = std::nan("");
        try {
            t1 = takacs_laplace_T1(c.lambda, service, s);
            b = takacs_laplace_B(c.lambda, service, s);
        } catch (const std::domain_error&) {
            // outside the region of convergence; reported as nan
        }
        std::vector<double> e(pooled.size());
        std::transform(pooled.begin(), pooled.end(), e.begin(), [s](double t) { return std::exp(-s * t); });
        const auto mc = stats::summarize(e);
        csv.row(s, t1, b, mc.mean, mc.standard_error);
    }

    const auto rate = tail_rate(c.lambda, gamma);
    const auto t1_stats = stats::summarize(pooled);
    CsvWriter sum(out / "queue_summary.csv", hash, "statistic,value");
    sum.row(std::string("theta"), theta_abscissa(c.lambda, service, gamma));
    sum.row(std::string("gamma"), gamma);
    sum.row(std::string("tail_rate"), rate.rate);
    sum.row(std::string("tail_rate_attained"), rate.attained);
    sum.row(std::string("usable_rate"), usable_rate(rate));
    sum.row(std::string("mc_samples"), pooled.size());
    sum.row(std::string("mc_mean_T1"), t1_stats.mean);
    sum.row(std::string("mc_mean_T1_se"), t1_stats.standard_error);
    return exit_ok;
}

int cmd_renewal_stats(const RunConfig& c, const std::filesystem::path& out, const std::string& hash) {
    WindowConfig wc(c.window, c.kernel);
    const auto splits = parallel_map(c.replicas, [&](std::size_t r) {
        return split_excursions(simulate_replica(c, r, false), wc.length());
    });

    CsvWriter csv(out / "renewals.csv", hash, "replica,k,tau_k,duration,events_in_cycle");
    std::vector<double> durations;
    for (std::size_t r = 0; r < splits.size(); ++r) {
        for (std::size_t k = 0; k < splits[r].cycles.size(); ++k) {
            const auto& cy = splits[r].cycles[k];
            csv.row(replica_id(c, r), k + 1, cy.start + cy.duration, cy.duration, cy.events.size());
            durations.push_back(cy.duration);
        }
    }

    const auto tau = stats::summarize(durations);
    CsvWriter sum(out / "renewal_summary.csv", hash, "statistic,alpha,value,standard_error");
    sum.row(std::string("n_cycles"), 0.0, static_cast<double>(durations.size()), 0.0);
    sum.row(std::string("mean_tau"), 0.0, tau.mean, tau.standard_error);
    sum.row(std::string("var_tau"), 0.0, tau.variance, 0.0);

    const auto summary = summarize(c.kernel);
    const double limit = alpha_limit(c);
    std::vector<double> grid = c.alpha_grid;
    if (grid.empty()) {
        for (double f : {0.1, 0.25, 0.5, 0.75}) {
            grid.push_back(f * limit);
        }
    }
    for (double a : grid) {
        if (durations.empty() || !(a < limit)) {
            sum.row(std::string("exp_moment"), a, std::nan(""), std::nan(""));
            continue;
        }
        const auto m = estimate_exp_moment(durations, a, c.lambda, summary);
        sum.row(std::string("exp_moment"), a, m.mean, m.standard_error);
    }
    return exit_ok;
}

/// Sorted event times per replica from a CSV written by `simulate`.
std::map<std::size_t, std::vector<double>> read_paths_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError({"cannot open path file " + file.string()});
    }
    std::map<std::size_t, std::vector<double>> out;
    std::string line;
    int in_events_col = -1;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        if (!header_seen) {
            header_seen = true;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] == "in_events") {
                    in_events_col = static_cast<int>(i);
                }
            }
            if (cells.size() < 2 || cells[0] != "replica" || cells[1] != "event_time") {
                throw ConfigError({"path file must start with columns replica,event_time"});
            }
            continue;
        }
        if (in_events_col >= 0 && cells.at(static_cast<std::size_t>(in_events_col)) != "1") {
            continue;
        }
        out[std::stoull(cells.at(0))].push_back(std::stod(cells.at(1)));
    }
    for (auto& [r, ev] : out) {
        std::sort(ev.begin(), ev.end());
    }
    return out;
}

struct CycleData {
    std::vector<std::size_t> replica;               // replica of each cycle
    std::vector<std::size_t> index;                 // 1-based cycle index within its replica
    std::vector<CycleStatistic> cycles;
    std::vector<double> tau0;
    std::size_t paths = 0;
};

CycleData collect_cycles(const RunConfig& c, const WindowFunctional& f) {
    WindowConfig wc(c.window, c.kernel);
    std::vector<std::pair<std::size_t, SimulationPath>> paths;
    if (c.paths_file) {
        auto events = read_paths_csv(*c.paths_file);
        for (auto& [r, ev] : events) {
            SimulationPath p;
            p.initial = c.initial;
            p.horizon = c.horizon;
            if (!ev.empty() && (ev.front() <= 0.0 || ev.back() > c.horizon)) {
                throw ConfigError({"path file events must lie in (0, horizon]"});
            }
            p.events = std::move(ev);
            paths.emplace_back(r, std::move(p));
        }
    } else {
        auto sims = parallel_map(c.replicas, [&](std::size_t r) { return simulate_replica(c, r, false); });
        for (std::size_t r = 0; r < sims.size(); ++r) {
            paths.emplace_back(replica_id(c, r), std::move(sims[r]));
        }
    }

    CycleData data;
    data.paths = paths.size();
    for (const auto& [r, p] : paths) {
        const auto split = split_excursions(p, wc.length());
        const auto stats = cycle_integrals(split.cycles, f, wc.length());
        for (std::size_t k = 0; k < stats.size(); ++k) {
            data.replica.push_back(r);
            data.index.push_back(k + 1);
            data.cycles.push_back(stats[k]);
        }
        if (split.delay.duration < p.horizon || !split.cycles.empty()) {
            data.tau0.push_back(split.delay.duration);
        }
    }
    if (data.cycles.size() < 2) {
        throw InsufficientCycles("found " + std::to_string(data.cycles.size()) +
                                 " complete renewal cycle(s); at least 2 are needed. Increase the horizon, "
                                 "the number of replicas or check that the window A is not too long");
    }
    return data;
}

struct Bernstein {
    double alpha;
    double exp_moment;
    BernsteinResult result;
};

std::optional<Bernstein> bernstein_for(const RunConfig& c, const WindowFunctional& f, const CycleData& data,
                                       double mean_tau) {
    if (!f.bounds()) {
        return std::nullopt;
    }
    const double limit = alpha_limit(c);
    const double alpha = c.alpha.value_or(0.5 * limit);
    std::vector<double> durations;
    for (const auto& cy : data.cycles) {
        durations.push_back(cy.duration);
    }
    const auto m = estimate_exp_moment(durations, alpha, c.lambda, summarize(c.kernel));
    const auto res = bernstein_epsilon(f.bounds()->low, f.bounds()->high, alpha, limit, mean_tau, m.mean,
                                       c.horizon, c.eta);
    return Bernstein{alpha, m.mean, res};
}

json report_json(const EstimatorReport& rep) {
    json doc;
    doc["pi_hat"] = rep.pi_hat;
    doc["sigma2_hat"] = rep.sigma2_hat;
    doc["mean_tau"] = rep.mean_tau;
    doc["var_tau"] = rep.var_tau;
    doc["n_cycles"] = rep.n_cycles;
    doc["ci_low"] = rep.ci_low;
    doc["ci_high"] = rep.ci_high;
    doc["epsilon_eta"] = rep.epsilon_eta ? json(*rep.epsilon_eta) : json();
    return doc;
}

int cmd_estimate(const RunConfig& c, const std::filesystem::path& out, const std::string& hash) {
    const auto f = WindowFunctional::parse(c.functional);
    const auto data = collect_cycles(c, f);
    const double total_T = c.horizon * static_cast<double>(data.paths);
    auto rep = make_report(data.cycles, total_T, c.level);
    const auto bern = bernstein_for(c, f, data, rep.mean_tau);
    if (bern) {
        rep.epsilon_eta = bern->result.epsilon;
    }

    CsvWriter csv(out / "cycles.csv", hash, "replica,k,integral,duration");
    for (std::size_t i = 0; i < data.cycles.size(); ++i) {
        csv.row(data.replica[i], data.index[i], data.cycles[i].integral, data.cycles[i].duration);
    }
    json doc = report_json(rep);
    doc["config_hash"] = hash;
    doc["functional"] = f.id();
    doc["A"] = c.window;
    doc["level"] = c.level;
    doc["eta"] = c.eta;
    doc["paths"] = data.paths;
    doc["observation_length"] = total_T;
    doc["epsilon_horizon"] = c.horizon;
    doc["alpha"] = bern ? json(bern->alpha) : json();
    write_json(out / "estimate.json", doc);
    return exit_ok;
}

int cmd_ci(const RunConfig& c, const std::filesystem::path& out, const std::string& hash, std::ostream& err) {
    const auto f = WindowFunctional::parse(c.functional);
    if (!f.bounds()) {
        throw std::invalid_argument("ci needs a bounded functional (indicator_empty or count_capped:<n>)");
    }
    const auto data = collect_cycles(c, f);
    const double total_T = c.horizon * static_cast<double>(data.paths);
    const auto rep = make_report(data.cycles, total_T, c.level);
    const auto bern = *bernstein_for(c, f, data, rep.mean_tau);

    json doc;
    doc["config_hash"] = hash;
    doc["functional"] = f.id();
    doc["level"] = c.level;
    doc["eta"] = c.eta;
    doc["pi_hat"] = rep.pi_hat;
    doc["clt"] = {{"low", rep.ci_low}, {"high", rep.ci_high}, {"observation_length", total_T}};
    doc["bernstein"] = {{"epsilon_eta", bern.result.epsilon},
                        {"v", bern.result.v},
                        {"c", bern.result.c},
                        {"alpha", bern.alpha},
                        {"exp_moment", bern.exp_moment},
                        {"horizon", c.horizon}};

    std::vector<double> grid = c.epsilon_grid;
    if (grid.empty()) {
        grid = {0.5 * bern.result.epsilon, bern.result.epsilon, 2.0 * bern.result.epsilon};
    }
    json full = json::array();
    for (double eps : grid) {
        ConcentrationInputs in;
        in.a = f.bounds()->low;
        in.b = f.bounds()->high;
        in.cycles = data.cycles;
        in.tau0_samples = data.tau0;
        in.empty_initial = c.initial.is_empty();
        in.T = c.horizon;
        in.epsilon = eps;
        const auto r = concentration_bound_full(in);
        for (const auto& w : r.warnings) {
            err << "warning: " << w << '\n';
        }
        full.push_back({{"epsilon", eps},
                        {"bound", r.bound},
                        {"terms", r.terms},
                        {"vacuous", r.vacuous},
                        {"k_max_used", r.k_max_used}});
    }
    doc["concentration"] = full;
    write_json(out / "ci.json", doc);
    return exit_ok;
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"simulate",      "cluster-stats", "queue-tail",
                                                "renewal-stats", "estimate",      "ci"};
    return names;
}

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("HAWKES_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "hawkes_out";
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int run(const std::string& command, const RunConfig& config, const std::filesystem::path& out_dir,
        std::ostream& err) {
    try {
        validate(config);
        std::filesystem::create_directories(out_dir);
        const auto hash = config_hash(config);
        if (command == "simulate") {
            return cmd_simulate(config, out_dir, hash);
        }
        if (command == "cluster-stats") {
            return cmd_cluster_stats(config, out_dir, hash);
        }
        if (command == "queue-tail") {
            return cmd_queue_tail(config, out_dir, hash);
        }
        if (command == "renewal-stats") {
            return cmd_renewal_stats(config, out_dir, hash);
        }
        if (command == "estimate") {
            return cmd_estimate(config, out_dir, hash);
        }
        if (command == "ci") {
            return cmd_ci(config, out_dir, hash, err);
        }
        err << "error: unknown command '" << command << "'\n";
        return exit_validation;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const InsufficientCycles& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const NumericalError& e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::domain_error& e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }
}

} // namespace hawkes::cli
