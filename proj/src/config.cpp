#include "hawkes/config.hpp"
#include "hawkes/inference.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hawkes::cli {

namespace {

using nlohmann::json;

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration:";
    for (const auto& e : errors) {
        out += "\n  - " + e;
    }
    return out;
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError({"cannot open " + file.string()});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Collects type errors for optional fields instead of throwing on the first.
class Reader {
public:
    Reader(const json& doc, std::vector<std::string>& errors) : doc_(doc), errors_(errors) {}

    template <class T>
    std::optional<T> get(const char* key, bool required) {
        if (!doc_.contains(key)) {
            if (required) {
                errors_.push_back(std::string("missing required field '") + key + "'");
            }
            return std::nullopt;
        }
        try {
            return doc_.at(key).get<T>();
        } catch (const json::exception&) {
            errors_.push_back(std::string("field '") + key + "' has the wrong type");
            return std::nullopt;
        }
    }

private:
    const json& doc_;
    std::vector<std::string>& errors_;
};

std::optional<SignedKernel> parse_kernel(const json& node, const std::filesystem::path& base_dir,
                                         std::vector<std::string>& errors) {
    json pieces_json = node;
    if (node.is_string()) {
        const auto file = base_dir / node.get<std::string>();
        try {
            pieces_json = json::parse(read_file(file));
        } catch (const ConfigError& e) {
            errors.push_back(e.errors().front());
            return std::nullopt;
        } catch (const json::exception& e) {
            errors.push_back("kernel file " + file.string() + " is not valid JSON: " + e.what());
            return std::nullopt;
        }
    }
    if (!pieces_json.is_array()) {
        errors.push_back("kernel must be an array of [start, end, value] triples or a file name");
        return std::nullopt;
    }
    std::vector<KernelPiece> pieces;
    for (const auto& p : pieces_json) {
        if (p.is_array() && p.size() == 3 && p[0].is_number() && p[1].is_number() && p[2].is_number()) {
            pieces.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        } else if (p.is_object() && p.contains("start") && p.contains("end") && p.contains("value")) {
            pieces.push_back({p["start"].get<double>(), p["end"].get<double>(), p["value"].get<double>()});
        } else {
            errors.push_back("kernel piece " + p.dump() + " is not [start, end, value]");
            return std::nullopt;
        }
    }
    try {
        return SignedKernel(std::move(pieces));
    } catch (const std::invalid_argument& e) {
        errors.push_back(std::string("kernel: ") + e.what());
        return std::nullopt;
    }
}

void parse_service(const json& doc, ServiceSpec& service, std::vector<std::string>& errors) {
    if (!doc.is_object()) {
        errors.push_back("service must be an object with a 'kind' field");
        return;
    }
    service.kind = doc.value("kind", std::string("shifted_cluster"));
    if (service.kind == "deterministic" || service.kind == "exponential") {
        if (!doc.contains("value") || !doc["value"].is_number()) {
            errors.push_back("service '" + service.kind + "' needs a numeric 'value'");
        } else {
            service.value = doc["value"].get<double>();
            if (!(service.value > 0.0) || !std::isfinite(service.value)) {
                errors.push_back("service value must be positive and finite");
            }
        }
    } else if (service.kind == "empirical") {
        if (!doc.contains("samples") || !doc["samples"].is_array() || doc["samples"].empty()) {
            errors.push_back("empirical service needs a nonempty 'samples' array");
        } else {
            service.samples = doc["samples"].get<std::vector<double>>();
        }
    } else if (service.kind != "shifted_cluster") {
        errors.push_back("unknown service kind '" + service.kind + "'");
    }
    if (doc.contains("gamma")) {
        service.gamma = doc["gamma"].get<double>();
    }
}

void check_invariants(const RunConfig& c, std::vector<std::string>& errors) {
    if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) {
        errors.push_back("lambda must be positive and finite");
    }
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) {
        errors.push_back("horizon must be positive and finite");
    }
    if (!(c.window >= c.kernel.support_bound()) || !std::isfinite(c.window) || !(c.window > 0.0)) {
        errors.push_back("window A must satisfy A >= L(h) = " + std::to_string(c.kernel.support_bound()) +
                         " and A > 0");
    }
    if (!summarize(c.kernel).subcritical) {
        errors.push_back("kernel is not subcritical: ||h+||_1 must be < 1");
    }
    if (c.replicas < 1) {
        errors.push_back("replicas must be >= 1");
    }
    if (!(c.eta > 0.0 && c.eta < 1.0)) {
        errors.push_back("eta must lie in (0, 1)");
    }
    if (!(c.level > 0.0 && c.level < 1.0)) {
        errors.push_back("level must lie in (0, 1)");
    }
    if (c.alpha && !(*c.alpha > 0.0)) {
        errors.push_back("alpha must be positive");
    }
    try {
        (void)WindowFunctional::parse(c.functional);
    } catch (const std::invalid_argument& e) {
        errors.push_back(e.what());
    }
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::vector<double> read_times_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError({"cannot open " + file.string()});
    }
    std::vector<double> times;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const std::string field = line.substr(first, line.find(',', first) - first);
        try {
            std::size_t used = 0;
            times.push_back(std::stod(field, &used));
        } catch (const std::exception&) {
            if (times.empty() && line_no <= 2) {
                continue;   // column header
            }
            throw ConfigError({file.string() + ":" + std::to_string(line_no) + ": not a number"});
        }
    }
    return times;
}

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    if (!doc.is_object()) {
        throw ConfigError({"config must be a JSON object"});
    }

    std::vector<std::string> errors;
    Reader r(doc, errors);
    RunConfig c;

    if (!doc.contains("kernel")) {
        errors.push_back("missing required field 'kernel'");
    } else if (auto k = parse_kernel(doc["kernel"], base_dir, errors)) {
        c.kernel = std::move(*k);
    }
    c.lambda = r.get<double>("lambda", true).value_or(c.lambda);
    c.window = r.get<double>("A", true).value_or(c.window);
    c.horizon = r.get<double>("horizon", true).value_or(c.horizon);
    c.seed = r.get<std::uint64_t>("seed", true).value_or(c.seed);
    c.replicas = r.get<std::size_t>("replicas", false).value_or(c.replicas);
    c.functional = r.get<std::string>("functional", false).value_or(c.functional);
    c.eta = r.get<double>("eta", false).value_or(c.eta);
    c.level = r.get<double>("level", false).value_or(c.level);
    c.alpha = r.get<double>("alpha", false);
    c.alpha_grid = r.get<std::vector<double>>("alpha_grid", false).value_or(c.alpha_grid);
    c.s_grid = r.get<std::vector<double>>("s_grid", false).value_or(c.s_grid);
    c.epsilon_grid = r.get<std::vector<double>>("epsilon_grid", false).value_or(c.epsilon_grid);
    c.cluster_samples = r.get<std::size_t>("cluster_samples", false).value_or(c.cluster_samples);
    c.mc_samples = r.get<std::size_t>("mc_samples", false).value_or(c.mc_samples);
    c.coupled = r.get<bool>("coupled", false).value_or(c.coupled);
    if (auto paths = r.get<std::string>("paths", false)) {
        c.paths_file = (base_dir / *paths).string();
    }
    if (doc.contains("service")) {
        parse_service(doc["service"], c.service, errors);
    }

    std::vector<double> initial_atoms;
    if (auto file = r.get<std::string>("initial_condition", false)) {
        c.initial_file = (base_dir / *file).string();
        try {
            initial_atoms = read_times_csv(*c.initial_file);
        } catch (const ConfigError& e) {
            errors.insert(errors.end(), e.errors().begin(), e.errors().end());
        }
    }
    const bool numbers_ok = errors.empty();
    check_invariants(c, errors);
    if (numbers_ok && c.window > 0.0 && std::isfinite(c.window)) {
        try {
            c.initial = PointConfiguration(std::move(initial_atoms), -c.window, 0.0);
        } catch (const std::invalid_argument& e) {
            errors.push_back(std::string("initial condition: ") + e.what() + " (atoms must lie in (-A, 0])");
        }
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& file) {
    auto base = file.parent_path();
    if (base.empty()) {
        base = ".";
    }
    return parse_config(read_file(file), base);
}

void validate(const RunConfig& config) {
    std::vector<std::string> errors;
    check_invariants(config, errors);
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
}

std::string config_hash(const RunConfig& c) {
    json doc;
    json pieces = json::array();
    for (const auto& p : c.kernel.pieces()) {
        pieces.push_back({p.start, p.end, p.value});
    }
    doc["kernel"] = pieces;
    doc["lambda"] = c.lambda;
    doc["A"] = c.window;
    doc["horizon"] = c.horizon;
    doc["initial"] = std::vector<double>(c.initial.atoms().begin(), c.initial.atoms().end());
    doc["seed"] = c.seed;
    doc["replicas"] = c.replicas;
    doc["first_replica"] = c.first_replica;
    doc["functional"] = c.functional;
    doc["eta"] = c.eta;
    doc["level"] = c.level;
    doc["alpha"] = c.alpha ? json(*c.alpha) : json();
    doc["alpha_grid"] = c.alpha_grid;
    doc["s_grid"] = c.s_grid;
    doc["epsilon_grid"] = c.epsilon_grid;
    doc["service"] = {{"kind", c.service.kind}, {"value", c.service.value}, {"samples", c.service.samples}};
    doc["cluster_samples"] = c.cluster_samples;
    doc["mc_samples"] = c.mc_samples;
    doc["coupled"] = c.coupled;

    const std::string text = doc.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace hawkes::cli
