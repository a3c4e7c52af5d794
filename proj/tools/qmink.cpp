#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmink/errors.hpp"
#include "qmink/suites.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIO = 3;

struct Flags {
    std::optional<int> lambda;
    std::optional<int> max_degree;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> shards;
    std::optional<double> tol_scale;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> m_max;
    std::string config;
};

struct IOError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads a key spelled either with '-' or '_'.
template <typename T>
void from_config(const nlohmann::json& cfg, const std::string& key, std::optional<T>& slot)
{
    if (slot) return;  // the command-line flag wins
    std::string alt = key;
    for (char& c : alt)
        if (c == '-') c = '_';
    for (const auto& k : {key, alt})
        if (cfg.contains(k)) {
            try {
                slot = cfg.at(k).template get<T>();
            } catch (const nlohmann::json::exception& e) {
                throw qmink::InvalidParameter("config key '" + k + "': " + e.what());
            }
            return;
        }
}

void merge_config(Flags& f)
{
    if (f.config.empty()) return;
    std::ifstream in(f.config);
    if (!in) throw IOError("cannot open config file '" + f.config + "'");
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw qmink::InvalidParameter("config file '" + f.config + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw qmink::InvalidParameter("config file must hold a JSON object");
    from_config(cfg, "lambda", f.lambda);
    from_config(cfg, "max-degree", f.max_degree);
    from_config(cfg, "samples", f.samples);
    from_config(cfg, "seed", f.seed);
    from_config(cfg, "shards", f.shards);
    from_config(cfg, "tol-scale", f.tol_scale);
    from_config(cfg, "out", f.out);
    from_config(cfg, "format", f.format);
    from_config(cfg, "m-max", f.m_max);
}

qmink::SuiteParams to_params(const Flags& f)
{
    qmink::SuiteParams p;
    if (f.lambda) p.lambda = *f.lambda;
    if (f.max_degree) p.max_degree = *f.max_degree;
    if (f.samples) p.samples = *f.samples;
    if (f.seed) p.seed = *f.seed;
    if (f.shards) p.shards = *f.shards;
    if (f.tol_scale) p.tol_scale = *f.tol_scale;
    qmink::validate(p);
    return p;
}

void add_common_flags(CLI::App& cmd, Flags& f)
{
    cmd.add_option("--lambda", f.lambda, "weight lambda, an integer greater than 3 (default 5)");
    cmd.add_option("--max-degree", f.max_degree, "truncation degree 2m + 2j (default 8)");
    cmd.add_option("--samples", f.samples, "accepted Monte Carlo samples (default 200000)");
    cmd.add_option("--seed", f.seed, "random seed (default 42)");
    cmd.add_option("--shards", f.shards, "maximum worker threads; never changes results (default 8)");
    cmd.add_option("--tol-scale", f.tol_scale, "multiplies every default tolerance (default 1)");
    cmd.add_option("--out", f.out, "output path (default stdout)");
    cmd.add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd.add_option("--config", f.config, "JSON file mirroring the flags; flags win");
}

ordered_json number(double x)
{
    if (std::isfinite(x)) return x;
    return qmink::format_double(x);
}

ordered_json params_json(const qmink::SuiteParams& p)
{
    return {{"lambda", p.lambda},   {"max_degree", p.max_degree}, {"samples", p.samples},
            {"seed", p.seed},       {"shards", p.shards},         {"tol_scale", number(p.tol_scale)}};
}

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string report_json(const qmink::RunReport& r)
{
    ordered_json j;
    j["tool"] = "qmink";
    j["version"] = qmink::kToolVersion;
    j["suite"] = r.suite;
    j["params"] = params_json(r.params);
    j["passed"] = r.passed();
    ordered_json crits = ordered_json::array();
    ordered_json timing = ordered_json::object();
    for (const auto& c : r.criteria) {
        ordered_json checks = ordered_json::array();
        for (const auto& k : c.checks)
            checks.push_back({{"name", k.name},
                              {"value", number(k.value)},
                              {"bound", number(k.bound)},
                              {"pass", k.pass},
                              {"informational", k.informational}});
        crits.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed()}, {"checks", checks}});
        timing[std::to_string(c.id)] = c.seconds;
    }
    j["criteria"] = crits;
    // Everything that varies between identical invocations lives under this one key.
    j["timestamp"] = {{"utc", utc_now()}, {"wall_seconds", r.wall_seconds}, {"criterion_seconds", timing}};
    return j.dump(2) + "\n";
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string report_csv(const qmink::RunReport& r)
{
    std::ostringstream os;
    os << "# qmink " << qmink::kToolVersion << " suite=" << r.suite << " lambda=" << r.params.lambda
       << " max_degree=" << r.params.max_degree << " samples=" << r.params.samples << " seed=" << r.params.seed
       << '\n';
    os << "criterion,title,check,value,bound,pass,informational\n";
    for (const auto& c : r.criteria)
        for (const auto& k : c.checks)
            os << c.id << ',' << csv_field(c.title) << ',' << csv_field(k.name) << ','
               << qmink::format_double(k.value) << ',' << qmink::format_double(k.bound) << ','
               << (k.pass ? "true" : "false") << ',' << (k.informational ? "true" : "false") << '\n';
    return os.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text)
{
    if (!path || *path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IOError("failed writing to stdout");
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw IOError("cannot open '" + *path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IOError("failed writing '" + *path + "'");
}

void print_summary(const qmink::RunReport& r)
{
    for (const auto& c : r.criteria)
        std::cerr << (c.passed() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quantized Minkowski space toolkit: acceptance suites and tables"};
    app.set_version_flag("--version", qmink::kToolVersion);
    app.require_subcommand(1);

    Flags flags;
    std::string suite_name, table_name;

    auto* run = app.add_subcommand("run", "run a check suite: classical, kernel, ladder, rep, measure, star or all");
    run->add_option("suite", suite_name, "suite name")->required();
    add_common_flags(*run, flags);

    auto* table = app.add_subcommand("table", "emit a CSV table: trdiag, sigma_a, commdiag, observables or basis");
    table->add_option("kind", table_name, "table kind")->required();
    add_common_flags(*table, flags);
    table->add_option("--m-max", flags.m_max, "largest m of the sigma_a table (default 10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        merge_config(flags);
        const qmink::SuiteParams params = to_params(flags);
        const std::string format = flags.format.value_or(run->parsed() ? "json" : "csv");

        if (run->parsed()) {
            const qmink::SuiteName suite = qmink::parse_suite(suite_name);
            const qmink::RunReport report = qmink::run_suite(suite, params);
            write_output(flags.out, format == "json" ? report_json(report) : report_csv(report));
            print_summary(report);
            return report.passed() ? 0 : kExitFail;
        }

        if (format != "csv") throw qmink::InvalidParameter("tables are written as CSV only");
        const int m_max = flags.m_max.value_or(10);
        if (m_max < 0) throw qmink::InvalidParameter("m-max must be nonnegative");
        write_output(flags.out, qmink::emit_table(qmink::parse_table(table_name), params, m_max));
        return 0;
    } catch (const qmink::InvalidParameter& e) {
        std::cerr << "qmink: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const IOError& e) {
        std::cerr << "qmink: " << e.what() << '\n';
        return kExitIO;
    } catch (const std::exception& e) {
        std::cerr << "qmink: " << e.what() << '\n';
        return kExitFail;
    }
}
