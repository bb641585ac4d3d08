#include "qwalk/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "qwalk/limit_laws.hpp"
#include "qwalk/verify.hpp"
#include "qwalk/walk_engine.hpp"

namespace qwalk {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trimmed(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t");
    std::size_t last = text.find_last_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    return text.substr(first, last - first + 1);
}

double parse_number(const std::string& text) {
    const std::string s = trimmed(text);
    if (s.empty()) {
        throw std::invalid_argument("empty number");
    }
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) {
        throw std::invalid_argument("malformed number: '" + s + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

complexd parse_complex_literal(const std::string& raw) {
    std::string token = trimmed(raw);
    if (token.empty()) {
        throw std::invalid_argument("empty component");
    }
    if (token.back() != 'i') {
        return complexd(parse_number(token), 0.0);
    }
    token.pop_back();
    // split "a+b" / "a-b" at the last sign that is not an exponent sign
    std::size_t split_pos = std::string::npos;
    for (std::size_t p = token.size(); p-- > 1;) {
        if ((token[p] == '+' || token[p] == '-') && token[p - 1] != 'e' &&
            token[p - 1] != 'E') {
            split_pos = p;
            break;
        }
    }
    double real = 0.0;
    std::string imag_text = token;
    if (split_pos != std::string::npos) {
        real = parse_number(token.substr(0, split_pos));
        imag_text = token.substr(split_pos);
    }
    double imag = 0.0;
    if (imag_text.empty() || imag_text == "+") {
        imag = 1.0;
    } else if (imag_text == "-") {
        imag = -1.0;
    } else {
        imag = parse_number(imag_text);
    }
    return complexd(real, imag);
}

std::string format_complex(const complexd& z) {
    if (z.imag() == 0.0) {
        return format_significant(z.real());
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", z.real(), z.imag());
    return buf;
}

std::string format_alpha(const Vector4c& alpha) {
    std::string out;
    for (int i = 0; i < 4; ++i) {
        if (i) {
            out += ',';
        }
        out += format_complex(alpha(i));
    }
    return out;
}

// Round through the 12-digit text form so CSV and JSON carry the same value.
double rounded_value(double v) {
    return std::strtod(format_significant(v).c_str(), nullptr);
}

using Cell = std::variant<double, long, std::string>;

// Collects one artifact in both serializations so every command emits
// identical content regardless of format.
struct ArtifactBuilder {
    std::vector<std::pair<std::string, std::string>> meta_text;
    ordered_json meta_json = ordered_json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void meta_number(const std::string& key, double v) {
        meta_text.emplace_back(key, format_significant(v));
        meta_json[key] = rounded_value(v);
    }
    void meta_integer(const std::string& key, long long v) {
        meta_text.emplace_back(key, std::to_string(v));
        meta_json[key] = v;
    }
    void meta_string(const std::string& key, const std::string& v) {
        meta_text.emplace_back(key, v);
        meta_json[key] = v;
    }

    std::string render(const std::string& format) const {
        if (format == "json") {
            ordered_json doc;
            doc["meta"] = meta_json;
            ordered_json out_rows = ordered_json::array();
            for (const auto& row : rows) {
                ordered_json jrow = ordered_json::object();
                for (std::size_t i = 0; i < columns.size(); ++i) {
                    if (std::holds_alternative<double>(row[i])) {
                        jrow[columns[i]] = rounded_value(std::get<double>(row[i]));
                    } else if (std::holds_alternative<long>(row[i])) {
                        jrow[columns[i]] = std::get<long>(row[i]);
                    } else {
                        jrow[columns[i]] = std::get<std::string>(row[i]);
                    }
                }
                out_rows.push_back(std::move(jrow));
            }
            doc["rows"] = std::move(out_rows);
            return doc.dump(2) + "\n";
        }
        std::string out;
        for (const auto& [key, value] : meta_text) {
            out += "# " + key + "=" + value + "\n";
        }
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out += (i ? "," : "") + columns[i];
        }
        out += "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) {
                    out += ',';
                }
                if (std::holds_alternative<double>(row[i])) {
                    out += format_significant(std::get<double>(row[i]));
                } else if (std::holds_alternative<long>(row[i])) {
                    out += std::to_string(std::get<long>(row[i]));
                } else {
                    out += std::get<std::string>(row[i]);
                }
            }
            out += "\n";
        }
        return out;
    }
};

int write_artifact(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return exit_ok;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "error: cannot open '%s' for writing\n", path.c_str());
        return exit_io_error;
    }
    out << text;
    out.close();
    if (out.fail()) {
        std::fprintf(stderr, "error: failed writing '%s'\n", path.c_str());
        return exit_io_error;
    }
    return exit_ok;
}

int config_error(const std::string& message) {
    std::fprintf(stderr, "config error: %s\n", message.c_str());
    return exit_config_error;
}

bool valid_common(const RunConfig& cfg, std::string* message) {
    if (cfg.format != "csv" && cfg.format != "json") {
        *message = "format must be csv or json";
        return false;
    }
    if (!(cfg.quad_tolerance > 0.0)) {
        *message = "quadrature tolerance must be positive";
        return false;
    }
    return true;
}

void add_state_meta(ArtifactBuilder& builder, const RunConfig& cfg) {
    builder.meta_string("command", cfg.command);
    builder.meta_number("beta", cfg.beta);
    builder.meta_text.emplace_back("alpha", format_alpha(cfg.alpha));
    ordered_json alpha_json = ordered_json::array();
    for (int i = 0; i < 4; ++i) {
        alpha_json.push_back({rounded_value(cfg.alpha(i).real()),
                              rounded_value(cfg.alpha(i).imag())});
    }
    builder.meta_json["alpha"] = std::move(alpha_json);
}

template <class Fn>
void parallel_indexed(std::size_t count, int jobs, Fn&& fn) {
    if (jobs <= 0) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs <= 0) {
            jobs = 1;
        }
    }
    jobs = static_cast<int>(std::min<std::size_t>(jobs, count));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace

double parse_beta_expression(const std::string& text) {
    const std::string s = trimmed(text);
    const std::size_t pip = s.find("pi");
    if (pip == std::string::npos) {
        return parse_number(s);
    }
    double coefficient = 1.0;
    if (pip > 0) {
        if (s[pip - 1] != '*') {
            throw std::invalid_argument("expected '<number>*pi' in '" + s + "'");
        }
        coefficient = parse_number(s.substr(0, pip - 1));
    }
    double divisor = 1.0;
    const std::string rest = s.substr(pip + 2);
    if (!rest.empty()) {
        if (rest[0] != '/') {
            throw std::invalid_argument("expected 'pi/<number>' in '" + s + "'");
        }
        divisor = parse_number(rest.substr(1));
        if (divisor == 0.0) {
            throw std::invalid_argument("division by zero in '" + s + "'");
        }
    }
    return coefficient * pi / divisor;
}

Vector4c parse_alpha_components(const std::string& text) {
    const std::vector<std::string> tokens = split(text, ',');
    if (tokens.size() != 4) {
        throw std::invalid_argument("expected four comma-separated components");
    }
    Vector4c alpha;
    for (int i = 0; i < 4; ++i) {
        alpha(i) = parse_complex_literal(tokens[i]);
    }
    return alpha;
}

std::string format_significant(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

CsvArtifact parse_csv_artifact(const std::string& text) {
    CsvArtifact artifact;
    bool header_seen = false;
    for (const std::string& line : split(text, '\n')) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::string body = trimmed(line.substr(1));
            const std::size_t eq = body.find('=');
            if (eq != std::string::npos) {
                artifact.meta[body.substr(0, eq)] = body.substr(eq + 1);
            }
            continue;
        }
        if (!header_seen) {
            artifact.columns = split(line, ',');
            header_seen = true;
            continue;
        }
        artifact.rows.push_back(split(line, ','));
    }
    return artifact;
}

int cmd_simulate(const RunConfig& cfg) {
    std::string message;
    if (!valid_common(cfg, &message)) {
        return config_error(message);
    }
    if (cfg.t < 0) {
        return config_error("step count must be nonnegative");
    }
    const CoinParameters coin = CoinParameters::from_angle(cfg.beta);
    const InitialCoinState initial = InitialCoinState::from_components(cfg.alpha);
    const WalkState state = evolve(coin, initial, cfg.t);
    const PositionDistribution dist = position_distribution(state);

    ArtifactBuilder builder;
    add_state_meta(builder, cfg);
    builder.meta_integer("t", cfg.t);
    builder.meta_number("norm_residual", std::abs(state.norm_squared() - 1.0));
    builder.columns = {"x", "p", "m00", "m01", "m10", "m11"};
    for (long x = state.min_site(); x <= state.max_site(); ++x) {
        const Vector4c amplitude = state.at(x);
        builder.rows.push_back({x, dist.at(x), std::abs(amplitude(0)),
                                std::abs(amplitude(1)), std::abs(amplitude(2)),
                                std::abs(amplitude(3))});
    }
    return write_artifact(cfg.output_path, builder.render(cfg.format));
}

int cmd_density(const RunConfig& cfg) {
    std::string message;
    if (!valid_common(cfg, &message)) {
        return config_error(message);
    }
    if (cfg.grid_points < 2) {
        return config_error("density grid needs at least two points");
    }
    const CoinParameters coin = CoinParameters::from_angle(cfg.beta);
    const InitialCoinState initial = InitialCoinState::from_components(cfg.alpha);
    const LimitDensity d = limit_density(coin, initial);
    QuadratureSpec quad;
    quad.tolerance = cfg.quad_tolerance;

    // midpoint grid over (-1, 1) keeps clear of both edges and the support rim
    std::vector<double> ys;
    ys.reserve(cfg.grid_points);
    for (int i = 0; i < cfg.grid_points; ++i) {
        ys.push_back(-1.0 + (i + 0.5) * 2.0 / cfg.grid_points);
    }
    const std::vector<double> cdf = limit_cdf_batch(d, ys, false, quad);

    ArtifactBuilder builder;
    add_state_meta(builder, cfg);
    builder.meta_number("c00", d.c00);
    builder.meta_number("c0", d.c0);
    builder.meta_number("c1", d.c1);
    builder.meta_number("c2", d.c2);
    builder.meta_number("support", d.support);
    builder.columns = {"y", "f_ac", "F"};
    for (int i = 0; i < cfg.grid_points; ++i) {
        builder.rows.push_back({ys[i], density_at(d, ys[i]), cdf[i]});
    }
    return write_artifact(cfg.output_path, builder.render(cfg.format));
}

int cmd_stationary(const RunConfig& cfg) {
    std::string message;
    if (!valid_common(cfg, &message)) {
        return config_error(message);
    }
    if (cfg.window < 0) {
        return config_error("site window must be nonnegative");
    }
    const CoinParameters coin = CoinParameters::from_angle(cfg.beta);
    const InitialCoinState initial = InitialCoinState::from_components(cfg.alpha);
    const StationaryLaw law = stationary_law(coin, initial);

    ArtifactBuilder builder;
    add_state_meta(builder, cfg);
    builder.meta_number("p0", law.p0);
    builder.meta_number("j_plus", law.j_plus);
    builder.meta_number("j_minus", law.j_minus);
    builder.meta_number("ratio", law.ratio);
    builder.columns = {"x", "p"};
    for (long x = -cfg.window; x <= cfg.window; ++x) {
        builder.rows.push_back({x, stationary_probability(law, x)});
    }
    return write_artifact(cfg.output_path, builder.render(cfg.format));
}

int cmd_verify(const RunConfig& cfg) {
    std::string message;
    if (!valid_common(cfg, &message)) {
        return config_error(message);
    }
    if (cfg.samples < 0) {
        return config_error("sample count must be nonnegative");
    }
    const SuiteReport report = full_verification(cfg.samples, cfg.seed, cfg.jobs);

    ordered_json doc;
    doc["meta"] = {{"command", "verify"},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed},
                   {"jobs", cfg.jobs},
                   {"tolerance", rounded_value(cfg.quad_tolerance)}};
    ordered_json checks = ordered_json::array();
    for (const CheckResult& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"params", c.params},
                          {"measured", rounded_value(c.measured)},
                          {"bound", rounded_value(c.bound)},
                          {"pass", c.pass}});
    }
    doc["checks"] = std::move(checks);

    // human summary, grouped by family in first-appearance order
    const bool report_to_stdout = (cfg.output_path == "-");
    std::FILE* summary = report_to_stdout ? stderr : stdout;
    std::vector<std::string> family_order;
    std::map<std::string, std::pair<int, int>> tally;  // name -> (pass, total)
    std::map<std::string, double> worst;
    for (const CheckResult& c : report.checks) {
        if (!tally.count(c.name)) {
            family_order.push_back(c.name);
        }
        auto& [passed, total] = tally[c.name];
        passed += c.pass ? 1 : 0;
        total += 1;
        if (!worst.count(c.name) || c.measured > worst[c.name]) {
            worst[c.name] = c.measured;
        }
    }
    for (const std::string& name : family_order) {
        const auto& [passed, total] = tally[name];
        std::fprintf(summary, "%-28s %3d/%-3d pass   worst %.3e\n", name.c_str(),
                     passed, total, worst[name]);
    }
    if (report.all_pass()) {
        std::fprintf(summary, "all %zu checks passed\n", report.checks.size());
    } else {
        std::fprintf(summary, "FAILED: %s\n", report.first_failure().c_str());
    }

    const std::string path =
        cfg.output_path.empty() ? "verify_report.json" : cfg.output_path;
    const int io_status = write_artifact(path, doc.dump(2) + "\n");
    if (io_status != exit_ok) {
        return io_status;
    }
    return report.all_pass() ? exit_ok : exit_verification_failure;
}

int cmd_sweep(const RunConfig& cfg) {
    std::string message;
    if (!valid_common(cfg, &message)) {
        return config_error(message);
    }
    if (!cfg.sweep_grid) {
        return config_error("sweep needs a coin-angle grid");
    }
    const SweepGrid& grid = *cfg.sweep_grid;
    if (grid.beta_steps < 1) {
        return config_error("grid needs at least one step");
    }
    if (!(grid.beta_min > 0.0 && grid.beta_max < pi / 2.0 &&
          grid.beta_min <= grid.beta_max)) {
        return config_error("grid angles must satisfy 0 < min <= max < pi/2");
    }
    if (grid.presets.empty()) {
        return config_error("grid needs at least one state preset");
    }
    for (const std::string& preset : grid.presets) {
        if (preset != "bell" && preset != "nonloc") {
            return config_error("unknown preset '" + preset + "'");
        }
    }

    struct Row {
        double beta;
        std::string preset;
        double c00, p0, ratio, j_plus, j_minus;
    };
    std::vector<Row> rows(static_cast<std::size_t>(grid.beta_steps) *
                          grid.presets.size());
    parallel_indexed(rows.size(), cfg.jobs, [&](std::size_t index) {
        const std::size_t bi = index / grid.presets.size();
        const std::size_t pi_idx = index % grid.presets.size();
        const double beta =
            grid.beta_steps == 1
                ? grid.beta_min
                : grid.beta_min + static_cast<double>(bi) *
                                      (grid.beta_max - grid.beta_min) /
                                      (grid.beta_steps - 1);
        const CoinParameters coin = CoinParameters::from_angle(beta);
        const InitialCoinState initial = grid.presets[pi_idx] == "bell"
                                             ? InitialCoinState::bell()
                                             : InitialCoinState::nonlocalizing();
        const LimitDensity d = limit_density(coin, initial);
        const StationaryLaw law = stationary_law(coin, initial);
        rows[index] = {beta,      grid.presets[pi_idx], d.c00,
                       law.p0,    law.ratio,            law.j_plus,
                       law.j_minus};
    });

    ArtifactBuilder builder;
    builder.meta_string("command", "sweep");
    builder.meta_number("beta_min", grid.beta_min);
    builder.meta_number("beta_max", grid.beta_max);
    builder.meta_integer("beta_steps", grid.beta_steps);
    std::string preset_list;
    for (std::size_t i = 0; i < grid.presets.size(); ++i) {
        preset_list += (i ? "," : "") + grid.presets[i];
    }
    builder.meta_string("presets", preset_list);
    builder.columns = {"beta", "preset", "c00", "p0", "r", "j_plus", "j_minus"};
    for (const Row& row : rows) {
        builder.rows.push_back({row.beta, row.preset, row.c00, row.p0, row.ratio,
                                row.j_plus, row.j_minus});
    }
    return write_artifact(cfg.output_path, builder.render(cfg.format));
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"four-state coined walk on the integer line: simulation, "
                 "closed-form laws, and cross-validation"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string beta_text = "pi/4";
    std::string alpha_text;
    std::string preset_text;
    std::string presets_text = "bell,nonloc";
    double beta_min = 0.0;
    double beta_max = 0.0;
    int beta_steps = 9;

    auto add_common = [&](CLI::App* sub, bool wants_state) {
        sub->add_option("--beta", beta_text,
                        "coin angle in (0, pi/2); accepts forms like pi/4 or 3*pi/8");
        if (wants_state) {
            sub->add_option("--alpha", alpha_text,
                            "four comma-separated complex components re[+imi]");
            sub->add_option("--preset", preset_text, "named state: bell | nonloc");
        }
        sub->add_option("--out", cfg.output_path, "output path ('-' = stdout)");
        sub->add_option("--format", cfg.format, "csv | json");
        sub->add_option("--tol", cfg.quad_tolerance, "quadrature tolerance");
        sub->add_option("--jobs", cfg.jobs, "worker threads (0 = hardware)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "evolve and dump p_t(x)");
    add_common(sim, true);
    sim->add_option("--t", cfg.t, "number of steps");

    CLI::App* den =
        app.add_subcommand("density", "weak-limit density and CDF on a grid");
    add_common(den, true);
    den->add_option("--points", cfg.grid_points, "grid points across (-1, 1)");

    CLI::App* sta =
        app.add_subcommand("stationary", "stationary law around the origin");
    add_common(sta, true);
    sta->add_option("--window", cfg.window, "emit p(x) for |x| <= window");

    CLI::App* ver = app.add_subcommand("verify", "run the cross-validation suite");
    add_common(ver, false);
    ver->add_option("--samples", cfg.samples, "random draws on top of pinned cases");
    ver->add_option("--seed", cfg.seed, "seed for the random draws");

    CLI::App* swp =
        app.add_subcommand("sweep", "closed forms over a coin-angle grid");
    add_common(swp, false);
    swp->add_option("--beta-min", beta_min, "grid lower angle")->required();
    swp->add_option("--beta-max", beta_max, "grid upper angle")->required();
    swp->add_option("--beta-steps", beta_steps, "grid size");
    swp->add_option("--presets", presets_text, "comma list of state presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        cfg.beta = parse_beta_expression(beta_text);
    } catch (const std::invalid_argument& e) {
        return config_error(std::string("--beta: ") + e.what());
    }
    if (!(cfg.beta > 0.0 && cfg.beta < pi / 2.0)) {
        return config_error("--beta must lie strictly inside (0, pi/2)");
    }

    if (!alpha_text.empty() && !preset_text.empty()) {
        return config_error("--alpha and --preset are mutually exclusive");
    }
    if (!preset_text.empty() && preset_text != "bell" && preset_text != "nonloc") {
        return config_error("unknown preset '" + preset_text + "'");
    }
    if (!alpha_text.empty()) {
        Vector4c alpha;
        try {
            alpha = parse_alpha_components(alpha_text);
        } catch (const std::invalid_argument& e) {
            return config_error(std::string("--alpha: ") + e.what());
        }
        const double norm = alpha.norm();
        if (std::abs(norm - 1.0) > 1e-3) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "--alpha has norm %.12g, not 1; renormalize (divide "
                          "each component by %.12g) and retry",
                          norm, norm);
            return config_error(buf);
        }
        cfg.alpha = alpha / norm;
    } else if (preset_text == "nonloc") {
        cfg.alpha = InitialCoinState::nonlocalizing().components();
    } else {
        cfg.alpha = InitialCoinState::bell().components();
    }

    if (swp->parsed()) {
        SweepGrid grid;
        grid.beta_min = beta_min;
        grid.beta_max = beta_max;
        grid.beta_steps = beta_steps;
        for (const std::string& preset : split(presets_text, ',')) {
            const std::string p = trimmed(preset);
            if (!p.empty()) {
                grid.presets.push_back(p);
            }
        }
        cfg.sweep_grid = grid;
    }

    if (sim->parsed()) {
        cfg.command = "simulate";
        return cmd_simulate(cfg);
    }
    if (den->parsed()) {
        cfg.command = "density";
        return cmd_density(cfg);
    }
    if (sta->parsed()) {
        cfg.command = "stationary";
        return cmd_stationary(cfg);
    }
    if (ver->parsed()) {
        cfg.command = "verify";
        return cmd_verify(cfg);
    }
    cfg.command = "sweep";
    return cmd_sweep(cfg);
}

} // namespace qwalk
