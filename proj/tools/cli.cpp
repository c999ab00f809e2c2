#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tweedie/divergence.hpp"
#include "tweedie/errors.hpp"
#include "tweedie/estimation.hpp"
#include "tweedie/model.hpp"
#include "tweedie/sampling.hpp"
#include "tweedie/version.hpp"

namespace tweedie::cli {

namespace {

using Json = nlohmann::ordered_json;

struct TableRow {
    double p;
    const char* p_label;
    const char* ratio;
    const char* distribution;
    const char* beta;
    const char* alpha;
    const char* entropy;
};

constexpr TableRow kTable[] = {
    {0.0, "0", "mu", "Gaussian", "EU", "Pearson (1/2 X^2)", "L2"},
    {1.0, "1", "1", "Poisson", "KL", "KL", "Shannon"},
    {1.5, "3/2", "mu^(-1/2)", "Comp. Poisson", "-", "Hellinger dist.", "-"},
    {2.0, "2", "mu^(-1)", "Gamma", "IS", "Reversed KL", "Burg"},
    {3.0, "3", "mu^(-2)", "Inv. Gaussian", "-", "Rev. Pearson", "-"},
};

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& s) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    if (begin != end && *begin == '+') ++begin;
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
    return v;
}

void write_error(std::ostream& err, const std::string& type, const std::string& message,
                 std::optional<long> line = std::nullopt) {
    Json body = {{"type", type}, {"message", message}};
    if (line) body["line"] = *line;
    err << Json{{"error", body}, {"version", kVersion}}.dump() << '\n';
}

// One "key,value" line per scalar member of a flat JSON object.
void write_flat_csv(std::ostream& out, const Json& obj) {
    out << "key,value\n";
    for (const auto& [key, value] : obj.items()) {
        if (value.is_number_float()) {
            out << key << ',' << fmt(value.get<double>()) << '\n';
        } else if (value.is_string()) {
            out << key << ',' << value.get<std::string>() << '\n';
        } else if (value.is_primitive()) {
            out << key << ',' << value.dump() << '\n';
        }
    }
}

std::vector<double> load(const std::string& path, std::istream& in) {
    if (path == "-") return read_column(in);
    std::ifstream file(path);
    if (!file) throw InputError("cannot open " + path, 0);
    return read_column(file);
}

std::vector<double> p_range(double lo, double hi, double step) {
    if (!(step > 0.0) || !(lo <= hi)) {
        throw DomainError("invalid p range: need p-min <= p-max and grid-step > 0");
    }
    std::vector<double> ps;
    for (long i = 0;; ++i) {
        const double p = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
        if (p > hi + 1e-12) break;
        ps.push_back(p);
    }
    return ps;
}

struct Options {
    std::string format;
    std::string kind;
    std::optional<double> p, mu, phi, x, c, p_min, p_max;
    double grid_step = 0.1;
    std::vector<double> grid;
    std::string method;
    std::string input;
    std::string output;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

int cmd_div(const Options& o, std::ostream& out) {
    const auto eval = [&](double p, double a, double b) {
        return o.kind == "alpha" ? alpha_divergence(PowerIndex(p), a, b)
                                 : beta_divergence(PowerIndex(p), a, b);
    };
    if (o.p) {
        const double d = eval(*o.p, *o.x, *o.mu);
        if (o.format == "csv") {
            out << "kind,p,x,mu,divergence\n"
                << o.kind << ',' << fmt(*o.p) << ',' << fmt(*o.x) << ',' << fmt(*o.mu) << ','
                << fmt(d) << '\n';
        } else {
            out << Json{{"version", kVersion}, {"kind", o.kind}, {"p", *o.p}, {"x", *o.x},
                        {"mu", *o.mu}, {"divergence", d}}.dump()
                << '\n';
        }
        return kExitOk;
    }

    const auto ps = p_range(o.p_min.value_or(0.0), o.p_max.value_or(3.0), o.grid_step);
    Json rows = Json::array();
    if (o.format == "csv") out << "p,dual_p,forward,reverse,dual_reverse\n";
    for (double p : ps) {
        const double forward = eval(p, *o.x, *o.mu);
        const double reverse = eval(p, *o.mu, *o.x);
        const double dual_reverse = eval(alpha_dual_index(p), *o.mu, *o.x);
        if (o.format == "csv") {
            out << fmt(p) << ',' << fmt(alpha_dual_index(p)) << ',' << fmt(forward) << ','
                << fmt(reverse) << ',' << fmt(dual_reverse) << '\n';
        } else {
            rows.push_back({{"p", p}, {"dual_p", alpha_dual_index(p)}, {"forward", forward},
                            {"reverse", reverse}, {"dual_reverse", dual_reverse}});
        }
    }
    if (o.format != "csv") {
        out << Json{{"version", kVersion}, {"kind", o.kind}, {"x", *o.x}, {"mu", *o.mu},
                    {"rows", rows}}.dump()
            << '\n';
    }
    return kExitOk;
}

int cmd_pdf(const Options& o, std::ostream& out) {
    const auto params = TweedieParams::make(*o.mu, *o.phi, *o.p);
    std::optional<DensityMethod> method;
    if (!o.method.empty()) method = parse_density_method(o.method);
    const auto ev = log_density(params, *o.x, method);
    Json report = {{"version", kVersion},
                   {"p", *o.p},
                   {"mu", *o.mu},
                   {"phi", *o.phi},
                   {"x", *o.x},
                   {"log_density", ev.log_density},
                   {"density", std::exp(ev.log_density)},
                   {"method", std::string(to_string(ev.method))},
                   {"series_terms_used", ev.series_terms_used},
                   {"warnings", ev.warnings}};
    if (o.format == "csv") {
        write_flat_csv(out, report);
    } else {
        out << report.dump() << '\n';
    }
    return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
    auto params = TweedieParams::make(*o.mu, *o.phi, *o.p);
    if (o.c) params = scale_transform(params, *o.c);
    const auto draws = sample(params, {o.seed, o.n});

    std::ofstream file;
    if (!o.output.empty() && o.output != "-") {
        file.open(o.output);
        if (!file) throw InputError("cannot open " + o.output + " for writing", 0);
    }
    std::ostream& dest = file.is_open() ? file : out;
    if (o.format == "json") {
        dest << Json{{"version", kVersion},
                     {"seed", o.seed},
                     {"p", params.p().value()},
                     {"mu", params.mu()},
                     {"phi", params.phi()},
                     {"n", o.n},
                     {"values", draws}}.dump()
             << '\n';
    } else {
        dest << "x\n";
        for (double v : draws) dest << fmt(v) << '\n';
    }
    if (file.is_open()) {
        err << Json{{"version", kVersion}, {"seed", o.seed}, {"n", o.n}, {"output", o.output}}
                   .dump()
            << '\n';
    }
    return kExitOk;
}

FitOptions fit_options(const Options& o) {
    FitOptions opts;
    opts.p_min = o.p_min;
    opts.p_max = o.p_max;
    opts.grid_step = o.grid_step;
    return opts;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err, std::istream& in) {
    const Dataset data(load(o.input, in));
    const auto r = fit(data, fit_options(o));
    Json report = {{"version", kVersion},
                   {"n", data.count()},
                   {"p_hat", r.p_hat},
                   {"mu_hat", r.mu_hat},
                   {"phi_hat", r.phi_hat},
                   {"log_likelihood", r.log_likelihood},
                   {"total_deviance", r.total_deviance},
                   {"phi_mean_deviance", r.phi_mean_deviance},
                   {"method", std::string(to_string(r.method))},
                   {"iterations", r.iterations},
                   {"converged", r.converged},
                   {"p_feasible_min", r.p_feasible_interval.first},
                   {"p_feasible_max", r.p_feasible_interval.second}};
    if (!r.converged) write_error(err, "warning", "optimizer did not converge");
    if (o.format == "csv") {
        write_flat_csv(out, report);
    } else {
        out << report.dump() << '\n';
    }
    return kExitOk;
}

int cmd_profile(const Options& o, std::ostream& out, std::istream& in) {
    const Dataset data(load(o.input, in));
    const auto ps = !o.grid.empty() ? o.grid
                                    : p_range(o.p_min.value_or(0.0), o.p_max.value_or(3.0),
                                              o.grid_step);
    const auto rows = deviance_profile(data, ps, fit_options(o));
    if (o.format == "csv") {
        out << "p,feasible,mu_hat,phi_hat,total_deviance,log_likelihood,method,iterations,"
               "converged\n";
        for (const auto& r : rows) {
            out << fmt(r.p) << ',' << (r.feasible ? "true" : "false") << ',' << fmt(r.mu_hat)
                << ',' << fmt(r.phi_hat) << ',' << fmt(r.total_deviance) << ','
                << fmt(r.log_likelihood) << ',' << (r.feasible ? to_string(r.method) : "")
                << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
        }
        return kExitOk;
    }
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json row = {{"p", r.p}, {"feasible", r.feasible}};
        if (r.feasible) {
            row["mu_hat"] = r.mu_hat;
            row["phi_hat"] = r.phi_hat;
            row["total_deviance"] = r.total_deviance;
            row["log_likelihood"] = r.log_likelihood;
            row["method"] = std::string(to_string(r.method));
            row["iterations"] = r.iterations;
            row["converged"] = r.converged;
        }
        arr.push_back(row);
    }
    out << Json{{"version", kVersion}, {"n", data.count()}, {"rows", arr}}.dump() << '\n';
    return kExitOk;
}

int cmd_table(const Options& o, std::ostream& out) {
    if (o.format == "csv") {
        out << "p,mu^(1-p),Distribution,Beta,Alpha,Entropy\n";
        for (const auto& r : kTable) {
            out << r.p_label << ',' << r.ratio << ',' << r.distribution << ',' << r.beta << ','
                << r.alpha << ',' << r.entropy << '\n';
        }
        return kExitOk;
    }
    Json rows = Json::array();
    for (const auto& r : kTable) {
        rows.push_back({{"p", r.p_label},
                        {"p_value", r.p},
                        {"ratio", r.ratio},
                        {"distribution", r.distribution},
                        {"beta", r.beta},
                        {"alpha", r.alpha},
                        {"entropy", r.entropy}});
    }
    out << Json{{"version", kVersion}, {"rows", rows}}.dump() << '\n';
    return kExitOk;
}

}  // namespace

std::vector<double> read_column(std::istream& in) {
    std::vector<double> values;
    std::string raw;
    long line = 0;
    bool seen_content = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string cell = trim(raw);
        if (line == 1 && cell.rfind("\xEF\xBB\xBF", 0) == 0) cell = trim(cell.substr(3));
        if (cell.empty()) continue;
        const auto v = parse_number(cell);
        if (!v) {
            if (!seen_content && cell.find(',') == std::string::npos) {
                seen_content = true;
                continue;
            }
            throw InputError("line " + std::to_string(line) + ": cannot parse '" + cell +
                                 "' as a number",
                             line);
        }
        if (!std::isfinite(*v)) {
            throw InputError("line " + std::to_string(line) + ": value is not finite", line);
        }
        seen_content = true;
        values.push_back(*v);
    }
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
    Options o;
    CLI::App app{"Tweedie divergences, densities and maximum-likelihood fits", "tweedie"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    app.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* div = app.add_subcommand("div", "Alpha or beta divergence d(x, mu)");
    div->add_option("--kind", o.kind, "alpha or beta")
        ->required()
        ->check(CLI::IsMember({"alpha", "beta"}));
    auto* div_p = div->add_option("--p", o.p, "Power index");
    div->add_option("--x", o.x)->required();
    div->add_option("--mu", o.mu)->required();
    auto* div_lo = div->add_option("--p-min", o.p_min, "Sweep start")->excludes(div_p);
    auto* div_hi = div->add_option("--p-max", o.p_max, "Sweep end")->excludes(div_p);
    div->add_option("--grid-step", o.grid_step, "Sweep step")->excludes(div_p);
    div_p->excludes(div_lo)->excludes(div_hi);

    auto* pdf = app.add_subcommand("pdf", "Log-density of Tw_p(mu, phi) at x");
    pdf->add_option("--p", o.p)->required();
    pdf->add_option("--mu", o.mu)->required();
    pdf->add_option("--phi", o.phi)->required();
    pdf->add_option("--x", o.x)->required();
    pdf->add_option("--method", o.method)
        ->check(CLI::IsMember({"exact", "series", "saddlepoint"}));

    auto* smp = app.add_subcommand("sample", "Seeded draws from Tw_p(mu, phi)");
    smp->add_option("--p", o.p)->required();
    smp->add_option("--mu", o.mu)->required();
    smp->add_option("--phi", o.phi)->required();
    smp->add_option("--n", o.n)->required();
    smp->add_option("--seed", o.seed)->required();
    smp->add_option("--c", o.c, "Draw from the scaled model c * Y");
    smp->add_option("--output", o.output, "Output file, default stdout");

    auto* ft = app.add_subcommand("fit", "Maximum-likelihood fit of (mu, phi, p)");
    ft->add_option("--input", o.input, "CSV file or - for stdin")->required();
    ft->add_option("--p-min", o.p_min);
    ft->add_option("--p-max", o.p_max);
    ft->add_option("--grid-step", o.grid_step);

    auto* prof = app.add_subcommand("profile", "Profile likelihood over a grid of p");
    prof->add_option("--input", o.input, "CSV file or - for stdin")->required();
    auto* grid = prof->add_option("--grid", o.grid, "Comma-separated p values")->delimiter(',');
    prof->add_option("--p-min", o.p_min)->excludes(grid);
    prof->add_option("--p-max", o.p_max)->excludes(grid);
    prof->add_option("--grid-step", o.grid_step)->excludes(grid);

    auto* tbl = app.add_subcommand("table", "Divergences, distributions and entropies by p");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (div->parsed() && !o.p && !o.p_min && !o.p_max) {
            throw CLI::RequiredError("--p or a --p-min/--p-max sweep");
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return kExitUsage;
    }

    if (o.format.empty()) o.format = smp->parsed() ? "csv" : "json";
    out.precision(17);

    try {
        if (div->parsed()) return cmd_div(o, out);
        if (pdf->parsed()) return cmd_pdf(o, out);
        if (smp->parsed()) return cmd_sample(o, out, err);
        if (ft->parsed()) return cmd_fit(o, out, err, in);
        if (prof->parsed()) return cmd_profile(o, out, in);
        if (tbl->parsed()) return cmd_table(o, out);
    } catch (const InputError& e) {
        write_error(err, "input", e.what(), e.line() > 0 ? std::optional<long>(e.line())
                                                         : std::nullopt);
        return kExitDomain;
    } catch (const SeriesNonConvergence& e) {
        write_error(err, "convergence", e.what());
        return kExitDomain;
    } catch (const UnsupportedMethod& e) {
        write_error(err, "unsupported_method", e.what());
        return kExitDomain;
    } catch (const DomainError& e) {
        write_error(err, "domain", e.what());
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace tweedie::cli
