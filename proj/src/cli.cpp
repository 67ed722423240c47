#include "cubepu/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubepu/errors.hpp"
#include "cubepu/halton.hpp"

namespace cubepu::cli {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::size_t> to_count(std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    const auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_sep(line[j])) ++j;
        if (j > i) fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

bool is_header(const std::vector<std::string_view>& fields) {
    static const std::vector<std::string_view> names{"x", "y", "z", "value"};
    if (fields.size() < 3 || fields.size() > 4) return false;
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] != names[i] && !(i == 3 && fields[i] == "f")) return false;
    return true;
}

std::string mode_tag(SearchMode m) { return m == SearchMode::cube ? "cube" : "no_cube"; }

}  // namespace

PointSource parse_point_source(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw UsageError("point source '" + std::string(text) + "' must be halton:<n>, grid:<side> or file:<path>");
    const std::string_view kind = text.substr(0, colon);
    const std::string_view arg = text.substr(colon + 1);
    PointSource src;
    if (kind == "file") {
        if (arg.empty()) throw UsageError("file: point source needs a path");
        src.kind = PointSource::Kind::file;
        src.path = std::string(arg);
        return src;
    }
    const auto count = to_count(arg);
    if (kind == "halton" && count && *count >= 1) {
        src.kind = PointSource::Kind::halton;
        src.count = *count;
        return src;
    }
    if (kind == "grid" && count && *count >= 2) {
        src.kind = PointSource::Kind::grid;
        src.count = *count;
        return src;
    }
    throw UsageError("malformed point source '" + std::string(text) + "'");
}

PointFile read_points(std::istream& in) {
    PointFile out;
    std::string line;
    std::size_t lineno = 0;
    std::size_t arity = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto fields = split_fields(line);
        if (!seen_data && is_header(fields)) continue;
        if (fields.size() != 3 && fields.size() != 4)
            throw ParseError("line " + std::to_string(lineno) + ": expected 3 or 4 fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        if (seen_data && fields.size() != arity)
            throw ParseError("line " + std::to_string(lineno) + ": mixed row arity (" + std::to_string(fields.size()) +
                                 " fields after rows of " + std::to_string(arity) + ")",
                             lineno);
        double v[4] = {0, 0, 0, 0};
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto d = to_double(fields[i]);
            if (!d || !std::isfinite(*d))
                throw ParseError("line " + std::to_string(lineno) + ": non-numeric field '" + std::string(fields[i]) +
                                     "'",
                                 lineno);
            v[i] = *d;
        }
        const Point3 p{v[0], v[1], v[2]};
        if (!in_unit_cube(p))
            throw ParseError("line " + std::to_string(lineno) + ": point " + to_string(p) + " outside the unit cube",
                             lineno);
        arity = fields.size();
        seen_data = true;
        out.points.push_back(p);
        if (arity == 4) out.values.push_back(v[3]);
    }
    out.has_values = arity == 4;
    return out;
}

PointFile read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open point file '" + path + "'", 0);
    return read_points(in);
}

PointFile resolve(const PointSource& source, std::uint64_t halton_start) {
    switch (source.kind) {
        case PointSource::Kind::halton:
            return {halton({.count = source.count, .bases = {2, 3, 5}, .start_index = halton_start}), {}, false};
        case PointSource::Kind::grid:
            return {eval_grid(source.count), {}, false};
        case PointSource::Kind::file:
            return read_points(source.path);
    }
    return {};
}

std::size_t default_subdomains(std::size_t n) {
    const double side = std::round(std::cbrt(static_cast<double>(n)) * 1e9) / 1e9;
    const auto k = static_cast<std::size_t>(std::floor((side - 1.0) / 2.0));
    return std::max<std::size_t>(1, k * k * k);
}

ShapeRange parse_shape_range(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos) throw UsageError("shape range '" + std::string(text) + "' must be min:max:count");
    const auto lo = to_double(text.substr(0, a));
    const auto hi = to_double(text.substr(a + 1, b - a - 1));
    const auto count = to_count(text.substr(b + 1));
    if (!lo || !hi || !count || *count == 0 || !(*lo > 0.0) || !(*hi >= *lo))
        throw UsageError("malformed shape range '" + std::string(text) + "' (need 0 < min <= max, count >= 1)");
    return {*lo, *hi, *count};
}

Options parse_args(const std::vector<std::string>& args, bool* help) {
    Options o;
    CLI::App app{"Partition-of-unity RBF interpolation with a cube-partition search", "cubepu"};
    app.require_subcommand(1);

    std::string function = "f1";
    std::string kernel;
    std::string shape_range;
    std::string format = "csv";
    std::string out;
    std::string centers;
    std::size_t subdomains = 0;
    std::size_t m_max = 0;
    double shape = 0.0;

    app.add_option("--nodes", o.nodes, "node source: halton:<n>, grid:<side> or file:<path>");
    app.add_option("--centers", centers, "subdomain centers: halton, grid, or a point source");
    app.add_option("--eval", o.eval, "evaluation points (fit) or grid:<side> (bench)");
    auto* fn_opt = app.add_option("--function", function, "test function f1|f2");
    app.add_option("--kernel", kernel, "kernel g|m4|w4")->required();
    auto* shape_opt = app.add_option("--shape", shape, "shape parameter");
    auto* range_opt = app.add_option("--shape-range", shape_range, "sweep range min:max:count");
    auto* d_opt = app.add_option("--subdomains", subdomains, "number of subdomains d");
    auto* mmax_opt = app.add_option("--mmax", m_max, "cap on nodes per subdomain");
    app.add_flag("--no-cube", o.no_cube, "brute-force neighbor search");
    app.add_flag("--allow-empty", o.allow_empty, "drop subdomains without nodes instead of failing");
    app.add_option("--halton-start", o.halton_start, "first Halton index for halton: sources");
    auto* out_opt = app.add_option("--out", out, "output path (default stdout)");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* fit_cmd = app.add_subcommand("fit", "fit and evaluate at --eval points, emit values");
    auto* bench_cmd = app.add_subcommand("bench", "run one experiment");
    auto* sweep_cmd = app.add_subcommand("sweep", "shape-parameter sweep");
    auto* cmp_cmd = app.add_subcommand("compare-search", "cube vs brute-force search");
    for (auto* sub : {fit_cmd, bench_cmd, sweep_cmd, cmp_cmd}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        if (help) *help = true;
        throw UsageError(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (fit_cmd->parsed()) o.command = Command::fit;
    else if (bench_cmd->parsed()) o.command = Command::bench;
    else if (sweep_cmd->parsed()) o.command = Command::sweep;
    else o.command = Command::compare_search;

    try {
        o.kernel = parse_kernel_family(kernel);
        o.function = parse_test_function(function);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    o.function_given = fn_opt->count() > 0;
    if (shape_opt->count()) {
        if (!(shape > 0.0)) throw UsageError("--shape must be positive");
        o.shape = shape;
    }
    if (range_opt->count()) o.shape_range = parse_shape_range(shape_range);
    if (d_opt->count()) {
        if (subdomains == 0) throw UsageError("--subdomains must be positive");
        o.subdomains = subdomains;
    }
    if (mmax_opt->count()) {
        if (m_max == 0) throw UsageError("--mmax must be positive");
        o.m_max = m_max;
    }
    if (out_opt->count()) o.out = out;
    if (!centers.empty()) o.centers = centers;
    o.format = format == "json" ? Format::json : Format::csv;

    (void)parse_point_source(o.nodes);
    if (o.centers && *o.centers != "halton" && *o.centers != "grid") (void)parse_point_source(*o.centers);
    (void)parse_point_source(o.eval);

    if (o.command == Command::sweep) {
        if (!o.shape_range) throw UsageError("sweep requires --shape-range");
    } else if (!o.shape) {
        throw UsageError("--shape is required");
    }
    if (o.command != Command::fit && parse_point_source(o.eval).kind != PointSource::Kind::grid)
        throw UsageError("--eval must be grid:<side> for experiments");
    return o;
}

ExperimentSpec to_experiment_spec(const Options& o, std::size_t node_count) {
    ExperimentSpec spec;
    spec.node_count = node_count;
    spec.subdomain_count = o.subdomains.value_or(default_subdomains(node_count));
    spec.grid_side = parse_point_source(o.eval).count;
    spec.kernel = {o.kernel, o.shape.value_or(o.shape_range ? o.shape_range->min : 1.0)};
    spec.sweep = o.shape_range;
    spec.function = o.function;
    spec.m_max = o.m_max;
    spec.mode = o.no_cube ? SearchMode::no_cube : SearchMode::cube;
    spec.centers = o.centers && *o.centers == "grid" ? CenterSource::grid : CenterSource::halton;
    spec.allow_empty = o.allow_empty;
    spec.halton_start = o.halton_start;
    return spec;
}

void write_results(std::ostream& out, const std::vector<ExperimentResult>& results, Format format) {
    if (format == Format::json) {
        auto row = [](const ExperimentResult& r) {
            nlohmann::ordered_json j;
            j["n"] = r.spec.node_count;
            j["d"] = r.spec.subdomain_count;
            j["q"] = r.q;
            j["kernel"] = std::string(kernel_tag(r.spec.kernel.family));
            j["shape"] = r.spec.kernel.shape;
            j["function"] = std::string(function_tag(r.spec.function));
            j["mmax"] = r.spec.m_max ? nlohmann::ordered_json(*r.spec.m_max) : nlohmann::ordered_json(nullptr);
            j["mode"] = mode_tag(r.spec.mode);
            j["rmse"] = r.rmse;
            j["max_err"] = r.max_abs_error;
            j["fit_s"] = r.fit_seconds;
            j["eval_s"] = r.eval_seconds;
            j["total_s"] = r.total_seconds;
            j["warn_uncovered"] = r.warn_uncovered;
            j["warn_illcond"] = r.warn_ill_conditioned;
            j["warn_empty"] = r.warn_empty;
            return j;
        };
        if (results.size() == 1) {
            out << row(results.front()).dump(2) << '\n';
        } else {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& r : results) arr.push_back(row(r));
            out << arr.dump(2) << '\n';
        }
        return;
    }
    out << kResultHeader << '\n';
    for (const auto& r : results) {
        out << r.spec.node_count << ',' << r.spec.subdomain_count << ',' << r.q << ',' << kernel_tag(r.spec.kernel.family)
            << ',' << num(r.spec.kernel.shape) << ',' << function_tag(r.spec.function) << ','
            << (r.spec.m_max ? std::to_string(*r.spec.m_max) : std::string()) << ',' << mode_tag(r.spec.mode) << ','
            << num(r.rmse) << ',' << num(r.max_abs_error) << ',' << num(r.fit_seconds) << ',' << num(r.eval_seconds)
            << ',' << num(r.total_seconds) << ',' << r.warn_uncovered << ',' << r.warn_ill_conditioned << ','
            << r.warn_empty << '\n';
    }
}

void write_values(std::ostream& out, const std::vector<Point3>& points, const std::vector<double>& values,
                  Format format) {
    if (format == Format::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < points.size(); ++i)
            arr.push_back({{"x", points[i].x}, {"y", points[i].y}, {"z", points[i].z}, {"value", values[i]}});
        nlohmann::ordered_json j;
        j["values"] = std::move(arr);
        out << j.dump(2) << '\n';
        return;
    }
    out << "x,y,z,value\n";
    for (std::size_t i = 0; i < points.size(); ++i)
        out << num(points[i].x) << ',' << num(points[i].y) << ',' << num(points[i].z) << ',' << num(values[i]) << '\n';
}

void write_sweep(std::ostream& out, const SweepResult& sweep, Format format) {
    if (format == Format::json) {
        nlohmann::ordered_json j;
        nlohmann::ordered_json curve = nlohmann::ordered_json::array();
        for (const auto& p : sweep.curve) curve.push_back({{"shape", p.shape}, {"rmse", p.rmse}});
        j["curve"] = std::move(curve);
        j["best_shape"] = sweep.best_shape;
        j["best_rmse"] = sweep.best_rmse;
        out << j.dump(2) << '\n';
        return;
    }
    out << "shape,rmse\n";
    for (const auto& p : sweep.curve) out << num(p.shape) << ',' << num(p.rmse) << '\n';
}

namespace {

struct Output {
    std::ofstream file;
    std::ostream* stream;

    Output(const std::optional<std::string>& path, std::ostream& fallback) : stream(&fallback) {
        if (path) {
            file.open(*path);
            if (!file) throw std::ios_base::failure("cannot open output file '" + *path + "'");
            stream = &file;
        }
    }
    void finish(const std::optional<std::string>& path) {
        stream->flush();
        if (!*stream) throw std::ios_base::failure("write failed" + (path ? " for '" + *path + "'" : std::string()));
    }
};

std::vector<DataSite> node_sites(const PointFile& nodes, const Options& o) {
    if (!nodes.has_values && !o.function_given)
        throw UsageError("node source has no values; give a 4-column file or --function");
    std::vector<DataSite> sites;
    sites.reserve(nodes.points.size());
    for (std::size_t i = 0; i < nodes.points.size(); ++i)
        sites.push_back({nodes.points[i], nodes.has_values ? nodes.values[i] : test_function(o.function, nodes.points[i])});
    return sites;
}

PUConfig fit_config(const Options& o, std::size_t node_count) {
    PUConfig config;
    config.kernel = {o.kernel, *o.shape};
    config.m_max = o.m_max;
    config.search = o.no_cube ? SearchMode::no_cube : SearchMode::cube;
    config.allow_empty = o.allow_empty;
    config.subdomain_count = o.subdomains.value_or(default_subdomains(node_count));
    if (o.centers && *o.centers == "grid") {
        config.center_source = CenterSource::grid;
    } else if (o.centers && *o.centers != "halton") {
        const PointSource src = parse_point_source(*o.centers);
        if (src.kind == PointSource::Kind::halton) {
            config.subdomain_count = src.count;
        } else {
            config.center_source = CenterSource::explicit_list;
            config.centers = resolve(src, 1).points;
            if (!o.subdomains) config.subdomain_count = config.centers.size();
        }
    }
    return config;
}

void report_grid(std::ostream& err, std::size_t d) {
    const GridParams g = grid_from_radius(subdomain_radius(d));
    err << "grid: q=" << g.ceil_q << " (ceil 1/radius), q_used=" << g.q << " (floor)\n";
}

int dispatch(const Options& o, std::ostream& out, std::ostream& err) {
    const PointFile nodes = resolve(parse_point_source(o.nodes), o.halton_start);
    Output sink(o.out, out);

    switch (o.command) {
        case Command::fit: {
            const PUConfig config = fit_config(o, nodes.points.size());
            report_grid(err, config.subdomain_count);
            const PUModel model = fit(node_sites(nodes, o), config);
            const PointFile eval = resolve(parse_point_source(o.eval), o.halton_start);
            EvalStats stats;
            const auto values = model.evaluate_batch(eval.points, &stats);
            if (stats.uncovered) err << "warning: " << stats.uncovered << " evaluation points not covered\n";
            if (model.stats().ill_conditioned)
                err << "warning: " << model.stats().ill_conditioned << " ill-conditioned local systems\n";
            write_values(*sink.stream, eval.points, values, o.format);
            break;
        }
        case Command::bench: {
            if (nodes.has_values) err << "note: file values ignored, sampling --function\n";
            const ExperimentSpec spec = to_experiment_spec(o, nodes.points.size());
            report_grid(err, spec.subdomain_count);
            write_results(*sink.stream, {run_experiment(spec, nodes.points)}, o.format);
            break;
        }
        case Command::sweep: {
            const ExperimentSpec spec = to_experiment_spec(o, nodes.points.size());
            report_grid(err, spec.subdomain_count);
            const SweepResult sweep = sweep_shape(spec, nodes.points);
            err << "best shape " << num(sweep.best_shape) << " rmse " << num(sweep.best_rmse) << '\n';
            write_sweep(*sink.stream, sweep, o.format);
            break;
        }
        case Command::compare_search: {
            ExperimentSpec spec = to_experiment_spec(o, nodes.points.size());
            report_grid(err, spec.subdomain_count);
            spec.mode = SearchMode::cube;
            const ExperimentResult cube = run_experiment(spec, nodes.points);
            spec.mode = SearchMode::no_cube;
            const ExperimentResult brute = run_experiment(spec, nodes.points);
            write_results(*sink.stream, {cube, brute}, o.format);
            const bool same = cube.rmse == brute.rmse && cube.max_abs_error == brute.max_abs_error;
            err << "identical results: " << (same ? "yes" : "NO") << "; t_cube " << num(cube.total_seconds)
                << " s, t_no_cube " << num(brute.total_seconds) << " s, speedup "
                << num(brute.total_seconds / cube.total_seconds) << '\n';
            sink.finish(o.out);
            return same ? kOk : kNumericalFailure;
        }
    }
    sink.finish(o.out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options options;
    try {
        bool help = false;
        try {
            options = parse_args(args, &help);
        } catch (const UsageError& e) {
            if (help) {
                out << e.what();
                return kOk;
            }
            throw;
        }
        return dispatch(options, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace cubepu::cli
