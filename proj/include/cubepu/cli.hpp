#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cubepu/bench.hpp"
#include "cubepu/geometry.hpp"

namespace cubepu::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInputError = 2, kNumericalFailure = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `halton:<n>`, `grid:<side>` or `file:<path>`.
struct PointSource {
    enum class Kind { halton, grid, file };
    Kind kind = Kind::halton;
    std::size_t count = 0;  ///< n for halton, side for grid
    std::string path;
};

/// Throws UsageError on a malformed specifier.
[[nodiscard]] PointSource parse_point_source(std::string_view text);

/// Parsed point file: three columns give positions only, four add values.
struct PointFile {
    std::vector<Point3> points;
    std::vector<double> values;
    bool has_values = false;
};

/// Rows `x y z [f]`, whitespace- or comma-separated. Blank lines and lines starting
/// with `#` are skipped, as is a leading `x,y,z[,value]` header. Throws ParseError
/// (with the 1-based line number) for non-numeric fields, coordinates outside the
/// unit cube and mixed row arity.
[[nodiscard]] PointFile read_points(const std::string& path);
[[nodiscard]] PointFile read_points(std::istream& in);

/// Resolves a source to positions (and values for a 4-column file).
[[nodiscard]] PointFile resolve(const PointSource& source, std::uint64_t halton_start = 1);

/// `floor((cbrt(n) - 1) / 2)^3`, i.e. d = 8^(k-1) for n = (2^k + 1)^3; at least 1.
[[nodiscard]] std::size_t default_subdomains(std::size_t n);

enum class Command { fit, bench, sweep, compare_search };
enum class Format { csv, json };

struct Options {
    Command command = Command::bench;
    std::string nodes = "halton:4913";
    std::optional<std::string> centers;
    std::string eval = "grid:11";
    TestFunction function = TestFunction::f1;
    bool function_given = false;
    KernelFamily kernel = KernelFamily::gaussian;
    std::optional<double> shape;
    std::optional<ShapeRange> shape_range;
    std::optional<std::size_t> subdomains;
    std::optional<std::size_t> m_max;
    bool no_cube = false;
    bool allow_empty = false;
    std::uint64_t halton_start = 1;
    std::optional<std::string> out;
    Format format = Format::csv;
};

/// `min:max:count`; throws UsageError.
[[nodiscard]] ShapeRange parse_shape_range(std::string_view text);

/// argv without the program name. Throws UsageError; `--help` throws UsageError
/// whose message is the help text and sets `help` when provided.
[[nodiscard]] Options parse_args(const std::vector<std::string>& args, bool* help = nullptr);

/// Options for `bench`/`sweep`/`compare-search` as an experiment (node source is
/// resolved separately).
[[nodiscard]] ExperimentSpec to_experiment_spec(const Options& options, std::size_t node_count);

inline constexpr std::string_view kResultHeader =
    "n,d,q,kernel,shape,function,mmax,mode,rmse,max_err,fit_s,eval_s,total_s,warn_uncovered,warn_illcond,"
    "warn_empty";

void write_results(std::ostream& out, const std::vector<ExperimentResult>& results, Format format);
void write_values(std::ostream& out, const std::vector<Point3>& points, const std::vector<double>& values,
                  Format format);
void write_sweep(std::ostream& out, const SweepResult& sweep, Format format);

/// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cubepu::cli
