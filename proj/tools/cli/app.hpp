#pragma once

#include "bsq/interval.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bsq::cli {

enum class Format { csv, json };

struct RunConfig
{
    std::string command;
    std::string potential;
    std::optional<double> h;
    std::vector<double> h_sweep;
    std::optional<Interval> window;
    int order = 2;
    int grid_n = 4000;
    std::optional<Interval> domain;
    std::optional<Interval> search;
    std::optional<double> energy;
    std::optional<int> points;
    int samples = 5;
    std::string correction = "none";  // wkb-residual phase correction: none | arc | spatial
    Format format = Format::csv;
    std::string out;

    // Key/value view used for the provenance header.
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

// Thrown for malformed flags, config files and invariant violations.
struct UsageError
{
    std::string message;
};

// `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Merged key/value settings to a validated RunConfig.
RunConfig make_config(const std::string& command, const std::map<std::string, std::string>& settings);

// Full command line entry point. Output goes to cfg.out or `out`;
// diagnostics go to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string format_double(double v);

} // namespace bsq::cli
