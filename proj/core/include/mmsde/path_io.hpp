#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mmsde/paths.hpp"

namespace mmsde {

enum class Format { csv, jsonl };

/// "csv" or "jsonl"; throws std::invalid_argument otherwise.
Format parse_format(std::string_view name);
/// Format from a file extension (.csv / .jsonl / .json), csv by default.
Format format_for_file(const std::string& filename);

/// Shortest decimal representation that parses back to the same double.
std::string format_real(double value);
double parse_real(std::string_view text);

/// CSV: header `time,v_1,...,v_d`, one row per grid point.
void write_path_csv(std::ostream& out, const StepPath& path);
StepPath read_path_csv(std::istream& in);

/// JSONL: one `{"t": ..., "v": [...]}` record per grid point.
void write_path_jsonl(std::ostream& out, const StepPath& path);
StepPath read_path_jsonl(std::istream& in);

void write_path(std::ostream& out, const StepPath& path, Format format);
StepPath read_path(std::istream& in, Format format);

using Metadata = std::map<std::string, std::string>;

/// Several labelled paths of one dimension in a single table.
///
/// CSV carries metadata as leading `# key=value` lines followed by the header
/// `component,time,v_1,...,v_d`. JSONL starts with a `{"meta": {...}}` record
/// when metadata is present, then `{"component": ..., "t": ..., "v": [...]}`.
struct LabelledPaths {
    Metadata metadata;
    std::vector<std::pair<std::string, StepPath>> paths;

    const StepPath& at(const std::string& label) const;
};

void write_labelled(std::ostream& out, const LabelledPaths& table, Format format);
LabelledPaths read_labelled(std::istream& in, Format format);

}  // namespace mmsde
