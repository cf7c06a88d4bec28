#include "mmsde/path_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmsde {
namespace {

using json = nlohmann::json;

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

StepPath assemble(const std::vector<double>& times, const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("path input: no data rows");
    }
    const auto d = static_cast<Eigen::Index>(rows.front().size());
    Matrix values(d, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (static_cast<Eigen::Index>(rows[k].size()) != d) {
            throw std::invalid_argument("path input: inconsistent dimension at row " +
                                        std::to_string(k));
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            values(i, static_cast<Eigen::Index>(k)) = rows[k][static_cast<std::size_t>(i)];
        }
    }
    return StepPath(Partition(times), std::move(values));
}

std::vector<double> point_values(const StepPath& path, std::size_t k) {
    std::vector<double> v(static_cast<std::size_t>(path.dimension()));
    for (int i = 0; i < path.dimension(); ++i) {
        v[static_cast<std::size_t>(i)] = path.values()(i, static_cast<Eigen::Index>(k));
    }
    return v;
}

void write_value_columns(std::ostream& out, const StepPath& path, std::size_t k) {
    out << format_real(path.time(k));
    for (int i = 0; i < path.dimension(); ++i) {
        out << ',' << format_real(path.values()(i, static_cast<Eigen::Index>(k)));
    }
    out << '\n';
}

std::string value_header(int d) {
    std::string header = "time";
    for (int i = 1; i <= d; ++i) {
        header += ",v_" + std::to_string(i);
    }
    return header;
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "csv") {
        return Format::csv;
    }
    if (name == "jsonl") {
        return Format::jsonl;
    }
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv|jsonl)");
}

Format format_for_file(const std::string& filename) {
    const auto ends_with = [&](std::string_view suffix) {
        return filename.size() >= suffix.size() &&
               filename.compare(filename.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends_with(".jsonl") || ends_with(".json") ? Format::jsonl : Format::csv;
}

std::string format_real(double value) {
    std::array<char, 32> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_real: conversion failed");
    }
    return std::string(buffer.data(), end);
}

double parse_real(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::invalid_argument("parse_real: not a number: '" + std::string(text) + "'");
    }
    return value;
}

void write_path_csv(std::ostream& out, const StepPath& path) {
    out << value_header(path.dimension()) << '\n';
    for (std::size_t k = 0; k < path.size(); ++k) {
        write_value_columns(out, path, k);
    }
}

StepPath read_path_csv(std::istream& in) {
    std::string line;
    bool header_seen = false;
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (text.substr(0, 4) == "time") {
                continue;
            }
        }
        const auto fields = split(text, ',');
        if (fields.size() < 2) {
            throw std::invalid_argument("path csv: need time and at least one value column");
        }
        times.push_back(parse_real(fields[0]));
        std::vector<double> row;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.push_back(parse_real(fields[i]));
        }
        rows.push_back(std::move(row));
    }
    return assemble(times, rows);
}

void write_path_jsonl(std::ostream& out, const StepPath& path) {
    for (std::size_t k = 0; k < path.size(); ++k) {
        out << json{{"t", path.time(k)}, {"v", point_values(path, k)}}.dump() << '\n';
    }
}

StepPath read_path_jsonl(std::istream& in) {
    std::string line;
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        try {
            const json record = json::parse(line);
            times.push_back(record.at("t").get<double>());
            rows.push_back(record.at("v").get<std::vector<double>>());
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("read_path_jsonl: ") + e.what());
        }
    }
    return assemble(times, rows);
}

void write_path(std::ostream& out, const StepPath& path, Format format) {
    format == Format::csv ? write_path_csv(out, path) : write_path_jsonl(out, path);
}

StepPath read_path(std::istream& in, Format format) {
    return format == Format::csv ? read_path_csv(in) : read_path_jsonl(in);
}

const StepPath& LabelledPaths::at(const std::string& label) const {
    for (const auto& [name, path] : paths) {
        if (name == label) {
            return path;
        }
    }
    throw std::out_of_range("LabelledPaths: no component '" + label + "'");
}

void write_labelled(std::ostream& out, const LabelledPaths& table, Format format) {
    if (format == Format::csv) {
        for (const auto& [key, value] : table.metadata) {
            out << "# " << key << '=' << value << '\n';
        }
        const int d = table.paths.empty() ? 1 : table.paths.front().second.dimension();
        out << "component," << value_header(d) << '\n';
        for (const auto& [label, path] : table.paths) {
            for (std::size_t k = 0; k < path.size(); ++k) {
                out << label << ',';
                write_value_columns(out, path, k);
            }
        }
        return;
    }
    if (!table.metadata.empty()) {
        out << json{{"meta", table.metadata}}.dump() << '\n';
    }
    for (const auto& [label, path] : table.paths) {
        for (std::size_t k = 0; k < path.size(); ++k) {
            out << json{{"component", label}, {"t", path.time(k)}, {"v", point_values(path, k)}}.dump()
                << '\n';
        }
    }
}

LabelledPaths read_labelled(std::istream& in, Format format) {
    LabelledPaths table;
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::vector<double>, std::vector<std::vector<double>>>> data;
    const auto add_row = [&](const std::string& label, double t, std::vector<double> v) {
        if (!data.contains(label)) {
            order.push_back(label);
        }
        auto& [times, rows] = data[label];
        times.push_back(t);
        rows.push_back(std::move(v));
    };
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        const auto text = trim(line);
        if (text.empty()) {
            continue;
        }
        if (format == Format::csv) {
            if (text.front() == '#') {
                const auto body = trim(text.substr(1));
                const auto eq = body.find('=');
                if (eq != std::string_view::npos) {
                    table.metadata[std::string(body.substr(0, eq))] = std::string(body.substr(eq + 1));
                }
                continue;
            }
            if (!header_seen) {
                header_seen = true;
                continue;
            }
            const auto fields = split(text, ',');
            if (fields.size() < 3) {
                throw std::invalid_argument("labelled csv: need component, time, values");
            }
            std::vector<double> v;
            for (std::size_t i = 2; i < fields.size(); ++i) {
                v.push_back(parse_real(fields[i]));
            }
            add_row(std::string(fields[0]), parse_real(fields[1]), std::move(v));
        } else {
            const json record = json::parse(text);
            if (record.contains("meta")) {
                table.metadata = record.at("meta").get<Metadata>();
                continue;
            }
            add_row(record.at("component").get<std::string>(), record.at("t").get<double>(),
                    record.at("v").get<std::vector<double>>());
        }
    }
    for (const auto& label : order) {
        const auto& [times, rows] = data.at(label);
        table.paths.emplace_back(label, assemble(times, rows));
    }
    return table;
}

}  // namespace mmsde
