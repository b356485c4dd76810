#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>

#include "json.hpp"

#include "dcopt/bench.hpp"
#include "dcopt/errors.hpp"

namespace dcopt::bench {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// minimal CSV quoting, needed only for free-text fields
std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_config_comments(std::ostream& out, const ExperimentConfig& config) {
    for (const auto& [key, value] : config.to_kv())
        out << "# " << key << "=" << value << "\n";
}

json config_json(const ExperimentConfig& config) {
    json j = json::object();
    for (const auto& [key, value] : config.to_kv()) j[key] = value;
    return j;
}

struct Sink {
    std::ofstream file;
    std::ostream* out = nullptr;

    Sink(const std::string& path) {
        if (path.empty()) {
            out = &std::cout;
            return;
        }
        file.open(path);
        if (!file) throw IoError("cannot write '" + path + "'");
        out = &file;
    }

    ~Sink() {
        if (file.is_open()) file.close();
    }

    std::ostream& stream() { return *out; }
};

void check_format(const std::string& format) {
    if (format != "csv" && format != "json")
        throw std::invalid_argument("unknown output format '" + format + "'");
}

void finish(Sink& sink, const std::string& path) {
    sink.stream().flush();
    if (!sink.stream())
        throw IoError("write failed" + (path.empty() ? "" : " for '" + path + "'"));
}

} // namespace

void emit_results(const BasinCensus& census, const ExperimentConfig& config,
                  const std::string& format, const std::string& path) {
    check_format(format);
    Sink sink(path);
    if (format == "csv") {
        write_config_comments(sink.stream(), config);
        sink.stream() << "cp_x,cp_y,dca_count,bdca_count\n";
        for (std::size_t c = 0; c < 4; ++c)
            sink.stream() << format_double(census.points[c][0]) << ","
                          << format_double(census.points[c][1]) << ","
                          << census.dca_counts[c] << "," << census.bdca_counts[c]
                          << "\n";
    } else {
        json j;
        j["config"] = config_json(config);
        j["starts"] = census.starts;
        j["max_snap_distance"] = census.max_snap_distance;
        j["census"] = json::array();
        for (std::size_t c = 0; c < 4; ++c)
            j["census"].push_back({{"cp_x", census.points[c][0]},
                                   {"cp_y", census.points[c][1]},
                                   {"dca_count", census.dca_counts[c]},
                                   {"bdca_count", census.bdca_counts[c]}});
        sink.stream() << j.dump(2) << "\n";
    }
    finish(sink, path);
}

void emit_results(const std::vector<ComparisonRow>& rows,
                  const ExperimentConfig& config, const std::string& format,
                  const std::string& path) {
    check_format(format);
    Sink sink(path);
    if (format == "csv") {
        write_config_comments(sink.stream(), config);
        sink.stream() << "instance,dca_time,bdca_time,dca_iters,bdca_iters,"
                         "phi_dca,phi_bdca,dca_failed,error\n";
        for (const ComparisonRow& row : rows)
            sink.stream() << csv_escape(row.instance) << ","
                          << format_double(row.dca_time) << ","
                          << format_double(row.bdca_time) << "," << row.dca_iters
                          << "," << row.bdca_iters << ","
                          << format_double(row.phi_dca) << ","
                          << format_double(row.phi_bdca) << ","
                          << (row.dca_failed ? 1 : 0) << ","
                          << csv_escape(row.error) << "\n";
    } else {
        json j;
        j["config"] = config_json(config);
        j["rows"] = json::array();
        for (const ComparisonRow& row : rows)
            j["rows"].push_back({{"instance", row.instance},
                                 {"dca_time", row.dca_time},
                                 {"bdca_time", row.bdca_time},
                                 {"dca_iters", row.dca_iters},
                                 {"bdca_iters", row.bdca_iters},
                                 {"phi_dca", row.phi_dca},
                                 {"phi_bdca", row.phi_bdca},
                                 {"dca_failed", row.dca_failed},
                                 {"error", row.error}});
        sink.stream() << j.dump(2) << "\n";
    }
    finish(sink, path);
}

void emit_results(const Trace& trace, const ExperimentConfig& config,
                  const std::string& format, const std::string& path) {
    check_format(format);
    Sink sink(path);
    if (format == "csv") {
        write_config_comments(sink.stream(), config);
        sink.stream() << "k,phi_x,phi_y,d_norm,lambda_bar,lambda,backtracks,"
                         "elapsed\n";
        for (const IterationRecord& rec : trace)
            sink.stream() << rec.k << "," << format_double(rec.phi_x) << ","
                          << format_double(rec.phi_y) << ","
                          << format_double(rec.d_norm) << ","
                          << format_double(rec.lambda_bar) << ","
                          << format_double(rec.lambda) << "," << rec.backtracks
                          << "," << format_double(rec.elapsed) << "\n";
    } else {
        json j;
        j["config"] = config_json(config);
        j["trace"] = json::array();
        for (const IterationRecord& rec : trace)
            j["trace"].push_back({{"k", rec.k},
                                  {"phi_x", rec.phi_x},
                                  {"phi_y", rec.phi_y},
                                  {"d_norm", rec.d_norm},
                                  {"lambda_bar", rec.lambda_bar},
                                  {"lambda", rec.lambda},
                                  {"backtracks", rec.backtracks},
                                  {"elapsed", rec.elapsed}});
        sink.stream() << j.dump(2) << "\n";
    }
    finish(sink, path);
}

} // namespace dcopt::bench
