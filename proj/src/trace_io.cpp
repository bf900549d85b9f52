#include "odmp/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "odmp/errors.hpp"

namespace odmp {

using nlohmann::json;

namespace {

// Shortest representation that parses back to the same double.
void put(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

double parse_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("trace CSV line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

std::string metrics_to_csv(const MetricSeries& s) {
    std::string out = kTraceCsvHeader;
    out += '\n';
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += std::to_string(s.t[k]);
        for (double v : {s.reward_avg[k], s.goalvio_avg[k], s.p_norm[k], s.eta.empty() ? 0.0 : s.eta[k]}) {
            out += ',';
            put(out, v);
        }
        out += '\n';
    }
    return out;
}

MetricSeries metrics_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader) throw IoError("trace CSV has an unexpected header");
    MetricSeries s;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) throw IoError("trace CSV line " + std::to_string(lineno) + ": expected 5 columns");
        const double t = parse_double(cells[0], lineno);
        if (t < 1.0 || t != double(std::size_t(t)))
            throw IoError("trace CSV line " + std::to_string(lineno) + ": bad step index");
        s.t.push_back(std::size_t(t));
        s.reward_avg.push_back(parse_double(cells[1], lineno));
        s.goalvio_avg.push_back(parse_double(cells[2], lineno));
        s.p_norm.push_back(parse_double(cells[3], lineno));
        s.eta.push_back(parse_double(cells[4], lineno));
    }
    if (s.t.empty()) throw IoError("trace CSV has no rows");
    return s;
}

std::string aggregate_to_csv(const AggregateSeries& a) {
    std::string out =
        "t,reward_avg_mean,reward_avg_min,reward_avg_max,goalvio_avg_mean,goalvio_avg_min,goalvio_avg_max,"
        "p_norm_mean,p_norm_min,p_norm_max\n";
    for (std::size_t k = 0; k < a.t.size(); ++k) {
        out += std::to_string(a.t[k]);
        for (const Band* b : {&a.reward_avg, &a.goalvio_avg, &a.p_norm}) {
            for (double v : {b->mean[k], b->min[k], b->max[k]}) {
                out += ',';
                put(out, v);
            }
        }
        out += '\n';
    }
    return out;
}

json record_to_json(const StepRecord& r) {
    return {{"t", r.t},         {"p", r.p},         {"r", r.r_hat},     {"x", r.x_hat},
            {"y", r.y_hat},     {"v", r.v_hat},     {"eta", r.eta},     {"obj", r.oracle_obj}};
}

StepRecord record_from_json(const json& j) {
    StepRecord r;
    try {
        r.t = j.at("t").get<std::size_t>();
        r.p = j.at("p").get<Vec>();
        r.p_norm = norm2(r.p);
        r.r_hat = j.at("r").get<double>();
        r.x_hat = j.at("x").get<Vec>();
        r.y_hat = j.at("y").get<Vec>();
        r.v_hat = j.at("v").get<Vec>();
        r.eta = j.at("eta").get<double>();
        r.oracle_obj = j.at("obj").get<double>();
    } catch (const json::exception& e) {
        throw IoError(std::string("corrupt step record: ") + e.what());
    }
    return r;
}

json checkpoint_to_json(const DualState& state, const RunTrace& trace, const std::string& config_hash) {
    json recs = json::array();
    for (const StepRecord& r : trace.records) recs.push_back(record_to_json(r));
    return {{"config_hash", config_hash},
            {"p", state.p},
            {"t", state.t},
            {"cum_y", state.cum_y},
            {"cum_r", state.cum_r},
            {"box_violations", trace.box_violations},
            {"records", std::move(recs)}};
}

Checkpoint checkpoint_from_json(const json& j) {
    Checkpoint c;
    try {
        c.config_hash = j.at("config_hash").get<std::string>();
        c.state.p = j.at("p").get<Vec>();
        c.state.t = j.at("t").get<std::size_t>();
        c.state.cum_y = j.at("cum_y").get<Vec>();
        c.state.cum_r = j.at("cum_r").get<double>();
        c.box_violations = j.at("box_violations").get<std::size_t>();
        for (const json& r : j.at("records")) c.records.push_back(record_from_json(r));
    } catch (const json::exception& e) {
        throw IoError(std::string("corrupt checkpoint: ") + e.what());
    }
    if (c.records.size() + 1 != c.state.t) throw IoError("checkpoint record count does not match its step index");
    return c;
}

}  // namespace odmp
