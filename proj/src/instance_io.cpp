#include "odmp/instance_io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odmp/config.hpp"
#include "odmp/errors.hpp"

namespace odmp {

using nlohmann::json;

namespace {

constexpr char kMagic[] = "ODMPBIN1";

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw IoError(std::string("bad field '") + key + "': " + e.what());
    }
}

json header_of(const Instance& inst) {
    return {{"format", "odmp-instance"},
            {"version", kInstanceFormatVersion},
            {"family", inst.family},
            {"m", inst.dim()},
            {"T", inst.horizon()},
            {"seed", inst.seed},
            {"config", inst.config},
            {"goal", goal_to_json(inst.goal)},
            {"constants", constants_to_json(inst.constants)},
            {"notes", inst.notes}};
}

Instance from_header(const json& h) {
    if (field<std::string>(h, "format") != "odmp-instance") throw IoError("not an instance file");
    if (field<int>(h, "version") != kInstanceFormatVersion)
        throw IoError("unsupported instance format version " + h.at("version").dump());
    Instance inst{.family = field<std::string>(h, "family"),
                  .steps = {},
                  .goal = goal_from_json(h.at("goal")),
                  .constants = constants_from_json(h.at("constants")),
                  .seed = field<std::uint64_t>(h, "seed"),
                  .config = h.value("config", json::object()),
                  .notes = h.value("notes", json::object())};
    return inst;
}

void check_loaded(const Instance& inst, const json& h) {
    if (inst.horizon() != field<std::size_t>(h, "T")) throw IoError("instance file is truncated");
    for (const LocalStep& s : inst.steps) {
        validate(s);
        if (impact_dim(s) != inst.dim()) throw IoError("step impact dimension differs from the goal");
    }
}

// Little-endian packing independent of the host byte order.
class Writer {
public:
    void u64(std::uint64_t v) {
        for (int k = 0; k < 8; ++k) out_.push_back(char((v >> (8 * k)) & 0xff));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void vec(const Vec& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }
    void bytes(const std::string& s) { out_ += s; }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& in) : in_(in) {}
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= std::uint64_t(static_cast<unsigned char>(in_[pos_ + k])) << (8 * k);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    Vec vec() {
        const std::uint64_t n = u64();
        if (n > (in_.size() - pos_) / 8) throw IoError("packed instance: vector length exceeds file size");
        Vec v(n);
        for (double& x : v) x = f64();
        return v;
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw IoError("packed instance is truncated");
    }
    const std::string& in_;
    std::size_t pos_ = 0;
};

enum : std::uint64_t { kKnapsack = 0, kAssortment = 1, kAssignment = 2 };

}  // namespace

json goal_to_json(const GoalSpec& goal) {
    return std::visit(
        [](const auto& g) -> json {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, BoxGoal>) {
                return {{"kind", "box"}, {"lower", g.lower}, {"upper", g.upper}};
            } else if constexpr (std::is_same_v<G, MaxMinGapGoal>) {
                return {{"kind", "max_min_gap"}, {"m", g.m}, {"rho", g.rho}, {"nonneg", g.nonneg}};
            } else {
                return {{"kind", "boxed"}, {"inner", goal_to_json(*g.inner)}, {"y_lower", g.y_lower},
                        {"y_upper", g.y_upper}};
            }
        },
        goal.variant());
}

GoalSpec goal_from_json(const json& j) {
    const std::string kind = field<std::string>(j, "kind");
    if (kind == "box") return GoalSpec::box(field<Vec>(j, "lower"), field<Vec>(j, "upper"));
    if (kind == "max_min_gap")
        return GoalSpec::max_min_gap(field<std::size_t>(j, "m"), field<double>(j, "rho"), field<bool>(j, "nonneg"));
    if (kind == "boxed")
        return GoalSpec::boxed(goal_from_json(j.at("inner")), field<Vec>(j, "y_lower"), field<Vec>(j, "y_upper"));
    throw ConfigError("unknown goal kind '" + kind + "'");
}

json constants_to_json(const InstanceConstants& c) {
    return {{"d_y", c.d_y}, {"d_r", c.d_r}, {"d_lower", c.d_lower}, {"m", c.m}};
}

InstanceConstants constants_from_json(const json& j) {
    InstanceConstants c{field<double>(j, "d_y"), field<double>(j, "d_r"), field<double>(j, "d_lower"),
                        field<std::size_t>(j, "m")};
    c.validate();
    return c;
}

json step_to_json(const LocalStep& step) {
    return std::visit(
        [](const auto& s) -> json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, KnapsackStep>) {
                json j = {{"kind", "knapsack"}, {"m", s.m},         {"weights", s.weights},
                          {"capacity", s.capacity}, {"utility", s.utility}};
                if (!s.profit.empty()) j["profit"] = s.profit;
                return j;
            } else if constexpr (std::is_same_v<S, AssortmentStep>) {
                return {{"kind", "assortment"}, {"revenue", s.revenue}, {"pref", s.pref},
                        {"cap", s.cap},         {"type", s.type_id}};
            } else {
                return {{"kind", "assignment"}, {"m", s.m},
                        {"n", s.n},             {"profit", s.profit},
                        {"workload", s.workload}};
            }
        },
        step);
}

LocalStep step_from_json(const json& j) {
    const std::string kind = field<std::string>(j, "kind");
    LocalStep out;
    if (kind == "knapsack") {
        KnapsackStep s;
        s.m = field<std::size_t>(j, "m");
        s.weights = field<Vec>(j, "weights");
        s.capacity = field<double>(j, "capacity");
        s.utility = field<Vec>(j, "utility");
        if (j.contains("profit")) s.profit = field<Vec>(j, "profit");
        out = std::move(s);
    } else if (kind == "assortment") {
        out = AssortmentStep{field<Vec>(j, "revenue"), field<Vec>(j, "pref"), field<std::size_t>(j, "cap"),
                             field<std::size_t>(j, "type")};
    } else if (kind == "assignment") {
        out = AssignmentStep{field<std::size_t>(j, "m"), field<std::size_t>(j, "n"), field<Vec>(j, "profit"),
                             field<Vec>(j, "workload")};
    } else {
        throw IoError("unknown step kind '" + kind + "'");
    }
    validate(out);
    return out;
}

json partition_to_json(const Partition& p) { return {{"groups", p.groups}, {"labels", p.labels}}; }

Partition partition_from_json(const json& j) {
    Partition p;
    p.groups = field<std::vector<std::vector<std::size_t>>>(j, "groups");
    p.labels = j.value("labels", std::vector<std::string>{});
    p.validate(p.horizon());
    return p;
}

std::string instance_to_text(const Instance& inst) {
    std::string out = header_of(inst).dump();
    out += '\n';
    for (const LocalStep& s : inst.steps) {
        out += step_to_json(s).dump();
        out += '\n';
    }
    return out;
}

Instance instance_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty instance file");
    try {
        const json h = json::parse(line);
        Instance inst = from_header(h);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            inst.steps.push_back(step_from_json(json::parse(line)));
        }
        check_loaded(inst, h);
        return inst;
    } catch (const json::parse_error& e) {
        throw IoError(std::string("corrupt instance file: ") + e.what());
    }
}

std::string instance_to_binary(const Instance& inst) {
    Writer w;
    w.bytes(std::string(kMagic, 8));
    const std::string header = header_of(inst).dump();
    w.u64(header.size());
    w.bytes(header);
    for (const LocalStep& step : inst.steps) {
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, KnapsackStep>) {
                    w.u64(kKnapsack);
                    w.u64(s.m);
                    w.f64(s.capacity);
                    w.vec(s.weights);
                    w.vec(s.utility);
                    w.vec(s.profit);
                } else if constexpr (std::is_same_v<S, AssortmentStep>) {
                    w.u64(kAssortment);
                    w.u64(s.cap);
                    w.u64(s.type_id);
                    w.vec(s.revenue);
                    w.vec(s.pref);
                } else {
                    w.u64(kAssignment);
                    w.u64(s.m);
                    w.u64(s.n);
                    w.vec(s.profit);
                    w.vec(s.workload);
                }
            },
            step);
    }
    return w.take();
}

Instance instance_from_binary(const std::string& bytes) {
    Reader r(bytes);
    if (r.bytes(8) != std::string(kMagic, 8)) throw IoError("not a packed instance file");
    const std::uint64_t hlen = r.u64();
    if (hlen > bytes.size()) throw IoError("packed instance: header length exceeds file size");
    json h;
    try {
        h = json::parse(r.bytes(hlen));
    } catch (const json::parse_error& e) {
        throw IoError(std::string("corrupt packed header: ") + e.what());
    }
    Instance inst = from_header(h);
    while (!r.done()) {
        const std::uint64_t kind = r.u64();
        if (kind == kKnapsack) {
            KnapsackStep s;
            s.m = r.u64();
            s.capacity = r.f64();
            s.weights = r.vec();
            s.utility = r.vec();
            s.profit = r.vec();
            inst.steps.emplace_back(std::move(s));
        } else if (kind == kAssortment) {
            AssortmentStep s;
            s.cap = r.u64();
            s.type_id = r.u64();
            s.revenue = r.vec();
            s.pref = r.vec();
            inst.steps.emplace_back(std::move(s));
        } else if (kind == kAssignment) {
            AssignmentStep s;
            s.m = r.u64();
            s.n = r.u64();
            s.profit = r.vec();
            s.workload = r.vec();
            inst.steps.emplace_back(std::move(s));
        } else {
            throw IoError("packed instance: unknown step kind " + std::to_string(kind));
        }
    }
    check_loaded(inst, h);
    return inst;
}

std::string instance_hash(const Instance& inst) { return fnv1a_hex(instance_to_text(inst)); }

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + tmp.string());
        f.write(content.data(), std::streamsize(content.size()));
        if (!f) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void save_instance(const Instance& inst, const std::string& path, bool binary) {
    write_file_atomic(path, binary ? instance_to_binary(inst) : instance_to_text(inst));
}

Instance load_instance(const std::string& path) {
    const std::string bytes = read_file(path);
    if (bytes.compare(0, 8, kMagic, 8) == 0) return instance_from_binary(bytes);
    return instance_from_text(bytes);
}

}  // namespace odmp
