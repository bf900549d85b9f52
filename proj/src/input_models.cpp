#include "odmp/input_models.hpp"

#include <algorithm>
#include <numeric>

#include "odmp/errors.hpp"
#include "odmp/rng.hpp"

namespace odmp {

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

std::size_t Partition::horizon() const {
    std::size_t T = 0;
    for (const auto& g : groups) T += g.size();
    return T;
}

void Partition::validate(std::size_t T) const {
    if (groups.empty()) throw ConfigError("partition: no groups");
    std::vector<char> seen(T, 0);
    std::size_t count = 0;
    for (const auto& g : groups) {
        if (g.empty()) throw ConfigError("partition: empty group");
        for (std::size_t t : g) {
            if (t >= T) throw ConfigError("partition: slot outside the horizon");
            if (seen[t]) throw ConfigError("partition: groups overlap");
            seen[t] = 1;
            ++count;
        }
    }
    if (count != T) throw ConfigError("partition: groups do not cover the horizon");
}

ArrivalOrder identity_order(std::size_t T) {
    ArrivalOrder a{std::vector<std::size_t>(T), "identity", 0};
    std::iota(a.order.begin(), a.order.end(), std::size_t{0});
    return a;
}

ArrivalOrder uniform_permutation(std::size_t T, std::uint64_t seed) {
    if (T == 0) throw ConfigError("uniform_permutation: T must be >= 1");
    ArrivalOrder a = identity_order(T);
    Rng rng(seed, 0);
    shuffle(a.order, rng);
    a.model = "uniform";
    a.seed = seed;
    return a;
}

ArrivalOrder grouped_permutation(const Partition& partition, std::uint64_t seed) {
    const std::size_t T = partition.horizon();
    partition.validate(T);
    ArrivalOrder a{std::vector<std::size_t>(T), "grouped", seed};
    for (std::size_t k = 0; k < partition.groups.size(); ++k) {
        std::vector<std::size_t> slots = partition.groups[k];
        std::sort(slots.begin(), slots.end());
        std::vector<std::size_t> items = slots;
        Rng rng(seed, k + 1);
        shuffle(items, rng);
        for (std::size_t j = 0; j < slots.size(); ++j) a.order[slots[j]] = items[j];
    }
    return a;
}

ArrivalOrder batched_order(const Partition& partition) {
    const std::size_t T = partition.horizon();
    partition.validate(T);
    ArrivalOrder a{{}, "batched", 0};
    a.order.reserve(T);
    for (const auto& g : partition.groups) {
        std::vector<std::size_t> items = g;
        std::sort(items.begin(), items.end());
        a.order.insert(a.order.end(), items.begin(), items.end());
    }
    return a;
}

Partition named_partition(PartitionKind kind, std::size_t T, std::size_t K) {
    if (T == 0) throw ConfigError("named_partition: T must be >= 1");
    Partition p;
    switch (kind) {
        case PartitionKind::WeekdayWeekend: {
            p.groups.resize(2);
            p.labels = {"weekday", "weekend"};
            for (std::size_t t = 1; t <= T; ++t) {
                const std::size_t r = t % 7;
                p.groups[(r >= 1 && r <= 5) ? 0 : 1].push_back(t - 1);
            }
            break;
        }
        case PartitionKind::HalfHalf: {
            p.groups.resize(2);
            p.labels = {"first_half", "second_half"};
            for (std::size_t t = 1; t <= T; ++t) p.groups[2 * t <= T ? 0 : 1].push_back(t - 1);
            break;
        }
        case PartitionKind::KPeriodic: {
            if (K == 0 || K > T) throw ConfigError("named_partition: k_periodic needs 1 <= K <= T");
            p.groups.resize(K);
            for (std::size_t k = 1; k <= K; ++k) p.labels.push_back("residue_" + std::to_string(k));
            for (std::size_t t = 1; t <= T; ++t) p.groups[(t - 1) % K].push_back(t - 1);
            break;
        }
    }
    for (const auto& g : p.groups)
        if (g.empty())
            throw ConfigError(std::string("named_partition: ") + partition_kind_name(kind) +
                              " leaves a group empty for T = " + std::to_string(T));
    return p;
}

PartitionKind parse_partition_kind(const std::string& name) {
    if (name == "weekday_weekend") return PartitionKind::WeekdayWeekend;
    if (name == "half_half") return PartitionKind::HalfHalf;
    if (name == "k_periodic") return PartitionKind::KPeriodic;
    throw ConfigError("unknown partition kind '" + name + "'");
}

const char* partition_kind_name(PartitionKind kind) {
    switch (kind) {
        case PartitionKind::WeekdayWeekend:
            return "weekday_weekend";
        case PartitionKind::HalfHalf:
            return "half_half";
        case PartitionKind::KPeriodic:
            return "k_periodic";
    }
    return "?";
}

bool is_bijection(const std::vector<std::size_t>& order) {
    std::vector<char> seen(order.size(), 0);
    for (std::size_t v : order) {
        if (v >= order.size() || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

}  // namespace odmp
