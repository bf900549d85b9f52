#pragma once

// Arrival orders over a fixed family of steps. Time slots and step indices
// are 0-based here: slot t (0-based) corresponds to time t+1.

#include <cstdint>
#include <string>
#include <vector>

namespace odmp {

/// Disjoint, nonempty groups of time slots covering {0, ..., T-1}.
struct Partition {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::string> labels;

    std::size_t horizon() const;
    /// Throws ConfigError when groups overlap, leave a gap, or are empty.
    void validate(std::size_t T) const;
};

/// order[t] is the index of the step arriving in slot t.
struct ArrivalOrder {
    std::vector<std::size_t> order;
    std::string model;
    std::uint64_t seed = 0;
};

enum class PartitionKind { WeekdayWeekend, HalfHalf, KPeriodic };

ArrivalOrder identity_order(std::size_t T);

/// Fisher-Yates shuffle driven by the seeded generator.
ArrivalOrder uniform_permutation(std::size_t T, std::uint64_t seed);

/// Shuffles each group's steps among that group's own slots, one independent
/// stream per group.
ArrivalOrder grouped_permutation(const Partition& partition, std::uint64_t seed);

/// Group 1's steps in ascending order, then group 2's, and so on.
ArrivalOrder batched_order(const Partition& partition);

/// Weekday/weekend: times t with t mod 7 in {1..5} versus the rest.
/// Half/half: t <= T/2 versus the rest. K-periodic: group k (1-based) holds
/// the times t with ((t-1) mod K) + 1 = k.
Partition named_partition(PartitionKind kind, std::size_t T, std::size_t K = 0);

PartitionKind parse_partition_kind(const std::string& name);
const char* partition_kind_name(PartitionKind kind);

bool is_bijection(const std::vector<std::size_t>& order);

}  // namespace odmp
