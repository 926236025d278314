#ifndef NCEMU_CORE_HPP
#define NCEMU_CORE_HPP

#include <array>
#include <bitset>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ncemu/errors.hpp"

namespace ncemu {

inline constexpr int kMaxAxons = 256;
inline constexpr int kMaxNeurons = 256;
inline constexpr int kNumAxonTypes = 4;
inline constexpr int kSchedulerSlots = 16;
inline constexpr int kMinDelay = 1;
inline constexpr int kMaxDelay = 15;
inline constexpr int kWeightMin = -256;
inline constexpr int kWeightMax = 255;

/* Membrane potentials are wide integers with an explicit saturation bound;
 * hardware bit-width emulation is out of scope. */
inline constexpr std::int64_t kPotentialBound =
    std::numeric_limits<std::int32_t>::max();

using AxonSet = std::bitset<kMaxAxons>;
using NeuronSet = std::bitset<kMaxNeurons>;

enum class PosReset { Linear, Zero };       // after firing: V -= alpha, or V = 0
enum class NegComparison { Strict, Inclusive };  // trigger on V < -beta, or V <= -beta
enum class NegAction { Zero, Saturate };    // on trigger: V = 0, or V = -beta

struct SpikeDest {
    int dx = 0;       // east positive
    int dy = 0;       // north positive
    int axon = 0;     // target axon index at the destination core
    int delay = 1;    // delivery ticks, 1..15
};

struct NeuronParams {
    int alpha = 1;                        // positive threshold, >= 1
    int beta = 0;                         // negative threshold magnitude (threshold is -beta)
    int leak = 0;                         // added every tick
    std::array<int, kNumAxonTypes> weights{};  // indexed by axon type
    PosReset pos_reset = PosReset::Linear;
    NegComparison neg_comparison = NegComparison::Strict;
    NegAction neg_action = NegAction::Zero;
    std::optional<SpikeDest> dest;
};

struct NeuronState {
    std::int64_t potential = 0;
    bool overflow_flag = false;
};

/* One tick of the neuron update: integrate, leak, positive threshold,
 * negative threshold. At most one fire per tick; under Linear reset any
 * residual above alpha drains on later ticks. Returns whether the neuron
 * fired. Sets overflow_flag when |V| would exceed kPotentialBound. */
inline bool neuron_tick(NeuronState& state, const NeuronParams& params,
                        std::int64_t synaptic_sum) {
    std::int64_t v = state.potential + synaptic_sum + params.leak;
    if (v > kPotentialBound || v < -kPotentialBound) {
        state.overflow_flag = true;
    }
    bool fired = false;
    if (v >= params.alpha) {
        fired = true;
        v = (params.pos_reset == PosReset::Linear) ? v - params.alpha : 0;
    }
    const std::int64_t neg = -static_cast<std::int64_t>(params.beta);
    const bool below = (params.neg_comparison == NegComparison::Strict)
                           ? (v < neg)
                           : (v <= neg);
    if (below) {
        v = (params.neg_action == NegAction::Zero) ? 0 : neg;
    }
    state.potential = v;
    return fired;
}

/* One core's crossbar, axon types, and neuron array (the functional
 * content of the core SRAM). Connectivity is stored per axon as a bitset
 * over neurons. */
struct CoreConfig {
    int num_axons = 0;   // A, 1..256
    int num_neurons = 0; // N, 1..256
    std::vector<int> axon_type;                 // [A], values 0..3
    std::vector<NeuronSet> connectivity;        // [A], bit j set iff axon drives neuron j
    std::vector<NeuronParams> neurons;          // [N]

    bool connected(int axon, int neuron) const {
        return connectivity[static_cast<std::size_t>(axon)].test(
            static_cast<std::size_t>(neuron));
    }
    void connect(int axon, int neuron) {
        connectivity[static_cast<std::size_t>(axon)].set(
            static_cast<std::size_t>(neuron));
    }
};

inline CoreConfig make_core(int num_axons, int num_neurons) {
    CoreConfig core;
    core.num_axons = num_axons;
    core.num_neurons = num_neurons;
    core.axon_type.assign(static_cast<std::size_t>(num_axons), 0);
    core.connectivity.assign(static_cast<std::size_t>(num_axons), NeuronSet{});
    core.neurons.assign(static_cast<std::size_t>(num_neurons), NeuronParams{});
    return core;
}

/* Sum over active connected axons of the neuron's per-type weight. */
inline std::int64_t synaptic_sum(const CoreConfig& core, const AxonSet& active,
                                 int neuron) {
    std::int64_t sum = 0;
    const auto& w = core.neurons[static_cast<std::size_t>(neuron)].weights;
    for (int i = 0; i < core.num_axons; ++i) {
        if (active.test(static_cast<std::size_t>(i)) && core.connected(i, neuron)) {
            sum += w[static_cast<std::size_t>(core.axon_type[static_cast<std::size_t>(i)])];
        }
    }
    return sum;
}

/* 16-slot ring of per-tick axon bitsets. A spike enqueued with delay d at
 * tick t lands in slot (t + d) mod 16 and is drained exactly once, at
 * tick t + d. Duplicate (axon, tick) spikes OR-merge and bump the
 * collision counter. */
class SchedulerBuffer {
public:
    SchedulerBuffer() = default;
    explicit SchedulerBuffer(int num_axons) : num_axons_(num_axons) {}

    void enqueue(int axon, std::uint64_t now, int delay) {
        if (delay < kMinDelay || delay > kMaxDelay) {
            throw DelayOutOfRange("delay " + std::to_string(delay) +
                                  " outside [1, 15]");
        }
        check_axon(axon);
        set_bit(slot_for(now + static_cast<std::uint64_t>(delay)), axon);
    }

    /* Direct slot write used by external injection; bypasses the delay
     * field but must stay inside the ring's horizon. */
    void inject(int axon, std::uint64_t tick, std::uint64_t now) {
        check_axon(axon);
        if (tick < now) {
            throw StaleInjection("injection at tick " + std::to_string(tick) +
                                 " but current tick is " + std::to_string(now));
        }
        if (tick >= now + kSchedulerSlots) {
            throw DelayOutOfRange("injection at tick " + std::to_string(tick) +
                                  " beyond scheduler horizon from tick " +
                                  std::to_string(now));
        }
        set_bit(slot_for(tick), axon);
    }

    AxonSet drain(std::uint64_t now) {
        AxonSet& slot = slot_for(now);
        AxonSet out = slot;
        slot.reset();
        return out;
    }

    bool empty() const {
        for (const auto& s : slots_) {
            if (s.any()) return false;
        }
        return true;
    }

    std::uint64_t collision_count() const { return collisions_; }
    int num_axons() const { return num_axons_; }

private:
    AxonSet& slot_for(std::uint64_t tick) {
        return slots_[tick % kSchedulerSlots];
    }
    void check_axon(int axon) const {
        if (axon < 0 || axon >= num_axons_) {
            throw AxonOutOfRange("axon " + std::to_string(axon) +
                                 " outside [0, " + std::to_string(num_axons_) + ")");
        }
    }
    void set_bit(AxonSet& slot, int axon) {
        if (slot.test(static_cast<std::size_t>(axon))) {
            ++collisions_;
        } else {
            slot.set(static_cast<std::size_t>(axon));
        }
    }

    int num_axons_ = 0;
    std::array<AxonSet, kSchedulerSlots> slots_{};
    std::uint64_t collisions_ = 0;
};

} // namespace ncemu

#endif
