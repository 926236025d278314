#ifndef NCEMU_ENGINE_HPP
#define NCEMU_ENGINE_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ncemu/core.hpp"
#include "ncemu/router.hpp"

namespace ncemu {

struct InputEvent {
    std::uint64_t tick = 0;
    int core_x = 0;
    int core_y = 0;
    int axon = 0;
};

using InputTrace = std::vector<InputEvent>;

/* A spike that left the grid. Totally ordered by
 * (tick, source y, source x, neuron index). */
struct OutputEvent {
    std::uint64_t tick = 0;
    int core_x = 0;
    int core_y = 0;
    int neuron = 0;
    int axon = 0;  // destination axon label carried by the packet
    Edge edge = Edge::East;
    int residual_dx = 0;
    int residual_dy = 0;

    friend bool operator==(const OutputEvent&, const OutputEvent&) = default;
};

using OutputTrace = std::vector<OutputEvent>;

/* Tick-synchronous orchestrator over a full grid. One step runs four
 * phases: inject external spikes for the tick, drain every scheduler,
 * update every neuron, route emitted spikes. Spikes delivered on-grid
 * land in destination schedulers; boundary exits go to the output
 * buffer. Cores are visited in (y, x) order and neurons in index order,
 * so events come out already in canonical order. */
class NetworkState {
public:
    NetworkState() = default;

    NetworkState(GridTopology grid, std::vector<CoreConfig> cores)
        : grid_(grid), cores_(std::move(cores)) {
        if (static_cast<int>(cores_.size()) != grid_.num_cores()) {
            throw DimensionMismatch("expected " + std::to_string(grid_.num_cores()) +
                                    " cores, got " + std::to_string(cores_.size()));
        }
        states_.resize(cores_.size());
        schedulers_.reserve(cores_.size());
        targets_.resize(cores_.size());
        for (std::size_t c = 0; c < cores_.size(); ++c) {
            const CoreConfig& core = cores_[c];
            states_[c].assign(static_cast<std::size_t>(core.num_neurons),
                              NeuronState{});
            schedulers_.emplace_back(core.num_axons);
            // Sparse per-axon target lists; the crossbar stays authoritative.
            auto& tgt = targets_[c];
            tgt.resize(static_cast<std::size_t>(core.num_axons));
            for (int a = 0; a < core.num_axons; ++a) {
                for (int j = 0; j < core.num_neurons; ++j) {
                    if (core.connected(a, j)) {
                        tgt[static_cast<std::size_t>(a)].push_back(
                            static_cast<std::uint16_t>(j));
                    }
                }
            }
        }
    }

    const GridTopology& grid() const { return grid_; }
    std::uint64_t current_tick() const { return tick_; }
    const OutputTrace& output_buffer() const { return output_; }

    const CoreConfig& core(int x, int y) const {
        return cores_[static_cast<std::size_t>(grid_.index(x, y))];
    }
    const std::vector<NeuronState>& neuron_states(int x, int y) const {
        return states_[static_cast<std::size_t>(grid_.index(x, y))];
    }
    const SchedulerBuffer& scheduler(int x, int y) const {
        return schedulers_[static_cast<std::size_t>(grid_.index(x, y))];
    }

    void inject(int core_x, int core_y, int axon, std::uint64_t at_tick) {
        if (!grid_.contains(core_x, core_y)) {
            throw AxonOutOfRange("no core at (" + std::to_string(core_x) + ", " +
                                 std::to_string(core_y) + ")");
        }
        schedulers_[static_cast<std::size_t>(grid_.index(core_x, core_y))].inject(
            axon, at_tick, tick_);
    }

    /* One tick. Injections for this tick must already be in the
     * schedulers (run() handles that from the input trace). Returns the
     * tick's output events, also appended to the output buffer. */
    std::vector<OutputEvent> step() {
        const std::uint64_t t = tick_;
        std::vector<SpikePacket> fired;
        std::vector<OutputEvent> events;
        std::vector<std::int64_t> sums;
        for (int y = 0; y < grid_.height; ++y) {
            for (int x = 0; x < grid_.width; ++x) {
                const std::size_t c = static_cast<std::size_t>(grid_.index(x, y));
                const CoreConfig& core = cores_[c];
                const AxonSet active = schedulers_[c].drain(t);
                sums.assign(static_cast<std::size_t>(core.num_neurons), 0);
                if (active.any()) {
                    for (int a = 0; a < core.num_axons; ++a) {
                        if (!active.test(static_cast<std::size_t>(a))) continue;
                        const int type = core.axon_type[static_cast<std::size_t>(a)];
                        for (std::uint16_t j : targets_[c][static_cast<std::size_t>(a)]) {
                            sums[j] += core.neurons[j].weights[static_cast<std::size_t>(type)];
                        }
                    }
                }
                auto& st = states_[c];
                for (int j = 0; j < core.num_neurons; ++j) {
                    const NeuronParams& p = core.neurons[static_cast<std::size_t>(j)];
                    const bool did_fire =
                        neuron_tick(st[static_cast<std::size_t>(j)], p,
                                    sums[static_cast<std::size_t>(j)]);
                    if (st[static_cast<std::size_t>(j)].overflow_flag) {
                        throw PotentialOverflow(
                            "potential overflow at core (" + std::to_string(x) +
                            ", " + std::to_string(y) + ") neuron " +
                            std::to_string(j) + " tick " + std::to_string(t));
                    }
                    if (did_fire && p.dest) {
                        fired.push_back(SpikePacket{p.dest->dx, p.dest->dy,
                                                    p.dest->axon, p.dest->delay, t,
                                                    x, y, j});
                    }
                }
            }
        }
        for (const SpikePacket& pkt : fired) {
            const RouteResult r = route(grid_, pkt.src_x, pkt.src_y, pkt);
            if (const Delivered* d = std::get_if<Delivered>(&r)) {
                schedulers_[static_cast<std::size_t>(grid_.index(d->x, d->y))]
                    .enqueue(pkt.axon, t, pkt.delay);
            } else {
                const Exited& e = std::get<Exited>(r);
                events.push_back(OutputEvent{t, pkt.src_x, pkt.src_y,
                                             pkt.src_neuron, pkt.axon, e.edge,
                                             e.residual_dx, e.residual_dy});
            }
        }
        output_.insert(output_.end(), events.begin(), events.end());
        ++tick_;
        return events;
    }

private:
    GridTopology grid_;
    std::vector<CoreConfig> cores_;
    std::vector<std::vector<NeuronState>> states_;
    std::vector<SchedulerBuffer> schedulers_;
    std::vector<std::vector<std::vector<std::uint16_t>>> targets_;
    std::uint64_t tick_ = 0;
    OutputTrace output_;
};

/* Batch execution: T steps from the current tick, feeding the (sorted)
 * input trace at the right ticks. Returns the run's output events in
 * canonical order; the network stays inspectable afterwards. */
inline OutputTrace run(NetworkState& net, const InputTrace& inputs,
                       std::uint64_t ticks) {
    std::size_t cursor = 0;
    OutputTrace out;
    const std::uint64_t start = net.current_tick();
    for (std::uint64_t t = start; t < start + ticks; ++t) {
        while (cursor < inputs.size() && inputs[cursor].tick == t) {
            const InputEvent& ev = inputs[cursor];
            net.inject(ev.core_x, ev.core_y, ev.axon, ev.tick);
            ++cursor;
        }
        if (cursor < inputs.size() && inputs[cursor].tick < t) {
            throw StaleInjection("input trace not sorted by tick at entry " +
                                 std::to_string(cursor));
        }
        auto events = net.step();
        out.insert(out.end(), events.begin(), events.end());
    }
    return out;
}

/* Static well-formedness checks over the whole network. Empty result
 * means valid. */
inline std::vector<std::string> validate(const NetworkState& net) {
    std::vector<std::string> diags;
    const GridTopology& grid = net.grid();
    auto at = [](int x, int y, const std::string& what) {
        return "core (" + std::to_string(x) + ", " + std::to_string(y) + "): " + what;
    };
    if (grid.width < 1 || grid.height < 1) {
        diags.push_back("grid dimensions must be at least 1x1");
        return diags;
    }
    if (grid.num_cores() > 4096) {
        diags.push_back("grid exceeds 4096 cores");
    }
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            const CoreConfig& core = net.core(x, y);
            if (core.num_axons < 1 || core.num_axons > kMaxAxons) {
                diags.push_back(at(x, y, "num_axons outside [1, 256]"));
                continue;
            }
            if (core.num_neurons < 1 || core.num_neurons > kMaxNeurons) {
                diags.push_back(at(x, y, "num_neurons outside [1, 256]"));
                continue;
            }
            if (static_cast<int>(core.axon_type.size()) != core.num_axons) {
                diags.push_back(at(x, y, "axon_type length != num_axons"));
                continue;
            }
            if (static_cast<int>(core.connectivity.size()) != core.num_axons) {
                diags.push_back(at(x, y, "connectivity rows != num_axons"));
                continue;
            }
            if (static_cast<int>(core.neurons.size()) != core.num_neurons) {
                diags.push_back(at(x, y, "neuron array length != num_neurons"));
                continue;
            }
            for (int a = 0; a < core.num_axons; ++a) {
                const int type = core.axon_type[static_cast<std::size_t>(a)];
                if (type < 0 || type >= kNumAxonTypes) {
                    diags.push_back(at(x, y, "axon " + std::to_string(a) +
                                              " type outside [0, 3]"));
                }
                for (int j = core.num_neurons; j < kMaxNeurons; ++j) {
                    if (core.connected(a, j)) {
                        diags.push_back(at(x, y, "axon " + std::to_string(a) +
                                                  " drives nonexistent neuron " +
                                                  std::to_string(j)));
                        break;
                    }
                }
            }
            for (int j = 0; j < core.num_neurons; ++j) {
                const NeuronParams& p = core.neurons[static_cast<std::size_t>(j)];
                const std::string who = "neuron " + std::to_string(j);
                if (p.alpha < 1) {
                    diags.push_back(at(x, y, who + ": alpha must be >= 1"));
                }
                if (p.beta < 0) {
                    diags.push_back(at(x, y, who + ": beta must be >= 0"));
                }
                for (int w : p.weights) {
                    if (w < kWeightMin || w > kWeightMax) {
                        diags.push_back(at(x, y, who + ": weight outside [-256, 255]"));
                        break;
                    }
                }
                if (p.dest) {
                    if (p.dest->delay < kMinDelay || p.dest->delay > kMaxDelay) {
                        diags.push_back(at(x, y, who + ": delay out of range [1, 15]"));
                    }
                    if (p.dest->axon < 0 || p.dest->axon >= kMaxAxons) {
                        diags.push_back(at(x, y, who + ": dest axon outside [0, 255]"));
                    } else {
                        const int tx = x + p.dest->dx;
                        const int ty = y + p.dest->dy;
                        if (grid.contains(tx, ty) &&
                            p.dest->axon >= net.core(tx, ty).num_axons) {
                            diags.push_back(
                                at(x, y, who + ": axon exceeds destination core A"));
                        }
                    }
                }
            }
        }
    }
    return diags;
}

} // namespace ncemu

#endif
