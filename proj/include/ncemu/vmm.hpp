#ifndef NCEMU_VMM_HPP
#define NCEMU_VMM_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncemu/engine.hpp"

namespace ncemu {

using Matrix = std::vector<std::vector<int>>;

/* Signed VMM problem y = v * M, entries in [-255, 255]. */
struct VmmProblem {
    std::vector<int> v;  // length m
    Matrix m;            // m x n
};

inline constexpr int kVmmValueBound = 255;

enum class VmmVariant { Reference, Symmetric };

inline const char* variant_name(VmmVariant v) {
    return v == VmmVariant::Reference ? "reference" : "symmetric";
}

/* Output tap: value neuron for element (row, col) carrying the given
 * product sign, exiting the grid with axon_label. */
struct VmmTap {
    int row = 0;
    int col = 0;
    int sign = 1;  // +1 for P, -1 for N
    int axon_label = 0;
};

struct VmmMapping {
    VmmVariant variant = VmmVariant::Symmetric;
    int rows = 0;  // m
    int cols = 0;  // n
    CoreConfig core;
    std::uint64_t run_length = 0;
    std::vector<VmmTap> taps;
};

struct VmmResources {
    int axons = 0;
    int neurons = 0;
};

/* Resource accounting for both variants of an m x n problem.
 * Symmetric: 4m axons, 2mn neurons. Reference adds one feedback neuron
 * and one feedback axon per value neuron: 4m + 2mn axons, 4mn neurons. */
struct ResourceReport {
    int rows = 0;
    int cols = 0;
    VmmResources symmetric;
    VmmResources reference;
    int feedback_neurons = 0;
    int feedback_axons = 0;
    double axon_reduction_pct = 0.0;
    double neuron_reduction_pct = 0.0;
};

inline ResourceReport resource_report(int m, int n) {
    if (m < 1 || n < 1) {
        throw ValueOutOfRange("matrix dimensions must be >= 1");
    }
    ResourceReport r;
    r.rows = m;
    r.cols = n;
    r.symmetric = {4 * m, 2 * m * n};
    r.reference = {4 * m + 2 * m * n, 4 * m * n};
    r.feedback_neurons = 2 * m * n;
    r.feedback_axons = 2 * m * n;
    r.axon_reduction_pct =
        100.0 * (r.reference.axons - r.symmetric.axons) / r.reference.axons;
    r.neuron_reduction_pct =
        100.0 * (r.reference.neurons - r.symmetric.neurons) / r.reference.neurons;
    return r;
}

/* Input axon layout: 4 axons per row i, offsets
 *   0: in+ w+,  1: in+ w-,  2: in- w+,  3: in- w-
 * and axon type equals the channel offset. Rate code: |v_i| spikes, one
 * per tick starting at tick 1, on both channels of the matching input
 * sign. */
inline InputTrace encode_vector(const std::vector<int>& v, int core_x = 0,
                                int core_y = 0) {
    InputTrace trace;
    std::uint64_t max_mag = 0;
    for (int x : v) {
        if (x < -kVmmValueBound || x > kVmmValueBound) {
            throw ValueOutOfRange("vector entry " + std::to_string(x) +
                                  " outside [-255, 255]");
        }
        max_mag = std::max<std::uint64_t>(max_mag,
                                          static_cast<std::uint64_t>(std::abs(x)));
    }
    for (std::uint64_t t = 1; t <= max_mag; ++t) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int mag = std::abs(v[i]);
            if (static_cast<std::uint64_t>(mag) < t) continue;
            const int base = 4 * static_cast<int>(i) + (v[i] > 0 ? 0 : 2);
            trace.push_back(InputEvent{t, core_x, core_y, base});
            trace.push_back(InputEvent{t, core_x, core_y, base + 1});
        }
    }
    return trace;
}

namespace detail {

inline int max_abs_entry(const Matrix& m) {
    int best = 0;
    for (const auto& row : m) {
        for (int x : row) best = std::max(best, std::abs(x));
    }
    return best;
}

inline void check_matrix(const Matrix& m) {
    if (m.empty() || m.front().empty()) {
        throw DimensionMismatch("matrix must be at least 1x1");
    }
    const std::size_t n = m.front().size();
    for (const auto& row : m) {
        if (row.size() != n) {
            throw DimensionMismatch("ragged matrix rows");
        }
        for (int x : row) {
            if (x < -kVmmValueBound || x > kVmmValueBound) {
                throw ValueOutOfRange("matrix entry " + std::to_string(x) +
                                      " outside [-255, 255]");
            }
        }
    }
}

} // namespace detail

/* Compile an m x n signed matrix onto one core.
 *
 * Both variants allocate value neurons P(i,j) and N(i,j) per element,
 * alpha = 1 with linear reset, so a neuron holding product p drains p
 * spikes at one per tick. Value neuron index is 2*(j*m + i) for P and
 * +1 for N; the exit tap label equals the neuron index.
 *
 * Symmetric: each value neuron listens to the single input channel whose
 * input-sign/weight-sign combination yields its product sign, with
 * weight |M_ij|. The inclusive negative comparison (V <= -beta, beta 0)
 * resets any residual negative potential with no extra hardware.
 *
 * Reference: the strict comparison cannot reset negative potentials, so
 * each value neuron listens to both channels of its weight-sign group
 * (+|M_ij| on the matching one, -|M_ij| on the other, negative threshold
 * parked far below reach) and a feedback neuron per value neuron counts
 * the negative-driving spikes and loops them back through a dedicated
 * feedback axon at weight +1 until the potential is restored to zero. */
inline VmmMapping map_vmm(const Matrix& matrix, VmmVariant variant,
                          int value_bound = kVmmValueBound) {
    detail::check_matrix(matrix);
    const int m = static_cast<int>(matrix.size());
    const int n = static_cast<int>(matrix.front().size());
    const ResourceReport res = resource_report(m, n);
    const VmmResources need =
        variant == VmmVariant::Symmetric ? res.symmetric : res.reference;
    if (need.axons > kMaxAxons) {
        throw DoesNotFitCore(std::string(variant_name(variant)) + " mapping needs " +
                             std::to_string(need.axons) + " axons > 256");
    }
    if (need.neurons > kMaxNeurons) {
        throw DoesNotFitCore(std::string(variant_name(variant)) + " mapping needs " +
                             std::to_string(need.neurons) + " neurons > 256");
    }

    VmmMapping map;
    map.variant = variant;
    map.rows = m;
    map.cols = n;
    map.core = make_core(need.axons, need.neurons);
    CoreConfig& core = map.core;
    for (int i = 0; i < 4 * m; ++i) {
        core.axon_type[static_cast<std::size_t>(i)] = i % 4;  // channel offset
    }

    const int num_value = 2 * m * n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) {
            const int mij = matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const int mag = std::abs(mij);
            const int p_idx = 2 * (j * m + i);
            const int n_idx = p_idx + 1;
            map.taps.push_back(VmmTap{i, j, +1, p_idx});
            map.taps.push_back(VmmTap{i, j, -1, n_idx});
            for (int idx : {p_idx, n_idx}) {
                NeuronParams& p = core.neurons[static_cast<std::size_t>(idx)];
                p.alpha = 1;
                p.leak = 0;
                p.pos_reset = PosReset::Linear;
                p.dest = SpikeDest{1, 0, idx, 1};  // exits east on the 1x1 grid
                if (variant == VmmVariant::Symmetric) {
                    p.beta = 0;
                    p.neg_comparison = NegComparison::Inclusive;
                    p.neg_action = NegAction::Zero;
                } else {
                    p.beta = 1 << 17;  // out of reach; feedback does the restoring
                    p.neg_comparison = NegComparison::Strict;
                    p.neg_action = NegAction::Zero;
                }
            }
            if (mij == 0) continue;  // neurons stay allocated but unconnected

            // Channel offsets for this weight sign: pos_ch yields the
            // positive product, neg_ch the negative one.
            const int pos_ch = mij > 0 ? 0 : 3;  // in+w+ or in-w-
            const int neg_ch = mij > 0 ? 2 : 1;  // in-w+ or in+w-
            const int pos_axon = 4 * i + pos_ch;
            const int neg_axon = 4 * i + neg_ch;

            if (variant == VmmVariant::Symmetric) {
                core.connect(pos_axon, p_idx);
                core.neurons[static_cast<std::size_t>(p_idx)]
                    .weights[static_cast<std::size_t>(pos_ch)] = mag;
                core.connect(neg_axon, n_idx);
                core.neurons[static_cast<std::size_t>(n_idx)]
                    .weights[static_cast<std::size_t>(neg_ch)] = mag;
            } else {
                // Feedback axon type must be one the value neuron's input
                // channels do not use.
                const int fb_type = mij > 0 ? 1 : 0;
                for (auto [val_idx, drive_ch, drain_ch] :
                     {std::array{p_idx, pos_ch, neg_ch},
                      std::array{n_idx, neg_ch, pos_ch}}) {
                    NeuronParams& val = core.neurons[static_cast<std::size_t>(val_idx)];
                    core.connect(4 * i + drive_ch, val_idx);
                    val.weights[static_cast<std::size_t>(drive_ch)] = mag;
                    core.connect(4 * i + drain_ch, val_idx);
                    val.weights[static_cast<std::size_t>(drain_ch)] = -mag;
                    val.weights[static_cast<std::size_t>(fb_type)] = 1;

                    const int fb_axon = 4 * m + val_idx;
                    const int fb_idx = num_value + val_idx;
                    core.axon_type[static_cast<std::size_t>(fb_axon)] = fb_type;
                    core.connect(fb_axon, val_idx);

                    NeuronParams& fb = core.neurons[static_cast<std::size_t>(fb_idx)];
                    fb.alpha = 1;
                    fb.leak = 0;
                    fb.pos_reset = PosReset::Linear;
                    fb.beta = 0;
                    fb.neg_comparison = NegComparison::Strict;
                    fb.neg_action = NegAction::Zero;
                    fb.dest = SpikeDest{0, 0, fb_axon, 1};  // loop back to this core
                    core.connect(4 * i + drain_ch, fb_idx);
                    fb.weights[static_cast<std::size_t>(drain_ch)] = mag;
                }
            }
        }
    }

    const std::uint64_t peak = static_cast<std::uint64_t>(value_bound) *
                               static_cast<std::uint64_t>(detail::max_abs_entry(matrix));
    if (variant == VmmVariant::Symmetric) {
        map.run_length = static_cast<std::uint64_t>(value_bound) + peak + 2;
    } else {
        map.run_length = static_cast<std::uint64_t>(value_bound) + 2 * peak + 3;
    }
    return map;
}

/* Tick budget tightened to a concrete input vector: the peak element
 * product bounds the drain time. */
inline std::uint64_t run_length_for(const VmmMapping& map,
                                    const std::vector<int>& v,
                                    const Matrix& matrix) {
    std::uint64_t max_v = 0;
    std::uint64_t peak = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::uint64_t vi = static_cast<std::uint64_t>(std::abs(v[i]));
        max_v = std::max(max_v, vi);
        for (int mij : matrix[i]) {
            peak = std::max(peak, vi * static_cast<std::uint64_t>(std::abs(mij)));
        }
    }
    if (map.variant == VmmVariant::Symmetric) {
        return max_v + peak + 2;
    }
    return max_v + 2 * peak + 3;
}

/* Column result is the positive tap count minus the negative tap count. */
inline std::vector<int> decode_output(const VmmMapping& map,
                                      const OutputTrace& trace) {
    std::unordered_map<int, const VmmTap*> by_label;
    for (const VmmTap& tap : map.taps) {
        by_label.emplace(tap.axon_label, &tap);
    }
    std::vector<int> y(static_cast<std::size_t>(map.cols), 0);
    for (const OutputEvent& ev : trace) {
        auto it = by_label.find(ev.axon);
        if (it == by_label.end()) {
            throw DecodeError("output event with unknown tap label " +
                              std::to_string(ev.axon));
        }
        y[static_cast<std::size_t>(it->second->col)] += it->second->sign;
    }
    return y;
}

/* Compile, encode, emulate, decode. */
inline std::vector<int> vmm_end_to_end(const VmmProblem& problem,
                                       VmmVariant variant) {
    if (problem.v.size() != problem.m.size()) {
        throw DimensionMismatch("vector length " + std::to_string(problem.v.size()) +
                                " != matrix rows " + std::to_string(problem.m.size()));
    }
    VmmMapping map = map_vmm(problem.m, variant);
    const InputTrace inputs = encode_vector(problem.v);
    NetworkState net(GridTopology{1, 1}, {map.core});
    const OutputTrace trace =
        run(net, inputs, run_length_for(map, problem.v, problem.m));
    return decode_output(map, trace);
}

} // namespace ncemu

#endif
