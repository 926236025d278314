#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "ncemu/verify.hpp"
#include "ncemu/vmm.hpp"

using namespace ncemu;

TEST_CASE("encode_vector: zero entry produces no spikes") {
    REQUIRE(encode_vector({0}).empty());
}

TEST_CASE("encode_vector: signed rate code on paired channels") {
    const InputTrace trace = encode_vector({2, -1});
    // v0=2: axons 0,1 at ticks 1 and 2; v1=-1: axons 6,7 at tick 1.
    std::multiset<std::pair<std::uint64_t, int>> got;
    for (const InputEvent& ev : trace) {
        got.insert({ev.tick, ev.axon});
    }
    const std::multiset<std::pair<std::uint64_t, int>> want{
        {1, 0}, {1, 1}, {2, 0}, {2, 1}, {1, 6}, {1, 7}};
    REQUIRE(got == want);
}

TEST_CASE("encode_vector: negative entry uses the in- channels") {
    const InputTrace trace = encode_vector({-3});
    REQUIRE(trace.size() == 6);
    for (const InputEvent& ev : trace) {
        REQUIRE((ev.axon == 2 || ev.axon == 3));
        REQUIRE(ev.tick >= 1);
        REQUIRE(ev.tick <= 3);
    }
}

TEST_CASE("encode_vector rejects out-of-range entries") {
    REQUIRE_THROWS_AS(encode_vector({256}), ValueOutOfRange);
    REQUIRE_THROWS_AS(encode_vector({-256}), ValueOutOfRange);
}

TEST_CASE("resource_report reproduces the 8x8 accounting") {
    const ResourceReport r = resource_report(8, 8);
    REQUIRE(r.reference.axons == 160);
    REQUIRE(r.reference.neurons == 256);
    REQUIRE(r.symmetric.axons == 32);
    REQUIRE(r.symmetric.neurons == 128);
    REQUIRE(r.feedback_neurons == 128);
    REQUIRE(r.feedback_axons == 128);
    REQUIRE(r.neuron_reduction_pct == 50.0);
}

TEST_CASE("resource_report small cases") {
    const ResourceReport r23 = resource_report(2, 3);
    REQUIRE(r23.symmetric.axons == 8);
    REQUIRE(r23.symmetric.neurons == 12);
    REQUIRE(r23.reference.axons == 20);
    REQUIRE(r23.reference.neurons == 24);

    const ResourceReport r11 = resource_report(1, 1);
    REQUIRE(r11.symmetric.axons == 4);
    REQUIRE(r11.symmetric.neurons == 2);
    REQUIRE(r11.reference.axons == 6);
    REQUIRE(r11.reference.neurons == 4);
}

TEST_CASE("neuron halving holds for all dimensions") {
    for (int m = 1; m <= 8; ++m) {
        for (int n = 1; n <= 8; ++n) {
            const ResourceReport r = resource_report(m, n);
            REQUIRE(r.reference.neurons == 2 * r.symmetric.neurons);
            REQUIRE(r.neuron_reduction_pct == 50.0);
        }
    }
}

TEST_CASE("map_vmm resource counts match the report") {
    const Matrix m(8, std::vector<int>(8, 1));
    const VmmMapping ref = map_vmm(m, VmmVariant::Reference);
    REQUIRE(ref.core.num_axons == 160);
    REQUIRE(ref.core.num_neurons == 256);
    const VmmMapping sym = map_vmm(m, VmmVariant::Symmetric);
    REQUIRE(sym.core.num_axons == 32);
    REQUIRE(sym.core.num_neurons == 128);
}

TEST_CASE("map_vmm rejects problems that do not fit a core") {
    // 9x9 reference: 4mn = 324 neurons > 256 even though 4m + 2mn = 198
    // axons would fit.
    const Matrix m9(9, std::vector<int>(9, 1));
    REQUIRE_THROWS_AS(map_vmm(m9, VmmVariant::Reference), DoesNotFitCore);
    // 16x8 symmetric: 2mn = 256 fits, but reference needs 512 neurons.
    const Matrix m16(16, std::vector<int>(8, 1));
    REQUIRE_NOTHROW(map_vmm(m16, VmmVariant::Symmetric));
    REQUIRE_THROWS_AS(map_vmm(m16, VmmVariant::Reference), DoesNotFitCore);
}

TEST_CASE("symmetric single-element hand traces") {
    {
        // v=[1], M=[[3]]: P_00 gets one spike of weight 3, drains 3 fires.
        const std::vector<int> y = vmm_end_to_end({{1}, {{3}}}, VmmVariant::Symmetric);
        REQUIRE(y == std::vector<int>{3});
    }
    {
        // v=[2], M=[[-3]]: N_00 accumulates 6, P_00 silent.
        const std::vector<int> y = vmm_end_to_end({{2}, {{-3}}}, VmmVariant::Symmetric);
        REQUIRE(y == std::vector<int>{-6});
    }
    {
        const std::vector<int> y = vmm_end_to_end({{-1}, {{1}}}, VmmVariant::Symmetric);
        REQUIRE(y == std::vector<int>{-1});
    }
}

TEST_CASE("end-to-end matches brute force on a fixed case, both variants") {
    const VmmProblem problem{{1, 2}, {{1, 2, 3}, {4, 5, 6}}};
    const std::vector<int> want{9, 12, 15};
    REQUIRE(oracle_vmm(problem.v, problem.m) == want);
    REQUIRE(vmm_end_to_end(problem, VmmVariant::Symmetric) == want);
    REQUIRE(vmm_end_to_end(problem, VmmVariant::Reference) == want);
}

TEST_CASE("all-zero vector yields the zero vector and no spikes") {
    const VmmProblem problem{{0, 0}, {{7, -3}, {-2, 5}}};
    REQUIRE(vmm_end_to_end(problem, VmmVariant::Symmetric) ==
            std::vector<int>{0, 0});
    REQUIRE(vmm_end_to_end(problem, VmmVariant::Reference) ==
            std::vector<int>{0, 0});
}

TEST_CASE("mixed-sign case exercises the reference feedback path") {
    const VmmProblem problem{{3, -2}, {{-4, 1}, {5, -6}}};
    const std::vector<int> want = oracle_vmm(problem.v, problem.m);  // [-22, 15]
    REQUIRE(want == std::vector<int>{-22, 15});
    REQUIRE(vmm_end_to_end(problem, VmmVariant::Reference) == want);
    REQUIRE(vmm_end_to_end(problem, VmmVariant::Symmetric) == want);
}

TEST_CASE("reference run length exceeds symmetric when products are nonzero") {
    const Matrix m{{-4, 1}, {5, -6}};
    const VmmMapping ref = map_vmm(m, VmmVariant::Reference);
    const VmmMapping sym = map_vmm(m, VmmVariant::Symmetric);
    REQUIRE(ref.run_length > sym.run_length);
    const std::vector<int> v{3, -2};
    REQUIRE(run_length_for(ref, v, m) > run_length_for(sym, v, m));
}

TEST_CASE("per-element decomposition in the symmetric variant") {
    const VmmProblem problem{{2, -3}, {{1, -2}, {4, 0}}};
    const VmmMapping map = map_vmm(problem.m, VmmVariant::Symmetric);
    NetworkState net(GridTopology{1, 1}, {map.core});
    const OutputTrace trace =
        run(net, encode_vector(problem.v), run_length_for(map, problem.v, problem.m));

    std::map<int, int> fires_by_label;
    for (const OutputEvent& ev : trace) {
        ++fires_by_label[ev.axon];
    }
    for (const VmmTap& tap : map.taps) {
        const long long product =
            static_cast<long long>(problem.v[static_cast<std::size_t>(tap.row)]) *
            problem.m[static_cast<std::size_t>(tap.row)][static_cast<std::size_t>(tap.col)];
        const long long want =
            tap.sign > 0 ? std::max<long long>(product, 0)
                         : std::max<long long>(-product, 0);
        REQUIRE(fires_by_label[tap.axon_label] == want);
    }
}

TEST_CASE("reference feedback restores every value neuron potential to zero") {
    const VmmProblem problem{{3, -2, 1}, {{-4, 1}, {5, -6}, {0, 7}}};
    const VmmMapping map = map_vmm(problem.m, VmmVariant::Reference);
    NetworkState net(GridTopology{1, 1}, {map.core});
    run(net, encode_vector(problem.v), run_length_for(map, problem.v, problem.m));
    const auto& states = net.neuron_states(0, 0);
    for (const VmmTap& tap : map.taps) {
        REQUIRE(states[static_cast<std::size_t>(tap.axon_label)].potential == 0);
    }
}

TEST_CASE("decode_output rejects unknown tap labels") {
    const VmmMapping map = map_vmm({{1}}, VmmVariant::Symmetric);
    OutputTrace trace;
    trace.push_back(OutputEvent{0, 0, 0, 0, 99, Edge::East, 0, 0});
    REQUIRE_THROWS_AS(decode_output(map, trace), DecodeError);
}

TEST_CASE("vmm_end_to_end rejects mismatched dimensions") {
    REQUIRE_THROWS_AS(vmm_end_to_end({{1, 2}, {{1}}}, VmmVariant::Symmetric),
                      DimensionMismatch);
}
