// Acceptance suite. Each criterion prints one PASS/FAIL line; the
// process exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ncemu/engine.hpp"
#include "ncemu/io.hpp"
#include "ncemu/verify.hpp"
#include "ncemu/vmm.hpp"

using namespace ncemu;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

/* 1. The paper's equivalence experiment: 100 random matrices, 2x3 to
 * 8x8, 9-bit signed entries, both variants, integer-exact match against
 * the brute-force oracle. Run through the real CLI binary. */
void criterion_equivalence_experiment() {
    const auto start = std::chrono::steady_clock::now();
    const std::string cmd =
        std::string(NCEMU_CLI_PATH) +
        " vmm-verify --count 100 --seed 42 --range 255 --variant both"
        " --report acceptance_verify_report.json > acceptance_verify.log 2>&1";
    const int status = std::system(cmd.c_str());
    const int rc = WEXITSTATUS(status);
    const double secs = seconds_since(start);
    report("equivalence: 100 random cases, range 255, both variants, exact match",
           rc == 0 && secs <= 300.0,
           "exit " + std::to_string(rc) + ", " + std::to_string(secs) + " s");
}

/* 2. Resource accounting for the 8x8 problem. */
void criterion_resource_accounting() {
    const ResourceReport r = resource_report(8, 8);
    const bool pass = r.reference.axons == 160 && r.reference.neurons == 256 &&
                      r.symmetric.axons == 32 && r.symmetric.neurons == 128 &&
                      r.neuron_reduction_pct == 50.0 &&
                      r.feedback_neurons == 128 && r.feedback_axons == 128;
    report("resources: 8x8 -> reference 160/256, symmetric 32/128, "
           "50% neuron reduction, 128 feedback neurons/axons",
           pass);
}

/* 3. Strict vs inclusive negative threshold on the (-1, +1) sequence. */
void criterion_asymmetry() {
    const AsymmetryRecord rec = asymmetry_demo();
    const bool pass = rec.strict_fires == 0 && rec.inclusive_fires == 1 &&
                      rec.ticks.size() == 2 &&
                      rec.ticks[0].strict_potential == -1 &&
                      rec.ticks[0].inclusive_potential == 0;
    report("asymmetry: strict fires 0, inclusive fires 1 on (-1, +1)", pass);
}

/* 4a. Oracle equivalence property: >= 500 random problems, dims
 * 1x1..8x8, bound 15, both variants, zero mismatches, <= 60 s. */
void criterion_property_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const VerifyReport rep =
        verify_batch(500, 1234, DimsRange{1, 8, 1, 8}, 15,
                     {VmmVariant::Reference, VmmVariant::Symmetric});
    const double secs = seconds_since(start);
    int mismatches = 0;
    for (const auto& c : rep.cases) {
        for (const auto& r : c.results) {
            if (!r.pass) ++mismatches;
        }
    }
    report("property: 500 problems 1x1..8x8 range 15, both variants",
           mismatches == 0 && secs <= 60.0,
           std::to_string(mismatches) + " mismatches, " + std::to_string(secs) +
               " s");
}

/* 4b. Determinism: a fixed (config, input, T) run twice gives
 * byte-identical output traces. */
void criterion_property_determinism() {
    auto build = [] {
        std::mt19937 gen(5150);
        std::uniform_int_distribution<int> wdist(-4, 4);
        GridTopology grid{4, 4};
        std::vector<CoreConfig> cores;
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 4; ++x) {
                CoreConfig core = make_core(8, 8);
                for (int a = 0; a < 8; ++a) {
                    core.axon_type[static_cast<std::size_t>(a)] = a % 4;
                    for (int j = 0; j < 8; ++j) {
                        if (gen() % 3 == 0) core.connect(a, j);
                    }
                }
                for (int j = 0; j < 8; ++j) {
                    auto& p = core.neurons[static_cast<std::size_t>(j)];
                    p.alpha = 1 + static_cast<int>(gen() % 3);
                    for (auto& w : p.weights) w = wdist(gen);
                    p.dest = SpikeDest{wdist(gen), wdist(gen),
                                       static_cast<int>(gen() % 8),
                                       1 + static_cast<int>(gen() % 15)};
                }
                cores.push_back(core);
            }
        }
        return NetworkState(grid, cores);
    };
    InputTrace inputs;
    std::mt19937 gen(33);
    for (std::uint64_t t = 0; t < 50; ++t) {
        inputs.push_back(InputEvent{t, static_cast<int>(gen() % 4),
                                    static_cast<int>(gen() % 4),
                                    static_cast<int>(gen() % 8)});
    }
    auto run_once = [&] {
        NetworkState net = build();
        return output_trace_to_csv(run(net, inputs, 200));
    };
    const std::string a = run_once();
    const std::string b = run_once();
    report("property: deterministic replay is byte-identical",
           a == b && !a.empty());
}

/* 4c. Scheduler exactness and router dimension-order invariants over
 * >= 10,000 random enqueues/packets. */
void criterion_property_scheduler_router() {
    std::mt19937 gen(777);
    bool ok = true;
    // Scheduler: every enqueued (axon, tick) pair drains exactly once at
    // its delivery tick.
    SchedulerBuffer buf(256);
    std::map<std::uint64_t, std::map<int, int>> expected;
    std::uint64_t enqueues = 0;
    std::uint64_t now = 0;
    while (enqueues < 12000) {
        const int burst = static_cast<int>(gen() % 24);
        for (int k = 0; k < burst; ++k) {
            const int axon = static_cast<int>(gen() % 256);
            const int delay = 1 + static_cast<int>(gen() % 15);
            buf.enqueue(axon, now, delay);
            ++expected[now + static_cast<std::uint64_t>(delay)][axon];
            ++enqueues;
        }
        const AxonSet drained = buf.drain(now);
        auto want = expected.find(now);
        for (int a = 0; a < 256; ++a) {
            const bool got = drained.test(static_cast<std::size_t>(a));
            const bool exp = want != expected.end() && want->second.count(a) > 0;
            if (got != exp) ok = false;
        }
        if (want != expected.end()) expected.erase(want);
        ++now;
    }
    for (int flush = 0; flush < 16; ++flush) {
        const AxonSet drained = buf.drain(now);
        auto want = expected.find(now);
        for (int a = 0; a < 256; ++a) {
            const bool got = drained.test(static_cast<std::size_t>(a));
            const bool exp = want != expected.end() && want->second.count(a) > 0;
            if (got != exp) ok = false;
        }
        if (want != expected.end()) expected.erase(want);
        ++now;
    }
    if (!expected.empty()) ok = false;

    // Router: X exhausted before Y; exit iff the target lies outside.
    std::uint64_t packets = 0;
    while (packets < 12000) {
        GridTopology grid{1 + static_cast<int>(gen() % 12),
                          1 + static_cast<int>(gen() % 12)};
        const int ox = static_cast<int>(gen() % static_cast<unsigned>(grid.width));
        const int oy = static_cast<int>(gen() % static_cast<unsigned>(grid.height));
        SpikePacket p;
        p.dx = static_cast<int>(gen() % 31) - 15;
        p.dy = static_cast<int>(gen() % 31) - 15;
        const int tx = ox + p.dx;
        const int ty = oy + p.dy;
        const RouteResult r = route(grid, ox, oy, p);
        if (grid.contains(tx, ty)) {
            const Delivered* d = std::get_if<Delivered>(&r);
            if (!d || d->x != tx || d->y != ty) ok = false;
        } else {
            const Exited* e = std::get_if<Exited>(&r);
            if (!e) {
                ok = false;
            } else if (tx >= grid.width || tx < 0) {
                const Edge want_edge = tx >= grid.width ? Edge::East : Edge::West;
                const int want_dx = tx >= grid.width ? tx - grid.width : tx + 1;
                if (e->edge != want_edge || e->residual_dx != want_dx ||
                    e->residual_dy != p.dy) {
                    ok = false;
                }
            } else {
                const Edge want_edge = ty >= grid.height ? Edge::North : Edge::South;
                const int want_dy = ty >= grid.height ? ty - grid.height : ty + 1;
                if (e->edge != want_edge || e->residual_dx != 0 ||
                    e->residual_dy != want_dy) {
                    ok = false;
                }
            }
        }
        ++packets;
    }
    report("property: scheduler exactness and router dimension order "
           "(12000 enqueues / 12000 packets)",
           ok);
}

/* 4d. Per-element decomposition for 50 random symmetric problems:
 * fires(P_ij) = max(v_i M_ij, 0), fires(N_ij) = max(-v_i M_ij, 0). */
void criterion_property_decomposition() {
    bool ok = true;
    SplitMix64 rng(20240229);
    for (int rep = 0; rep < 50 && ok; ++rep) {
        const int m = rng.range(1, 8);
        const int n = rng.range(1, 8);
        const VmmProblem problem = random_case(rng.next(), m, n, 15);
        const VmmMapping map = map_vmm(problem.m, VmmVariant::Symmetric);
        NetworkState net(GridTopology{1, 1}, {map.core});
        const OutputTrace trace = run(net, encode_vector(problem.v),
                                      run_length_for(map, problem.v, problem.m));
        std::map<int, long long> fires;
        for (const OutputEvent& ev : trace) ++fires[ev.axon];
        for (const VmmTap& tap : map.taps) {
            const long long product =
                static_cast<long long>(
                    problem.v[static_cast<std::size_t>(tap.row)]) *
                problem.m[static_cast<std::size_t>(tap.row)]
                         [static_cast<std::size_t>(tap.col)];
            const long long want = tap.sign > 0 ? std::max<long long>(product, 0)
                                                : std::max<long long>(-product, 0);
            if (fires[tap.axon_label] != want) ok = false;
        }
    }
    report("property: per-element P/N fire decomposition on 50 problems", ok);
}

/* 5. Scale smoke test: a 64x64 grid (4096 cores) runs 1000 ticks on a
 * sparse input trace, deterministically, within 2 minutes. */
void criterion_scale_smoke() {
    const auto start = std::chrono::steady_clock::now();
    auto build = [] {
        GridTopology grid{64, 64};
        std::vector<CoreConfig> cores;
        cores.reserve(4096);
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                // Each core forwards its axon to its east neighbor.
                CoreConfig core = make_core(1, 1);
                core.connect(0, 0);
                core.neurons[0].alpha = 1;
                core.neurons[0].weights = {1, 0, 0, 0};
                core.neurons[0].dest = SpikeDest{1, 0, 0, 1};
                cores.push_back(core);
            }
        }
        return NetworkState(grid, cores);
    };
    InputTrace inputs;
    std::mt19937 gen(4096);
    for (std::uint64_t t = 0; t < 900; t += 3) {
        inputs.push_back(InputEvent{t, static_cast<int>(gen() % 64),
                                    static_cast<int>(gen() % 64), 0});
    }
    std::sort(inputs.begin(), inputs.end(),
              [](const InputEvent& a, const InputEvent& b) { return a.tick < b.tick; });
    auto run_once = [&] {
        NetworkState net = build();
        return output_trace_to_csv(run(net, inputs, 1000));
    };
    std::string a, b;
    bool ok = true;
    try {
        a = run_once();
        b = run_once();
    } catch (const EmuError&) {
        ok = false;
    }
    const double secs = seconds_since(start);
    // Every injected spike marches east and eventually exits.
    ok = ok && a == b && !a.empty() && secs <= 120.0;
    report("scale: 64x64 grid, 1000 ticks, sparse inputs, deterministic",
           ok, std::to_string(secs) + " s");
}

} // namespace

int main() {
    criterion_equivalence_experiment();
    criterion_resource_accounting();
    criterion_asymmetry();
    criterion_property_oracle();
    criterion_property_determinism();
    criterion_property_scheduler_router();
    criterion_property_decomposition();
    criterion_scale_smoke();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : std::to_string(g_failures) + " CRITERIA FAILED")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
