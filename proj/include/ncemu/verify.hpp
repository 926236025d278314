#ifndef NCEMU_VERIFY_HPP
#define NCEMU_VERIFY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ncemu/vmm.hpp"

namespace ncemu {

/* splitmix64; fixed here so that verification reports replay bit-exactly
 * across platforms and standard libraries. Range mapping is plain
 * modulo, which is deterministic (the requirement); the modulo bias is
 * irrelevant for test-case generation. */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /* uniform-ish integer in [lo, hi] */
    int range(int lo, int hi) {
        return lo + static_cast<int>(next() %
                                     static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

/* Ground truth: y_j = sum_i v_i * M_ij, computed directly. */
inline std::vector<int> oracle_vmm(const std::vector<int>& v, const Matrix& m) {
    if (v.size() != m.size()) {
        throw DimensionMismatch("vector length " + std::to_string(v.size()) +
                                " != matrix rows " + std::to_string(m.size()));
    }
    if (m.empty()) {
        throw DimensionMismatch("matrix must be at least 1x1");
    }
    std::vector<int> y(m.front().size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != y.size()) {
            throw DimensionMismatch("ragged matrix rows");
        }
        for (std::size_t j = 0; j < y.size(); ++j) {
            y[j] += v[i] * m[i][j];
        }
    }
    return y;
}

/* Deterministic problem generation; entries uniform in [-B, B]. */
inline VmmProblem random_case(std::uint64_t seed, int m, int n, int value_bound) {
    if (m < 1 || n < 1) {
        throw ValueOutOfRange("dimensions must be >= 1");
    }
    if (value_bound < 1 || value_bound > kVmmValueBound) {
        throw ValueOutOfRange("value bound outside [1, 255]");
    }
    SplitMix64 rng(seed);
    VmmProblem problem;
    problem.v.resize(static_cast<std::size_t>(m));
    for (int& x : problem.v) x = rng.range(-value_bound, value_bound);
    problem.m.assign(static_cast<std::size_t>(m),
                     std::vector<int>(static_cast<std::size_t>(n)));
    for (auto& row : problem.m) {
        for (int& x : row) x = rng.range(-value_bound, value_bound);
    }
    return problem;
}

struct DimsRange {
    int m_min = 2;
    int m_max = 8;
    int n_min = 3;
    int n_max = 8;
};

struct VariantResult {
    VmmVariant variant = VmmVariant::Symmetric;
    bool pass = false;
    std::vector<int> expected;
    std::vector<int> got;
    std::string error;  // nonempty when the case failed by exception
};

struct VerifyCase {
    int index = 0;
    std::uint64_t case_seed = 0;
    int rows = 0;
    int cols = 0;
    VmmProblem problem;
    std::vector<VariantResult> results;
};

struct VerifyReport {
    int count = 0;
    std::uint64_t seed = 0;
    int value_bound = 0;
    DimsRange dims;
    std::vector<VmmVariant> variants;
    std::vector<VerifyCase> cases;
    bool all_pass = false;
};

/* The equivalence experiment: random problems mapped through the
 * emulator and compared exactly against the brute-force oracle.
 * Mapping/engine errors count as case failures, not aborts. */
inline VerifyReport verify_batch(int count, std::uint64_t seed,
                                 const DimsRange& dims, int value_bound,
                                 const std::vector<VmmVariant>& variants) {
    if (count < 1) {
        throw ValueOutOfRange("case count must be >= 1");
    }
    VerifyReport report;
    report.count = count;
    report.seed = seed;
    report.value_bound = value_bound;
    report.dims = dims;
    report.variants = variants;
    report.all_pass = true;

    SplitMix64 rng(seed);
    for (int k = 0; k < count; ++k) {
        VerifyCase c;
        c.index = k;
        c.rows = rng.range(dims.m_min, dims.m_max);
        c.cols = rng.range(dims.n_min, dims.n_max);
        c.case_seed = rng.next();
        c.problem = random_case(c.case_seed, c.rows, c.cols, value_bound);
        const std::vector<int> expected = oracle_vmm(c.problem.v, c.problem.m);
        for (VmmVariant variant : variants) {
            VariantResult r;
            r.variant = variant;
            r.expected = expected;
            try {
                r.got = vmm_end_to_end(c.problem, variant);
                r.pass = (r.got == expected);
            } catch (const EmuError& e) {
                r.pass = false;
                r.error = e.what();
            }
            if (!r.pass) report.all_pass = false;
            c.results.push_back(std::move(r));
        }
        report.cases.push_back(std::move(c));
    }
    return report;
}

/* Side-by-side trace of the strict and inclusive negative-threshold
 * comparisons on the canonical (-1, +1) contribution sequence:
 * the strict mode leaves the potential stuck at -1 and never fires,
 * the inclusive mode resets it and fires once. */
struct AsymmetryTick {
    int synaptic_sum = 0;
    std::int64_t strict_potential = 0;
    bool strict_fired = false;
    std::int64_t inclusive_potential = 0;
    bool inclusive_fired = false;
};

struct AsymmetryRecord {
    std::vector<AsymmetryTick> ticks;
    int strict_fires = 0;
    int inclusive_fires = 0;
};

inline AsymmetryRecord asymmetry_demo() {
    NeuronParams params;
    params.alpha = 1;
    params.beta = 1;
    params.leak = 0;
    params.pos_reset = PosReset::Linear;
    params.neg_action = NegAction::Zero;

    NeuronParams strict = params;
    strict.neg_comparison = NegComparison::Strict;
    NeuronParams inclusive = params;
    inclusive.neg_comparison = NegComparison::Inclusive;

    AsymmetryRecord rec;
    NeuronState s_strict, s_incl;
    for (int sum : {-1, +1}) {
        AsymmetryTick t;
        t.synaptic_sum = sum;
        t.strict_fired = neuron_tick(s_strict, strict, sum);
        t.strict_potential = s_strict.potential;
        t.inclusive_fired = neuron_tick(s_incl, inclusive, sum);
        t.inclusive_potential = s_incl.potential;
        rec.strict_fires += t.strict_fired ? 1 : 0;
        rec.inclusive_fires += t.inclusive_fired ? 1 : 0;
        rec.ticks.push_back(t);
    }
    return rec;
}

} // namespace ncemu

#endif
