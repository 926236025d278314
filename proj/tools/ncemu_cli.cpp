#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncemu/engine.hpp"
#include "ncemu/io.hpp"
#include "ncemu/verify.hpp"
#include "ncemu/vmm.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& input_path,
            std::uint64_t ticks, const std::string& output_path) {
    ncemu::NetworkState net = ncemu::load_network(config_path);
    const auto diags = ncemu::validate(net);
    if (!diags.empty()) {
        for (const auto& d : diags) {
            std::cerr << "invalid network: " << d << "\n";
        }
        return 1;
    }
    ncemu::InputTrace inputs;
    if (!input_path.empty()) {
        inputs = ncemu::load_input_trace(input_path);
    }
    const ncemu::OutputTrace trace = ncemu::run(net, inputs, ticks);
    ncemu::save_output_trace(trace, output_path);
    std::cout << trace.size() << " output events over " << ticks
              << " ticks -> " << output_path << "\n";
    return 0;
}

int cmd_vmm_run(const std::string& matrix_path, const std::string& vector_path,
                const std::string& variant_str, const std::string& dump_config,
                const std::string& dump_input) {
    const ncemu::VmmVariant variant = variant_str == "reference"
                                          ? ncemu::VmmVariant::Reference
                                          : ncemu::VmmVariant::Symmetric;
    ncemu::VmmProblem problem;
    problem.m = ncemu::load_matrix_csv(matrix_path);
    problem.v = ncemu::load_vector_csv(vector_path);
    if (problem.v.size() != problem.m.size()) {
        throw ncemu::DimensionMismatch(
            "vector length " + std::to_string(problem.v.size()) +
            " != matrix rows " + std::to_string(problem.m.size()));
    }
    if (!dump_config.empty() || !dump_input.empty()) {
        const ncemu::VmmMapping map = ncemu::map_vmm(problem.m, variant);
        if (!dump_config.empty()) {
            ncemu::NetworkState net(ncemu::GridTopology{1, 1}, {map.core});
            const ncemu::json decode = ncemu::decode_table_to_json(map);
            ncemu::json extra;
            extra["decode"] = decode;
            ncemu::save_network(net, dump_config, &extra);
        }
        if (!dump_input.empty()) {
            ncemu::save_input_trace(ncemu::encode_vector(problem.v), dump_input);
        }
    }
    const std::vector<int> y = ncemu::vmm_end_to_end(problem, variant);
    for (std::size_t j = 0; j < y.size(); ++j) {
        std::cout << (j ? "," : "") << y[j];
    }
    std::cout << "\n";
    return 0;
}

int cmd_vmm_verify(int count, std::uint64_t seed, int range,
                   const std::string& variant_str,
                   const std::string& report_path) {
    std::vector<ncemu::VmmVariant> variants;
    if (variant_str == "both") {
        variants = {ncemu::VmmVariant::Reference, ncemu::VmmVariant::Symmetric};
    } else if (variant_str == "reference") {
        variants = {ncemu::VmmVariant::Reference};
    } else {
        variants = {ncemu::VmmVariant::Symmetric};
    }
    const ncemu::VerifyReport report =
        ncemu::verify_batch(count, seed, ncemu::DimsRange{}, range, variants);

    int failed = 0;
    for (const auto& c : report.cases) {
        for (const auto& r : c.results) {
            if (!r.pass) ++failed;
        }
    }
    std::cout << "cases: " << report.count << "  dims: " << report.dims.m_min
              << "x" << report.dims.n_min << ".." << report.dims.m_max << "x"
              << report.dims.n_max << "  range: " << range << "\n";
    for (const auto& c : report.cases) {
        for (const auto& r : c.results) {
            if (!r.pass) {
                std::cout << "FAIL case " << c.index << " (" << c.rows << "x"
                          << c.cols << ", " << ncemu::variant_name(r.variant)
                          << ")";
                if (!r.error.empty()) std::cout << ": " << r.error;
                std::cout << "\n";
            }
        }
    }
    std::cout << (report.all_pass ? "PASS" : "FAIL") << ": "
              << (report.count * static_cast<int>(variants.size()) - failed)
              << "/" << report.count * static_cast<int>(variants.size())
              << " runs matched the oracle\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            throw ncemu::ParseError("cannot write " + report_path);
        }
        out << ncemu::verify_report_to_json(report).dump(2) << "\n";
        std::cout << "report -> " << report_path << "\n";
    }
    return report.all_pass ? 0 : 1;
}

int cmd_demo_asymmetry() {
    const ncemu::AsymmetryRecord rec = ncemu::asymmetry_demo();
    std::cout << "one neuron, alpha=1, beta=1, reset-to-zero, "
                 "contribution sequence (-1, +1)\n\n";
    std::cout << "tick  sum  strict V  strict fired  inclusive V  inclusive fired\n";
    for (std::size_t t = 0; t < rec.ticks.size(); ++t) {
        const auto& row = rec.ticks[t];
        std::printf("%4zu %4d  %8lld  %12s  %11lld  %15s\n", t + 1,
                    row.synaptic_sum,
                    static_cast<long long>(row.strict_potential),
                    row.strict_fired ? "yes" : "no",
                    static_cast<long long>(row.inclusive_potential),
                    row.inclusive_fired ? "yes" : "no");
    }
    std::cout << "\nstrict (<) total fires=" << rec.strict_fires
              << "   inclusive (<=) total fires=" << rec.inclusive_fires << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tick-accurate neurosynaptic core emulator and signed VMM harness"};
    app.require_subcommand(1);

    std::string config_path, input_path, output_path = "output_trace.csv";
    std::uint64_t ticks = 1;
    auto* run_cmd = app.add_subcommand("run", "Run a network from a config file");
    run_cmd->add_option("--config", config_path, "Network config JSON")->required();
    run_cmd->add_option("--input", input_path, "Input spike trace CSV");
    run_cmd->add_option("--ticks", ticks, "Ticks to simulate")
        ->required()
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--output", output_path, "Output trace CSV path");

    std::string matrix_path, vector_path, variant = "symmetric";
    std::string dump_config, dump_input;
    auto* vmm_cmd = app.add_subcommand("vmm-run", "Map and run one VMM problem");
    vmm_cmd->add_option("--matrix", matrix_path, "Matrix CSV, one row per line")
        ->required();
    vmm_cmd->add_option("--vector", vector_path, "Vector CSV, single line")
        ->required();
    vmm_cmd->add_option("--variant", variant, "reference|symmetric")
        ->check(CLI::IsMember({"reference", "symmetric"}));
    vmm_cmd->add_option("--dump-config", dump_config,
                        "Write the generated network config (with decode table)");
    vmm_cmd->add_option("--dump-input", dump_input,
                        "Write the rate-encoded input trace CSV");

    int count = 100, range = 255;
    std::uint64_t seed = 0;
    std::string verify_variant = "both";
    std::string report_path = "vmm_verify_report.json";
    auto* verify_cmd =
        app.add_subcommand("vmm-verify", "Randomized equivalence check vs oracle");
    verify_cmd->add_option("--count", count, "Number of random cases")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", seed, "PRNG seed");
    verify_cmd->add_option("--range", range, "Entry magnitude bound [1, 255]")
        ->check(CLI::Range(1, 255));
    verify_cmd->add_option("--variant", verify_variant, "both|reference|symmetric")
        ->check(CLI::IsMember({"both", "reference", "symmetric"}));
    verify_cmd->add_option("--report", report_path, "JSON report path");

    auto* demo_cmd = app.add_subcommand(
        "demo-asymmetry", "Show strict vs inclusive negative-threshold behavior");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(config_path, input_path, ticks, output_path);
        }
        if (vmm_cmd->parsed()) {
            return cmd_vmm_run(matrix_path, vector_path, variant, dump_config,
                               dump_input);
        }
        if (verify_cmd->parsed()) {
            return cmd_vmm_verify(count, seed, range, verify_variant, report_path);
        }
        if (demo_cmd->parsed()) {
            return cmd_demo_asymmetry();
        }
    } catch (const ncemu::EmuError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
