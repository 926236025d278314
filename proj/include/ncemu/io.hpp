#ifndef NCEMU_IO_HPP
#define NCEMU_IO_HPP

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ncemu/engine.hpp"
#include "ncemu/verify.hpp"
#include "ncemu/vmm.hpp"

namespace ncemu {

using json = nlohmann::ordered_json;

/* ---- network config JSON ----
 * {grid: {width, height},
 *  cores: [{x, y, num_axons, num_neurons, axon_types: [int],
 *           crossbar: [{axon, neuron}],
 *           neurons: [{alpha, beta, leak, weights: [4], pos_reset,
 *                      neg_comparison, neg_action,
 *                      dest: {dx, dy, axon, delay} | null}]}]}
 * Grid cells not listed get an inert 1-axon, 1-neuron core. Unknown
 * top-level keys (e.g. an embedded VMM decode table) are ignored. */

inline std::string to_string(PosReset v) {
    return v == PosReset::Linear ? "linear" : "zero";
}
inline std::string to_string(NegComparison v) {
    return v == NegComparison::Strict ? "strict" : "inclusive";
}
inline std::string to_string(NegAction v) {
    return v == NegAction::Zero ? "zero" : "saturate";
}

namespace detail {

inline PosReset pos_reset_from(const std::string& s) {
    if (s == "linear") return PosReset::Linear;
    if (s == "zero") return PosReset::Zero;
    throw ParseError("unknown pos_reset \"" + s + "\"");
}
inline NegComparison neg_comparison_from(const std::string& s) {
    if (s == "strict") return NegComparison::Strict;
    if (s == "inclusive") return NegComparison::Inclusive;
    throw ParseError("unknown neg_comparison \"" + s + "\"");
}
inline NegAction neg_action_from(const std::string& s) {
    if (s == "zero") return NegAction::Zero;
    if (s == "saturate") return NegAction::Saturate;
    throw ParseError("unknown neg_action \"" + s + "\"");
}

} // namespace detail

inline json core_to_json(int x, int y, const CoreConfig& core) {
    json jc;
    jc["x"] = x;
    jc["y"] = y;
    jc["num_axons"] = core.num_axons;
    jc["num_neurons"] = core.num_neurons;
    jc["axon_types"] = core.axon_type;
    json crossbar = json::array();
    for (int a = 0; a < core.num_axons; ++a) {
        for (int j = 0; j < core.num_neurons; ++j) {
            if (core.connected(a, j)) {
                crossbar.push_back({{"axon", a}, {"neuron", j}});
            }
        }
    }
    jc["crossbar"] = std::move(crossbar);
    json neurons = json::array();
    for (const NeuronParams& p : core.neurons) {
        json jn;
        jn["alpha"] = p.alpha;
        jn["beta"] = p.beta;
        jn["leak"] = p.leak;
        jn["weights"] = p.weights;
        jn["pos_reset"] = to_string(p.pos_reset);
        jn["neg_comparison"] = to_string(p.neg_comparison);
        jn["neg_action"] = to_string(p.neg_action);
        if (p.dest) {
            jn["dest"] = {{"dx", p.dest->dx},
                          {"dy", p.dest->dy},
                          {"axon", p.dest->axon},
                          {"delay", p.dest->delay}};
        } else {
            jn["dest"] = nullptr;
        }
        neurons.push_back(std::move(jn));
    }
    jc["neurons"] = std::move(neurons);
    return jc;
}

inline json network_to_json(const NetworkState& net) {
    json doc;
    doc["grid"] = {{"width", net.grid().width}, {"height", net.grid().height}};
    json cores = json::array();
    for (int y = 0; y < net.grid().height; ++y) {
        for (int x = 0; x < net.grid().width; ++x) {
            cores.push_back(core_to_json(x, y, net.core(x, y)));
        }
    }
    doc["cores"] = std::move(cores);
    return doc;
}

inline CoreConfig core_from_json(const json& jc) {
    CoreConfig core = make_core(jc.at("num_axons").get<int>(),
                                jc.at("num_neurons").get<int>());
    if (core.num_axons < 1 || core.num_axons > kMaxAxons ||
        core.num_neurons < 1 || core.num_neurons > kMaxNeurons) {
        throw ParseError("core dimensions outside [1, 256]");
    }
    core.axon_type = jc.at("axon_types").get<std::vector<int>>();
    if (static_cast<int>(core.axon_type.size()) != core.num_axons) {
        throw ParseError("axon_types length != num_axons");
    }
    for (const json& bit : jc.at("crossbar")) {
        const int a = bit.at("axon").get<int>();
        const int j = bit.at("neuron").get<int>();
        if (a < 0 || a >= core.num_axons || j < 0 || j >= core.num_neurons) {
            throw ParseError("crossbar entry (" + std::to_string(a) + ", " +
                             std::to_string(j) + ") out of range");
        }
        core.connect(a, j);
    }
    const json& jns = jc.at("neurons");
    if (static_cast<int>(jns.size()) != core.num_neurons) {
        throw ParseError("neurons length != num_neurons");
    }
    for (std::size_t j = 0; j < jns.size(); ++j) {
        const json& jn = jns[j];
        NeuronParams& p = core.neurons[j];
        p.alpha = jn.at("alpha").get<int>();
        p.beta = jn.at("beta").get<int>();
        p.leak = jn.at("leak").get<int>();
        const auto w = jn.at("weights").get<std::vector<int>>();
        if (w.size() != static_cast<std::size_t>(kNumAxonTypes)) {
            throw ParseError("neuron weights must have 4 entries");
        }
        std::copy(w.begin(), w.end(), p.weights.begin());
        p.pos_reset = detail::pos_reset_from(jn.at("pos_reset").get<std::string>());
        p.neg_comparison =
            detail::neg_comparison_from(jn.at("neg_comparison").get<std::string>());
        p.neg_action = detail::neg_action_from(jn.at("neg_action").get<std::string>());
        if (jn.contains("dest") && !jn.at("dest").is_null()) {
            const json& jd = jn.at("dest");
            p.dest = SpikeDest{jd.at("dx").get<int>(), jd.at("dy").get<int>(),
                               jd.at("axon").get<int>(), jd.at("delay").get<int>()};
        }
    }
    return core;
}

inline NetworkState network_from_json(const json& doc) {
    GridTopology grid;
    grid.width = doc.at("grid").at("width").get<int>();
    grid.height = doc.at("grid").at("height").get<int>();
    if (grid.width < 1 || grid.height < 1) {
        throw ParseError("grid dimensions must be >= 1");
    }
    // Inert filler for unlisted cells.
    CoreConfig inert = make_core(1, 1);
    std::vector<CoreConfig> cores(static_cast<std::size_t>(grid.num_cores()), inert);
    for (const json& jc : doc.at("cores")) {
        const int x = jc.at("x").get<int>();
        const int y = jc.at("y").get<int>();
        if (!grid.contains(x, y)) {
            throw ParseError("core (" + std::to_string(x) + ", " +
                             std::to_string(y) + ") outside grid");
        }
        cores[static_cast<std::size_t>(grid.index(x, y))] = core_from_json(jc);
    }
    return NetworkState(grid, std::move(cores));
}

inline NetworkState load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config file " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return network_from_json(doc);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void save_network(const NetworkState& net, const std::string& path,
                         const json* extra = nullptr) {
    json doc = network_to_json(net);
    if (extra) {
        for (auto it = extra->begin(); it != extra->end(); ++it) {
            doc[it.key()] = it.value();
        }
    }
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    out << doc.dump(2) << "\n";
}

/* ---- spike trace CSV ----
 * Inputs:  tick,core_x,core_y,axon
 * Outputs: tick,core_x,core_y,axon,neuron,exit_edge */

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

inline long long parse_int_field(const std::string& s, const std::string& path,
                                 int line_no) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": not an integer: \"" + s + "\"");
    }
}

} // namespace detail

inline InputTrace load_input_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open input trace " + path);
    }
    InputTrace trace;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "tick,core_x,core_y,axon") continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 4) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        }
        InputEvent ev;
        const long long tick = detail::parse_int_field(fields[0], path, line_no);
        if (tick < 0) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": negative tick");
        }
        ev.tick = static_cast<std::uint64_t>(tick);
        ev.core_x = static_cast<int>(detail::parse_int_field(fields[1], path, line_no));
        ev.core_y = static_cast<int>(detail::parse_int_field(fields[2], path, line_no));
        ev.axon = static_cast<int>(detail::parse_int_field(fields[3], path, line_no));
        trace.push_back(ev);
    }
    std::stable_sort(trace.begin(), trace.end(),
                     [](const InputEvent& a, const InputEvent& b) {
                         return a.tick < b.tick;
                     });
    return trace;
}

inline std::string input_trace_to_csv(const InputTrace& trace) {
    std::string out = "tick,core_x,core_y,axon\n";
    for (const InputEvent& ev : trace) {
        out += std::to_string(ev.tick) + "," + std::to_string(ev.core_x) + "," +
               std::to_string(ev.core_y) + "," + std::to_string(ev.axon) + "\n";
    }
    return out;
}

inline std::string output_trace_to_csv(const OutputTrace& trace) {
    std::string out = "tick,core_x,core_y,axon,neuron,exit_edge\n";
    for (const OutputEvent& ev : trace) {
        out += std::to_string(ev.tick) + "," + std::to_string(ev.core_x) + "," +
               std::to_string(ev.core_y) + "," + std::to_string(ev.axon) + "," +
               std::to_string(ev.neuron) + "," + edge_name(ev.edge) + "\n";
    }
    return out;
}

inline void save_output_trace(const OutputTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    out << output_trace_to_csv(trace);
}

inline void save_input_trace(const InputTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    out << input_trace_to_csv(trace);
}

/* ---- matrix / vector CSV ---- */

inline Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open matrix file " + path);
    }
    Matrix m;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<int> row;
        for (const std::string& f : detail::split_csv_line(line)) {
            row.push_back(static_cast<int>(detail::parse_int_field(f, path, line_no)));
        }
        if (!m.empty() && row.size() != m.front().size()) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": ragged matrix row");
        }
        m.push_back(std::move(row));
    }
    if (m.empty()) {
        throw ParseError(path + ": empty matrix");
    }
    return m;
}

inline std::vector<int> load_vector_csv(const std::string& path) {
    const Matrix m = load_matrix_csv(path);
    if (m.size() != 1) {
        throw ParseError(path + ": vector file must be a single CSV line");
    }
    return m.front();
}

/* ---- VMM decode table & verify report JSON ---- */

inline json decode_table_to_json(const VmmMapping& map) {
    json doc;
    doc["variant"] = variant_name(map.variant);
    doc["m"] = map.rows;
    doc["n"] = map.cols;
    json taps = json::array();
    for (const VmmTap& tap : map.taps) {
        taps.push_back({{"i", tap.row},
                        {"j", tap.col},
                        {"sign", tap.sign},
                        {"axon_label", tap.axon_label}});
    }
    doc["taps"] = std::move(taps);
    doc["run_length"] = map.run_length;
    return doc;
}

inline json verify_report_to_json(const VerifyReport& report) {
    json doc;
    doc["count"] = report.count;
    doc["seed"] = report.seed;
    doc["value_bound"] = report.value_bound;
    doc["dims"] = {{"m_min", report.dims.m_min},
                   {"m_max", report.dims.m_max},
                   {"n_min", report.dims.n_min},
                   {"n_max", report.dims.n_max}};
    json variants = json::array();
    for (VmmVariant v : report.variants) variants.push_back(variant_name(v));
    doc["variants"] = std::move(variants);
    json cases = json::array();
    for (const VerifyCase& c : report.cases) {
        json jc;
        jc["index"] = c.index;
        jc["seed"] = c.case_seed;
        jc["m"] = c.rows;
        jc["n"] = c.cols;
        jc["vector"] = c.problem.v;
        jc["matrix"] = c.problem.m;
        json results = json::array();
        for (const VariantResult& r : c.results) {
            json jr;
            jr["variant"] = variant_name(r.variant);
            jr["pass"] = r.pass;
            jr["expected"] = r.expected;
            jr["got"] = r.got;
            if (!r.error.empty()) jr["error"] = r.error;
            results.push_back(std::move(jr));
        }
        jc["results"] = std::move(results);
        cases.push_back(std::move(jc));
    }
    doc["cases"] = std::move(cases);
    doc["all_pass"] = report.all_pass;
    return doc;
}

} // namespace ncemu

#endif
