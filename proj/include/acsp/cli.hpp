// Solver dispatch, TSV report rows and graph-size sweeps behind the acsp tool.
#pragma once

#include "acsp/constructions.hpp"
#include "acsp/solvers.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acsp {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Algorithm { Oracle, KCons, Aip, Zaffine, Blpaip, Bak, Clap, ClapPrime, Cohomology, OrtExact };

std::optional<Algorithm> parse_algorithm(const std::string& id);
std::string algorithm_id(Algorithm a);
bool needs_width(Algorithm a);

struct RunSpec {
    Algorithm algorithm = Algorithm::Oracle;
    std::optional<int> k;
    std::optional<std::int64_t> budget;
    std::optional<std::uint64_t> seed;
};
// UsageError unless the width is given exactly for the algorithms that take one.
void validate(const RunSpec& spec);
// "zaffine:2", "blpaip", ...
RunSpec parse_run_spec(const std::string& text);
std::string run_label(const RunSpec& spec);

// Not for ort-exact, which needs the two template parts.
Verdict run_algorithm(const RunSpec& spec, const RelStructure& tmpl, const RelStructure& inst);

struct SolveRow {
    std::string algorithm;
    std::string k;  // "-" without a width
    std::string instance;
    Answer answer = Answer::Unknown;
    bool certificate_ok = false;
    std::int64_t systems = 0;
    std::int64_t millis = 0;
};
SolveRow make_row(const RunSpec& spec, const std::string& instance, const Verdict& v, bool certificate_ok);
std::string tsv_header();
std::string to_tsv(const SolveRow& row);

struct SweepOptions {
    std::vector<int> sizes;
    std::vector<RunSpec> runs;
    OrKind kind = OrKind::Tractable;
    std::uint64_t seed = 1;
    // Stop after the first size at which every non-oracle run has accepted at least once.
    bool stop_when_all_accept = false;
};
struct SweepRow {
    int n = 0;
    std::string graph;
    RunSpec run;
    SolveRow row;
    Verdict verdict;
};
// K4 for n = 4, otherwise random_3regular_2connected(n, seed).
OrientedGraph sweep_graph(int n, std::uint64_t seed);
// Unsatisfiable Tseitin OR instance per size; CLAP runs on the padded instance.
std::vector<SweepRow> sweep(const SweepOptions& opts, const std::function<void(const SweepRow&)>& on_row = {});
std::string sweep_header();
std::string to_tsv(const SweepRow& row);

}  // namespace acsp
