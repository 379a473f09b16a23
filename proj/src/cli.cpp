#include "acsp/cli.hpp"

#include "acsp/consistency.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <sstream>

namespace acsp {

namespace {

constexpr std::array<std::pair<Algorithm, const char*>, 10> kIds{{
    {Algorithm::Oracle, "oracle"},
    {Algorithm::KCons, "kcons"},
    {Algorithm::Aip, "aip"},
    {Algorithm::Zaffine, "zaffine"},
    {Algorithm::Blpaip, "blpaip"},
    {Algorithm::Bak, "bak"},
    {Algorithm::Clap, "clap"},
    {Algorithm::ClapPrime, "clapprime"},
    {Algorithm::Cohomology, "cohomology"},
    {Algorithm::OrtExact, "ort-exact"},
}};

Verdict kcons_verdict(const RelStructure& tmpl, const RelStructure& inst, int k, std::optional<std::uint64_t> seed) {
    const auto start = std::chrono::steady_clock::now();
    const KappaMap kappa = k_consistency(tmpl, inst, k, ConsistencyOptions{seed});
    Verdict v{Answer::Accept, {}, {}};
    for (std::size_t i = 0; i < kappa.num_sets(); ++i)
        if (kappa.maps(i).empty()) {
            v = {Answer::Reject, EmptySetCertificate{kappa.set(i)}, {}};
            break;
        }
    v.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return v;
}

}  // namespace

std::optional<Algorithm> parse_algorithm(const std::string& id) {
    for (const auto& [a, name] : kIds)
        if (id == name) return a;
    return std::nullopt;
}

std::string algorithm_id(Algorithm a) {
    for (const auto& [b, name] : kIds)
        if (a == b) return name;
    return "?";
}

bool needs_width(Algorithm a) {
    return a == Algorithm::KCons || a == Algorithm::Zaffine || a == Algorithm::Bak || a == Algorithm::Cohomology ||
           a == Algorithm::Aip;
}

void validate(const RunSpec& spec) {
    if (needs_width(spec.algorithm) && !spec.k) throw UsageError(algorithm_id(spec.algorithm) + " needs a width k");
    if (!needs_width(spec.algorithm) && spec.k) throw UsageError(algorithm_id(spec.algorithm) + " takes no width");
    if (spec.k && *spec.k < 1) throw UsageError("width must be positive");
    if (spec.budget && *spec.budget < 0) throw UsageError("budget must be nonnegative");
}

RunSpec parse_run_spec(const std::string& text) {
    RunSpec spec;
    const auto colon = text.find(':');
    const std::string id = text.substr(0, colon);
    auto a = parse_algorithm(id);
    if (!a) throw UsageError("unknown algorithm '" + id + "'");
    spec.algorithm = *a;
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            spec.k = std::stoi(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) throw UsageError("bad width in '" + text + "'");
        } catch (const std::logic_error&) {
            throw UsageError("bad width in '" + text + "'");
        }
    }
    validate(spec);
    return spec;
}

std::string run_label(const RunSpec& spec) {
    return algorithm_id(spec.algorithm) + (spec.k ? ":" + std::to_string(*spec.k) : "");
}

Verdict run_algorithm(const RunSpec& spec, const RelStructure& tmpl, const RelStructure& inst) {
    validate(spec);
    const SolverBudget budget{spec.budget};
    switch (spec.algorithm) {
        case Algorithm::Oracle: return oracle_verdict(tmpl, inst);
        case Algorithm::KCons: return kcons_verdict(tmpl, inst, *spec.k, spec.seed);
        case Algorithm::Aip: return aip_decide(tmpl, inst, *spec.k, budget);
        case Algorithm::Zaffine: return zaffine_decide(tmpl, inst, *spec.k, budget);
        case Algorithm::Blpaip: return blpaip_decide(tmpl, inst, budget);
        case Algorithm::Bak: return bak_decide(tmpl, inst, *spec.k, budget);
        case Algorithm::Clap: return clap_decide(tmpl, inst, {spec.seed, budget});
        case Algorithm::ClapPrime: return clap_prime_decide(tmpl, inst, {spec.seed, budget});
        case Algorithm::Cohomology: return cohomological_decide(tmpl, inst, *spec.k, {false, budget});
        case Algorithm::OrtExact: throw UsageError("ort-exact needs the two template parts");
    }
    throw UsageError("unknown algorithm");
}

SolveRow make_row(const RunSpec& spec, const std::string& instance, const Verdict& v, bool certificate_ok) {
    return {algorithm_id(spec.algorithm),
            spec.k ? std::to_string(*spec.k) : "-",
            instance,
            v.answer,
            certificate_ok,
            v.stats.systems_solved,
            static_cast<std::int64_t>(std::llround(v.stats.seconds * 1000))};
}

std::string tsv_header() { return "algorithm\tk\tinstance\tanswer\tcertificate\tsystems\tmillis"; }

std::string to_tsv(const SolveRow& row) {
    std::ostringstream out;
    out << row.algorithm << '\t' << row.k << '\t' << row.instance << '\t' << to_string(row.answer) << '\t'
        << (row.certificate_ok ? "ok" : "bad") << '\t' << row.systems << '\t' << row.millis;
    return out.str();
}

OrientedGraph sweep_graph(int n, std::uint64_t seed) {
    return n == 4 ? OrientedGraph::complete(4) : random_3regular_2connected(n, seed);
}

std::vector<SweepRow> sweep(const SweepOptions& opts, const std::function<void(const SweepRow&)>& on_row) {
    for (const auto& run : opts.runs) {
        validate(run);
        if (run.algorithm == Algorithm::OrtExact && opts.kind != OrKind::Tractable)
            throw UsageError("ort-exact only applies to the tractable OR template");
    }
    std::vector<SweepRow> rows;
    std::vector<char> accepted(opts.runs.size(), 0);
    for (int n : opts.sizes) {
        const OrientedGraph g = sweep_graph(n, opts.seed);
        const std::string label = n == 4 ? "k4" : "random" + std::to_string(n) + "s" + std::to_string(opts.seed);
        const TseitinOr family = tseitin_or_unsat(g, opts.kind);
        std::optional<RelStructure> padded;
        for (std::size_t i = 0; i < opts.runs.size(); ++i) {
            const RunSpec& run = opts.runs[i];
            const bool pad = run.algorithm == Algorithm::Clap;
            if (pad && !padded) padded = pad_for_clap(family.tmpl, family.instance);
            const RelStructure& inst = pad ? *padded : family.instance;
            Verdict v = run.algorithm == Algorithm::OrtExact
                            ? solve_ort_exact(family.tmpl1, family.tmpl2, inst)
                            : run_algorithm(run, family.tmpl, inst);
            const bool ok = check_certificate(v, family.tmpl, inst);
            if (v.answer == Answer::Accept) accepted[i] = 1;
            SweepRow row{n, label, run, make_row(run, pad ? "or+pad" : "or", v, ok), std::move(v)};
            if (on_row) on_row(row);
            rows.push_back(std::move(row));
        }
        if (opts.stop_when_all_accept) {
            bool all = true;
            for (std::size_t i = 0; i < opts.runs.size(); ++i)
                if (opts.runs[i].algorithm != Algorithm::Oracle && !accepted[i]) all = false;
            if (all) break;
        }
    }
    return rows;
}

std::string sweep_header() { return "n\tgraph\t" + tsv_header(); }

std::string to_tsv(const SweepRow& row) {
    return std::to_string(row.n) + '\t' + row.graph + '\t' + to_tsv(row.row);
}

}  // namespace acsp
