// acsp: generate fixtures, run solvers, sweep graph sizes.
//
// Exit codes: 0 ok, 2 usage, 3 budget exhausted (answer Unknown), 4 parse, 1 other.

#include "acsp/cli.hpp"
#include "acsp/io.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace acsp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitParse = 4;

template <class Write, class T>
void write_file(const fs::path& path, Write write, const T& value) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write(out, value);
}

void write_coset_file(const fs::path& path, const CosetInstance& inst, const std::string& group_ref) {
    write_file(path, [&](std::ostream& out, const CosetInstance& v) { write_coset(out, v, group_ref); }, inst);
}

FiniteGroup group_from_id(const std::string& id) {
    auto g = builtin_group(id);
    if (!g) throw UsageError("unknown group '" + id + "'");
    return *g;
}

OrientedGraph graph_from_arg(const std::string& arg) {
    if (arg == "k4") return OrientedGraph::complete(4);
    if (arg == "petersen") return OrientedGraph::petersen();
    if (arg == "heawood") return OrientedGraph::heawood();
    return load_graph(arg);
}

// tz2r3 and tz3r3 are the ternary Z2 and Z3 coset templates with disjoint
// element names; t<group>r<arity> builds any other; everything else is a file.
RelStructure structure_from_arg(const std::string& arg) {
    if (arg == "tz2r3") return coset_template(FiniteGroup::cyclic(2), 3, "a", "P");
    if (arg == "tz3r3") return coset_template(FiniteGroup::cyclic(3), 3, "b", "Q");
    static const std::regex builtin("t([a-z0-9]+)r([1-9])");
    std::smatch m;
    if (std::regex_match(arg, m, builtin))
        if (auto g = builtin_group(m[1].str())) return coset_template(*g, std::stoi(m[2].str()), "g", "T");
    return load_structure(arg);
}

ChargeMap parse_charges(const OrientedGraph& g, const FiniteGroup& group, const std::vector<std::string>& items) {
    ChargeMap charge(static_cast<std::size_t>(g.num_vertices()), group.identity());
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("charge '" + item + "' is not vertex=element");
        const auto v = g.vertex(item.substr(0, eq));
        if (!v) throw UsageError("unknown vertex in charge '" + item + "'");
        const std::string value = item.substr(eq + 1);
        std::optional<int> e = group.element(value);
        if (!e) {
            try {
                std::size_t used = 0;
                const int index = std::stoi(value, &used);
                if (used == value.size() && index >= 0 && index < group.order()) e = index;
            } catch (const std::logic_error&) {
            }
        }
        if (!e) throw UsageError("unknown group element in charge '" + item + "'");
        charge[static_cast<std::size_t>(*v)] = *e;
    }
    return charge;
}

OrKind parse_mode(const std::string& mode) {
    if (mode == "tractable") return OrKind::Tractable;
    if (mode == "intractable") return OrKind::Intractable;
    throw UsageError("mode must be tractable or intractable");
}

Monotone3Cnf random_monotone_cnf(int vars, int clauses, std::uint64_t seed) {
    if (vars < 3 || clauses < 0) throw UsageError("need at least 3 variables and a nonnegative clause count");
    std::mt19937_64 rng(seed);
    std::vector<int> pool(static_cast<std::size_t>(vars));
    std::iota(pool.begin(), pool.end(), 1);
    Monotone3Cnf cnf{vars, {}};
    for (int c = 0; c < clauses; ++c) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const int sign = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
        cnf.clauses.push_back({sign * pool[0], sign * pool[1], sign * pool[2]});
    }
    return cnf;
}

// Every clause must have exactly three literals of one sign.
Monotone3Cnf read_dimacs(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path.string(), 0);
    Monotone3Cnf cnf;
    std::string line;
    std::vector<int> clause;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream words(line);
        std::string first;
        if (!(words >> first) || first == "c" || first == "%") continue;
        if (first == "p") {
            std::string fmt;
            int clauses = 0;
            if (!(words >> fmt >> cnf.num_vars >> clauses) || fmt != "cnf" || cnf.num_vars < 0)
                throw ParseError("bad problem line", line_no);
            continue;
        }
        std::istringstream all(line);
        long lit = 0;
        while (all >> lit) {
            if (lit == 0) {
                const bool positive = !clause.empty() && clause.front() > 0;
                const bool monotone = std::all_of(clause.begin(), clause.end(), [&](int l) { return (l > 0) == positive; });
                if (clause.size() != 3 || !monotone) throw ParseError("clause is not monotone with three literals", line_no);
                cnf.clauses.push_back({clause[0], clause[1], clause[2]});
                clause.clear();
            } else {
                if (std::abs(lit) > cnf.num_vars) throw ParseError("literal out of range", line_no);
                clause.push_back(static_cast<int>(lit));
            }
        }
        if (all.fail() && !all.eof()) throw ParseError("bad literal", line_no);
    }
    if (!clause.empty()) throw ParseError("unterminated clause", line_no);
    return cnf;
}

int symmetric_degree(int order) {
    int degree = 1;
    for (int f = 1; f < order; f *= ++degree) {
    }
    return degree;
}

std::string max_class_summary(const ColoredStructure& s) {
    return std::to_string(s.size()) + " elements, " + std::to_string(s.classes().size()) + " colors, largest class " +
           std::to_string(s.max_class_size());
}

void add_gen(CLI::App& app) {
    auto* gen = app.add_subcommand("gen", "Generate fixtures")->require_subcommand(1);

    {
        auto* cmd = gen->add_subcommand("tseitin", "Tseitin coset instance on a graph");
        static std::string graph = "k4", group = "z2", prefix = "y", out;
        static std::vector<std::string> charges;
        cmd->add_option("--graph", graph, "k4, petersen, heawood or a graph file");
        cmd->add_option("--group", group, "Builtin group id");
        cmd->add_option("--charge", charges, "vertex=element, repeatable");
        cmd->add_option("--prefix", prefix, "Variable name prefix");
        cmd->add_option("--out", out)->required();
        cmd->callback([] {
            const auto g = graph_from_arg(graph);
            const auto grp = group_from_id(group);
            write_coset_file(out, tseitin_instance(g, grp, parse_charges(g, grp, charges), prefix), group);
        });
    }
    {
        auto* cmd = gen->add_subcommand("template", "Coset template of a group (tz2r3, tz3r3 or t<group>r<arity>)");
        static std::string id, out;
        cmd->add_option("--id", id)->required();
        cmd->add_option("--out", out)->required();
        cmd->callback([] {
            if (id.empty() || id.front() != 't' || fs::exists(id)) throw UsageError("not a template id: " + id);
            write_file(out, write_structure, structure_from_arg(id));
        });
    }
    {
        auto* cmd = gen->add_subcommand("structures", "Template and instance of a coset instance");
        static std::string in, out_template, out_instance;
        cmd->add_option("--in", in)->required();
        cmd->add_option("--template", out_template)->required();
        cmd->add_option("--instance", out_instance)->required();
        cmd->callback([] {
            const auto s = coset_to_structures(load_coset(in));
            write_file(out_template, write_structure, s.tmpl);
            write_file(out_instance, write_structure, s.inst);
        });
    }
    {
        auto* cmd = gen->add_subcommand("over", "Coset instance as an instance of a given coset template");
        static std::string in, tmpl, out;
        cmd->add_option("--in", in)->required();
        cmd->add_option("--template", tmpl)->required();
        cmd->add_option("--out", out)->required();
        cmd->callback([] { write_file(out, write_structure, coset_instance_over(load_coset(in), structure_from_arg(tmpl))); });
    }
    {
        auto* cmd = gen->add_subcommand("or-instance", "OR instance of two instances");
        static std::string left, right, out;
        cmd->add_option("--left", left)->required();
        cmd->add_option("--right", right)->required();
        cmd->add_option("--out", out)->required();
        cmd->callback([] { write_file(out, write_structure, or_instance(load_structure(left), load_structure(right))); });
    }
    {
        auto* cmd = gen->add_subcommand("or-template", "OR template of two templates");
        static std::string left, right, mode = "tractable", out;
        cmd->add_option("--left", left)->required();
        cmd->add_option("--right", right)->required();
        cmd->add_option("--mode", mode, "tractable or intractable");
        cmd->add_option("--out", out)->required();
        cmd->callback([] {
            const auto a1 = structure_from_arg(left);
            const auto a2 = structure_from_arg(right);
            write_file(out, write_structure, parse_mode(mode) == OrKind::Tractable ? ort(a1, a2) : ornpc(a1, a2));
        });
    }
    {
        auto* cmd = gen->add_subcommand("tseitin-or", "OR of a Z2 and a Z3 Tseitin system over the ternary templates");
        static std::string graph = "k4", mode = "tractable", out_template, out_instance;
        static std::vector<std::string> charge2{"v0=1"}, charge3{"v0=1"};
        cmd->add_option("--graph", graph);
        cmd->add_option("--mode", mode);
        cmd->add_option("--charge-z2", charge2, "Defaults to v0=1");
        cmd->add_option("--charge-z3", charge3, "Defaults to v0=1");
        cmd->add_option("--template", out_template)->required();
        cmd->add_option("--instance", out_instance)->required();
        cmd->callback([] {
            const auto g = graph_from_arg(graph);
            const auto z2 = FiniteGroup::cyclic(2);
            const auto z3 = FiniteGroup::cyclic(3);
            const auto family = tseitin_or(g, parse_charges(g, z2, charge2), parse_charges(g, z3, charge3), parse_mode(mode));
            write_file(out_template, write_structure, family.tmpl);
            write_file(out_instance, write_structure, family.instance);
        });
    }
    {
        auto* cmd = gen->add_subcommand("cfi", "Colored structure pair of a coset instance");
        static std::string in, out_a, out_b;
        cmd->add_option("--in", in)->required();
        cmd->add_option("--out-a", out_a)->required();
        cmd->add_option("--out-b", out_b)->required();
        cmd->callback([] {
            const auto [a, b] = cfi_pair(load_coset(in));
            write_file(out_a, write_colored, a);
            write_file(out_b, write_colored, b);
        });
    }
    {
        auto* cmd = gen->add_subcommand("or-iso", "Parity combination of colored structure pairs");
        static std::vector<std::string> left, right;
        static std::string out0, out1;
        cmd->add_option("--left", left, "First structures of the pairs")->required();
        cmd->add_option("--right", right, "Second structures of the pairs")->required();
        cmd->add_option("--out0", out0)->required();
        cmd->add_option("--out1", out1)->required();
        cmd->callback([] {
            if (left.size() != right.size()) throw UsageError("--left and --right need the same number of files");
            std::vector<std::pair<ColoredStructure, ColoredStructure>> pairs;
            for (std::size_t i = 0; i < left.size(); ++i) pairs.emplace_back(load_colored(left[i]), load_colored(right[i]));
            const auto [c0, c1] = or_iso(pairs);
            write_file(out0, write_colored, c0);
            write_file(out1, write_colored, c1);
        });
    }
    {
        auto* cmd = gen->add_subcommand("iso-encode", "Coset instance deciding isomorphism of two colored structures");
        static std::string a, b, out;
        static int r = 2;
        static std::optional<int> d;
        cmd->add_option("--a", a)->required();
        cmd->add_option("--b", b)->required();
        cmd->add_option("--r", r)->check(CLI::PositiveNumber);
        cmd->add_option("--d", d, "Symmetric group degree, at most 8");
        cmd->add_option("--out", out)->required();
        cmd->callback([] {
            const auto inst = iso_encode(load_colored(a), load_colored(b), r, d);
            write_coset_file(out, inst, "sym" + std::to_string(symmetric_degree(inst.group().order())));
        });
    }
    {
        auto* cmd = gen->add_subcommand(
            "iso-pipeline", "Tseitin, CFI pairs over Z2 and Z3, and their parity combination; reports the coset encoding size");
        static std::string graph = "k4", out_dir;
        static int r = 2;
        cmd->add_option("--graph", graph);
        cmd->add_option("--r", r)->check(CLI::PositiveNumber);
        cmd->add_option("--out-dir", out_dir)->required();
        cmd->callback([] {
            const auto g = graph_from_arg(graph);
            ChargeMap charge(static_cast<std::size_t>(g.num_vertices()), 0);
            charge.front() = 1;
            const fs::path dir(out_dir);
            std::vector<std::pair<ColoredStructure, ColoredStructure>> pairs;
            for (const auto& [id, group] : {std::pair{"z2", FiniteGroup::cyclic(2)}, std::pair{"z3", FiniteGroup::cyclic(3)}}) {
                const auto inst = tseitin_instance(g, group, charge);
                write_coset_file(dir / (std::string("tseitin_") + id + ".coset"), inst, id);
                pairs.push_back(cfi_pair(inst));
                write_file(dir / (std::string("cfi_") + id + "_a.csp"), write_colored, pairs.back().first);
                write_file(dir / (std::string("cfi_") + id + "_b.csp"), write_colored, pairs.back().second);
            }
            const auto [c0, c1] = or_iso(pairs);
            write_file(dir / "or_iso_0.csp", write_colored, c0);
            write_file(dir / "or_iso_1.csp", write_colored, c1);
            std::cout << "or_iso_0\t" << max_class_summary(c0) << '\n' << "or_iso_1\t" << max_class_summary(c1) << '\n';
            const int d = std::max(c0.max_class_size(), c1.max_class_size());
            if (d > kMaxClassSize) {
                std::cout << "iso-encode\tSym(" << d << ") exceeds class limit " << kMaxClassSize << ", not written\n";
                return;
            }
            write_coset_file(dir / "iso_encode.coset", iso_encode(c0, c1, r), "sym" + std::to_string(std::max(d, 2)));
        });
    }
    {
        auto* cmd = gen->add_subcommand("sat-reduction", "Monotone 3-SAT as an instance of the intractable OR template");
        static std::string dimacs, out, out_template;
        static int vars = 6, clauses = 10;
        static std::uint64_t seed = 1;
        cmd->add_option("--dimacs", dimacs, "Monotone 3-CNF in DIMACS form; random otherwise");
        cmd->add_option("--vars", vars);
        cmd->add_option("--clauses", clauses);
        cmd->add_option("--seed", seed);
        cmd->add_option("--out", out)->required();
        cmd->add_option("--template", out_template, "Also write the template");
        cmd->callback([] {
            const auto cnf = dimacs.empty() ? random_monotone_cnf(vars, clauses, seed) : read_dimacs(dimacs);
            write_file(out, write_structure, monotone3sat_to_ornpc(cnf));
            if (!out_template.empty()) write_file(out_template, write_structure, monotone3sat_template());
        });
    }
    {
        auto* cmd = gen->add_subcommand("minimal-no", "x1+x2+x3 = 1 and x1+x2+x3 = 0 over an Abelian group");
        static std::string group = "z2", out;
        cmd->add_option("--group", group);
        cmd->add_option("--out", out)->required();
        cmd->callback([] { write_coset_file(out, minimal_no_instance(group_from_id(group)), group); });
    }
    {
        auto* cmd = gen->add_subcommand("graph", "Named graph: k4, petersen or heawood");
        static std::string name, out;
        cmd->add_option("--name", name)->required();
        cmd->add_option("--out", out)->required();
        cmd->callback([] {
            if (name != "k4" && name != "petersen" && name != "heawood") throw UsageError("unknown graph '" + name + "'");
            write_file(out, write_graph, graph_from_arg(name));
        });
    }
    {
        auto* cmd = gen->add_subcommand("random-graph", "Random 3-regular 2-connected graph");
        static int n = 10;
        static std::uint64_t seed = 1;
        static std::string out;
        cmd->add_option("--n", n)->required();
        cmd->add_option("--seed", seed);
        cmd->add_option("--out", out)->required();
        cmd->callback([] {
            if (n < 4 || n % 2 != 0) throw UsageError("n must be even and at least 4");
            write_file(out, write_graph, random_3regular_2connected(n, seed));
        });
    }
}

int exit_for(Answer a) { return a == Answer::Unknown ? kExitBudget : 0; }

struct SolveArgs {
    std::string tmpl, inst, left, right, algo;
    std::optional<int> k;
    std::optional<std::int64_t> budget;
    std::optional<std::uint64_t> seed;
    bool header = false;
};

int run_solve(const SolveArgs& args) {
    const auto algorithm = parse_algorithm(args.algo);
    if (!algorithm) throw UsageError("unknown algorithm '" + args.algo + "'");
    const RunSpec spec{*algorithm, args.k, args.budget, args.seed};
    validate(spec);
    const RelStructure inst = load_structure(args.inst);
    Verdict v;
    RelStructure tmpl;
    if (*algorithm == Algorithm::OrtExact) {
        if (args.left.empty() || args.right.empty()) throw UsageError("ort-exact needs --left and --right");
        const auto a1 = structure_from_arg(args.left);
        const auto a2 = structure_from_arg(args.right);
        tmpl = ort(a1, a2);
        v = solve_ort_exact(a1, a2, inst);
    } else {
        if (args.tmpl.empty()) throw UsageError(args.algo + " needs --template");
        tmpl = structure_from_arg(args.tmpl);
        v = run_algorithm(spec, tmpl, inst);
    }
    if (args.header) std::cout << tsv_header() << '\n';
    std::cout << to_tsv(make_row(spec, fs::path(args.inst).stem().string(), v, check_certificate(v, tmpl, inst)))
              << '\n';
    return exit_for(v.answer);
}

struct SweepArgs {
    std::vector<int> sizes{4, 6, 8, 10, 12, 14};
    std::vector<std::string> algos{"oracle", "zaffine:2", "blpaip", "bak:2", "clap", "clapprime"};
    std::string mode = "tractable", record;
    std::uint64_t seed = 1;
    std::optional<std::int64_t> budget;
    bool stop = false;
};

// One row per algorithm: the first size with an Accept, or "none".
void write_nstar(const fs::path& path, const std::vector<SweepRow>& rows, const std::vector<RunSpec>& runs) {
    std::ofstream out(path);
    out << "algorithm\tk\tnstar\n";
    for (const auto& run : runs) {
        std::string nstar = "none";
        for (const auto& row : rows)
            if (run_label(row.run) == run_label(run) && row.row.answer == Answer::Accept) {
                nstar = std::to_string(row.n);
                break;
            }
        out << algorithm_id(run.algorithm) << '\t' << (run.k ? std::to_string(*run.k) : "-") << '\t' << nstar << '\n';
    }
}

int run_sweep(const SweepArgs& args) {
    SweepOptions opts;
    for (int n : args.sizes)
        if (n < 4 || n % 2 != 0) throw UsageError("sizes must be even and at least 4");
    opts.sizes = args.sizes;
    std::sort(opts.sizes.begin(), opts.sizes.end());
    opts.sizes.erase(std::unique(opts.sizes.begin(), opts.sizes.end()), opts.sizes.end());
    for (const auto& a : args.algos) {
        RunSpec spec = parse_run_spec(a);
        spec.budget = args.budget;
        opts.runs.push_back(spec);
    }
    opts.kind = parse_mode(args.mode);
    opts.seed = args.seed;
    opts.stop_when_all_accept = args.stop;

    std::cout << sweep_header() << '\n' << std::flush;
    bool unknown = false;
    const auto rows = sweep(opts, [&](const SweepRow& row) {
        std::cout << to_tsv(row) << '\n' << std::flush;
        unknown = unknown || row.row.answer == Answer::Unknown;
    });

    if (!args.record.empty()) {
        const fs::path dir(args.record);
        fs::create_directories(dir);
        write_nstar(dir / "nstar.tsv", rows, opts.runs);
        std::set<int> recorded;
        for (const auto& run : opts.runs)
            for (const auto& row : rows)
                if (run_label(row.run) == run_label(run) && row.row.answer == Answer::Accept) {
                    recorded.insert(row.n);
                    break;
                }
        for (int n : recorded) {
            const auto g = sweep_graph(n, opts.seed);
            const auto family = tseitin_or_unsat(g, opts.kind);
            const std::string stem = "or_n" + std::to_string(n);
            write_file(dir / (stem + ".graph"), write_graph, g);
            write_file(dir / (stem + ".template.csp"), write_structure, family.tmpl);
            write_file(dir / (stem + ".instance.csp"), write_structure, family.instance);
        }
    }
    return unknown ? kExitBudget : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algebraic CSP relaxations: fixtures, solvers and sweeps"};
    app.require_subcommand(1);
    add_gen(app);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Run one algorithm and print a TSV row");
    solve->add_option("--template", solve_args.tmpl, "Template file or builtin template id");
    solve->add_option("--instance", solve_args.inst)->required();
    solve->add_option("--left", solve_args.left, "First part of the OR template (ort-exact)");
    solve->add_option("--right", solve_args.right, "Second part of the OR template (ort-exact)");
    solve->add_option("--algo", solve_args.algo)->required();
    solve->add_option("--k", solve_args.k);
    solve->add_option("--budget", solve_args.budget, "Maximum number of solved systems");
    solve->add_option("--seed", solve_args.seed);
    solve->add_flag("--header", solve_args.header);

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Unsatisfiable Tseitin OR instances over growing 3-regular graphs");
    sweep_cmd->add_option("--sizes", sweep_args.sizes)->delimiter(',');
    sweep_cmd->add_option("--algos", sweep_args.algos, "name or name:k")->delimiter(',');
    sweep_cmd->add_option("--mode", sweep_args.mode);
    sweep_cmd->add_option("--seed", sweep_args.seed);
    sweep_cmd->add_option("--budget", sweep_args.budget);
    sweep_cmd->add_option("--record", sweep_args.record, "Directory for nstar.tsv and the Accepting fixtures");
    sweep_cmd->add_flag("--stop", sweep_args.stop, "Stop once every non-oracle algorithm has accepted");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return run_solve(solve_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const acsp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
