// Command-line front end: parse instance files, run verification jobs, emit
// reports, and expose the builtin catalog.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "modref/jobs.hpp"
#include "modref/report.hpp"

using namespace modref;

namespace {

int write_output(const nlohmann::ordered_json& doc, const std::string& out_path) {
    std::string text = doc.dump(2);
    text += "\n";
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
    }
    os << text;
    return 0;
}

int cmd_check(const std::string& file, const std::vector<std::string>& job_filters, int cap,
              const std::string& out_path, bool allow_inconclusive, int threads, bool timings) {
    std::ifstream in(file);
    if (!in) {
        std::cerr << "error: cannot read " << file << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    ParsedInstance inst;
    try {
        inst = parse_instance_text(buf.str());
    } catch (const ParseError& e) {
        std::cerr << file << ":" << e.what() << "\n";
        return 2;
    }

    std::vector<VerificationReport> reports;
    try {
        reports = run_jobs(inst, job_filters, cap, threads);
    } catch (const ParseError& e) {
        std::cerr << file << ":" << e.what() << "\n";
        return 2;
    }

    for (const auto& r : reports)
        std::cerr << r.statement << " [" << r.instance << "]: " << verdict_name(r.verdict) << " ("
                  << static_cast<long>(r.millis) << " ms)\n";

    int rc = write_output(report_document(reports, cap, timings), out_path);
    if (rc != 0) return rc;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::fails) return 1;
        if (r.verdict == Verdict::inconclusive && !allow_inconclusive) return 1;
    }
    return 0;
}

int cmd_search(const std::vector<std::string>& bound_args, const std::string& out_path, bool timings) {
    SearchBounds b;
    for (const auto& kv : bound_args) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --bounds arguments must be key=value\n";
            return 2;
        }
        std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        try {
            if (key == "rank") {
                b.max_rank = std::stoi(value);
            } else if (key == "orders") {
                b.orders.clear();
                std::string tok;
                std::istringstream ts(value);
                while (std::getline(ts, tok, ',')) b.orders.push_back(Int(tok));
            } else if (key == "gens") {
                b.max_gens = std::stoi(value);
            } else if (key == "rels") {
                b.max_rels = std::stoi(value);
            } else if (key == "coeff") {
                b.coeff_bound = Int(value);
            } else {
                std::cerr << "error: unknown bound \"" << key << "\"\n";
                return 2;
            }
        } catch (const std::exception&) {
            std::cerr << "error: bad value for bound \"" << key << "\"\n";
            return 2;
        }
    }
    // hard limits
    if (b.max_rank < 1 || b.max_rank > 3 || b.max_gens < 1 || b.max_gens > 2 || b.max_rels < 0 ||
        b.max_rels > 2 || b.coeff_bound < 0 || b.coeff_bound > 3) {
        std::cerr << "error: bounds exceed the hard limits (rank <= 3, gens <= 2, rels <= 2, coeff <= 3)\n";
        return 2;
    }
    for (const Int& d : b.orders)
        if (!(d == 0 || d == 2 || d == 3 || d == 4)) {
            std::cerr << "error: orders must come from {0, 2, 3, 4}\n";
            return 2;
        }

    SearchSummary sum = search_counterexamples(b, [](const VerificationReport& r) {
        std::cerr << "failure: " << r.instance << "\n";
    });
    std::cerr << "rings: " << sum.rings_valid << "/" << sum.ring_candidates << " valid, pairs: "
              << sum.pairs_checked << " (covered " << sum.covered << ", exact " << sum.exact
              << ", failed " << sum.failed << ")\n";
    return write_output(search_document(sum, timings), out_path);
}

int cmd_catalog_list() {
    std::cout << "builtin rings:\n";
    for (const char* n : {"integers", "cyclic(n)", "matrix(n,m)", "triangular(n,m)", "group_ring(t...,m)",
                          "product(n,m)", "dual_numbers(m)", "f4"})
        std::cout << "  " << n << "\n";
    std::cout << "catalog entries (rings with modules, diagrams and test pairs):\n";
    for (const auto& e : builtin_catalog()) {
        std::cout << "  " << e.name << ": left {";
        for (std::size_t i = 0; i < e.left_modules.size(); ++i)
            std::cout << (i ? ", " : "") << e.left_modules[i].first;
        std::cout << "}, right {";
        for (std::size_t i = 0; i < e.right_modules.size(); ++i)
            std::cout << (i ? ", " : "") << e.right_modules[i].first;
        std::cout << "}, " << e.pairs.size() << " pairs, " << e.diagram.algebras.size() << " algebras\n";
    }
    std::cout << "demo instance files: demos/*.inst (see README)\n";
    return 0;
}

int cmd_catalog_show(const std::string& name, bool full) {
    if (full) {
        for (const auto& e : builtin_catalog())
            if (e.name == name) {
                std::cout << serialize_catalog_entry(e);
                return 0;
            }
        std::cerr << "error: unknown catalog entry \"" << name << "\"\n";
        return 2;
    }
    auto r = catalog_ring(name);
    if (!r) {
        std::cerr << "error: unknown catalog name \"" << name << "\"\n";
        return 2;
    }
    std::cout << "# " << r->name() << "\n[ring]\n";
    std::ostringstream os;
    serialize_ring_body(os, *r);
    std::cout << os.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of functorial module duality on finitely presented instances"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "run the jobs of an instance file");
    std::string file, out_path;
    std::vector<std::string> job_filters;
    int cap = 3, threads = 1;
    bool allow_inconclusive = false, timings = false;
    check->add_option("file", file, "instance file")->required();
    check->add_option("--job", job_filters, "run only jobs with this statement id (repeatable)");
    check->add_option("--cap", cap, "truncation cap for graded jobs")->check(CLI::Range(2, 6));
    check->add_option("--out", out_path, "write the JSON report here instead of stdout");
    check->add_flag("--allow-inconclusive", allow_inconclusive, "exit 0 on inconclusive verdicts");
    check->add_option("--jobs", threads, "number of worker threads")->check(CLI::Range(1, 64));
    check->add_flag("--timings", timings, "include wall-clock timings in the report");

    auto* search = app.add_subcommand("search", "enumerate small instances and check them");
    std::vector<std::string> bounds;
    std::string search_out;
    bool search_timings = false;
    search->add_option("--bounds", bounds, "key=value: rank, orders, gens, rels, coeff");
    search->add_option("--out", search_out, "write the JSON report here instead of stdout");
    search->add_flag("--timings", search_timings, "include wall-clock timings in the report");

    auto* catalog = app.add_subcommand("catalog", "list or show builtin objects");
    auto* list = catalog->add_subcommand("list", "list builtin rings, modules and demos");
    auto* show = catalog->add_subcommand("show", "print a ring's structure constants");
    std::string show_name;
    bool show_full = false;
    show->add_option("name", show_name, "ring or entry name, e.g. matrix(2,2)")->required();
    show->add_flag("--full", show_full, "print a catalog entry as a complete instance file");

    CLI11_PARSE(app, argc, argv);

    if (*check) return cmd_check(file, job_filters, cap, out_path, allow_inconclusive, threads, timings);
    if (*search) return cmd_search(bounds, search_out, search_timings);
    if (*catalog) {
        if (*list) return cmd_catalog_list();
        if (*show) return cmd_catalog_show(show_name, show_full);
        std::cerr << "error: catalog needs a subcommand (list | show)\n";
        return 2;
    }
    return 2;
}
