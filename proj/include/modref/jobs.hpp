#pragma once

#include <atomic>
#include <thread>

#include "modref/instance_file.hpp"

namespace modref {

// Plain fork exactness as a job of its own: the verdict is the exactness of
// the fork, with witnesses on failure.
inline VerificationReport job_hypothesis(const std::string& instance, const FpModule& n, const FpModule& m) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "hypothesis";
    rep.instance = instance;
    TensorFork f = build_fork(n, m);
    ExactnessReport ex = check_fork_exactness(f);
    rep.groups.push_back(group_info("tensor", f.t0.group));
    rep.groups.push_back(group_info("middle", f.t1));
    rep.groups.push_back(group_info("kernel", subgroup_as_group(ex.kernel).group));
    rep.note("i_injective", ex.i_injective);
    rep.note("middle_exact", ex.middle_exact);
    rep.verdict = ex.exact() ? Verdict::holds : Verdict::fails;
    detail::attach_fork_witnesses(rep, f, ex);
    rep.millis = sw.ms();
    return rep;
}

// Resolve and sanity-check a job against the parsed instance without
// running it; throws ParseError for unresolved references.
inline void validate_job(const ParsedInstance& inst, const JobSpec& js) {
    auto need = [&](const char* key) {
        auto it = js.args.find(key);
        if (it == js.args.end())
            throw ParseError(js.line, js.statement + ": missing argument " + key + "=");
        return it->second;
    };
    auto need_side = [&](const char* key, bool left) {
        const FpModule& m = inst.module_named(need(key), js.line);
        if (m.left != left)
            throw ParseError(js.line, js.statement + ": module \"" + need(key) + "\" has the wrong side");
        return m;
    };
    if (js.statement == "hypothesis" || js.statement == "extension_formula" ||
        js.statement == "symmetry" || js.statement == "kernel_compare" ||
        js.statement == "nat_transform") {
        need_side("right", false);
        need_side("left", true);
    } else if (js.statement == "bimodule_flat") {
        need_side("right", false);
        need_side("left", true);
        std::string via = need("via");
        if (via != "commutative" && via != "regular" && via != "flat")
            throw ParseError(js.line, "bimodule_flat: via must be commutative, regular or flat");
        if (via == "commutative" && !inst.ring.is_commutative())
            throw ParseError(js.line, "bimodule_flat: via=commutative needs a commutative ring");
    } else if (js.statement == "reflexivity" || js.statement == "vee_reflexivity") {
        need_side("module", true);
    } else if (js.statement == "central_split") {
        std::string gens = need("gens");
        if (gens != "unit" && gens != "all")
            throw ParseError(js.line, "central_split: gens must be unit or all");
    } else {
        throw ParseError(js.line, "unknown statement \"" + js.statement + "\"");
    }
}

inline VerificationReport run_job(const ParsedInstance& inst, const JobSpec& js, int cap) {
    auto arg = [&](const char* key) { return js.args.at(key); };
    if (auto it = js.args.find("cap"); it != js.args.end()) {
        cap = std::stoi(it->second);
        if (cap < 2 || cap > 6) throw ParseError(js.line, "cap must be between 2 and 6");
    }
    auto module_arg = [&](const char* key) -> const FpModule& {
        return inst.module_named(js.args.at(key), js.line);
    };
    if (js.statement == "hypothesis") {
        return job_hypothesis(arg("right") + " (x) " + arg("left"), module_arg("right"), module_arg("left"));
    }
    if (js.statement == "bimodule_flat") {
        const FpModule& m = module_arg("left");
        std::optional<BimoduleStructure> bim;
        bool flat = false;
        std::string via = arg("via");
        if (via == "commutative")
            bim = bimodule_from_commutative(m);
        else if (via == "regular")
            bim = bimodule_regular(inst.ring);
        else
            flat = true;
        return verify_bimodule_flat_case(arg("right") + " (x) " + arg("left"), module_arg("right"), m,
                                         bim, flat);
    }
    if (js.statement == "central_split") {
        std::vector<RingElt> gens;
        if (arg("gens") == "unit") {
            gens = {inst.ring.unit()};
        } else {
            for (int i = 0; i < inst.ring.rank(); ++i) gens.push_back(inst.ring.basis_elt(i));
        }
        std::vector<std::pair<FpModule, FpModule>> pairs;
        for (const auto& [nn, n] : inst.modules) {
            if (n.left) continue;
            for (const auto& [nm, m] : inst.modules)
                if (m.left) pairs.push_back({n, m});
        }
        return verify_central_split_case("gens=" + arg("gens"), inst.ring, gens, pairs);
    }
    if (js.statement == "extension_formula")
        return verify_extension_formula(arg("right") + " (x) " + arg("left"), module_arg("right"),
                                        module_arg("left"));
    if (js.statement == "symmetry")
        return verify_symmetry(arg("right") + " (x) " + arg("left"), module_arg("right"), module_arg("left"));
    if (js.statement == "kernel_compare")
        return verify_kernel_compare(arg("right") + " (x) " + arg("left"), module_arg("right"),
                                     module_arg("left"), cap);
    if (js.statement == "nat_transform")
        return verify_nat_transformations(arg("right") + " , " + arg("left"), module_arg("right"),
                                          module_arg("left"), inst.diagram);
    if (js.statement == "reflexivity")
        return verify_reflexivity(arg("module"), module_arg("module"), inst.diagram);
    if (js.statement == "vee_reflexivity")
        return verify_vee_reflexivity(arg("module"), module_arg("module"), inst.diagram, cap);
    throw ParseError(js.line, "unknown statement \"" + js.statement + "\"");
}

// Run the selected jobs (all when `filters` is empty), optionally in
// parallel; the report order always follows the file order.
inline std::vector<VerificationReport> run_jobs(const ParsedInstance& inst,
                                                const std::vector<std::string>& filters, int cap,
                                                int threads = 1) {
    std::vector<const JobSpec*> selected;
    for (const auto& js : inst.jobs) {
        bool wanted = filters.empty();
        for (const auto& f : filters) wanted = wanted || js.statement == f;
        if (wanted) selected.push_back(&js);
    }
    for (const JobSpec* js : selected) validate_job(inst, *js);

    std::vector<VerificationReport> reports(selected.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < selected.size(); ++i) reports[i] = run_job(inst, *selected[i], cap);
        return reports;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= selected.size()) return;
            reports[i] = run_job(inst, *selected[i], cap);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return reports;
}

}  // namespace modref
