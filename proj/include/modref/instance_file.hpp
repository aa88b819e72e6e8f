#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "modref/builtins.hpp"

namespace modref {

// Sectioned key-value instance files:
//
//   [ring]                      base ring: rank, orders, unit and the
//   rank = 1                    structure constants as quadruples
//   orders = 0                  "mult = i j k c" (coefficient c of e_k in
//   unit = 1                    the product e_i e_j; omitted entries are 0)
//   mult = 0 0 0 1
//
//   [module "M"]                side = left|right, gens, and one "rel" line
//   side = left                 per relation: ring-element coordinate
//   gens = 1                    vectors, one block per generator, separated
//   rel = 2                     by '|'
//
//   [algebra "S"]               a ring section plus "map" lines, one per
//   ...ring keys...             base-ring generator, giving the structure
//   map = 1                     map R -> S on additive generators
//
//   [diagram]                   arrows between algebras ("R" is the base
//   arrow = R S : 1             ring itself); matrix rows separated by ';'
//
//   [jobs]
//   job = reflexivity module=M
//
// Ring elements are coordinate vectors over the declared additive
// generators; there is no expression syntax.

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

struct JobSpec {
    std::string statement;
    std::map<std::string, std::string> args;
    int line = 0;
};

struct ParsedInstance {
    StructureRing ring;
    std::vector<std::pair<std::string, FpModule>> modules;
    AlgebraDiagram diagram;  // algebras[0] is the base ring, named "R"
    std::vector<JobSpec> jobs;

    const FpModule& module_named(const std::string& name, int line) const {
        for (const auto& [n, m] : modules)
            if (n == name) return m;
        throw ParseError(line, "unknown module \"" + name + "\"");
    }
};

namespace detail {

struct RawSection {
    std::string kind, name;
    int line;
    std::vector<std::pair<int, std::string>> entries;  // (line, text) of key = value
};

inline std::vector<std::string> tokens_of(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

inline IntVec int_vector(const std::string& s, int line) {
    IntVec out;
    for (const auto& t : tokens_of(s)) {
        try {
            out.push_back(Int(t));
        } catch (const std::invalid_argument&) {
            throw ParseError(line, "expected an integer, found \"" + t + "\"");
        }
    }
    return out;
}

struct RingData {
    int rank = -1;
    IntVec orders, unit;
    std::vector<std::vector<RingElt>> mult;
    std::vector<IntVec> map_rows;  // algebra sections only
    int first_line = 0;

    void take(const std::string& key, const std::string& value, int line) {
        if (key == "rank") {
            rank = std::stoi(value);
            if (rank < 0) throw ParseError(line, "rank must be >= 0");
            mult.assign(rank, std::vector<RingElt>(rank, IntVec(rank, Int(0))));
        } else if (key == "orders") {
            orders = int_vector(value, line);
        } else if (key == "unit") {
            unit = int_vector(value, line);
        } else if (key == "mult") {
            if (rank < 0) throw ParseError(line, "rank must come before mult lines");
            IntVec q = int_vector(value, line);
            if (q.size() != 4) throw ParseError(line, "mult takes exactly four integers: i j k c");
            long i = q[0].get_si(), j = q[1].get_si(), k = q[2].get_si();
            if (i < 0 || i >= rank || j < 0 || j >= rank || k < 0 || k >= rank)
                throw ParseError(line, "mult index out of range");
            mult[i][j][k] = q[3];
        } else if (key == "map") {
            map_rows.push_back(int_vector(value, line));
        } else {
            throw ParseError(line, "unknown key \"" + key + "\"");
        }
    }

    StructureRing validate(const std::string& what, int line) const {
        if (rank < 0) throw ParseError(line, what + ": missing rank");
        if (static_cast<int>(orders.size()) != rank) throw ParseError(line, what + ": orders length != rank");
        if (static_cast<int>(unit.size()) != rank) throw ParseError(line, what + ": unit length != rank");
        try {
            return ring_validate(orders, mult, unit, what);
        } catch (const RingAxiomError& e) {
            throw ParseError(line, what + ": " + e.what());
        }
    }
};

}  // namespace detail

inline ParsedInstance parse_instance_text(const std::string& text) {
    std::vector<detail::RawSection> sections;
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            std::string trimmed;
            {
                auto b = line.find_first_not_of(" \t\r");
                if (b == std::string::npos) continue;
                auto e = line.find_last_not_of(" \t\r");
                trimmed = line.substr(b, e - b + 1);
            }
            if (trimmed.empty()) continue;
            if (trimmed.front() == '[') {
                if (trimmed.back() != ']') throw ParseError(lineno, "unterminated section header");
                std::string inner = trimmed.substr(1, trimmed.size() - 2);
                auto sp = inner.find(' ');
                detail::RawSection sec;
                sec.line = lineno;
                if (sp == std::string::npos) {
                    sec.kind = inner;
                } else {
                    sec.kind = inner.substr(0, sp);
                    std::string rest = inner.substr(sp + 1);
                    if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"')
                        throw ParseError(lineno, "section name must be quoted");
                    sec.name = rest.substr(1, rest.size() - 2);
                }
                sections.push_back(std::move(sec));
            } else {
                if (sections.empty()) throw ParseError(lineno, "content before the first section");
                sections.back().entries.push_back({lineno, trimmed});
            }
        }
    }

    ParsedInstance out;
    bool have_ring = false;
    detail::RingData base;
    std::vector<std::pair<detail::RawSection, detail::RingData>> algebra_sections;
    std::vector<detail::RawSection> module_sections, diagram_sections, job_sections;

    auto split_kv = [](const std::string& s, int line) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key = value");
        auto trim = [](std::string t) {
            auto b = t.find_first_not_of(" \t");
            auto e = t.find_last_not_of(" \t");
            return (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
        };
        return std::make_pair(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    };

    for (const auto& sec : sections) {
        if (sec.kind == "ring") {
            if (have_ring) throw ParseError(sec.line, "duplicate [ring] section");
            have_ring = true;
            base.first_line = sec.line;
            for (const auto& [ln, entry] : sec.entries) {
                auto [k, v] = split_kv(entry, ln);
                base.take(k, v, ln);
            }
        } else if (sec.kind == "module") {
            if (sec.name.empty()) throw ParseError(sec.line, "module sections need a name");
            module_sections.push_back(sec);
        } else if (sec.kind == "algebra") {
            if (sec.name.empty()) throw ParseError(sec.line, "algebra sections need a name");
            detail::RingData rd;
            rd.first_line = sec.line;
            for (const auto& [ln, entry] : sec.entries) {
                auto [k, v] = split_kv(entry, ln);
                rd.take(k, v, ln);
            }
            algebra_sections.push_back({sec, std::move(rd)});
        } else if (sec.kind == "diagram") {
            diagram_sections.push_back(sec);
        } else if (sec.kind == "jobs") {
            job_sections.push_back(sec);
        } else {
            throw ParseError(sec.line, "unknown section [" + sec.kind + "]");
        }
    }
    if (!have_ring) throw ParseError(1, "missing [ring] section");
    out.ring = base.validate("ring", base.first_line);
    out.ring.set_name("R");

    // modules
    for (const auto& sec : module_sections) {
        bool left = true, side_seen = false;
        int gens = -1;
        std::vector<std::vector<RingElt>> rels;
        for (const auto& [ln, entry] : sec.entries) {
            auto [k, v] = split_kv(entry, ln);
            if (k == "side") {
                side_seen = true;
                if (v == "left")
                    left = true;
                else if (v == "right")
                    left = false;
                else
                    throw ParseError(ln, "side must be left or right");
            } else if (k == "gens") {
                gens = std::stoi(v);
                if (gens < 0) throw ParseError(ln, "gens must be >= 0");
            } else if (k == "rel") {
                if (gens < 0) throw ParseError(ln, "gens must come before rel lines");
                std::vector<RingElt> rel;
                std::string part;
                std::istringstream ps(v);
                while (std::getline(ps, part, '|')) rel.push_back(detail::int_vector(part, ln));
                if (static_cast<int>(rel.size()) != gens)
                    throw ParseError(ln, "relation has " + std::to_string(rel.size()) + " blocks, expected " +
                                             std::to_string(gens));
                for (const auto& c : rel)
                    if (static_cast<int>(c.size()) != out.ring.rank())
                        throw ParseError(ln, "ring element has wrong width");
                rels.push_back(std::move(rel));
            } else {
                throw ParseError(ln, "unknown key \"" + k + "\" in module section");
            }
        }
        if (!side_seen) throw ParseError(sec.line, "module \"" + sec.name + "\": missing side");
        if (gens < 0) throw ParseError(sec.line, "module \"" + sec.name + "\": missing gens");
        for (const auto& [n, m] : out.modules)
            if (n == sec.name) throw ParseError(sec.line, "duplicate module \"" + sec.name + "\"");
        out.modules.push_back({sec.name, module_from_presentation(out.ring, left, gens, rels)});
    }

    // algebras: the base ring itself is always algebra 0, named "R"
    out.diagram.algebras.push_back(algebra_self(out.ring, "R"));
    for (const auto& [sec, rd] : algebra_sections) {
        if (sec.name == "R") throw ParseError(sec.line, "algebra name \"R\" is reserved for the base ring");
        StructureRing s = rd.validate("algebra \"" + sec.name + "\"", sec.line);
        s.set_name(sec.name);
        if (static_cast<int>(rd.map_rows.size()) != out.ring.rank())
            throw ParseError(sec.line, "algebra \"" + sec.name + "\": expected one map line per base generator");
        IntMatrix m(out.ring.rank(), s.rank());
        for (int i = 0; i < out.ring.rank(); ++i) {
            if (static_cast<int>(rd.map_rows[i].size()) != s.rank())
                throw ParseError(sec.line, "algebra \"" + sec.name + "\": map row has wrong width");
            m.set_row(i, rd.map_rows[i]);
        }
        try {
            out.diagram.algebras.push_back(Algebra{s, ring_map(out.ring, s, std::move(m)), sec.name});
        } catch (const std::invalid_argument& e) {
            throw ParseError(sec.line, "algebra \"" + sec.name + "\": " + e.what());
        }
    }

    auto algebra_index = [&](const std::string& name, int line) {
        for (std::size_t i = 0; i < out.diagram.algebras.size(); ++i)
            if (out.diagram.algebras[i].name == name) return static_cast<int>(i);
        throw ParseError(line, "unknown algebra \"" + name + "\"");
    };

    for (const auto& sec : diagram_sections) {
        for (const auto& [ln, entry] : sec.entries) {
            auto [k, v] = split_kv(entry, ln);
            if (k != "arrow") throw ParseError(ln, "unknown key \"" + k + "\" in diagram section");
            auto colon = v.find(':');
            if (colon == std::string::npos) throw ParseError(ln, "arrow needs \"FROM TO : matrix\"");
            auto names = detail::tokens_of(v.substr(0, colon));
            if (names.size() != 2) throw ParseError(ln, "arrow needs exactly two algebra names");
            int from = algebra_index(names[0], ln), to = algebra_index(names[1], ln);
            std::vector<IntVec> rows;
            std::string rowpart;
            std::istringstream rs(v.substr(colon + 1));
            while (std::getline(rs, rowpart, ';')) rows.push_back(detail::int_vector(rowpart, ln));
            const Algebra& fa = out.diagram.algebras[from];
            const Algebra& ta = out.diagram.algebras[to];
            if (static_cast<int>(rows.size()) != fa.ring.rank())
                throw ParseError(ln, "arrow matrix has wrong number of rows");
            IntMatrix m(fa.ring.rank(), ta.ring.rank());
            for (int i = 0; i < m.rows(); ++i) {
                if (static_cast<int>(rows[i].size()) != ta.ring.rank())
                    throw ParseError(ln, "arrow matrix row has wrong width");
                m.set_row(i, rows[i]);
            }
            try {
                out.diagram.arrows.push_back({from, to, ring_map(fa.ring, ta.ring, std::move(m))});
            } catch (const std::invalid_argument& e) {
                throw ParseError(ln, std::string("arrow: ") + e.what());
            }
        }
    }
    try {
        validate_diagram(out.diagram);
    } catch (const std::invalid_argument& e) {
        throw ParseError(diagram_sections.empty() ? 1 : diagram_sections.front().line,
                         std::string("diagram: ") + e.what());
    }

    for (const auto& sec : job_sections) {
        for (const auto& [ln, entry] : sec.entries) {
            auto [k, v] = split_kv(entry, ln);
            if (k != "job") throw ParseError(ln, "unknown key \"" + k + "\" in jobs section");
            auto toks = detail::tokens_of(v);
            if (toks.empty()) throw ParseError(ln, "empty job line");
            JobSpec js;
            js.statement = toks[0];
            js.line = ln;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos) throw ParseError(ln, "job arguments must be key=value");
                js.args[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
            }
            out.jobs.push_back(std::move(js));
        }
    }
    return out;
}

// --- serialization -----------------------------------------------------------

inline void serialize_ring_body(std::ostream& os, const StructureRing& r) {
    os << "rank = " << r.rank() << "\n";
    os << "orders =";
    for (const Int& d : r.orders()) os << " " << d.get_str();
    os << "\nunit =";
    for (const Int& u : r.unit()) os << " " << u.get_str();
    os << "\n";
    for (int i = 0; i < r.rank(); ++i)
        for (int j = 0; j < r.rank(); ++j)
            for (int k = 0; k < r.rank(); ++k)
                if (r.basis_product(i, j)[k] != 0)
                    os << "mult = " << i << " " << j << " " << k << " "
                       << r.basis_product(i, j)[k].get_str() << "\n";
}

inline void serialize_module(std::ostream& os, const std::string& name, const FpModule& m) {
    os << "\n[module \"" << name << "\"]\n";
    os << "side = " << (m.left ? "left" : "right") << "\n";
    os << "gens = " << m.gens << "\n";
    for (const auto& rel : m.relations) {
        os << "rel =";
        for (std::size_t g = 0; g < rel.size(); ++g) {
            if (g) os << " |";
            for (const Int& c : rel[g]) os << " " << c.get_str();
        }
        os << "\n";
    }
}

// Serialize a catalog entry as a complete instance file with the standard
// jobs; the entry's own ring appears as [ring] and its extra algebras as
// [algebra] sections.
inline std::string serialize_catalog_entry(const CatalogEntry& e, bool with_jobs = true) {
    std::ostringstream os;
    os << "# " << e.name << "\n\n[ring]\n";
    serialize_ring_body(os, e.ring);
    for (const auto& [name, m] : e.left_modules) serialize_module(os, name + "_l", m);
    for (const auto& [name, m] : e.right_modules) serialize_module(os, name + "_r", m);
    for (std::size_t i = 1; i < e.diagram.algebras.size(); ++i) {
        const Algebra& a = e.diagram.algebras[i];
        os << "\n[algebra \"" << a.name << "\"]\n";
        serialize_ring_body(os, a.ring);
        for (int r = 0; r < a.structure_map.matrix.rows(); ++r) {
            os << "map =";
            for (int c = 0; c < a.structure_map.matrix.cols(); ++c)
                os << " " << a.structure_map.matrix.at(r, c).get_str();
            os << "\n";
        }
    }
    os << "\n[diagram]\n";
    auto alg_name = [&](int i) { return i == 0 ? std::string("R") : e.diagram.algebras[i].name; };
    for (const auto& ar : e.diagram.arrows) {
        os << "arrow = " << alg_name(ar.from) << " " << alg_name(ar.to) << " :";
        for (int r = 0; r < ar.map.matrix.rows(); ++r) {
            if (r) os << " ;";
            for (int c = 0; c < ar.map.matrix.cols(); ++c) os << " " << ar.map.matrix.at(r, c).get_str();
        }
        os << "\n";
    }
    if (with_jobs) {
        os << "\n[jobs]\n";
        for (const auto& [name, m] : e.left_modules) {
            os << "job = reflexivity module=" << name << "_l\n";
            os << "job = vee_reflexivity module=" << name << "_l cap=" << e.cap << "\n";
        }
        for (const auto& p : e.pairs) {
            auto pos = p.name.find("(x)");
            std::string nn = p.name.substr(0, pos) + "_r";
            std::string nm = p.name.substr(pos + 3) + "_l";
            os << "job = hypothesis right=" << nn << " left=" << nm << "\n";
            os << "job = extension_formula right=" << nn << " left=" << nm << "\n";
            os << "job = symmetry right=" << nn << " left=" << nm << "\n";
            os << "job = kernel_compare right=" << nn << " left=" << nm << "\n";
        }
        os << "job = central_split gens=unit pairs=all\n";
    }
    return os.str();
}

}  // namespace modref
