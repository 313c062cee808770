// cspforge: structured reductions between constraint satisfaction problems.
//
// Exit codes: 0 accept/feasible/found, 1 reject/infeasible/none, 2 usage or
// input error.

#include "cspforge/corpus.hpp"
#include "cspforge/gadgets.hpp"
#include "cspforge/labelcover.hpp"
#include "cspforge/minions.hpp"
#include "cspforge/parser.hpp"
#include "cspforge/relax.hpp"
#include "cspforge/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace cspforge;
using nlohmann::json;

namespace {

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;

struct Ctx {
    std::vector<std::string> template_files;
    std::string instance_file;
    std::string target_file;
    std::string program_file;
    std::string interp_file;
    std::string union_file;
    std::string gadget_file;
    std::string projective_file;
    std::string labelcover_file;
    std::string minion_file;
    std::string minion2_file;
    std::string lp_file;
    std::string system_file;
    std::string first_file;
    std::string second_file;
    int k = 2;
    std::string modulus = "Z";
    int max_arity = 3;
    uint64_t seed = 1;
    std::string out_file;
    std::string format = "text";
    int only_case = -1;
    bool literal_zero = false;

    Document doc;

    std::string slurp(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    // parses a document file into the shared scope; returns the file's own
    // declarations for object selection
    Document load(const std::string& path) {
        Document local = parse_document(slurp(path));
        merge_document(doc, local);
        return local;
    }

    std::string tmpl_file() const {
        if (template_files.empty()) throw Error("missing --template");
        return template_files.front();
    }

    Structure structure_from(const std::string& path, const char* role) {
        if (path.empty()) throw Error(std::string("missing --") + role + " file");
        Document local = load(path);
        if (local.structures.empty()) throw Error(std::string(role) + " file " + path +
                                                  " declares no structure");
        return local.structures.back().second;
    }

    LabelCoverInstance labelcover_from(const std::string& path) {
        Document local = load(path);
        if (local.labelcovers.empty()) throw Error("file " + path + " declares no labelcover");
        return local.labelcovers.back().second;
    }

    Minion minion_from(const std::string& path) { return minion_from_json(slurp(path)); }

    DDatalogReduction reduction_from(const std::string& path) {
        Document local = load(path);
        if (local.interpretations.empty())
            throw Error("file " + path + " declares no interpretation");
        DDatalogReduction r;
        r.interp = local.interpretations.back().second;
        if (!local.unions.empty())
            r.un = local.unions.back().second;
        else
            r.un = identity_union_gadget(r.interp.output);
        if (!(r.un.input == r.interp.output))
            throw Error("union gadget in " + path + " does not follow the interpretation");
        return r;
    }

    std::optional<unsigned> parse_modulus() const {
        if (modulus == "Z" || modulus == "z") return std::nullopt;
        return (unsigned)std::stoul(modulus);
    }

    void emit(const std::string& kind, const std::string& text_payload,
              const json& json_payload) {
        std::string body;
        if (format == "json") {
            json j{{"kind", kind}, {"payload", json_payload}, {"meta", {{"seed", seed}}}};
            body = j.dump(2) + "\n";
        } else {
            body = text_payload;
        }
        if (out_file.empty()) {
            std::cout << body;
        } else {
            std::ofstream out(out_file);
            if (!out) throw Error("cannot write " + out_file);
            out << body;
        }
    }

    void emit_structure(const Structure& s) {
        Document d;
        d.structures.push_back({"out", s});
        emit("structure", print_document(d), json::parse(structure_to_json(s)));
    }

    void emit_labelcover(const LabelCoverInstance& s) {
        emit("labelcover", print_labelcover("out", s), json::parse(labelcover_to_json(s)));
    }

    void emit_reduction(const DDatalogReduction& r) {
        Document d;
        d.interpretations.push_back({"out", r.interp});
        d.unions.push_back({"out_union", r.un});
        emit("reduction", print_document(d), json{{"text", print_document(d)}});
    }

    void emit_minion(const Minion& m) {
        emit("minion", minion_to_json(m) + "\n", json::parse(minion_to_json(m)));
    }
};

void warn_if_no_falsity(const Structure& b, const Structure& out) {
    bool has_false_nullary = false;
    for (int s = 0; s < (int)b.sig.symbols.size(); ++s)
        if (b.sig.symbols[s].arity.empty() && b.relations[s].empty()) has_false_nullary = true;
    if (has_false_nullary) return;
    bool asserted = false;
    for (int s = 0; s < (int)out.sig.symbols.size(); ++s)
        if (out.sig.symbols[s].arity.empty() && !out.relations[s].empty()) asserted = true;
    if (asserted || !has_false_nullary)
        std::cerr << "note: the target template carries no always-false nullary symbol; "
                     "empty families cannot be reflected as rejection\n";
}

int dispatch(const std::string& cmd, Ctx& ctx) {
    if (cmd == "hom" || cmd == "iso" || cmd == "homeq") {
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        if (cmd == "iso") {
            bool ok = is_isomorphic(x, a);
            ctx.emit("iso", ok ? "isomorphic\n" : "not isomorphic\n", json{{"isomorphic", ok}});
            return ok ? kAccept : kReject;
        }
        if (cmd == "homeq") {
            bool ok = is_hom_equivalent(x, a);
            ctx.emit("homeq", ok ? "homomorphically equivalent\n" : "not equivalent\n",
                     json{{"equivalent", ok}});
            return ok ? kAccept : kReject;
        }
        auto h = find_homomorphism(x, a);
        if (!h) {
            ctx.emit("hom", "none\n", json{{"found", false}});
            return kReject;
        }
        std::ostringstream text;
        json jmap = json::array();
        for (int t = 0; t < (int)x.domains.size(); ++t)
            for (int i = 0; i < x.domain_size(t); ++i) {
                text << x.sig.types[t] << ":" << x.element_name(t, i) << " -> "
                     << a.element_name(t, h->map[t][i]) << "\n";
                jmap.push_back({{"type", x.sig.types[t]},
                                {"from", x.element_name(t, i)},
                                {"to", a.element_name(t, h->map[t][i])}});
            }
        ctx.emit("hom", text.str(), json{{"found", true}, {"map", jmap}});
        return kAccept;
    }
    if (cmd == "eval") {
        Document local = ctx.load(ctx.program_file);
        if (local.programs.empty()) throw Error("program file declares no program");
        const DatalogProgram& p = local.programs.back().second;
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        auto out = evaluate_program(p, x);
        std::ostringstream text;
        json jt = json::array();
        const auto& ar = p.output_arity();
        for (const auto& tup : out) {
            json row = json::array();
            text << "(";
            for (size_t i = 0; i < tup.size(); ++i) {
                text << (i ? "," : "") << x.element_name(ar[i], tup[i]);
                row.push_back(x.element_name(ar[i], tup[i]));
            }
            text << ")\n";
            jt.push_back(row);
        }
        ctx.emit("relation", text.str(), json{{"tuples", jt}});
        return out.empty() ? kReject : kAccept;
    }
    if (cmd == "interp") {
        Document local = ctx.load(ctx.interp_file);
        if (local.interpretations.empty()) throw Error("file declares no interpretation");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        ctx.emit_structure(apply_interpretation(local.interpretations.back().second, x));
        return kAccept;
    }
    if (cmd == "union") {
        Document local = ctx.load(ctx.union_file);
        if (local.unions.empty()) throw Error("file declares no union gadget");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        ctx.emit_structure(apply_union_gadget(local.unions.back().second, x));
        return kAccept;
    }
    if (cmd == "compose") {
        DDatalogReduction r1 = ctx.reduction_from(ctx.first_file);
        DDatalogReduction r2 = ctx.reduction_from(ctx.second_file);
        ctx.emit_reduction(compose_ddatalog(r1, r2));
        return kAccept;
    }
    if (cmd == "gadget") {
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        if (!ctx.projective_file.empty()) {
            Document local = ctx.load(ctx.projective_file);
            if (local.projectives.empty()) throw Error("file declares no projective gadget");
            ctx.emit_structure(apply_projective_gadget(local.projectives.back().second, x));
        } else {
            Document local = ctx.load(ctx.gadget_file);
            if (local.gadgets.empty()) throw Error("file declares no gadget");
            ctx.emit_structure(apply_gadget(local.gadgets.back().second, x));
        }
        return kAccept;
    }
    if (cmd == "reify") {
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        if (!ctx.template_files.empty()) {
            Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
            ctx.emit_labelcover(reify_to_label_cover(a, x));
        } else {
            ctx.emit_structure(reify(x));
        }
        return kAccept;
    }
    if (cmd == "compile-gadget") {
        if (!ctx.projective_file.empty()) {
            Document local = ctx.load(ctx.projective_file);
            if (local.projectives.empty()) throw Error("file declares no projective gadget");
            ctx.emit_reduction(compile_projective_gadget(local.projectives.back().second));
        } else {
            Document local = ctx.load(ctx.gadget_file);
            if (local.gadgets.empty()) throw Error("file declares no gadget");
            ctx.emit_reduction(compile_gadget(local.gadgets.back().second));
        }
        return kAccept;
    }
    if (cmd == "universal") {
        Structure b = ctx.structure_from(ctx.target_file, "target");
        LabelCoverInstance s = ctx.labelcover_from(ctx.labelcover_file);
        ctx.emit_structure(apply_universal_gadget(b, s));
        return kAccept;
    }
    if (cmd == "sigma-k") {
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        int ignored = 0;
        auto s = sigma_k(a, x, ctx.k, &ignored);
        if (ignored > 0)
            std::cerr << "note: " << ignored << " constraint(s) with support above k were"
                      << " never placed inside a subset\n";
        ctx.emit_labelcover(s);
        return kAccept;
    }
    if (cmd == "ac-enforce") {
        LabelCoverInstance s = ctx.labelcover_from(ctx.labelcover_file);
        auto out = enforce_arc_consistency(s);
        ctx.emit_labelcover(out);
        return has_empty_type(out) ? kReject : kAccept;
    }
    if (cmd == "kcons-test") {
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        bool ok = k_consistency_test(a, ctx.k, x);
        ctx.emit("kcons-test", ok ? "consistent\n" : "inconsistent\n", json{{"accept", ok}});
        return ok ? kAccept : kReject;
    }
    if (cmd == "kcons-reduce" || cmd == "ac-reduce") {
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        Structure b = ctx.structure_from(ctx.target_file, "target");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        Structure out;
        if (cmd == "kcons-reduce") {
            int ignored = 0;
            auto s = sigma_k(a, x, ctx.k, &ignored);
            if (ignored > 0)
                std::cerr << "note: " << ignored << " constraint(s) with support above k were"
                          << " never placed inside a subset\n";
            out = apply_universal_gadget(b, enforce_arc_consistency(s));
        } else {
            out = arc_consistency_reduce(a, b, x);
        }
        warn_if_no_falsity(b, out);
        ctx.emit_structure(out);
        return kAccept;
    }
    if (cmd == "sa") {
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        auto sys = sherali_adams_system(a, ctx.k, x);
        ctx.emit("linear-system", export_text(sys), json{{"text", export_text(sys)}});
        return kAccept;
    }
    if (cmd == "lambda-conv") {
        LabelCoverInstance s = ctx.labelcover_from(ctx.labelcover_file);
        auto sys = lambda_conv(s, ctx.literal_zero);
        ctx.emit("linear-system", export_text(sys), json{{"text", export_text(sys)}});
        return kAccept;
    }
    if (cmd == "lp-check") {
        auto sys = parse_linear_system(ctx.slurp(ctx.lp_file));
        auto w = lp_feasible(sys);
        if (!w) {
            ctx.emit("lp-check", "infeasible\n", json{{"feasible", false}});
            return kReject;
        }
        std::ostringstream text;
        json jw = json::object();
        for (size_t i = 0; i < sys.vars.size(); ++i) {
            text << sys.vars[i].name << " = " << to_string((*w)[i]) << "\n";
            jw[sys.vars[i].name] = to_string((*w)[i]);
        }
        ctx.emit("lp-check", text.str(), json{{"feasible", true}, {"witness", jw}});
        return kAccept;
    }
    if (cmd == "affine") {
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        auto sys = affine_system(a, ctx.k, x, ctx.parse_modulus());
        ctx.emit("group-system", export_text(sys), json{{"text", export_text(sys)}});
        return kAccept;
    }
    if (cmd == "zsolve") {
        auto sys = parse_group_system(ctx.slurp(ctx.system_file));
        auto w = solve_group_system(sys);
        if (!w) {
            ctx.emit("zsolve", "infeasible\n", json{{"feasible", false}});
            return kReject;
        }
        std::ostringstream text;
        json jw = json::object();
        for (size_t i = 0; i < sys.vars.size(); ++i) {
            text << sys.vars[i] << " = " << to_string((*w)[i]) << "\n";
            jw[sys.vars[i]] = to_string((*w)[i]);
        }
        ctx.emit("zsolve", text.str(), json{{"feasible", true}, {"witness", jw}});
        return kAccept;
    }
    if (cmd == "pol") {
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        Structure b = ctx.target_file.empty() ? a : ctx.structure_from(ctx.target_file, "target");
        ctx.emit_minion(polymorphism_minion(a, b, ctx.max_arity));
        return kAccept;
    }
    if (cmd == "omega") {
        ctx.emit_minion(omega(ctx.minion_from(ctx.minion_file)));
        return kAccept;
    }
    if (cmd == "minion-hom") {
        Minion m = ctx.minion_from(ctx.minion_file);
        Minion n = ctx.minion_from(ctx.minion2_file);
        auto h = find_minion_homomorphism(m, n);
        if (!h) {
            ctx.emit("minion-hom", "none on this truncation\n", json{{"found", false}});
            return kReject;
        }
        std::ostringstream text;
        text << "certificate on the truncation up to arity " << m.max_arity << " only\n";
        json jm = json::array();
        for (int a = 1; a <= m.max_arity; ++a)
            for (int e = 0; e < m.size(a); ++e) {
                text << m.elems[a - 1][e] << " -> " << n.elems[a - 1][h->xi[a - 1][e]] << "\n";
                jm.push_back({{"arity", a}, {"from", e}, {"to", h->xi[a - 1][e]}});
            }
        ctx.emit("minion-hom",
                 text.str(), json{{"found", true}, {"truncation", m.max_arity}, {"map", jm}});
        return kAccept;
    }
    if (cmd == "adjunction-check") {
        LabelCoverInstance s = ctx.labelcover_from(ctx.labelcover_file);
        Minion m = ctx.minion_from(ctx.minion_file);
        auto [left, right] = arc_adjunction_sides(s, m);
        std::ostringstream text;
        text << "kappa_arc(X) -> M: " << (left ? "yes" : "no") << "\n"
             << "X -> omega(M): " << (right ? "yes" : "no") << "\n";
        ctx.emit("adjunction-check", text.str(),
                 json{{"left", left}, {"right", right}, {"agree", left == right}});
        return left == right ? kAccept : kReject;
    }
    if (cmd == "tensor") {
        Structure a = ctx.structure_from(ctx.tmpl_file(), "template");
        Structure x = ctx.structure_from(ctx.instance_file, "instance");
        if (!ctx.minion_file.empty()) {
            Minion m = ctx.minion_from(ctx.minion_file);
            bool ok = tensor_test(a, m, ctx.k, x);
            ctx.emit("tensor-test", ok ? "accept\n" : "reject\n", json{{"accept", ok}});
            return ok ? kAccept : kReject;
        }
        auto tau = tensor_interpretation(a.sig, ctx.k);
        ctx.emit_structure(apply_interpretation(tau, x));
        return kAccept;
    }
    throw Error("unknown command " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured reductions between constraint satisfaction problems"};
    app.require_subcommand(1);

    Ctx ctx;
    if (const char* env = std::getenv("CSPFORGE_SEED")) ctx.seed = std::strtoull(env, nullptr, 10);

    const char* commands[] = {"hom",         "iso",        "homeq",       "eval",
                              "interp",      "union",      "compose",     "gadget",
                              "reify",       "compile-gadget", "universal",
                              "sigma-k",     "ac-enforce", "kcons-test",  "kcons-reduce",
                              "ac-reduce",   "sa",         "lambda-conv", "lp-check",
                              "affine",      "zsolve",     "pol",         "omega",
                              "minion-hom",  "adjunction-check",          "tensor"};
    std::string chosen;
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name, "");
        sub->add_option("--template", ctx.template_files, "template structure file");
        sub->add_option("--instance", ctx.instance_file, "instance structure file");
        sub->add_option("--target", ctx.target_file, "target template file");
        sub->add_option("--program", ctx.program_file, "Datalog program file");
        sub->add_option("--interp", ctx.interp_file, "interpretation file");
        sub->add_option("--union", ctx.union_file, "union gadget file");
        sub->add_option("--gadget", ctx.gadget_file, "gadget file");
        sub->add_option("--projective", ctx.projective_file, "projective gadget file");
        sub->add_option("--labelcover", ctx.labelcover_file, "label cover file");
        sub->add_option("--minion", ctx.minion_file, "minion json file");
        sub->add_option("--minion2", ctx.minion2_file, "second minion json file");
        sub->add_option("--lp", ctx.lp_file, "linear system file");
        sub->add_option("--system", ctx.system_file, "group system file");
        sub->add_option("--first", ctx.first_file, "first reduction file");
        sub->add_option("--second", ctx.second_file, "second reduction file");
        sub->add_option("-k,--k", ctx.k, "consistency parameter");
        sub->add_option("--modulus", ctx.modulus, "group modulus, an integer or Z");
        sub->add_option("--max-arity", ctx.max_arity, "minion truncation arity");
        sub->add_option("--seed", ctx.seed, "random seed");
        sub->add_option("--out", ctx.out_file, "output file");
        sub->add_option("--format", ctx.format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--literal-zero", ctx.literal_zero,
                      "emit the displayed zero right-hand side in lambda-conv");
        sub->callback([name, &chosen]() { chosen = name; });
    }
    {
        CLI::App* sub = app.add_subcommand("verify", "run a theorem-verification suite");
        static std::string suite;
        sub->add_option("suite", suite, "suite name or 'all'")->required();
        sub->add_option("--seed", ctx.seed, "random seed");
        sub->add_option("--case", ctx.only_case, "run a single case by index");
        sub->add_option("--format", ctx.format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--out", ctx.out_file, "output file");
        sub->callback([&chosen]() { chosen = "verify:" + suite; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (chosen.rfind("verify:", 0) == 0) {
            std::string suite = chosen.substr(7);
            std::vector<std::string> names =
                suite == "all" ? suite_names() : std::vector<std::string>{suite};
            bool ok = true;
            std::ostringstream text;
            for (const auto& name : names) {
                SuiteReport r = run_suite(name, ctx.seed, ctx.only_case);
                ok = ok && r.all_pass();
                text << (ctx.format == "json" ? report_json(r) + "\n" : report_text(r));
            }
            if (ctx.out_file.empty()) {
                std::cout << text.str();
            } else {
                std::ofstream out(ctx.out_file);
                out << text.str();
            }
            return ok ? kAccept : kReject;
        }
        return dispatch(chosen, ctx);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
