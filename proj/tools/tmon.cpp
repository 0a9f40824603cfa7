// Command-line front end. Exit codes: 0 all checks pass, 2 a check failed,
// 3 invalid input, 4 enumeration too large, 1 internal error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tmon/codensity.hpp"
#include "tmon/facts.hpp"
#include "tmon/monadlab.hpp"
#include "tmon/operadic.hpp"
#include "tmon/tower.hpp"
#include "tmon/ultra.hpp"

namespace {

using namespace tmon;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kPass = 0, kInternal = 1, kFailed = 2, kInput = 3, kTooLarge = 4 };

struct RunConfig {
    std::uint64_t cap = kDefaultEnumerationCap;
    std::uint64_t seed = 1;
    std::size_t max_size = 4;
    std::size_t max_arity = 2;
    std::size_t steps = 3;
    std::string universe;
    std::string json_path;
    bool corrupt = false;
};

struct Outcome {
    Report report;
    std::string text;  // extra human-readable output printed before the report
    int code = kPass;
};

std::optional<std::uint64_t> env_u64(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    try {
        std::size_t pos = 0;
        const auto x = std::stoull(v, &pos);
        if (pos != std::string(v).size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw StructuralError(std::string(name) + " is not a nonnegative integer: " + v);
    }
}

Universe parse_universe(const std::string& s, std::size_t max_size) {
    Universe u;
    if (s.empty()) {
        for (std::uint64_t n = 0; n <= std::min<std::size_t>(max_size, 3); ++n) u.push_back(n);
        return u;
    }
    if (s.front() == '[') {
        try {
            u = json::parse(s).get<Universe>();
        } catch (const json::exception& e) {
            throw StructuralError(std::string("universe is not a JSON array of sizes: ") + e.what());
        }
    } else {
        std::stringstream in(s);
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                std::size_t pos = 0;
                u.push_back(std::stoull(item, &pos));
                if (pos != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw StructuralError("universe entry '" + item + "' is not a size");
            }
        }
    }
    if (u.empty()) throw StructuralError("universe is empty");
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

int code_for(const Report& r) {
    if (!r.ok()) return kFailed;
    if (r.data.contains("cap_exceeded") && !r.data["cap_exceeded"].empty()) return kTooLarge;
    return kPass;
}

Outcome finish(Report r, std::string text = {}) {
    Outcome o{std::move(r), std::move(text), kPass};
    o.code = code_for(o.report);
    return o;
}

Group parse_group(const std::string& s) {
    if (s.empty() || s.front() != '[') return group_by_name(s);
    json j;
    try {
        j = json::parse(s);
    } catch (const json::exception& e) {
        throw StructuralError(std::string("group table is not JSON: ") + e.what());
    }
    std::vector<Elem> flat;
    std::size_t n = j.size();
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != n) throw StructuralError("group table must be square");
        for (const auto& v : row) flat.push_back(v.get<Elem>());
    }
    return Group(n, std::move(flat));
}

std::vector<Object> objects_of_sizes(const std::vector<std::size_t>& sizes) {
    std::vector<Object> out;
    for (auto s : sizes) out.push_back(Object::set(s));
    return out;
}

// Builds the parser, runs the selected command, and returns its outcome.
// The argument vector excludes the program name.
Outcome run(const std::vector<std::string>& args, RunConfig& cfg);

Outcome recheck(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot read report '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw StructuralError(std::string("report is not JSON: ") + e.what());
    }
    if (!j.contains("command") || !j.contains("report")) throw StructuralError("report lacks command or report");
    auto args = j.at("command").get<std::vector<std::string>>();
    if (std::find(args.begin(), args.end(), "recheck") != args.end())
        throw StructuralError("refusing to recheck a recheck");
    // Cap and seed may have come from the environment; pin them to the recorded values.
    if (j.contains("config")) {
        const auto& c = j.at("config");
        for (const auto* key : {"cap", "seed"}) {
            const std::string flag = std::string("--") + key;
            if (c.contains(key) && std::find(args.begin(), args.end(), flag) == args.end())
                args.insert(args.begin(), {flag, std::to_string(c.at(key).get<std::uint64_t>())});
        }
    }
    const auto original = j.at("report").get<Report>();
    RunConfig cfg;
    const auto again = run(args, cfg);

    Report r;
    r.title = "recheck of " + path;
    for (const auto& c : original.checks) {
        const auto* now = again.report.find(c.name);
        if (!now) {
            r.add(c.name, false, "check no longer produced");
            continue;
        }
        r.add(c.name, now->verdict == c.verdict && now->witness == c.witness,
              "was " + to_string(c.verdict) + ", now " + to_string(now->verdict), "verdict reproduced");
    }
    if (again.report.checks.size() != original.checks.size())
        r.add("same number of checks", false,
              std::to_string(original.checks.size()) + " vs " + std::to_string(again.report.checks.size()));
    return finish(std::move(r));
}

Outcome run(const std::vector<std::string>& args, RunConfig& cfg) {
    CLI::App app{"Codensity and terminal monads over finite concrete categories", "tmon"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    std::uint64_t cap_flag = 0, seed_flag = 0;
    auto* cap_opt = app.add_option("--cap", cap_flag, "Enumeration cap (env TMON_CAP)")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed_flag, "Seed for sampled checks (env TMON_SEED)");
    app.add_option("--max-size", cfg.max_size, "Largest |X| for set-level items")->check(CLI::Range(0, 6));
    app.add_option("--max-arity", cfg.max_arity, "Operad truncation arity")->check(CLI::Range(1, 3));
    app.add_option("--universe", cfg.universe, "Universe sizes, e.g. 0,1,2,3 or [0,1,2]");
    app.add_option("--json", cfg.json_path, "Write the JSON report to this path ('-' for stdout)");
    app.add_flag("--corrupt", cfg.corrupt, "Test mode: corrupt the Maybe monad")->group("");

    std::function<Outcome()> action;
    auto select = [&](CLI::App* sub, std::function<Outcome()> f) { sub->callback([&action, f] { action = f; }); };

    // verify / facts
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->require_subcommand(1);
    select(verify->add_subcommand("all", "Every harness, including the expected identifications"), [&] {
        FactsConfig fc{cfg.max_size, cfg.seed, cfg.corrupt};
        return finish(verify_all(fc));
    });
    select(app.add_subcommand("facts", "One-page scorecard of the desk-scale facts"), [&] {
        FactsConfig fc{cfg.max_size, cfg.seed, cfg.corrupt};
        return finish(desk_facts(fc));
    });

    // ultra
    auto* ultra = app.add_subcommand("ultra", "Ultrasets and ultrafilters");
    ultra->require_subcommand(1);
    std::string kind = "us";
    std::size_t size = 3;
    auto* ue = ultra->add_subcommand("enumerate", "List ultrasets (us) or ultrafilters (uf)");
    ue->add_option("--kind", kind)->check(CLI::IsMember({"us", "uf"}));
    ue->add_option("--size", size)->check(CLI::Range(0, 5));
    select(ue, [&] {
        const auto fams = kind == "us" ? ultrasets(size) : ultrafilters(size);
        Report r;
        r.title = (kind == "us" ? "ultrasets" : "ultrafilters") + std::string(" on ") + std::to_string(size) + " points";
        std::ostringstream text;
        for (const auto& a : fams) {
            text << family_json(a).dump() << '\n';
            r.data["families"].push_back(family_json(a));
        }
        text << fams.size() << " families\n";
        r.data["count"] = fams.size();
        return finish(std::move(r), text.str());
    });
    auto* uv = ultra->add_subcommand("verify", "T2 = US, T3 = UF and the partition lemma at one size");
    uv->add_option("--size", size)->check(CLI::Range(0, 4));
    select(uv, [&] {
        auto r = verify_T2_is_US(size);
        if (size <= 3) r.merge(verify_T3_is_UF(size), "T3");
        bool agree = true;
        std::string w;
        for (const auto& a : ultrasets(size))
            if (partition_criterion(a) != is_ultrafilter(a)) {
                agree = false;
                w = family_json(a).dump();
            }
        r.add("partition criterion <=> ultrafilter", agree, w);
        r.merge(sub_functor_check(std::min<std::size_t>(size, 4)), "sub-functor");
        return finish(std::move(r));
    });

    // monad
    auto* monad = app.add_subcommand("monad", "Monad laws, terminal monads and towers");
    monad->require_subcommand(1);
    std::string spec = "maybe";
    auto law_opts = [&] {
        LawOptions o;
        o.seed = cfg.seed;
        return o;
    };
    auto monad_of = [&] {
        auto M = monad_from_descriptor(spec);
        if (cfg.corrupt) M = std::make_shared<CorruptedMonad>(M);
        return M;
    };
    auto* ml = monad->add_subcommand("laws", "Functor and monad laws");
    ml->add_option("--spec", spec, "Builtin name or {\"builtin\":..,\"params\":..}");
    select(ml, [&] { return finish(check_monad_laws(*monad_of(), parse_universe(cfg.universe, cfg.max_size), law_opts())); });
    auto* mt = monad->add_subcommand("terminal", "T_M as the equalizer of M => M^2");
    mt->add_option("--spec", spec);
    select(mt, [&] {
        auto r = terminal_monad_report(monad_of(), parse_universe(cfg.universe, cfg.max_size), law_opts());
        std::ostringstream text;
        text << "  X   |M(X)|  |T(X)|  T(X) = eta(X)\n";
        for (const auto& o : r.data["objects"]) {
            auto mem = o["members"].get<std::vector<std::string>>();
            auto unit = o["unit_image"].get<std::vector<std::string>>();
            std::sort(unit.begin(), unit.end());
            unit.erase(std::unique(unit.begin(), unit.end()), unit.end());
            std::sort(mem.begin(), mem.end());
            text << "  " << o["X"].get<std::uint64_t>() << "   " << o["M"].get<std::uint64_t>() << "       "
                 << o["T"].get<std::uint64_t>() << "       " << (mem == unit ? "yes" : "no") << '\n';
        }
        return finish(std::move(r), text.str());
    });
    auto* mw = monad->add_subcommand("tower", "The completion tower M_{i+1} = T_{M_i}");
    mw->add_option("--spec", spec);
    mw->add_option("--steps", cfg.steps)->check(CLI::Range(1, 8));
    select(mw, [&] { return finish(tower(monad_of(), cfg.steps, parse_universe(cfg.universe, cfg.max_size), cfg.seed).report); });

    // operadic
    auto* op = app.add_subcommand("operadic", "Hom-objects over operads and structured double duals");
    op->require_subcommand(1);
    std::size_t d = 2, n = 1, c = 0, q = 2, dim = 2;
    std::string group = "S3";
    auto* opp = op->add_subcommand("powers", "T_{d^n} against hom-objects over the endomorphism operad");
    opp->add_option("--d", d)->check(CLI::Range(1, 3));
    opp->add_option("--n", n)->check(CLI::Range(1, 3));
    auto* c_opt = opp->add_option("--c", c, "A single universe object")->check(CLI::Range(0, 4));
    select(opp, [&] {
        if (n > cfg.max_arity) throw PreconditionViolation("n exceeds --max-arity");
        const Universe u = c_opt->count() ? Universe{c} : parse_universe(cfg.universe, cfg.max_size);
        return finish(verify_powers_theorem(d, n, u));
    });
    auto* opg = op->add_subcommand("group-dd", "T_G(Z) as End(G)-equivariant self-maps");
    opg->add_option("--group", group, "Name (C4, S3, C2xC2) or JSON multiplication table");
    select(opg, [&] { return finish(group_double_dual(parse_group(group), group).report); });
    auto* opv = op->add_subcommand("vect-dd", "Single-object vs operadic double dual over F_q");
    opv->add_option("--q", q)->check(CLI::Range(2, 32));
    opv->add_option("--dim", dim)->check(CLI::Range(0, 10));
    select(opv, [&] { return finish(vect_double_dual_experiment(static_cast<std::uint32_t>(q), dim).report); });

    // codensity
    auto* cod = app.add_subcommand("codensity", "Codensity objects T_D(c)");
    cod->require_subcommand(1);
    std::size_t cs = 3;
    std::vector<std::size_t> D{2};
    std::string c_json, d_json, algorithm = "comma";
    bool laws = false;
    auto* co = cod->add_subcommand("object", "Families of T_D(c)");
    co->add_option("--c", cs, "Size of a finite set c");
    co->add_option("--D", D, "Sizes of the objects in D")->delimiter(',');
    co->add_option("--c-json", c_json, "c as a JSON object (sets, groups, vector spaces)");
    co->add_option("--D-json", d_json, "D as a JSON array of objects");
    co->add_option("--algorithm", algorithm)->check(CLI::IsMember({"comma", "end"}));
    co->add_flag("--laws", laws, "Also check the monad laws at c");
    select(co, [&] {
        const Object base = c_json.empty() ? Object::set(cs) : object_from_json(json::parse(c_json));
        std::vector<Object> targets;
        if (d_json.empty()) targets = objects_of_sizes(D);
        else
            for (const auto& o : json::parse(d_json)) targets.push_back(object_from_json(o));
        const auto T = algorithm == "comma" ? codensity_object(base, targets) : end_equalizer_object(base, targets);
        Report r;
        r.title = "T_D(c) for c = " + base.describe();
        std::ostringstream text;
        for (const auto& f : T.families) {
            r.data["families"].push_back(family_to_json(T, f));
            text << json(f).dump() << '\n';
        }
        text << T.size() << " families over " << T.comma->objects().size() << " comma objects\n";
        r.data["size"] = T.size();
        r.data["unit"] = unit(T).table;
        if (algorithm == "comma" && base.kind() == Kind::set) {
            const auto E = end_equalizer_object(base, targets);
            r.add("comma limit = end equalizer", E.families == T.families);
        }
        if (laws) r.merge(check_codensity_monad(base, targets, cfg.seed), "laws");
        return finish(std::move(r), text.str());
    });

    // recheck
    std::string report_path;
    auto* rc = app.add_subcommand("recheck", "Re-run the command recorded in a JSON report and compare verdicts");
    rc->add_option("report", report_path)->required();
    select(rc, [&] { return recheck(report_path); });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        Outcome h;
        h.text = app.help();
        return h;
    } catch (const CLI::CallForVersion&) {
        Outcome h;
        h.text = std::string(kVersion) + "\n";
        return h;
    } catch (const CLI::ParseError& e) {
        throw StructuralError(e.what());
    }

    // Precedence: flags > environment > defaults.
    cfg.cap = cap_opt->count() ? cap_flag : env_u64("TMON_CAP").value_or(kDefaultEnumerationCap);
    cfg.seed = seed_opt->count() ? seed_flag : env_u64("TMON_SEED").value_or(1);
    if (cfg.cap == 0) throw StructuralError("enumeration cap must be positive");
    ScopedEnumerationCap scoped(cfg.cap);
    if (!action) throw StructuralError("no command selected");
    return action();
}

json envelope(const std::vector<std::string>& args, const RunConfig& cfg, const Outcome& o, double ms) {
    return {{"tool", "tmon"},
            {"version", kVersion},
            {"command", args},
            {"config",
             {{"cap", cfg.cap},
              {"seed", cfg.seed},
              {"max_size", cfg.max_size},
              {"max_arity", cfg.max_arity},
              {"universe", cfg.universe}}},
            {"elapsed_ms", ms},
            {"exit_code", o.code},
            {"report", o.report}};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    RunConfig cfg;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = run(args, cfg);
    } catch (const EnumerationTooLarge& e) {
        std::cerr << "tmon: " << e.what() << '\n';
        return kTooLarge;
    } catch (const StructuralError& e) {
        std::cerr << "tmon: invalid input: " << e.what() << '\n';
        return kInput;
    } catch (const PreconditionViolation& e) {
        std::cerr << "tmon: precondition violated: " << e.what() << '\n';
        return kInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "tmon: invalid JSON: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "tmon: internal error: " << e.what() << '\n';
        return kInternal;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (o.report.title.empty() && o.report.checks.empty()) {
        std::cout << o.text;
        return o.code;
    }
    if (cfg.json_path == "-") {
        std::cout << envelope(args, cfg, o, ms).dump(2) << '\n';
        return o.code;
    }
    std::cout << o.text;
    print_text(std::cout, o.report);
    if (!cfg.json_path.empty()) {
        std::ofstream out(cfg.json_path);
        if (!out) {
            std::cerr << "tmon: cannot write " << cfg.json_path << '\n';
            return kInput;
        }
        out << envelope(args, cfg, o, ms).dump(2) << '\n';
    }
    return o.code;
}
