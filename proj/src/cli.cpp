#include "rlam/cli.hpp"

#include "rlam/autodiff.hpp"
#include "rlam/errors.hpp"
#include "rlam/logic.hpp"
#include "rlam/oracles.hpp"
#include "rlam/polynomial.hpp"
#include "rlam/refine.hpp"
#include "rlam/semantics.hpp"
#include "rlam/subst.hpp"
#include "rlam/syntax.hpp"
#include "rlam/typing.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rlam {

namespace {

// Number of reals in a right-nested tuple of reals, 0 for anything else.
std::size_t real_arity(const SimpleType& t)
{
    if (t.is_real())
        return 1;
    if (t.is_prod() && t.left().is_real()) {
        std::size_t rest = real_arity(t.right());
        return rest == 0 ? 0 : rest + 1;
    }
    return 0;
}

using nlohmann::json;

struct Diagnostic {
    std::string severity;
    std::string message;
};

struct Outcome {
    int code = exit_ok;
    json result;
    std::string text;
    std::vector<Diagnostic> diagnostics;

    void error(int c, std::string msg)
    {
        code = c;
        diagnostics.push_back({"error", std::move(msg)});
    }
    void warn(std::string msg) { diagnostics.push_back({"warning", std::move(msg)}); }
};

struct Options {
    bool json = false;
    std::optional<std::string> seed;
    int probe_depth = 40;
    int probe_seeds = 50;
    bool permissive = false;
    bool strict_equiv = false;
    bool semantic_ho = false;
    double fd_step = 1e-6;
    std::string aliases;

    std::string file;
    std::string args;
    std::string at;
    bool check_fd = false;
    std::string domain;
    bool all = false;
};

std::uint64_t parse_seed(const std::string& text)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw CLI::ValidationError("seed", "'" + text + "' is not an unsigned integer");
    return v;
}

std::uint64_t effective_seed(const Options& o)
{
    if (o.seed)
        return parse_seed(*o.seed);
    if (const char* env = std::getenv("RLAM_SEED"); env && *env)
        return parse_seed(env);
    return default_seed;
}

std::string read_file(const std::string& path)
{
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path + "'");
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> parse_point(const std::string& text)
{
    std::vector<double> out;
    if (text.empty())
        return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (auto q = parse_rational(item)) {
            out.push_back(to_double(*q));
            continue;
        }
        std::size_t used = 0;
        double d = 0;
        try {
            d = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw CLI::ValidationError("point", "'" + item + "' is not a number");
        out.push_back(d);
    }
    return out;
}

// A first-order function: either a closed abstraction over reals or a term
// with a real context.
struct FirstOrderView {
    Term body;
    TypingContext theta;
    std::vector<std::string> logical; // logical variable per coordinate
};

FirstOrderView first_order_view(const SourceFile& file)
{
    if (const auto* lam = file.term.as<ast::Lam>(); lam && free_vars(file.term).empty()) {
        bool reals = std::all_of(lam->params.begin(), lam->params.end(),
                                 [](const Param& p) { return p.type.is_real(); });
        if (reals) {
            FirstOrderView v{lam->body, {}, {}};
            std::vector<std::string> arg_vars;
            if (file.type && file.type->is_higher() && file.type->higher_arity() == 0 &&
                file.type->args().size() == lam->params.size())
                arg_vars = file.type->real_arg_vars();
            for (std::size_t i = 0; i < lam->params.size(); ++i) {
                v.theta = v.theta.extended(lam->params[i].name, SimpleType::real());
                v.logical.push_back(arg_vars.empty() ? lam->params[i].name : arg_vars[i]);
            }
            return v;
        }
    }
    FirstOrderView v{file.term, file.typing_context(), {}};
    auto refs = file.ref_context();
    for (const auto& e : v.theta.entries()) {
        std::string logical = e.name;
        for (const auto& r : refs)
            if (r.name == e.name && r.type.is_real())
                logical = r.type.var();
        v.logical.push_back(logical);
    }
    return v;
}

json assignment_json(const Assignment& sigma)
{
    json out = json::object();
    for (const auto& [x, q] : sigma)
        out[x] = q.get_str();
    return out;
}

std::string format_vector(const std::vector<double>& xs) { return fmt::format("[{}]", fmt::join(xs, ", ")); }

template <class F>
Outcome guarded(const std::string& file, F&& body)
{
    Outcome o;
    std::string where = file.empty() ? "" : file + ":";
    try {
        return body();
    } catch (const ParseError& e) {
        o.error(exit_error, where + e.what());
    } catch (const MissingAnnotation& e) {
        o.error(exit_error, where + " missing annotation: " + e.what());
    } catch (const InvalidRefType& e) {
        o.error(exit_error, where + " invalid refinement type: " + e.what());
    } catch (const TypeError& e) {
        o.error(exit_negative, where + " type error [" + e.rule() + "] " + e.what() + " (at " + e.subterm() + ")");
        o.result = json{{"rule", e.rule()}, {"subterm", e.subterm()}};
    } catch (const NotFirstOrder& e) {
        o.error(exit_negative, where + " not a first-order term: " + e.what());
    } catch (const AdError& e) {
        o.error(exit_negative, where + " cannot differentiate: " + e.what());
    } catch (const UnsupportedPrim& e) {
        o.error(exit_negative, where + " unsupported: " + e.what());
    } catch (const CLI::Error& e) {
        o.error(exit_error, e.what());
    } catch (const Error& e) {
        o.error(exit_error, where + " " + e.what());
    } catch (const std::exception& e) {
        o.error(exit_error, where + " internal error: " + e.what());
    }
    return o;
}

class Driver {
public:
    Driver(const Options& o, const PrimRegistry& prims) : o_(o), prims_(prims) {}

    SourceFile load() const { return parse_source(read_file(o_.file), prims_); }

    Outcome typecheck_cmd() const
    {
        SourceFile f = load();
        SimpleType ty = typecheck(f.typing_context(), f.term, prims_);
        Outcome out;
        out.text = to_string(ty);
        out.result = json{{"type", out.text}};
        return out;
    }

    Outcome eval_cmd() const
    {
        SourceFile f = load();
        TypingContext ctx = f.typing_context();
        SimpleType ty = typecheck(ctx, f.term, prims_);
        std::vector<double> point = parse_point(o_.args);
        SemEnv env;
        Term t = f.term;
        if (point.size() == ctx.size()) {
            for (std::size_t i = 0; i < ctx.size(); ++i) {
                if (!ctx.entries()[i].type.is_real())
                    throw CLI::ValidationError("args", "context variable '" + ctx.entries()[i].name + "' is not real");
                env.insert_or_assign(ctx.entries()[i].name, Value::real(point[i]));
            }
        } else if (ctx.empty() && ty.is_arrow()) {
            // Curried arrows consume as many values as their domain has components.
            std::size_t used = 0;
            while (used < point.size() && ty.is_arrow()) {
                std::size_t n = real_arity(ty.domain());
                if (n == 0 || used + n > point.size())
                    break;
                std::vector<Term> args;
                for (std::size_t i = 0; i < n; ++i)
                    args.push_back(Term::lit(from_double(point[used + i])));
                used += n;
                t = Term::app(t, std::move(args));
                ty = ty.codomain();
            }
            if (used != point.size())
                throw CLI::ValidationError("args", fmt::format("could not apply {} argument(s) to the term", point.size()));
            typecheck(ctx, t, prims_);
        } else {
            throw CLI::ValidationError("args", fmt::format("expected {} argument(s), got {}", ctx.size(), point.size()));
        }
        Value v = eval(env, t, prims_);
        Outcome out;
        out.text = to_string(v);
        out.result = json{{"value", out.text}};
        if (v.is_real())
            out.result["number"] = v.as_real();
        return out;
    }

    Outcome ad_cmd() const
    {
        SourceFile f = load();
        TypingContext ctx = f.typing_context();
        SimpleType ty = typecheck(ctx, f.term, prims_);
        AdResult r = ad_term(f.term, ctx, prims_);
        Outcome out;
        out.text = pretty(r.term);
        out.result = json{{"term", out.text},
                          {"type", to_string(ad_type(ty))},
                          {"context", to_string(ad_ctx(ctx, r.naming))}};
        return out;
    }

    Outcome grad_cmd() const
    {
        SourceFile f = load();
        FirstOrderView v = first_order_view(f);
        std::vector<double> point = parse_point(o_.at);
        std::vector<double> g = grad_at(v.body, v.theta, point, prims_);
        Outcome out;
        out.text = format_vector(g);
        out.result = json{{"gradient", g}};
        if (o_.check_fd) {
            RealFn fn = denote_first_order(v.body, v.theta, prims_);
            std::vector<double> fd, res;
            for (std::size_t i = 0; i < g.size(); ++i) {
                fd.push_back(finite_diff(fn, point, i, o_.fd_step));
                res.push_back(std::abs(fd.back() - g[i]));
            }
            out.text += "\nfinite differences: " + format_vector(fd) + "\nresiduals: " + format_vector(res);
            out.result["finite_differences"] = fd;
            out.result["residuals"] = res;
        }
        return out;
    }

    Outcome poly_cmd() const
    {
        SourceFile f = load();
        FirstOrderView v = first_order_view(f);
        Polynomial p = poly_normalize(v.body, v.theta, prims_);
        std::vector<std::string> names;
        for (const auto& e : v.theta.entries())
            names.push_back(e.name);
        Outcome out;
        out.text = to_string(p, names);
        json terms = json::array();
        for (const auto& [m, c] : p.terms())
            terms.push_back(json{{"coefficient", c.get_str()}, {"exponents", m}});
        out.result = json{{"polynomial", out.text}, {"variables", names}, {"terms", terms}};
        return out;
    }

    Outcome check_file() const
    {
        SourceFile f = load();
        RefJudgment j = judgment_of(f, prims_);
        CheckConfig cfg;
        cfg.strict_equiv = o_.strict_equiv;
        cfg.semantic_ho = o_.semantic_ho;
        cfg.seed = effective_seed(o_);
        Verdict v = refine_check(j, cfg, prims_);

        Outcome out;
        std::vector<std::string> lines{to_string(v.kind)};
        json r{{"verdict", to_string(v.kind)}, {"judgment", to_string(j)}};
        switch (v.kind) {
        case Verdict::Kind::Accepted:
            lines.insert(lines.end(), v.trace.begin(), v.trace.end());
            r["trace"] = v.trace;
            break;
        case Verdict::Kind::Rejected:
            out.code = exit_negative;
            lines.push_back("rule: " + v.rule);
            lines.push_back("condition: " + v.condition);
            lines.push_back("at: " + v.subterm);
            r["rule"] = v.rule;
            r["condition"] = v.condition;
            r["subterm"] = v.subterm;
            if (v.witness) {
                lines.push_back("witness: " + to_string(*v.witness));
                r["witness"] = assignment_json(*v.witness);
            }
            break;
        case Verdict::Kind::Unknown:
            for (const auto& g : v.gaps)
                lines.push_back("gap: " + g);
            r["gaps"] = v.gaps;
            if (o_.permissive) {
                out.warn("judgment could not be decided; accepted under --permissive");
            } else {
                out.code = exit_negative;
            }
            break;
        }
        out.text = fmt::format("{}", fmt::join(lines, "\n"));
        out.result = std::move(r);
        return out;
    }

    Outcome check_all() const
    {
        namespace fs = std::filesystem;
        if (!fs::is_directory(o_.file))
            throw CLI::ValidationError("--all", "'" + o_.file + "' is not a directory");
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(o_.file))
            if (e.path().extension() == ".rlam")
                files.push_back(e.path());
        std::sort(files.begin(), files.end());
        Outcome out;
        json entries = json::array();
        std::vector<std::string> lines;
        for (const auto& p : files) {
            Options sub = o_;
            sub.file = p.string();
            Outcome one = guarded(sub.file, [&] { return Driver(sub, prims_).check_file(); });
            out.code = std::max(out.code, one.code);
            std::string verdict = one.result.is_object() && one.result.contains("verdict")
                                      ? one.result["verdict"].get<std::string>()
                                      : "Error";
            lines.push_back(p.filename().string() + ": " + verdict);
            entries.push_back(json{{"file", p.filename().string()}, {"verdict", verdict}, {"code", one.code}});
            out.diagnostics.insert(out.diagnostics.end(), one.diagnostics.begin(), one.diagnostics.end());
        }
        out.text = fmt::format("{}", fmt::join(lines, "\n"));
        out.result = json{{"files", entries}};
        return out;
    }

    Outcome probe_cmd() const
    {
        SourceFile f = load();
        FirstOrderView v = first_order_view(f);
        Formula domain = o_.domain.empty() ? f.domain.value_or(Formula::top()) : parse_formula(o_.domain, prims_);
        std::set<std::string> names(v.logical.begin(), v.logical.end());
        for (const auto& x : vars(domain))
            if (!names.count(x))
                throw CLI::ValidationError("--domain", "formula mentions '" + x + "', which names no argument");
        RealFn fn = denote_first_order(v.body, v.theta, prims_);
        std::uint64_t seed = effective_seed(o_);
        std::vector<std::vector<double>> seeds;
        for (const auto& sigma : sample_truth_domain(domain, static_cast<std::size_t>(o_.probe_seeds), seed, names,
                                                     prims_)) {
            std::vector<double> x;
            for (const auto& l : v.logical)
                x.push_back(to_double(sigma.at(l)));
            seeds.push_back(std::move(x));
        }
        std::vector<std::string> logical = v.logical;
        DomainFn in_domain = [domain, logical, this](std::span<const double> x) {
            RealAssignment sigma;
            for (std::size_t i = 0; i < logical.size(); ++i)
                sigma[logical[i]] = x[i];
            return truth_domain_member(domain, sigma, prims_);
        };
        ProbeConfig cfg;
        cfg.depth = o_.probe_depth;
        cfg.cutoff = o_.probe_depth * 3 / 4;
        cfg.seed = seed;
        ContinuityVerdict cv = continuity_probe(fn, in_domain, seeds, cfg);

        Outcome out;
        out.text = to_string(cv);
        json r{{"seeds", seeds.size()}, {"domain", to_string(domain)}};
        switch (cv.kind) {
        case ContinuityVerdict::Kind::Continuous:
            r["verdict"] = "Continuous";
            break;
        case ContinuityVerdict::Kind::Inconclusive:
            r["verdict"] = "Inconclusive";
            r["reason"] = cv.reason;
            out.warn("probe inconclusive: " + cv.reason);
            break;
        case ContinuityVerdict::Kind::SuspectDiscontinuity:
            r["verdict"] = "SuspectDiscontinuity";
            r["point"] = cv.point;
            r["left"] = cv.left;
            r["right"] = cv.right;
            out.code = exit_negative;
            break;
        }
        out.result = std::move(r);
        return out;
    }

private:
    const Options& o_;
    const PrimRegistry& prims_;
};

void render(const Outcome& o, bool as_json, std::ostream& out, std::ostream& err)
{
    if (as_json) {
        json diags = json::array();
        for (const auto& d : o.diagnostics)
            diags.push_back(json{{"severity", d.severity}, {"message", d.message}});
        json doc{{"status", o.code == exit_ok ? "ok" : o.code == exit_negative ? "negative" : "error"},
                 {"result", o.result},
                 {"diagnostics", diags}};
        out << doc.dump(2) << '\n';
        return;
    }
    if (!o.text.empty())
        out << o.text << '\n';
    for (const auto& d : o.diagnostics)
        err << d.severity << ": " << d.message << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app("Differentiable lambda calculus with refinement types", "rlam");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", o.json, "Emit {status, result, diagnostics} as JSON");
    app.add_option("--seed", o.seed, "Random seed (default: $RLAM_SEED or 0xC0FFEE)");
    app.add_option("--probe-depth", o.probe_depth, "Radii r0*2^-k, k <= depth, in the continuity probe")
        ->check(CLI::Range(4, 60));
    app.add_option("--probe-seeds", o.probe_seeds, "Seed points for the continuity probe")->check(CLI::Range(1, 100000));
    app.add_flag("--permissive", o.permissive, "Accept undecided judgments with a warning");
    app.add_flag("--strict-equiv", o.strict_equiv, "Require alpha-equivalent branches at guard discontinuities");
    app.add_flag("--semantic-ho", o.semantic_ho, "Compare higher-order branches by applying them");
    app.add_option("--fd-step", o.fd_step, "Finite-difference step")->check(CLI::PositiveNumber);
    app.add_option("--aliases", o.aliases, "JSON manifest of primitive aliases")->check(CLI::ExistingFile);

    auto file_arg = [&](CLI::App* sub) { sub->add_option("file", o.file, "Source file (- for stdin)")->required(); };
    CLI::App* typecheck_cmd = app.add_subcommand("typecheck", "Print the simple type");
    file_arg(typecheck_cmd);
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate");
    file_arg(eval_cmd);
    eval_cmd->add_option("--args", o.args, "Comma-separated values for the free variables or parameters");
    CLI::App* ad_cmd = app.add_subcommand("ad", "Print the forward-mode transformed term");
    file_arg(ad_cmd);
    CLI::App* grad_cmd = app.add_subcommand("grad", "Gradient of a first-order term");
    file_arg(grad_cmd);
    grad_cmd->add_option("--at", o.at, "Comma-separated point")->required();
    grad_cmd->add_flag("--check-fd", o.check_fd, "Also print central finite differences and residuals");
    CLI::App* poly_cmd = app.add_subcommand("poly", "Print the polynomial denoted by a first-order term");
    file_arg(poly_cmd);
    CLI::App* check_cmd = app.add_subcommand("check", "Check the refinement judgment given by the file's pragmas");
    file_arg(check_cmd);
    check_cmd->add_flag("--all", o.all, "Check every .rlam file in the directory FILE");
    CLI::App* probe_cmd = app.add_subcommand("probe", "Probe continuity on the truth domain of a formula");
    file_arg(probe_cmd);
    probe_cmd->add_option("--domain", o.domain, "Formula over the argument variables (default: @domain or T)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        if (o.json) {
            Outcome bad;
            bad.error(exit_error, e.what());
            render(bad, true, out, err);
        } else {
            err << "error: " << e.what() << '\n' << "run 'rlam --help' for usage\n";
        }
        return exit_error;
    }

    std::optional<PrimRegistry> custom;
    Outcome result = guarded(o.file, [&]() -> Outcome {
        if (!o.aliases.empty())
            custom = PrimRegistry::with_aliases(PrimRegistry::standard(), o.aliases);
        const PrimRegistry& prims = custom ? *custom : PrimRegistry::standard();
        Driver d(o, prims);
        if (typecheck_cmd->parsed())
            return d.typecheck_cmd();
        if (eval_cmd->parsed())
            return d.eval_cmd();
        if (ad_cmd->parsed())
            return d.ad_cmd();
        if (grad_cmd->parsed())
            return d.grad_cmd();
        if (poly_cmd->parsed())
            return d.poly_cmd();
        if (check_cmd->parsed())
            return o.all ? d.check_all() : d.check_file();
        return d.probe_cmd();
    });
    render(result, o.json, out, err);
    return result.code;
}

} // namespace rlam
