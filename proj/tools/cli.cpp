#include "primepairs/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "primepairs/arith.hpp"
#include "primepairs/audit.hpp"
#include "primepairs/common.hpp"
#include "primepairs/dirichlet.hpp"
#include "primepairs/sieve.hpp"
#include "primepairs/sums.hpp"

namespace primepairs::cli {

namespace {

// Raw flag text; everything numeric is parsed after CLI11 so errors can name
// the flag and scientific notation works for integers.
struct Flags {
    std::string op;
    std::string x, m = "1", k = "2", q, a, s, x0, n, limit, grid, sigma;
    std::string weight, filter = "none", log_power = "1", index;
    bool restricted = false;
    std::string workers;
    std::string out, format = "json", trace, model = "loglog", lo, hi;
    bool plot = false;
    std::vector<std::string> only, exclude, set;
    std::string q_max, grid_lo, grid_ratio, forms;
};

std::uint64_t count_flag(const std::string& flag, const std::string& text) {
    if (text.empty()) throw UsageError(flag + " is required");
    try {
        return parse_count(text);
    } catch (const UsageError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

std::int64_t signed_flag(const std::string& flag, const std::string& text) {
    if (!text.empty() && text[0] == '-') return -static_cast<std::int64_t>(count_flag(flag, text.substr(1)));
    return static_cast<std::int64_t>(count_flag(flag, text));
}

double real_flag(const std::string& flag, const std::string& text) {
    if (text.empty()) throw UsageError(flag + " is required");
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !std::isfinite(v)) throw UsageError(flag + ": '" + text + "' is not a number");
    return v;
}

LinearForm form_of(const Flags& f) {
    const auto m = signed_flag("--m", f.m);
    const auto k = signed_flag("--k", f.k);
    try {
        return LinearForm::make(m, k);
    } catch (const UsageError& e) {
        throw UsageError(std::string("--m/--k: ") + e.what());
    }
}

APClass class_of(const Flags& f) {
    const auto q = count_flag("--q", f.q);
    const auto a = count_flag("--a", f.a);
    try {
        return APClass::make(a, q);
    } catch (const UsageError& e) {
        throw UsageError(std::string("--q/--a: ") + e.what());
    }
}

PairWeight pair_weight(const Flags& f) {
    if (f.weight.empty() || f.weight == "reciprocal") return PairWeight::Reciprocal;
    if (f.weight == "unweighted") return PairWeight::Unweighted;
    throw UsageError("--weight: expected reciprocal or unweighted");
}

PrimeWeight prime_weight(const Flags& f) {
    if (f.weight.empty() || f.weight == "reciprocal") return PrimeWeight::Reciprocal;
    if (f.weight == "log") return PrimeWeight::LogOverP;
    throw UsageError("--weight: expected reciprocal or log");
}

MobiusFilter filter_of(const Flags& f) {
    const auto& t = f.filter;
    if (t == "none") return MobiusFilter::none();
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 2 && parts[0] == "coprime") return MobiusFilter::coprime_to(count_flag("--filter", parts[1]));
    if (parts.size() == 3 && parts[0] == "residue")
        return MobiusFilter::residue(count_flag("--filter", parts[1]), count_flag("--filter", parts[2]));
    throw UsageError("--filter: expected none, coprime:q or residue:a:q");
}

int log_power_of(const Flags& f) {
    const auto p = count_flag("--log-power", f.log_power);
    if (p != 1 && p != 2) throw UsageError("--log-power: expected 1 or 2");
    return static_cast<int>(p);
}

// ---- sum operations ---------------------------------------------------------

/// One named sum: the table it needs at x, a scalar evaluation and, when the
/// library has one, a checkpointed version.
struct SumOp {
    std::function<std::uint64_t(const Flags&, std::uint64_t x)> table_need;
    std::function<void(const Flags&, const PrimeTable*, std::uint64_t x, std::ostream& out, std::ostream& err)> scalar;
    std::function<SumTrace(const Flags&, const PrimeTable*, std::span<const std::uint64_t>)> trace;
    std::function<double(const Flags&, const PrimeTable*, std::uint64_t x)> value;  // scan fallback
};

void warn(std::ostream& err, const std::optional<std::string>& w) {
    if (w) err << "warning: " << *w << '\n';
}

void warn(std::ostream& err, const SumTrace& t) {
    for (const auto& w : t.warnings) err << "warning: " << w << '\n';
}

std::uint64_t need_form(const Flags& f, std::uint64_t x) { return required_limit(x, form_of(f)); }
std::uint64_t need_x(const Flags&, std::uint64_t x) { return std::max<std::uint64_t>(x, 2); }
std::uint64_t need_none(const Flags&, std::uint64_t) { return 0; }

SumOp scalar_op(std::function<std::uint64_t(const Flags&, std::uint64_t)> need,
                std::function<FormSum(const Flags&, const PrimeTable&, std::uint64_t)> eval,
                std::function<SumTrace(const Flags&, const PrimeTable*, std::span<const std::uint64_t>)> trace = {}) {
    SumOp op;
    op.table_need = std::move(need);
    op.scalar = [eval](const Flags& f, const PrimeTable* t, std::uint64_t x, std::ostream& out, std::ostream& err) {
        const auto r = eval(f, *t, x);
        warn(err, r.warning);
        out << format_g12(r.value) << '\n';
    };
    op.value = [eval](const Flags& f, const PrimeTable* t, std::uint64_t x) { return eval(f, *t, x).value; };
    op.trace = std::move(trace);
    return op;
}

FormSum plain(double v) { return {v, std::nullopt}; }

const std::map<std::string, SumOp>& sum_ops() {
    static const std::map<std::string, SumOp> ops = [] {
        std::map<std::string, SumOp> m;
        m["pair-weighted"] = scalar_op(
            need_form, [](const Flags& f, const PrimeTable& t, std::uint64_t x) { return pair_weighted_sum(t, x, form_of(f)); },
            [](const Flags& f, const PrimeTable* t, std::span<const std::uint64_t> g) {
                return pair_weighted_trace(*t, g, form_of(f));
            });
        m["inversion"] = scalar_op(
            need_form,
            [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
                const auto r = inversion_decomposition(t, x, form_of(f), {.restricted = f.restricted});
                return FormSum{r.value, r.warning};
            },
            [](const Flags& f, const PrimeTable* t, std::span<const std::uint64_t> g) {
                const auto form = form_of(f);
                const auto v = inversion_decomposition_trace(*t, g, form, {.restricted = f.restricted});
                SumTrace tr;
                tr.operation = "inversion";
                if (auto w = form.parity_warning()) tr.warnings.push_back(*w);
                for (std::size_t i = 0; i < g.size(); ++i)
                    tr.points.push_back({static_cast<double>(g[i]), v[i], std::nullopt, std::nullopt});
                return tr;
            });
        m["prime-power-pair"] = scalar_op(
            need_form,
            [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
                std::optional<std::uint64_t> from;
                if (!f.x0.empty()) from = count_flag("--x0", f.x0);
                return prime_power_pair_sum(t, x, form_of(f), pair_weight(f), from);
            },
            [](const Flags& f, const PrimeTable* t, std::span<const std::uint64_t> g) {
                return prime_power_pair_trace(*t, g, form_of(f), pair_weight(f));
            });
        m["lambda-pair"] = scalar_op(
            need_form, [](const Flags& f, const PrimeTable& t, std::uint64_t x) { return lambda_pair_sum(t, x, form_of(f)); },
            [](const Flags& f, const PrimeTable* t, std::span<const std::uint64_t> g) {
                return lambda_pair_trace(*t, g, form_of(f));
            });
        m["pair-count"] = scalar_op(
            need_form,
            [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
                const auto form = form_of(f);
                return FormSum{static_cast<double>(pair_count(t, x, form)), form.parity_warning()};
            },
            [](const Flags& f, const PrimeTable* t, std::span<const std::uint64_t> g) {
                return pair_count_trace(*t, g, form_of(f));
            });
        m["hl"] = scalar_op(need_form, [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
            return hl_partial_sum(t, x, real_flag("--s", f.s), form_of(f));
        });
        m["chebyshev-tail"] = scalar_op(need_form, [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
            const auto r = chebyshev_tail(t, count_flag("--x0", f.x0), x, form_of(f));
            return FormSum{r.total, r.warning};
        });
        m["chebyshev-tail"].scalar = [](const Flags& f, const PrimeTable* t, std::uint64_t x, std::ostream& out,
                                        std::ostream& err) {
            const auto r = chebyshev_tail(*t, count_flag("--x0", f.x0), x, form_of(f));
            warn(err, r.warning);
            out << "total=" << format_g12(r.total) << " pair=" << format_g12(r.pair_part)
                << " power=" << format_g12(r.power_part) << '\n';
        };
        m["mertens-ap"] = scalar_op(
            need_x,
            [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
                return plain(mertens_ap(t, x, class_of(f), prime_weight(f)).value);
            },
            [](const Flags& f, const PrimeTable* t, std::span<const std::uint64_t> g) {
                return mertens_ap_trace(*t, g, class_of(f), prime_weight(f));
            });
        m["psi"] = scalar_op(need_x, [](const Flags&, const PrimeTable& t, std::uint64_t x) { return plain(psi(t, x)); });
        m["psi-ap"] = scalar_op(need_x, [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
            const auto c = class_of(f);
            return plain(psi_ap(t, x, c.q, c.a));
        });
        m["pi-ap"] = scalar_op(need_x, [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
            const auto c = class_of(f);
            return plain(static_cast<double>(pi_ap(t, x, c.q, c.a)));
        });
        m["pi"] = scalar_op(need_x, [](const Flags&, const PrimeTable& t, std::uint64_t x) {
            return plain(static_cast<double>(prime_count(t, x)));
        });
        m["lambda-dirichlet"] = scalar_op(
            need_x,
            [](const Flags& f, const PrimeTable& t, std::uint64_t x) {
                const std::uint64_t g[] = {x};
                return plain(lambda_dirichlet_partial(t, g, real_flag("--sigma", f.sigma))[0]);
            },
            [](const Flags& f, const PrimeTable* t, std::span<const std::uint64_t> g) {
                const auto v = lambda_dirichlet_partial(*t, g, real_flag("--sigma", f.sigma));
                SumTrace tr;
                tr.operation = "lambda-dirichlet";
                for (std::size_t i = 0; i < g.size(); ++i)
                    tr.points.push_back({static_cast<double>(g[i]), v[i], std::nullopt, std::nullopt});
                return tr;
            });
        SumOp mob;
        mob.table_need = need_none;
        mob.scalar = [](const Flags& f, const PrimeTable*, std::uint64_t x, std::ostream& out, std::ostream&) {
            const auto r = twisted_mobius_sum(x, real_flag("--s", f.s), log_power_of(f), filter_of(f));
            out << format_g12(r.value) << '\n';
        };
        mob.value = [](const Flags& f, const PrimeTable*, std::uint64_t x) {
            return twisted_mobius_sum(x, real_flag("--s", f.s), log_power_of(f), filter_of(f)).value;
        };
        mob.trace = [](const Flags& f, const PrimeTable*, std::span<const std::uint64_t> g) {
            return twisted_mobius_trace(g, real_flag("--s", f.s), log_power_of(f), filter_of(f));
        };
        m["twisted-mobius"] = mob;
        SumOp chi;
        chi.table_need = need_x;
        chi.scalar = [](const Flags& f, const PrimeTable* t, std::uint64_t x, std::ostream& out, std::ostream&) {
            const auto chars = characters(character_group(count_flag("--q", f.q)));
            const auto i = count_flag("--index", f.index);
            if (i >= chars.size()) throw UsageError("--index: must be below " + std::to_string(chars.size()));
            const auto z = psi_twisted(*t, x, chars[i]);
            out << format_g12(z.real()) << ' ' << format_g12(z.imag()) << '\n';
        };
        m["psi-chi"] = chi;
        return m;
    }();
    return ops;
}

std::string op_names() {
    std::string s;
    for (const auto& [name, op] : sum_ops()) s += (s.empty() ? "" : ", ") + name;
    return s + ", least-prime";
}

const SumOp& sum_op(const std::string& name) {
    const auto& ops = sum_ops();
    auto it = ops.find(name);
    if (it == ops.end()) throw UsageError("unknown operation '" + name + "' (" + op_names() + ")");
    return it->second;
}

std::optional<PrimeTable> table_for(std::uint64_t need) {
    if (need == 0) return std::nullopt;
    if (need > kMaxTableLimit) throw UsageError("arguments need a table beyond 2^40");
    return build_prime_table(std::max<std::uint64_t>(need, 2));
}

// ---- output -----------------------------------------------------------------

/// Writes to --out when given, else to `out`.
void emit(const Flags& f, std::ostream& out, const std::string& text) {
    if (f.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(f.out, std::ios::binary);
    if (!file) throw UsageError("--out: cannot open '" + f.out + "'");
    file << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    file << text;
}

std::string fit_line(const FitResult& r) {
    return "model=" + to_string(r.model) + " c=" + format_g12(r.c) + " b=" + format_g12(r.b) +
           " rms=" + format_g12(r.rms_residual) + " points=" + std::to_string(r.points) + " x_lo=" +
           format_g12(r.x_lo) + " x_hi=" + format_g12(r.x_hi) + "\n";
}

SumTrace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("--trace: cannot open '" + path + "'");
    return read_trace_csv(in);
}

// ---- verbs ------------------------------------------------------------------

void run_sieve(const Flags& f, std::ostream& out) {
    const auto limit = count_flag("--limit", f.limit);
    if (limit < 2 || limit > kMaxTableLimit) throw UsageError("--limit: must be in [2, 2^40]");
    const auto t = build_prime_table(limit);
    out << "limit=" << limit << " primes=" << prime_count(t, limit)
        << " prime_powers=" << t.proper_prime_powers().size() << '\n';
    if (!f.x.empty()) {
        const auto x = count_flag("--x", f.x);
        if (x > limit) throw UsageError("--x: must not exceed --limit");
        out << "pi(" << x << ")=" << prime_count(t, x) << '\n';
    }
}

void run_eval(const Flags& f, std::ostream& out) {
    const auto n = count_flag("--n", f.n);
    if (n < 1) throw UsageError("--n: must be >= 1");
    const auto v = evaluate(n);
    out << "mu=" << v.mu << " lambda=" << format_g12(v.lambda) << " phi=" << v.phi << '\n';
}

void run_sum(const Flags& f, std::ostream& out, std::ostream& err) {
    if (f.op == "least-prime") {
        const auto c = class_of(f);
        const auto r = least_prime_in_ap(c, f.s.empty() ? 6.0 : real_flag("--s", f.s));
        if (r.prime)
            out << *r.prime << '\n';
        else
            out << "none below " << format_g12(r.search_bound) << '\n';
        return;
    }
    const auto& op = sum_op(f.op);
    if (!op.scalar) throw UsageError("operation '" + f.op + "' has no scalar form");
    const auto x = count_flag("--x", f.x);
    const auto table = table_for(op.table_need(f, x));
    op.scalar(f, table ? &*table : nullptr, x, out, err);
}

void run_scan(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto& op = sum_op(f.op);
    if (f.grid.empty()) throw UsageError("--grid is required (lo:hi:ratio)");
    std::vector<std::uint64_t> grid;
    try {
        grid = parse_grid(f.grid);
    } catch (const UsageError& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
    const auto table = table_for(op.table_need(f, grid.back()));
    const PrimeTable* tp = table ? &*table : nullptr;
    SumTrace tr;
    if (op.trace) {
        tr = op.trace(f, tp, grid);
    } else if (op.value) {
        tr.operation = f.op;
        for (auto x : grid) tr.points.push_back({static_cast<double>(x), op.value(f, tp, x), std::nullopt, std::nullopt});
    } else {
        throw UsageError("operation '" + f.op + "' cannot be scanned");
    }
    warn(err, tr);
    std::ostringstream csv;
    write_trace_csv(csv, tr);
    emit(f, out, csv.str());
}

void run_fit(const Flags& f, std::ostream& out) {
    if (f.trace.empty()) throw UsageError("--trace is required");
    FitModel model;
    try {
        model = parse_fit_model(f.model);
    } catch (const UsageError& e) {
        throw UsageError(std::string("--model: ") + e.what());
    }
    FitWindow w;
    if (!f.lo.empty()) w.x_lo = real_flag("--lo", f.lo);
    if (!f.hi.empty()) w.x_hi = real_flag("--hi", f.hi);
    const auto trace = read_trace_file(f.trace);
    const auto r = fit(trace, model, w);
    emit(f, out, fit_line(r));
    if (f.plot) {
        const auto base = std::filesystem::path(f.out.empty() ? f.trace : f.out);
        const auto script = std::filesystem::path(base).replace_extension(".plot").string();
        write_file(script, plot_script(trace, r));
    }
}

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
    std::vector<std::string> ids;
    for (const auto& r : raw) {
        std::stringstream ss(r);
        for (std::string id; std::getline(ss, id, ',');)
            if (!id.empty()) ids.push_back(id);
    }
    return ids;
}

std::vector<LinearForm> parse_forms(const std::string& text) {
    // "1,2 1,4" or "1,2;1,4"
    std::vector<LinearForm> forms;
    std::string t = text;
    std::replace(t.begin(), t.end(), ';', ' ');
    std::stringstream ss(t);
    for (std::string item; ss >> item;) {
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw UsageError("--forms: expected m,k pairs, got '" + item + "'");
        const auto m = signed_flag("--forms", item.substr(0, comma));
        const auto k = signed_flag("--forms", item.substr(comma + 1));
        try {
            forms.push_back(LinearForm::make(m, k));
        } catch (const UsageError& e) {
            throw UsageError(std::string("--forms: ") + e.what());
        }
    }
    if (forms.empty()) throw UsageError("--forms: no forms given");
    return forms;
}

int run_audit(const Flags& f, std::ostream& out, std::ostream& err) {
    AuditConfig cfg;
    if (!f.limit.empty()) cfg.limit = count_flag("--limit", f.limit);
    if (!f.q_max.empty()) cfg.q_max = count_flag("--q-max", f.q_max);
    if (!f.grid_lo.empty()) cfg.grid_lo = real_flag("--grid-lo", f.grid_lo);
    if (!f.grid_ratio.empty()) cfg.grid_ratio = real_flag("--grid-ratio", f.grid_ratio);
    if (!f.forms.empty()) cfg.forms = parse_forms(f.forms);
    cfg.only = split_ids(f.only);
    cfg.exclude = split_ids(f.exclude);
    for (const auto& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set: expected CLAIM.param=value, got '" + kv + "'");
        cfg.overrides[kv.substr(0, eq)] = real_flag("--set", kv.substr(eq + 1));
    }
    ReportFormat format;
    try {
        format = parse_report_format(f.format);
    } catch (const UsageError& e) {
        throw UsageError(std::string("--format: ") + e.what());
    }
    try {
        cfg.validate();
    } catch (const UsageError& e) {
        throw UsageError(std::string("audit: ") + e.what());
    }
    const auto report = run_all(cfg);
    emit(f, out, render(report, format));
    const auto failures = report.invariant_failures();
    for (const auto& id : failures) err << "exact invariant failed: " << id << '\n';
    return failures.empty() ? kExitOk : kExitInvariant;
}

void add_form_flags(CLI::App* c, Flags& f) {
    c->add_option("--x", f.x, "upper limit x");
    c->add_option("--m", f.m, "form multiplier m (default 1)");
    c->add_option("--k", f.k, "form shift k (default 2)");
    c->add_option("--q", f.q, "modulus");
    c->add_option("--a", f.a, "residue");
    c->add_option("--s", f.s, "exponent s");
    c->add_option("--sigma", f.sigma, "exponent sigma for lambda-dirichlet");
    c->add_option("--x0", f.x0, "lower cut x0 (chebyshev-tail, prime-power-pair)");
    c->add_option("--weight", f.weight, "reciprocal | unweighted | log");
    c->add_option("--filter", f.filter, "none | coprime:q | residue:a:q");
    c->add_option("--log-power", f.log_power, "1 or 2");
    c->add_option("--index", f.index, "character index for psi-chi");
    c->add_flag("--restricted", f.restricted, "inversion over d coprime to km");
}

}  // namespace

std::string plot_script(const SumTrace& trace, const FitResult& r) {
    if (trace.points.empty()) throw UsageError("plot: empty trace");
    std::ostringstream s;
    s << "# gnuplot: trace and fitted " << to_string(r.model) << " curve\n";
    s << "set logscale x\nset key top left\nset xlabel \"x\"\nset ylabel \"value\"\n";
    s << "set title \"c = " << format_g12(r.c) << ", b = " << format_g12(r.b) << "\"\n";
    s << "$data << EOD\n";
    for (const auto& p : trace.points)
        s << format_g12(p.x) << ' ' << format_g12(p.value) << ' ' << format_g12(r.c * fit_basis(r.model, p.x) + r.b)
          << '\n';
    s << "EOD\n";
    s << "plot $data using 1:2 with linespoints title \"value\", \\\n"
      << "     $data using 1:3 with lines title \"" << format_g12(r.c) << " * " << to_string(r.model)
      << (r.b != 0 ? " + b" : "") << "\"\n";
    return s.str();
}

FitResult emit_plot_script(const std::string& trace_file, FitModel model, const std::string& script_path) {
    const auto trace = read_trace_file(trace_file);
    if (trace.points.empty()) throw UsageError("plot: empty trace");
    const auto r = fit(trace, model);
    write_file(script_path, plot_script(trace, r));
    return r;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Prime sums, character sums and claim audits", "primepairs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(PRIMEPAIRS_VERSION));
    app.add_option("--workers", f.workers, "worker threads (output does not depend on it)");
    app.fallthrough();

    auto* sieve = app.add_subcommand("sieve", "build a prime table; report pi(limit) and pi(x)");
    sieve->add_option("--limit", f.limit, "table limit")->required();
    sieve->add_option("--x", f.x, "also report pi(x)");

    auto* eval = app.add_subcommand("eval", "mu, Lambda and phi at n");
    eval->add_option("--n", f.n, "argument")->required();

    auto* sum = app.add_subcommand("sum", "evaluate one sum");
    sum->add_option("op", f.op, "operation: " + op_names())->required();
    add_form_flags(sum, f);

    auto* scan = app.add_subcommand("scan", "evaluate a sum on a grid; CSV x,value,main,residual");
    scan->add_option("op", f.op, "operation: " + op_names())->required();
    scan->add_option("--grid", f.grid, "lo:hi:ratio")->required();
    scan->add_option("--out", f.out, "output file (default stdout)");
    add_form_flags(scan, f);

    auto* fitc = app.add_subcommand("fit", "least-squares growth fit of a trace CSV");
    fitc->add_option("--trace", f.trace, "trace CSV")->required();
    fitc->add_option("--model", f.model, "loglog | xlog2 | li");
    fitc->add_option("--lo", f.lo, "fit window start");
    fitc->add_option("--hi", f.hi, "fit window end");
    fitc->add_option("--out", f.out, "output file (default stdout)");
    fitc->add_flag("--plot", f.plot, "write a .plot gnuplot script next to the output");

    auto* audit = app.add_subcommand("audit", "run the claim audit and render a report");
    audit->add_option("--limit", f.limit, "largest x (default 1e7)");
    audit->add_option("--format", f.format, "json | csv | markdown");
    audit->add_option("--out", f.out, "output file (default stdout)");
    audit->add_option("--only", f.only, "claim ids, comma separated or repeated");
    audit->add_option("--exclude", f.exclude, "claim ids to skip");
    audit->add_option("--set", f.set, "per-claim parameter CLAIM.param=value");
    audit->add_option("--q-max", f.q_max, "largest modulus for progression claims");
    audit->add_option("--grid-lo", f.grid_lo, "first checkpoint");
    audit->add_option("--grid-ratio", f.grid_ratio, "checkpoint ratio");
    audit->add_option("--forms", f.forms, "forms as m,k pairs, e.g. \"1,2 1,4\"");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << PRIMEPAIRS_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    const int saved_workers = workers();
    try {
        if (!f.workers.empty()) {
            const auto w = count_flag("--workers", f.workers);
            if (w < 1 || w > 1024) throw UsageError("--workers: must be in [1, 1024]");
            set_workers(static_cast<int>(w));
        }
        int code = kExitOk;
        if (*sieve)
            run_sieve(f, out);
        else if (*eval)
            run_eval(f, out);
        else if (*sum)
            run_sum(f, out, err);
        else if (*scan)
            run_scan(f, out, err);
        else if (*fitc)
            run_fit(f, out);
        else if (*audit)
            code = run_audit(f, out, err);
        set_workers(saved_workers);
        return code;
    } catch (const UsageError& e) {
        set_workers(saved_workers);
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const RangeError& e) {
        set_workers(saved_workers);
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace primepairs::cli
