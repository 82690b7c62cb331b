#include "polycomp/classifier.hpp"
#include "polycomp/decide.hpp"
#include "polycomp/gallery.hpp"
#include "polycomp/io.hpp"
#include "polycomp/measure.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace polycomp;
using nlohmann::json;

namespace {

const char* tool_version = "0.1.0";

struct SymbolSource {
    std::string file;
    std::string gallery;
    std::vector<std::string> params;
    std::optional<int> n;
    bool skip_selfmap = false;
};

struct Loaded {
    Symbol phi;
    Params params;
    std::optional<FamilyData> family;
};

void add_source_options(CLI::App* cmd, SymbolSource& src)
{
    cmd->add_option("symbol", src.file, "symbol JSON file");
    cmd->add_option("--gallery", src.gallery, "gallery entry name");
    cmd->add_option("--param", src.params, "gallery parameter k=v (repeatable)");
    cmd->add_option("--n", src.n, "shortcut for --param n=N");
    cmd->add_flag("--no-selfmap-check", src.skip_selfmap, "skip the self-map check");
}

Params parse_params(const std::vector<std::string>& items, const std::optional<int>& n)
{
    Params p;
    for (const auto& it : items) {
        auto eq = it.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--param expects k=v, got '" + it + "'");
        std::size_t used = 0;
        double v = std::stod(it.substr(eq + 1), &used);
        if (used != it.size() - eq - 1)
            throw std::invalid_argument("--param value is not a number: '" + it + "'");
        p[it.substr(0, eq)] = v;
    }
    if (n)
        p["n"] = *n;
    return p;
}

Loaded load(const SymbolSource& src)
{
    Loaded out;
    if (!src.gallery.empty() == !src.file.empty())
        throw std::invalid_argument("give exactly one of a symbol file or --gallery NAME");
    if (!src.gallery.empty()) {
        const auto& entry = gallery_entry(src.gallery);
        out.params = resolve_params(entry, parse_params(src.params, src.n));
        out.phi = gallery_build(src.gallery, out.params, !src.skip_selfmap);
        out.family = entry.expected(out.params).family;
        return out;
    }
    if (!src.params.empty() || src.n)
        throw std::invalid_argument("--param and --n only apply to gallery entries");
    out.phi = load_symbol(src.file);
    if (!src.skip_selfmap) {
        auto rep = selfmap_check(out.phi);
        if (!rep.pass)
            throw std::runtime_error("symbol failed the self-map check:\n" + selfmap_to_json(rep));
    }
    return out;
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_index_list(const std::string& s, int dim)
{
    std::vector<int> out;
    for (double v : parse_list(s)) {
        int k = static_cast<int>(v);
        if (k != v || k < 1 || k > dim)
            throw std::invalid_argument("component indices are 1-based and must lie in [1, " + std::to_string(dim) + "]");
        out.push_back(k - 1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<cplx> parse_eta(const std::string& s)
{
    std::vector<cplx> out;
    for (double t : parse_list(s))
        out.push_back(std::polar(1.0, t));
    return out;
}

json source_json(const SymbolSource& src, const Loaded& l)
{
    json o;
    if (!src.gallery.empty()) {
        o["gallery"] = src.gallery;
        o["params"] = l.params;
    } else {
        o["file"] = src.file;
    }
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Composition operators on weighted Bergman spaces of the polydisc"};
    app.fallthrough();
    app.require_subcommand(1);
    bool report = false;
    std::uint64_t seed = 20240601;
    int threads = 0;
    app.add_flag("--json", report, "wrap the output in a self-contained run report");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads (default: env THREADS or hardware concurrency)");

    SymbolSource src;
    ClassifyOptions copt;

    auto* classify = app.add_subcommand("classify", "classify a symbol and optionally answer a weight query");
    add_source_options(classify, src);
    std::optional<double> beta, beta1, beta2;
    classify->add_option("--beta", beta, "query beta1 = beta2 = beta");
    classify->add_option("--beta1", beta1, "source weight");
    classify->add_option("--beta2", beta2, "target weight");
    classify->add_option("--grid", copt.contact.grid_per_axis, "contact search grid per axis");
    classify->add_option("--tol-contact", copt.contact.tol_contact, "contact tolerance");
    classify->add_option("--tol-rank", copt.contact.tol_rank, "relative rank tolerance");
    classify->add_option("--tol-psd", copt.sr.tol_psd, "relative eigenvalue tolerance");

    auto* verify = app.add_subcommand("verify", "fit the torus window exponent at a contact and compare");
    add_source_options(verify, src);
    std::string I_str, eta_str, deltas_str;
    double slack = 0.05;
    std::uint64_t samples = 10000000;
    verify->add_option("--beta", beta, "beta1 = beta2 = beta");
    verify->add_option("--beta1", beta1, "source weight");
    verify->add_option("--beta2", beta2, "target weight");
    verify->add_option("--I", I_str, "1-based component list of the contact, e.g. 1,2");
    verify->add_option("--eta", eta_str, "window centre angles, one per component of I");
    verify->add_option("--deltas", deltas_str, "comma separated delta schedule");
    verify->add_option("--samples", samples, "samples per delta");
    verify->add_option("--slack", slack, "exponent slack");
    std::string csv_path;
    verify->add_option("--csv", csv_path, "also write the series as CSV");

    auto* scan = app.add_subcommand("scan", "Carleson ratio scan over a grid of boxes");
    add_source_options(scan, src);
    std::vector<std::string> eta_grid_str;
    std::uint64_t scan_samples = 10000000;
    scan->add_option("--beta", beta, "beta1 = beta2 = beta");
    scan->add_option("--beta1", beta1, "source weight");
    scan->add_option("--beta2", beta2, "target weight");
    scan->add_option("--I", I_str, "1-based component list (default: all)");
    scan->add_option("--eta", eta_grid_str, "box centre angles per component (repeatable for a grid)");
    scan->add_option("--deltas", deltas_str, "comma separated delta grid");
    scan->add_option("--samples", scan_samples, "samples per box");

    auto* gallery = app.add_subcommand("gallery", "gallery of explicit symbols");
    gallery->require_subcommand(1);
    auto* glist = gallery->add_subcommand("list", "list entries");
    auto* gbuild = gallery->add_subcommand("build", "build an entry as symbol JSON");
    auto* gexp = gallery->add_subcommand("expected", "expected classification of an entry");
    std::string gname;
    for (auto* c : {gbuild, gexp}) {
        c->add_option("name", gname, "entry name")->required();
        c->add_option("--param", src.params, "parameter k=v (repeatable)");
        c->add_option("--n", src.n, "shortcut for --param n=N");
    }
    gbuild->add_flag("--no-selfmap-check", src.skip_selfmap, "skip the self-map check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    auto t0 = std::chrono::steady_clock::now();
    json params = json::object();
    json output;
    std::string sub;
    std::optional<Loaded> loaded;
    int code = 0;
    try {
        if (*classify) {
            sub = "classify";
            loaded = load(src);
            const Symbol& phi = loaded->phi;
            Verdict v = polycomp::classify(phi, copt);
            output = json::parse(verdict_to_json(v));
            for (const auto& d : v.diagnostics)
                std::cerr << "diagnostic: " << d << "\n";
            if (beta && (beta1 || beta2))
                throw std::invalid_argument("use either --beta or --beta1/--beta2");
            if (beta1.has_value() != beta2.has_value())
                throw std::invalid_argument("--beta1 and --beta2 go together");
            if (beta) {
                beta1 = beta;
                beta2 = beta;
            }
            if (beta1) {
                Decision dec = decide(v, *beta1, *beta2, loaded->family ? &*loaded->family : nullptr);
                output["query"] = {{"beta1", *beta1}, {"beta2", *beta2}, {"answer", to_string(dec.answer)},
                                   {"rule", dec.rule}};
                if (dec.answer == Answer::gap)
                    code = 3;
                std::cerr << "answer: " << to_string(dec.answer) << " (" << dec.rule << ")\n";
            }
            params = {{"grid", copt.contact.grid_per_axis}, {"tol_contact", copt.contact.tol_contact},
                      {"tol_rank", copt.contact.tol_rank}, {"tol_psd", copt.sr.tol_psd}};
            if (beta1)
                params["beta1"] = *beta1, params["beta2"] = *beta2;
        } else if (*verify) {
            sub = "verify";
            loaded = load(src);
            const Symbol& phi = loaded->phi;
            if (beta) {
                beta1 = beta;
                beta2 = beta;
            }
            if (!beta1 || !beta2)
                throw std::invalid_argument("verify needs --beta or --beta1 and --beta2");
            auto contacts = find_contacts(phi, copt.contact);
            if (contacts.empty())
                throw std::runtime_error("the symbol has no contact with the torus");
            const ContactRecord* rec = nullptr;
            if (!I_str.empty()) {
                auto I = parse_index_list(I_str, phi.dimension);
                for (const auto& c : contacts)
                    if (c.I == I) {
                        rec = &c;
                        break;
                    }
                if (!rec)
                    throw std::runtime_error("no contact with I = " + I_str);
            } else {
                rec = &contacts.front();
            }
            ContactRecord r = *rec;
            if (!eta_str.empty()) {
                r.eta = parse_eta(eta_str);
                if (r.eta.size() != r.I.size())
                    throw std::invalid_argument("--eta needs one angle per component of I");
            }
            auto deltas = deltas_str.empty() ? default_deltas() : parse_list(deltas_str);
            VerifyResult res = verify_scaling(phi, r, *beta1, *beta2, deltas, samples, seed, threads, slack);
            output = json::parse(verify_to_json(res));
            if (!csv_path.empty()) {
                std::ofstream out(csv_path);
                if (!out)
                    throw std::runtime_error("cannot write " + csv_path);
                out << series_to_csv(res.series);
            }
            std::cerr << "fitted a = " << res.fitted_a << ", required " << res.a_min << ": "
                      << (res.consistent ? "consistent" : "inconsistent") << " (evidence)\n";
            params = {{"beta1", *beta1}, {"beta2", *beta2}, {"samples", samples}, {"deltas", deltas},
                      {"slack", slack}, {"I", json::parse(contacts_to_json({r}))[0]["I"]}};
        } else if (*scan) {
            sub = "scan";
            loaded = load(src);
            const Symbol& phi = loaded->phi;
            if (beta) {
                beta1 = beta;
                beta2 = beta;
            }
            if (!beta1 || !beta2)
                throw std::invalid_argument("scan needs --beta or --beta1 and --beta2");
            std::vector<int> I;
            if (!I_str.empty())
                I = parse_index_list(I_str, phi.dimension);
            else
                for (int j = 0; j < phi.dimension; ++j)
                    I.push_back(j);
            std::vector<std::vector<cplx>> grid;
            for (const auto& e : eta_grid_str) {
                grid.push_back(parse_eta(e));
                if (grid.back().size() != I.size())
                    throw std::invalid_argument("each --eta needs one angle per component of I");
            }
            if (grid.empty())
                grid.push_back(std::vector<cplx>(I.size(), cplx(1.0, 0.0)));
            auto deltas = deltas_str.empty() ? default_scan_deltas() : parse_list(deltas_str);
            ScanReport rep = carleson_scan(phi, *beta1, *beta2, grid, deltas, scan_samples, seed, threads, I);
            output = json::parse(scan_to_json(rep));
            std::cerr << "trend: " << rep.trend << " (exponent " << rep.trend_exponent << ", evidence)\n";
            params = {{"beta1", *beta1}, {"beta2", *beta2}, {"samples", scan_samples}, {"deltas", deltas}};
        } else if (*gallery) {
            if (*glist) {
                sub = "gallery list";
                output = json::array();
                for (const auto& e : gallery_entries()) {
                    json ps = json::array();
                    for (const auto& p : e.params)
                        ps.push_back({{"name", p.name}, {"default", p.def}, {"lo", p.lo}, {"hi", p.hi},
                                      {"integer", p.integer}, {"note", p.note}});
                    output.push_back({{"name", e.name}, {"summary", e.summary}, {"params", ps}});
                }
            } else if (*gbuild) {
                sub = "gallery build";
                src.gallery = gname;
                loaded = load(src);
                output = json::parse(symbol_to_json(loaded->phi));
            } else {
                sub = "gallery expected";
                const auto& entry = gallery_entry(gname);
                Params p = resolve_params(entry, parse_params(src.params, src.n));
                output = json::parse(expected_to_json(entry.expected(p)));
                params = p;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        json err = {{"error", e.what()}};
        std::cout << err.dump(2) << "\n";
        return 1;
    }

    if (report) {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json rep;
        rep["tool"] = "polycomp";
        rep["version"] = tool_version;
        rep["subcommand"] = sub;
        if (loaded) {
            rep["symbol_digest"] = symbol_digest(loaded->phi);
            rep["symbol"] = json::parse(symbol_to_json(loaded->phi));
            rep["source"] = source_json(src, *loaded);
        }
        rep["parameters"] = params;
        rep["seed"] = seed;
        rep["threads"] = threads > 0 ? threads : default_threads();
        rep["output"] = output;
        rep["wall_time_s"] = wall;
        std::cout << rep.dump(2) << "\n";
    } else {
        std::cout << output.dump(2) << "\n";
    }
    return code;
}
