#include "polycomp/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polycomp {

using nlohmann::json;

namespace {

json cjson(cplx c) { return json::array({c.real(), c.imag()}); }

json ivec1(const std::vector<int>& v)
{
    json a = json::array();
    for (int i : v)
        a.push_back(i + 1);
    return a;
}

json bset(const BetaSet& s)
{
    json a = json::array();
    for (const auto& p : s.parts()) {
        json o;
        o["lo"] = p.lo;
        o["lo_closed"] = p.lo_closed;
        o["hi"] = p.hi == beta_inf ? json(nullptr) : json(p.hi);
        o["hi_closed"] = p.hi_closed;
        a.push_back(o);
    }
    return a;
}

json contact_json(const ContactRecord& c)
{
    json o;
    o["xi"] = c.xi;
    o["I"] = ivec1(c.I);
    json eta = json::array();
    for (auto e : c.eta)
        eta.push_back(cjson(e));
    o["eta"] = eta;
    json grad = json::array();
    for (const auto& row : c.gradient) {
        json r = json::array();
        for (auto g : row)
            r.push_back(cjson(g));
        grad.push_back(r);
    }
    o["gradient"] = grad;
    json P = json::array();
    for (const auto& p : c.P)
        P.push_back(ivec1(p));
    o["P"] = P;
    o["P_I"] = ivec1(c.P_I);
    o["free_axes"] = ivec1(c.free_axes);
    o["component_size"] = c.component_size;
    o["samples"] = c.samples.size();
    return o;
}

json estimate_json(const Estimate& e)
{
    return {{"estimate", e.value}, {"stderr", e.stderr_}, {"hits", e.hits}, {"n", e.n}};
}

json fit_json(const Fit& f)
{
    return {{"a", f.a}, {"b", f.b}, {"intercept", f.intercept}, {"r2", f.r2}, {"a_stderr", f.a_stderr},
            {"log_term", f.log_term}, {"points", f.points}};
}

json series_j(const MeasureSeries& s)
{
    json o;
    o["kind"] = s.kind;
    o["convention"] = s.kind == "torus" ? "unnormalized Lebesgue measure on [-pi,pi)^d" : "V_beta with total mass 1";
    o["I"] = ivec1(s.I);
    json eta = json::array();
    for (auto e : s.eta)
        eta.push_back(cjson(e));
    o["eta"] = eta;
    if (s.kind != "torus")
        o["beta"] = s.beta;
    o["seed"] = s.seed;
    o["samples"] = s.samples;
    json pts = json::array();
    for (const auto& p : s.points) {
        json q = estimate_json(p.est);
        q["delta"] = p.delta;
        q["stream"] = p.stream;
        q["used"] = p.used;
        if (!p.dropped.empty())
            q["dropped"] = p.dropped;
        pts.push_back(q);
    }
    o["points"] = pts;
    o["fit"] = s.fit ? fit_json(*s.fit) : json(nullptr);
    return o;
}

json sr_pair(std::pair<int, int> r) { return json::array({r.first, r.second}); }

} // namespace

std::string symbol_to_json(const Symbol& phi, int indent)
{
    json o;
    o["dimension"] = phi.dimension;
    o["name"] = phi.name;
    json comps = json::array();
    for (const auto& c : phi.components) {
        json terms = json::array();
        for (const auto& [e, v] : c.terms())
            terms.push_back({{"exp", e}, {"re", v.real()}, {"im", v.imag()}});
        comps.push_back({{"terms", terms}});
    }
    o["components"] = comps;
    return o.dump(indent);
}

Symbol symbol_from_json(const std::string& text)
{
    json o;
    try {
        o = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed symbol JSON: ") + e.what());
    }
    try {
        int d = o.at("dimension").get<int>();
        if (d < 1)
            throw std::invalid_argument("symbol JSON: dimension must be positive");
        const auto& comps = o.at("components");
        if (!comps.is_array() || static_cast<int>(comps.size()) != d)
            throw std::invalid_argument("symbol JSON: need exactly 'dimension' components");
        std::vector<MultiPoly> polys;
        for (const auto& c : comps) {
            MultiPoly p(d);
            for (const auto& t : c.at("terms")) {
                auto e = t.at("exp").get<std::vector<int>>();
                if (static_cast<int>(e.size()) != d)
                    throw std::invalid_argument("symbol JSON: exponent length must equal the dimension");
                for (int k : e)
                    if (k < 0)
                        throw std::invalid_argument("symbol JSON: exponents must be nonnegative");
                p.add_term(e, cplx(t.value("re", 0.0), t.value("im", 0.0)));
            }
            polys.push_back(p);
        }
        return Symbol(polys, o.value("name", std::string()));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed symbol JSON: ") + e.what());
    }
}

Symbol load_symbol(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open symbol file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return symbol_from_json(ss.str());
}

void save_symbol(const std::string& path, const Symbol& phi)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write symbol file " + path);
    out << symbol_to_json(phi) << "\n";
}

std::string betaset_to_json(const BetaSet& s) { return bset(s).dump(); }

BetaSet betaset_from_json(const std::string& text)
{
    BetaSet out;
    try {
        for (const auto& p : json::parse(text)) {
            double hi = p.at("hi").is_null() ? beta_inf : p.at("hi").get<double>();
            out = out.unite(BetaSet::interval(p.at("lo").get<double>(), p.at("lo_closed").get<bool>(), hi,
                                              p.at("hi_closed").get<bool>()));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed BetaSet JSON: ") + e.what());
    }
    return out;
}

std::string contacts_to_json(const std::vector<ContactRecord>& contacts)
{
    json a = json::array();
    for (const auto& c : contacts)
        a.push_back(contact_json(c));
    return a.dump(2);
}

std::string verdict_to_json(const Verdict& v)
{
    json o;
    o["dimension"] = v.dimension;
    o["no_contact"] = v.no_contact;
    o["d_phi"] = v.d_phi;
    json cs = json::array();
    for (const auto& c : v.contacts) {
        json j = contact_json(c.rec);
        j["case_tag"] = c.tag;
        j["s"] = c.s ? json(*c.s) : json(nullptr);
        j["r"] = c.r ? sr_pair(*c.r) : json(nullptr);
        if (v.dimension == 3) {
            j["J_c"] = bset(c.J_c);
            j["J_d"] = bset(c.J_d);
        }
        if (c.J)
            j["J"] = cjson(*c.J);
        if (c.D)
            j["D"] = cjson(*c.D);
        if (c.quarter_ok)
            j["quarter_ok"] = *c.quarter_ok;
        if (!c.notes.empty())
            j["notes"] = c.notes;
        cs.push_back(j);
    }
    o["contacts"] = cs;
    if (v.dimension == 3) {
        o["J_cont"] = bset(v.J_cont);
        o["J_discont"] = bset(v.J_discont);
        o["gap"] = bset(v.gap);
    }
    if (v.halfgain)
        o["halfgain"] = *v.halfgain;
    if (v.quartergain)
        o["quartergain"] = *v.quartergain;
    o["diagnostics"] = v.diagnostics;
    return o.dump(2);
}

std::string expected_to_json(const Expected& e)
{
    json o = json::object();
    if (e.case_tag)
        o["case_tag"] = *e.case_tag;
    if (e.s)
        o["s"] = *e.s;
    if (e.r)
        o["r"] = sr_pair(*e.r);
    if (e.J_cont)
        o["J_cont"] = bset(*e.J_cont);
    if (e.J_discont)
        o["J_discont"] = bset(*e.J_discont);
    if (e.bounded)
        o["bounded"] = bset(*e.bounded);
    if (e.beta_min)
        o["beta_min"] = e.beta_min->to_string();
    if (e.slope) {
        o["slope"] = *e.slope;
        o["slope_tol"] = e.slope_tol;
    }
    if (e.halfgain)
        o["halfgain"] = *e.halfgain;
    if (e.quartergain)
        o["quartergain"] = *e.quartergain;
    if (e.family)
        o["family"] = {{"d", e.family->d}, {"q", e.family->q}, {"k", e.family->k},
                       {"kappa", e.family->kappa.to_string()}};
    if (e.d_phi)
        o["d_phi"] = *e.d_phi;
    if (!e.note.empty())
        o["note"] = e.note;
    return o.dump(2);
}

std::string series_to_json(const MeasureSeries& s) { return series_j(s).dump(2); }

std::string series_to_csv(const MeasureSeries& s)
{
    std::ostringstream os;
    os.precision(17);
    os << "delta,estimate,stderr,n,seed\n";
    for (const auto& p : s.points)
        os << p.delta << "," << p.est.value << "," << p.est.stderr_ << "," << p.est.n << "," << s.seed << "\n";
    if (s.fit)
        os << "# fit a=" << s.fit->a << " b=" << s.fit->b << " intercept=" << s.fit->intercept << " r2=" << s.fit->r2
           << "\n";
    return os.str();
}

std::string verify_to_json(const VerifyResult& v)
{
    json o;
    o["fitted_a"] = v.fitted_a;
    o["a_min"] = v.a_min;
    o["slack"] = v.slack;
    o["consistent"] = v.consistent;
    o["evidence"] = v.consistent ? "consistent with boundedness" : "empirical evidence of unboundedness";
    o["beta1"] = v.beta1;
    o["beta2"] = v.beta2;
    o["I_size"] = v.I_size;
    o["P_I_size"] = v.P_I_size;
    o["series"] = series_j(v.series);
    return o.dump(2);
}

std::string scan_to_json(const ScanReport& r)
{
    json o;
    o["beta1"] = r.beta1;
    o["beta2"] = r.beta2;
    o["I"] = ivec1(r.I);
    json rows = json::array();
    for (const auto& row : r.rows) {
        json j = estimate_json(row.mass);
        j["delta"] = row.delta;
        json eta = json::array();
        for (auto e : row.eta)
            eta.push_back(cjson(e));
        j["eta"] = eta;
        j["box"] = row.box;
        j["ratio"] = row.ratio;
        rows.push_back(j);
    }
    o["rows"] = rows;
    o["deltas"] = r.deltas;
    o["worst"] = r.worst;
    o["trend_exponent"] = r.trend_exponent;
    o["trend_points"] = r.trend_points;
    o["trend"] = r.trend;
    o["evidence"] = "empirical, not a proof";
    return o.dump(2);
}

std::string selfmap_to_json(const SelfMapReport& r)
{
    json o;
    o["max_modulus"] = r.max_modulus;
    o["argmax"] = r.argmax;
    o["grid_per_axis"] = r.grid_per_axis;
    o["tol"] = r.tol;
    o["pass"] = r.pass;
    o["heuristic"] = r.heuristic;
    return o.dump(2);
}

std::string symbol_digest(const Symbol& phi)
{
    std::string s = symbol_to_json(phi, -1);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace polycomp
