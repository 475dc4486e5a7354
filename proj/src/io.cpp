#include "caged/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace caged {

namespace {

double parse_decimal(const std::string& s, const std::string& whole)
{
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw InvalidParameter("");
        return v;
    } catch (const std::exception&) {
        throw InvalidParameter("cannot parse flux '" + whole + "'");
    }
}

} // namespace

double parse_flux(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InvalidParameter("empty flux literal");
    auto at = s.find("pi");
    if (at == std::string::npos) return parse_decimal(s, text);

    std::string coef = s.substr(0, at), rest = s.substr(at + 2);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double c = 1;
    if (coef == "-")
        c = -1;
    else if (coef == "+" || coef.empty())
        c = 1;
    else
        c = parse_decimal(coef, text);
    double den = 1;
    if (!rest.empty()) {
        if (rest[0] != '/') throw InvalidParameter("cannot parse flux '" + text + "'");
        den = parse_decimal(rest.substr(1), text);
        if (den == 0) throw InvalidParameter("zero denominator in flux '" + text + "'");
    }
    return c * std::numbers::pi / den;
}

std::string format_double(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

Format parse_format(const std::string& text)
{
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw InvalidParameter("format must be csv or json");
}

namespace {

void write_tail(std::ostream& os, const std::vector<std::vector<int>>& faces, std::optional<int> first,
                std::optional<int> last)
{
    for (const auto& f : faces) {
        os << "face";
        for (int v : f) os << ' ' << v;
        os << '\n';
    }
    if (first) os << "root first " << *first << '\n';
    if (last) os << "root last " << *last << '\n';
}

struct Parsed {
    std::string kind;
    int n = 0;
    double flux = 0;
    std::vector<PhaseEdge> edges;
    std::vector<std::vector<int>> faces;
    std::optional<int> first, last;
};

Parsed parse(std::istream& is, const std::string& expected)
{
    Parsed p;
    std::string line;
    bool header = false;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw InvalidParameter("line " + std::to_string(lineno) + ": " + what);
    };
    auto vertex = [&](std::istringstream& ss) {
        long long v;
        if (!(ss >> v) || v < 0 || v >= p.n) fail("bad vertex id");
        return static_cast<int>(v);
    };
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (!header) {
            if (tag != expected) fail("expected '" + expected + "' header");
            if (!(ss >> p.n) || p.n < 0) fail("bad vertex count");
            if (expected == "ccam" && !(ss >> p.flux)) fail("missing flux");
            header = true;
        } else if (tag == "e") {
            int u = vertex(ss), v = vertex(ss);
            double theta = 0;
            if (expected == "ccam" && !(ss >> theta)) fail("missing phase");
            if (u == v) fail("self loop");
            p.edges.push_back(u < v ? PhaseEdge{u, v, theta} : PhaseEdge{v, u, -theta});
        } else if (tag == "face") {
            std::vector<int> f;
            while (ss >> std::ws, !ss.eof()) f.push_back(vertex(ss));
            p.faces.push_back(std::move(f));
        } else if (tag == "root") {
            std::string which;
            ss >> which;
            if (which == "first")
                p.first = vertex(ss);
            else if (which == "last")
                p.last = vertex(ss);
            else
                fail("root must be first or last");
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    if (!header) throw InvalidParameter("missing '" + expected + "' header");
    return p;
}

} // namespace

void write_graph(std::ostream& os, const Graph& g)
{
    os << "graph " << g.num_vertices << '\n';
    for (auto [u, v] : g.edges) os << "e " << u << ' ' << v << '\n';
    write_tail(os, g.plaquettes, g.first_vertex, g.last_vertex);
}

Graph read_graph(std::istream& is)
{
    auto p = parse(is, "graph");
    Graph g;
    g.num_vertices = p.n;
    for (const auto& e : p.edges) g.edges.push_back({e.u, e.v});
    std::sort(g.edges.begin(), g.edges.end());
    g.plaquettes = std::move(p.faces);
    g.first_vertex = p.first;
    g.last_vertex = p.last;
    g.validate();
    return g;
}

void write_ccam(std::ostream& os, const Ccam& m)
{
    os << "ccam " << m.dimension << ' ' << format_double(m.flux) << '\n';
    for (const auto& e : m.entries) os << "e " << e.u << ' ' << e.v << ' ' << format_double(e.theta) << '\n';
    write_tail(os, m.plaquettes, m.first_vertex, m.last_vertex);
}

Ccam read_ccam(std::istream& is)
{
    auto p = parse(is, "ccam");
    Ccam m;
    m.dimension = p.n;
    m.flux = p.flux;
    m.entries = std::move(p.edges);
    m.sort_entries();
    for (std::size_t i = 1; i < m.entries.size(); ++i)
        if (m.entries[i].u == m.entries[i - 1].u && m.entries[i].v == m.entries[i - 1].v)
            throw InvalidParameter("duplicate edge in ccam file");
    m.plaquettes = std::move(p.faces);
    m.first_vertex = p.first;
    m.last_vertex = p.last;
    for (const auto& f : m.plaquettes) plaquette_flux(m, f);   // throws on non-edges
    return m;
}

void write_spectrum(std::ostream& os, const Spectrum& s, Format f)
{
    if (f == Format::json) {
        auto rows = nlohmann::json::array();
        for (const auto& l : s.levels) rows.push_back({{"eigenvalue", l.value}, {"multiplicity", l.multiplicity}});
        os << rows.dump(2) << '\n';
        return;
    }
    os << "eigenvalue,multiplicity\n";
    for (const auto& l : s.levels) os << format_double(l.value) << ',' << l.multiplicity << '\n';
}

void write_bands(std::ostream& os, const BandSweep& s, int dimensionality, Format f)
{
    const int n = s.energies.empty() ? 0 : static_cast<int>(s.energies[0].size());
    if (f == Format::json) {
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < s.momenta.size(); ++i) {
            nlohmann::json r;
            r["k"] = s.momenta[i][0];
            if (dimensionality == 2) r["ky"] = s.momenta[i][1];
            for (int b = 0; b < n; ++b) r["E_" + std::to_string(b + 1)] = s.energies[i][b];
            rows.push_back(r);
        }
        os << rows.dump(2) << '\n';
        return;
    }
    os << "k";
    if (dimensionality == 2) os << ",ky";
    for (int b = 0; b < n; ++b) os << ",E_" << b + 1;
    os << '\n';
    for (std::size_t i = 0; i < s.momenta.size(); ++i) {
        os << format_double(s.momenta[i][0]);
        if (dimensionality == 2) os << ',' << format_double(s.momenta[i][1]);
        for (int b = 0; b < n; ++b) os << ',' << format_double(s.energies[i][b]);
        os << '\n';
    }
}

void write_dos(std::ostream& os, const DosMap& d, Format f)
{
    auto rows = nlohmann::json::array();
    if (f == Format::csv) os << "phi,energy_bin_center,count\n";
    for (std::size_t p = 0; p < d.phis.size(); ++p)
        for (int b = 0; b < d.bins.count; ++b) {
            if (f == Format::json)
                rows.push_back({{"phi", d.phis[p]}, {"energy_bin_center", d.bins.center(b)}, {"count", d.counts[p][b]}});
            else
                os << format_double(d.phis[p]) << ',' << format_double(d.bins.center(b)) << ',' << d.counts[p][b]
                   << '\n';
        }
    if (f == Format::json) os << rows.dump(2) << '\n';
}

void write_cls_report(std::ostream& os, const ClsReport& r)
{
    auto seeds = nlohmann::json::array();
    for (const auto& s : r.seeds) {
        auto ev = nlohmann::json::array();
        for (const auto& st : s.states) ev.push_back(st.eigenvalue);
        seeds.push_back({{"seed", s.seed},
                         {"krylov_dim", s.krylov_dim},
                         {"eigenvalues", ev},
                         {"support_radius", s.max_radius},
                         {"residual", s.max_residual},
                         {"cap_exceeded", s.cap_exceeded}});
    }
    nlohmann::json out{{"states", seeds},
                       {"summary",
                        {{"span_rank", r.span_rank},
                         {"dimension", r.dimension},
                         {"covered", r.covered},
                         {"cap_exceeded_seeds", r.cap_exceeded_seeds},
                         {"radius_violations", r.radius_violations}}}};
    os << out.dump(2) << '\n';
}

} // namespace caged
