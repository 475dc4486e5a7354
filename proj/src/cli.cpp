#include "caged/cli.hpp"
#include "caged/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>

namespace caged {

namespace {

using std::numbers::pi;

struct RunConfig {
    std::string x = "2";
    std::string phi = "0";
    std::string grow_phi = "none";
    std::string method = "oracle";
    std::string model = "chain";
    std::string out = "-";
    std::string format = "csv";
    std::string ccam;
    int grid = 0;
    int k_grid = 101;
    int phi_grid = 121;
    int bins = 200;
    double emin = 0, emax = 0;
    int cells = 0;   // 0: command default
    int radius = 1;
    int kmax = 0;
    int cap = 512;
    int dense_limit = 0;
    long long m = 0;
    bool list = false;
    bool assert_property = false;
    double tol = 0;
    std::string kind = "first";
    int sides = 6, p = 2, q = 3, generations = 1;
};

// Writes to --out, or to the command's stdout when --out is "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw InvalidParameter("cannot open '" + path + "' for writing");
            os_ = &file_;
        }
    }
    std::ostream& operator*() { return *os_; }
    bool to_stdout() const { return !file_.is_open(); }

private:
    std::ofstream file_;
    std::ostream* os_;
};

BlochModel pick_model(const RunConfig& c)
{
    if (c.model == "chain") return chain_bloch(parse_intseq(c.x));
    if (c.model == "lotus44") return second_kind_44_bloch();
    throw InvalidParameter("model must be chain or lotus44");
}

Ccam load_ccam(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open '" + path + "'");
    return read_ccam(in);
}

int cmd_grow(const RunConfig& c, std::ostream& out)
{
    auto x = parse_intseq(c.x);
    Sink sink(c.out, out);
    const int cells = c.cells > 0 ? c.cells : 1;
    if (c.grow_phi == "none") {
        write_graph(*sink, cells > 1 ? chain_graph(x, cells) : grow_tree(x));
        return 0;
    }
    write_ccam(*sink, chain_ccam(x, cells, parse_flux(c.grow_phi)));
    return 0;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out)
{
    const double phi = parse_flux(c.phi);
    Spectrum s;
    if (c.method == "oracle") {
        Ccam m = c.ccam.empty() ? canonical_ccam(parse_intseq(c.x), phi) : load_ccam(c.ccam);
        s = hermitian_eigensolve(dense_matrix(m)).spectrum;
    } else if (c.method == "theorem") {
        auto x = parse_intseq(c.x);
        if (distance_to_lattice(phi) < 1e-12)
            s = spectrum_fluxless(x);
        else if (distance_to_lattice(phi - 2 * pi / x[0]) < 1e-12)
            s = spectrum_flux_af(x);
        else
            throw UnsupportedHypothesis("theorem spectra exist only at phi = 0 and phi = 2pi/x_1");
    } else {
        throw InvalidParameter("method must be oracle or theorem");
    }
    Sink sink(c.out, out);
    write_spectrum(*sink, s, parse_format(c.format));
    return 0;
}

int cmd_flat_values(const RunConfig& c, std::ostream& out)
{
    auto x = parse_intseq(c.x);
    auto f = flat_values(x);
    Sink sink(c.out, out);
    if (parse_format(c.format) == Format::json) {
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < f.values.size(); ++i)
            rows.push_back({{"z", i + 1}, {"phi", f.values[i]}, {"uncrossable", is_uncrossable(x, f.values[i]) ? 1 : 0}});
        *sink << rows.dump(2) << '\n';
        return 0;
    }
    *sink << "z,phi,uncrossable\n";
    for (std::size_t i = 0; i < f.values.size(); ++i)
        *sink << i + 1 << ',' << format_double(f.values[i]) << ',' << (is_uncrossable(x, f.values[i]) ? 1 : 0)
              << '\n';
    return 0;
}

int cmd_bands(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    auto model = pick_model(c);
    const int grid = c.grid > 0 ? c.grid : (model.dimensionality == 1 ? 101 : 32);
    auto sweep = band_sweep(model, parse_flux(c.phi), grid);
    Sink sink(c.out, out);
    write_bands(*sink, sweep, model.dimensionality, parse_format(c.format));
    (sink.to_stdout() ? err : out) << "total_bandwidth " << format_double(sweep.total_bandwidth) << '\n';
    const double tol = c.tol > 0 ? c.tol : 1e-8;
    return c.assert_property && sweep.total_bandwidth >= tol ? 2 : 0;
}

int cmd_dos(const RunConfig& c, std::ostream& out)
{
    auto model = pick_model(c);
    if (c.phi_grid < 1) throw InvalidParameter("phi grid must be positive");
    std::vector<double> phis;
    for (int i = 0; i < c.phi_grid; ++i) phis.push_back(c.phi_grid == 1 ? 0.0 : 2 * pi * i / (c.phi_grid - 1));
    double lo = c.emin, hi = c.emax;
    if (!(hi > lo)) {
        double bound = model(0.3, 0.7, 0.0).cwiseAbs().rowwise().sum().maxCoeff() + 0.05;
        lo = -bound;
        hi = bound;
    }
    auto d = dos_map(model, phis, c.k_grid, {lo, hi, c.bins});
    Sink sink(c.out, out);
    write_dos(*sink, d, parse_format(c.format));
    return 0;
}

int cmd_caging(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    auto x = parse_intseq(c.x);
    const double phi = parse_flux(c.phi);
    auto m = canonical_ccam(x, phi);
    const int kmax = c.kmax > 0 ? c.kmax : 4 * x.depth();
    auto amps = crossing_amplitudes(m, kmax);
    double worst = 0;
    for (auto a : amps) worst = std::max(worst, std::abs(a));
    Sink sink(c.out, out);
    if (parse_format(c.format) == Format::json) {
        auto rows = nlohmann::json::array();
        for (int k = 1; k <= kmax; ++k)
            rows.push_back({{"k", k}, {"re", amps[k - 1].real()}, {"im", amps[k - 1].imag()}, {"abs", std::abs(amps[k - 1])}});
        *sink << rows.dump(2) << '\n';
    } else {
        *sink << "k,re,im,abs\n";
        for (int k = 1; k <= kmax; ++k)
            *sink << k << ',' << format_double(amps[k - 1].real()) << ',' << format_double(amps[k - 1].imag()) << ','
                  << format_double(std::abs(amps[k - 1])) << '\n';
    }
    auto ex = exchange_symmetry_check(m);
    auto& log = sink.to_stdout() ? err : out;
    log << "max_crossing " << format_double(worst) << '\n'
        << "uncrossable " << (is_uncrossable(x, phi) ? "yes" : "no") << '\n'
        << "exchange_commutator " << format_double(ex.commutator_norm) << '\n';
    const double tol = c.tol > 0 ? c.tol : 1e-10;
    return c.assert_property && worst >= tol ? 2 : 0;
}

int cmd_cls(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    KrylovOptions opt;
    opt.cap = c.cap;
    Ccam m;
    if (!c.ccam.empty()) {
        m = load_ccam(c.ccam);
    } else {
        auto x = parse_intseq(c.x);
        const int cells = c.cells > 0 ? c.cells : 4;
        m = chain_ccam(x, cells, parse_flux(c.phi));
        opt.distance = chain_cell_distance(x, cells);
    }
    auto rep = verify_all_cls(m, c.radius, opt);
    Sink sink(c.out, out);
    write_cls_report(*sink, rep);
    if (!sink.to_stdout())
        out << "span_rank " << rep.span_rank << " of " << rep.dimension << ", max_radius " << rep.max_radius
            << ", cap_exceeded " << rep.cap_exceeded_seeds.size() << '\n';
    (void)err;
    return c.assert_property && !rep.ok() ? 2 : 0;
}

int cmd_lotus(const RunConfig& c, std::ostream& out)
{
    LotusSpec spec;
    if (c.kind == "first")
        spec.kind = LotusKind::first;
    else if (c.kind == "second")
        spec.kind = LotusKind::second;
    else
        throw InvalidParameter("kind must be first or second");
    spec.sides = c.sides;
    spec.shrub_p = c.p;
    spec.tiling_q = c.q;
    spec.generations = c.generations;
    auto patch = lotus_patch(spec);
    const double phi = c.phi == "auto" ? 2 * pi / spec.shrub_p : parse_flux(c.phi);
    auto m = lotus_ccam(patch, phi);
    auto s = sparse_matrix(m);

    int hubs = 0, passed = 0;
    for (int v = 0; v < patch.graph.num_vertices; ++v) {
        auto r = patch.roles[v];
        bool hub = r == VertexRole::center ||
                   (spec.kind == LotusKind::first ? r == VertexRole::midpoint : r == VertexRole::corner);
        if (!hub || patch.boundary[v]) continue;
        ++hubs;
        passed += local_caging_check(s, v);
    }
    if (c.out != "-") {
        std::ofstream f(c.out);
        if (!f) throw InvalidParameter("cannot open '" + c.out + "' for writing");
        write_ccam(f, m);
    }
    out << "tiles " << patch.tiles << ", vertices " << patch.graph.num_vertices << ", edges "
        << patch.graph.edges.size() << ", shrubs " << patch.shrubs.size() << '\n'
        << "interior hubs passing the H^2 check: " << passed << " of " << hubs << '\n';
    return c.assert_property && passed != hubs ? 2 : 0;
}

int cmd_factorize(const RunConfig& c, std::ostream& out)
{
    auto f = ordered_factorizations(c.m, c.list);
    out << f.count << '\n';
    for (const auto& l : f.list) {
        for (std::size_t i = 0; i < l.size(); ++i) out << (i ? "*" : "") << l[i];
        out << '\n';
    }
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out)
{
    auto x = parse_intseq(c.x);
    bool ok = true;
    auto report = [&](bool pass, const std::string& what) {
        out << (pass ? "PASS " : "FAIL ") << what << '\n';
        ok = ok && pass;
    };
    auto compare = [](const Spectrum& a, const Spectrum& b) {
        auto u = a.expanded(), v = b.expanded();
        if (u.size() != v.size()) return false;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (std::abs(u[i] - v[i]) > 1e-8) return false;
        return true;
    };
    if (x.all_at_least_two()) {
        report(compare(spectrum_fluxless(x), hermitian_eigensolve(dense_matrix(canonical_ccam(x, 0))).spectrum),
               "zero-flux theorem spectrum matches the dense oracle");
        report(compare(spectrum_flux_af(x),
                       hermitian_eigensolve(dense_matrix(canonical_ccam(x, 2 * pi / x[0]))).spectrum),
               "2pi/x_1 theorem spectrum matches the dense oracle");
    }
    auto flats = flat_values(x);
    auto model = chain_bloch(x);
    for (std::size_t z = 1; z <= flats.values.size(); ++z) {
        const double phi = flats.values[z - 1];
        double worst = 0;
        for (auto a : crossing_amplitudes(canonical_ccam(x, phi), 4 * x.depth())) worst = std::max(worst, std::abs(a));
        const double bw = band_sweep(model, phi, 101).total_bandwidth;
        const bool expect = is_uncrossable(x, phi);
        std::string tag = "phi = 2pi*" + std::to_string(z) + "/" + std::to_string(flats.denominator);
        report((worst < 1e-10) == expect, tag + ": crossing amplitudes " + (expect ? "vanish" : "survive") +
                                              " (max " + format_double(worst) + ")");
        report((bw < 1e-8) == expect, tag + ": bands " + (expect ? "flat" : "dispersive") + " (bandwidth " +
                                          format_double(bw) + ")");
    }
    return ok ? 0 : 2;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Glued trees, flux-carrying adjacency matrices, flat bands and caging"};
    app.require_subcommand(1, 1);
    RunConfig c;
    app.add_option("--dense-limit", c.dense_limit, "Override the dense-solver vertex cap");

    auto x_opt = [&](CLI::App* s) { s->add_option("--x", c.x, "Growth sequence, e.g. 2,3,2"); };
    auto phi_opt = [&](CLI::App* s) { s->add_option("--phi", c.phi, "Flux: decimal, pi, pi/6, 2pi/3"); };
    auto out_opt = [&](CLI::App* s) {
        s->add_option("--out", c.out, "Output file (- for stdout)");
        s->add_option("--format", c.format, "csv or json");
    };

    auto grow = app.add_subcommand("grow", "Write a glued tree (graph, or ccam with --phi)");
    x_opt(grow);
    grow->add_option("--phi", c.grow_phi, "Write a ccam at this flux");
    grow->add_option("--cells", c.cells, "Chain of this many cells (default 1)");
    grow->add_option("--out", c.out, "Output file (- for stdout)");

    auto spectrum = app.add_subcommand("spectrum", "Spectrum by dense oracle or theorem assembly");
    x_opt(spectrum);
    phi_opt(spectrum);
    spectrum->add_option("--method", c.method, "oracle or theorem");
    spectrum->add_option("--ccam", c.ccam, "Read the matrix from a ccam file (oracle only)");
    out_opt(spectrum);

    auto flat = app.add_subcommand("flat-values", "List the flat values of X");
    x_opt(flat);
    out_opt(flat);

    auto bands = app.add_subcommand("bands", "Band structure over a momentum grid");
    x_opt(bands);
    phi_opt(bands);
    bands->add_option("--model", c.model, "chain or lotus44");
    bands->add_option("--grid", c.grid, "Points per momentum component");
    bands->add_flag("--assert-flat", c.assert_property, "Exit 2 unless every band is flat");
    bands->add_option("--tol", c.tol, "Bandwidth tolerance for --assert-flat");
    out_opt(bands);

    auto dos = app.add_subcommand("dos", "Density of states over flux and energy");
    x_opt(dos);
    dos->add_option("--model", c.model, "chain or lotus44");
    dos->add_option("--phi-grid", c.phi_grid, "Flux samples on [0, 2pi]");
    dos->add_option("--k-grid", c.k_grid, "Momentum points per component");
    dos->add_option("--bins", c.bins, "Energy bins");
    dos->add_option("--emin", c.emin, "Lowest energy");
    dos->add_option("--emax", c.emax, "Highest energy");
    out_opt(dos);

    auto caging = app.add_subcommand("caging", "Crossing amplitudes <L|M^k|F>");
    x_opt(caging);
    phi_opt(caging);
    caging->add_option("--kmax", c.kmax, "Largest power (default 4 d)");
    caging->add_flag("--assert-caged", c.assert_property, "Exit 2 unless every amplitude vanishes");
    caging->add_option("--tol", c.tol, "Amplitude tolerance");
    out_opt(caging);

    auto cls = app.add_subcommand("cls", "Compact localized states from every seed");
    x_opt(cls);
    phi_opt(cls);
    cls->add_option("--cells", c.cells, "Chain length (default 4)");
    cls->add_option("--ccam", c.ccam, "Read the matrix from a ccam file (graph distance)");
    cls->add_option("--radius", c.radius, "Support bound (unit cells for chains)");
    cls->add_option("--cap", c.cap, "Krylov dimension cap");
    cls->add_flag("--assert-confined", c.assert_property, "Exit 2 unless all states are compact and complete");
    out_opt(cls);

    auto lotus = app.add_subcommand("lotus", "Build a lotus patch and run the H^2 caging check");
    lotus->add_option("--kind", c.kind, "first or second");
    lotus->add_option("--sides", c.sides, "Polygon sides");
    lotus->add_option("--p", c.p, "Shrub size");
    lotus->add_option("--q", c.q, "Polygons per corner");
    lotus->add_option("--generations", c.generations, "Tile rings");
    lotus->add_option("--phi", c.phi, "Flux (default 2pi/p)");
    lotus->add_option("--out", c.out, "Write the ccam here");
    lotus->add_flag("--check", c.assert_property, "Exit 2 unless every interior hub passes");

    auto factorize = app.add_subcommand("factorize", "Count ordered factorizations of M");
    factorize->add_option("--m", c.m, "Integer M >= 1")->required();
    factorize->add_flag("--list", c.list, "Also list them");

    auto verify = app.add_subcommand("verify", "Theorem, caging and flat-band checks for X");
    x_opt(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    if (lotus->parsed() && c.phi == "0") c.phi = "auto";

    try {
        if (c.dense_limit > 0) setenv("CAGED_DENSE_LIMIT", std::to_string(c.dense_limit).c_str(), 1);
        if (grow->parsed()) return cmd_grow(c, out);
        if (spectrum->parsed()) return cmd_spectrum(c, out);
        if (flat->parsed()) return cmd_flat_values(c, out);
        if (bands->parsed()) return cmd_bands(c, out, err);
        if (dos->parsed()) return cmd_dos(c, out);
        if (caging->parsed()) return cmd_caging(c, out, err);
        if (cls->parsed()) return cmd_cls(c, out, err);
        if (lotus->parsed()) return cmd_lotus(c, out);
        if (factorize->parsed()) return cmd_factorize(c, out);
        if (verify->parsed()) return cmd_verify(c, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace caged
