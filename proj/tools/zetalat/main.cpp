// zetalat command-line driver.
//
// Exit codes: 0 success, 2 invalid request, 3 numerical failure. Failures
// are reported as one JSON object on stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "suites.hpp"
#include "zetalat/zetalat.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace zetalat;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

// ---------------------------------------------------------------- output

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const Cell& c) {
    if (auto s = std::get_if<std::string>(&c)) {
        if (s->find_first_of(",\"\n") == std::string::npos) return *s;
        std::string q = "\"";
        for (char ch : *s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    if (auto d = std::get_if<double>(&c)) return fmt17(*d);
    if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
}

// Doubles go through a 17-digit string so JSON and CSV agree digit for digit.
json json_cell(const Cell& c) {
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return fmt17(*d);
        return json::parse(fmt17(*d));
    }
    if (auto i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<bool>(c);
}

std::string render(const Table& t, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        json arr = json::array();
        for (const auto& row : t.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
            arr.push_back(obj);
        }
        os << arr.dump(2) << '\n';
        return os.str();
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
    return os.str();
}

void emit(const Table& t, const std::string& format, const std::string& path) {
    const std::string text = render(t, format);
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw DomainError("cannot open output file " + path);
    f << text;
}

void report_error(const std::string& kind, const std::string& message) {
    json e = {{"error", kind}, {"message", message}};
    std::cerr << e.dump() << '\n';
}

// ---------------------------------------------------------------- parsing

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw DomainError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw DomainError("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    if (s.empty()) throw DomainError(what + " is empty");
    std::vector<double> v;
    for (const auto& p : split(s)) v.push_back(parse_double(p));
    return v;
}

RealVec parse_vec(const std::string& s, const std::string& what) {
    const auto v = parse_list(s, what);
    if (v.size() > kMaxDim) throw DomainError(what + " has more than " + std::to_string(kMaxDim) + " components");
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError(what + " must be finite");
    return RealVec(std::span<const double>(v));
}

MultiIndex parse_index(const std::string& s, const std::string& what) {
    std::vector<int> v;
    for (double x : parse_list(s, what)) {
        if (x != std::floor(x) || x < 0 || x > 1000) throw DomainError(what + " entries must be non-negative integers");
        v.push_back(static_cast<int>(x));
    }
    if (v.size() > kMaxDim) throw DomainError(what + " has too many components");
    return MultiIndex(std::span<const int>(v));
}

Lattice parse_lattice(const std::string& s, std::size_t d) {
    if (s.size() >= 2 && (s[0] == 'Z' || s[0] == 'z')) {
        const double n = parse_double(s.substr(1));
        if (n < 1 || n != std::floor(n) || n > static_cast<double>(d))
            throw DomainError("lattice " + s + " needs 1 <= n <= d=" + std::to_string(d));
        return Lattice::integer(static_cast<std::size_t>(n), d);
    }
    return Lattice::from_row_major(parse_list(s, "lattice"), d);
}

// ---------------------------------------------------------------- commands

struct Global {
    std::string format = "csv";
    std::string output;
    unsigned workers = default_workers();
    bool deterministic = false;
    std::string config;
};

struct PotentialArgs {
    std::optional<double> nu;
    std::string m, c, r, lattice = "Z2";
    int near_radius = 1;
    int ell = 8;
    double eps = 1e-16;
};

Table cmd_potential(const PotentialArgs& a) {
    if (!a.nu) throw DomainError("--nu is required");
    const RealVec r = parse_vec(a.r, "--r");
    const MultiIndex m = parse_index(a.m, "--m");
    const Cuboid box(parse_vec(a.c, "--c"));
    const Lattice L = parse_lattice(a.lattice, r.size());
    if (a.near_radius < 0) throw DomainError("--near-radius must be >= 0");
    const PotentialQuery q{*a.nu, m, box, L, r, NearFieldSpec::cube(L.n(), a.near_radius), a.ell, a.eps};
    const auto res = potential_detailed(q);
    Table t;
    t.columns = {"nu", "m", "c", "r", "lattice", "near_radius", "value", "estimate", "near_sum", "correction",
                 "chosen_order", "corollary_holds", "eta"};
    std::vector<Cell> row = {*a.nu,
                             suites::join(m),
                             suites::join(box.c),
                             suites::join(r),
                             a.lattice,
                             std::int64_t{a.near_radius},
                             res.value,
                             res.estimate,
                             res.near_sum,
                             res.correction.total,
                             std::int64_t{res.correction.chosen_order},
                             res.correction.corollary_holds,
                             res.correction.eta};
    for (const auto& o : res.correction.orders) {
        t.columns.push_back("order_" + std::to_string(o.order));
        row.push_back(o.value);
    }
    t.rows.push_back(row);
    return t;
}

struct DemagArgs {
    std::string box;
    bool pbc = false;
    bool table = false;
    int N = 0;
    std::optional<int> near_radius;
    std::optional<int> ell;
};

Table cmd_demag(const DemagArgs& a, const Global& g) {
    const int modes = !a.box.empty() + a.pbc + a.table;
    if (modes != 1) throw DomainError("demag needs exactly one of --box, --pbc, --table");
    Table t;
    if (!a.box.empty()) {
        const Cuboid box(parse_vec(a.box, "--box"));
        const auto D = demag_factors(box);
        t.columns = {"box", "Dx", "Dy", "Dz", "sum"};
        t.rows.push_back({suites::join(box.c), D.Dx, D.Dy, D.Dz, D.Dx + D.Dy + D.Dz});
        return t;
    }
    t.columns = {"N", "near_radius", "ell", "Dz", "Dz_asym"};
    std::vector<int> Ns;
    if (a.pbc) {
        if (a.N < 1) throw DomainError("--pbc needs --N >= 1");
        Ns = {a.N};
    } else {
        Ns = {1, 2, 5, 10, 50, 100};
    }
    const auto rows = parallel_map(Ns.size(), g.workers, [&](std::size_t i) {
        const int N = Ns[i];
        const auto p = demag_preset(N);
        const int rad = a.near_radius.value_or(p.near_radius), ell = a.ell.value_or(p.ell);
        return std::vector<Cell>{std::int64_t{N}, std::int64_t{rad}, std::int64_t{ell}, demag_pbc(N, rad, ell),
                                 asymptotic_dz(N)};
    });
    t.rows = rows;
    return t;
}

struct BesselArgs {
    std::optional<double> nu;
    std::string k, r;
};

Table cmd_bessel(const BesselArgs& a) {
    if (!a.nu) throw DomainError("--nu is required");
    const RealVec k = parse_vec(a.k, "--k"), r = parse_vec(a.r, "--r");
    const auto rep = special::incomplete_bessel(*a.nu, k, r);
    Table t;
    t.columns = {"nu", "k", "r", "value", "branch", "swapped"};
    t.rows.push_back({*a.nu, suites::join(k), suites::join(r), rep.value, std::string(special::to_string(rep.branch)),
                      rep.swapped});
    return t;
}

struct ZetaArgs {
    std::optional<double> nu;
    std::string alpha, r, lattice = "Z2";
    int near_radius = 0;
    std::optional<double> lambda;
};

Table cmd_zeta(const ZetaArgs& a) {
    if (!a.nu) throw DomainError("--nu is required");
    const RealVec r = parse_vec(a.r, "--r");
    const MultiIndex alpha = a.alpha.empty() ? MultiIndex(r.size()) : parse_index(a.alpha, "--alpha");
    const Lattice L = parse_lattice(a.lattice, r.size());
    if (a.near_radius < 0) throw DomainError("--near-radius must be >= 0");
    const NearFieldSpec near = a.near_radius == 0 ? NearFieldSpec::explicit_points({})
                                                  : NearFieldSpec::cube(L.n(), a.near_radius - 1);
    ZetaOptions opt;
    opt.lambda = a.lambda;
    const ZetaQuery q{L, near, *a.nu, alpha, r, opt};
    Table t;
    t.columns = {"nu", "alpha", "r", "lattice", "near_radius", "value"};
    t.rows.push_back({*a.nu, suites::join(alpha), suites::join(r), a.lattice, std::int64_t{a.near_radius},
                      set_zeta_deriv(q)});
    return t;
}

struct BenchmarkArgs {
    std::string suite;
    double nu = 1.0;
    int max_ncut = 10;
    int n_min = 4;
    int n_max = 32;
};

Table cmd_benchmark(const BenchmarkArgs& a, const Global& g) {
    const suites::RunSettings rs{g.workers, g.deterministic};
    std::vector<suites::BenchmarkRecord> recs;
    if (a.suite == "bessel-grid") {
        recs = suites::bessel_grid(rs);
    } else if (a.suite == "direct-vs-zeta") {
        recs = suites::direct_vs_zeta(rs);
    } else if (a.suite == "nc-scaling") {
        if (a.max_ncut < 1) throw DomainError("--max-ncut must be >= 1");
        recs = suites::nc_scaling(a.nu, a.max_ncut, rs);
    } else if (a.suite == "dz-asymptotic") {
        if (a.n_min < 1 || a.n_max < a.n_min) throw DomainError("need 1 <= --n-min <= --n-max");
        recs = suites::dz_asymptotic(a.n_min, a.n_max, rs);
    } else {
        throw DomainError("unknown suite '" + a.suite + "'");
    }
    Table t;
    t.columns = {"suite", "nu", "m", "c", "r", "n_cut_or_order", "value", "reference", "abs_err", "rel_err", "wall_ns"};
    for (const auto& r : recs)
        t.rows.push_back({r.suite, r.nu, r.m, r.c, r.r, std::int64_t{r.n_cut_or_order}, r.value, r.reference, r.abs_err,
                          r.rel_err, std::int64_t{r.wall_ns}});
    return t;
}

// ---------------------------------------------------------------- config

// Turns {"command": "...", "key": value, ...} into argv words; every key must
// name an option of the app or of the chosen subcommand.
std::vector<std::string> config_args(const std::string& path, CLI::App& app) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read config file " + path);
    json cfg;
    try {
        cfg = json::parse(f);
    } catch (const std::exception& e) {
        throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw DomainError("config must be a JSON object");
    if (!cfg.contains("command") || !cfg["command"].is_string()) throw DomainError("config needs a \"command\" string");
    const std::string command = cfg["command"].get<std::string>();
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(command);
    } catch (const std::exception&) {
        throw DomainError("config names unknown command '" + command + "'");
    }
    std::vector<std::string> global, local;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") continue;
        if (key == "config") throw DomainError("config files cannot nest");
        const std::string flag = "--" + key;
        std::vector<std::string>* dst = nullptr;
        if (sub->get_option_no_throw(flag)) dst = &local;
        else if (app.get_option_no_throw(flag)) dst = &global;
        else throw DomainError("unknown config key '" + key + "' for command '" + command + "'");
        if (value.is_boolean()) {
            if (value.get<bool>()) dst->push_back(flag);
            continue;
        }
        std::string text;
        if (value.is_string()) {
            text = value.get<std::string>();
        } else if (value.is_number()) {
            text = value.is_number_integer() ? std::to_string(value.get<long long>()) : fmt17(value.get<double>());
        } else if (value.is_array()) {
            for (const auto& x : value) {
                if (!text.empty()) text += ',';
                if (x.is_number_integer()) text += std::to_string(x.get<long long>());
                else if (x.is_number()) text += fmt17(x.get<double>());
                else throw DomainError("config array '" + key + "' must hold numbers");
            }
        } else {
            throw DomainError("config key '" + key + "' has an unsupported type");
        }
        dst->push_back(flag);
        dst->push_back(text);
    }
    global.push_back(command);
    global.insert(global.end(), local.begin(), local.end());
    return global;
}

int run(int argc, char** argv) {
    CLI::App app{"Periodic Riesz potentials of cuboids via zeta expansions", "zetalat"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", g.output, "Output file (default stdout)");
    app.add_option("--workers", g.workers, "Worker threads (default ZETALAT_WORKERS or all cores)")
        ->check(CLI::Range(1u, 4096u));
    app.add_flag("--deterministic", g.deterministic, "Zero timing columns for byte-identical output");
    app.add_option("--config", g.config, "JSON config file with a \"command\" key and option values");

    PotentialArgs pa;
    auto* pot = app.add_subcommand("potential", "Periodic potential U^(m)(r)");
    pot->add_option("--nu", pa.nu, "Riesz exponent");
    pot->add_option("--m", pa.m, "Derivative multi-index, e.g. 0,0,2")->required();
    pot->add_option("--c", pa.c, "Cuboid edge lengths")->required();
    pot->add_option("--r", pa.r, "Evaluation point")->required();
    pot->add_option("--lattice", pa.lattice, "Z1, Z2, ... or a row-major generator matrix");
    pot->add_option("--near-radius", pa.near_radius, "Near-field box radius");
    pot->add_option("--ell", pa.ell, "Even Taylor order cap");
    pot->add_option("--eps", pa.eps, "Relative order cutoff");

    DemagArgs da;
    auto* dem = app.add_subcommand("demag", "Demagnetizing factors");
    dem->add_option("--box", da.box, "Single cuboid edge lengths");
    dem->add_flag("--pbc", da.pbc, "D_z of the periodic layer of cubes with edge 1/N");
    dem->add_option("--N", da.N, "Cubes per unit cell edge");
    dem->add_option("--near-radius", da.near_radius, "Override the preset near-field radius");
    dem->add_option("--ell", da.ell, "Override the preset Taylor order");
    dem->add_flag("--table", da.table, "D_z for N = 1, 2, 5, 10, 50, 100");

    BesselArgs ba;
    auto* bes = app.add_subcommand("bessel", "Incomplete Bessel function G_nu(k, r)");
    bes->add_option("--nu", ba.nu, "Order");
    bes->add_option("--k", ba.k, "First argument")->required();
    bes->add_option("--r", ba.r, "Second argument")->required();

    ZetaArgs za;
    auto* zet = app.add_subcommand("zeta", "Set zeta derivative over the lattice minus a near box");
    zet->add_option("--nu", za.nu, "Exponent");
    zet->add_option("--alpha", za.alpha, "Derivative multi-index (default 0)");
    zet->add_option("--r", za.r, "Evaluation point")->required();
    zet->add_option("--lattice", za.lattice, "Z1, Z2, ... or a row-major generator matrix");
    zet->add_option("--near-radius", za.near_radius, "Exclude the box of radius near-radius - 1 (0 excludes nothing)");
    zet->add_option("--lambda", za.lambda, "Splitting parameter");

    BenchmarkArgs bm;
    auto* ben = app.add_subcommand("benchmark", "Benchmark suites as CSV/JSON records");
    ben->add_option("--suite", bm.suite, "bessel-grid | direct-vs-zeta | nc-scaling | dz-asymptotic")->required();
    ben->add_option("--nu", bm.nu, "Exponent for nc-scaling");
    ben->add_option("--max-ncut", bm.max_ncut, "Largest N_cut for nc-scaling");
    ben->add_option("--n-min", bm.n_min, "Smallest N for dz-asymptotic");
    ben->add_option("--n-max", bm.n_max, "Largest N for dz-asymptotic");

    std::vector<std::string> words;
    for (int i = argc - 1; i >= 1; --i) words.emplace_back(argv[i]);
    // Expand --config before the real parse.
    for (std::size_t i = words.size(); i-- > 0;) {
        const std::string& w = words[i];
        std::string path;
        if (w == "--config" && i > 0) path = words[i - 1];
        else if (w.rfind("--config=", 0) == 0) path = w.substr(9);
        else continue;
        std::vector<std::string> rest(words.begin(), words.begin() + static_cast<long>(w == "--config" ? i - 1 : i));
        std::vector<std::string> head(words.begin() + static_cast<long>(i + 1), words.end());
        auto extra = config_args(path, app);
        words.clear();
        words.insert(words.end(), rest.begin(), rest.end());
        for (auto it = extra.rbegin(); it != extra.rend(); ++it) words.push_back(*it);
        words.insert(words.end(), head.begin(), head.end());
        break;
    }
    try {
        app.parse(words);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return kExitInvalid;
    }

    Table t;
    if (pot->parsed()) t = cmd_potential(pa);
    else if (dem->parsed()) t = cmd_demag(da, g);
    else if (bes->parsed()) t = cmd_bessel(ba);
    else if (zet->parsed()) t = cmd_zeta(za);
    else t = cmd_benchmark(bm, g);
    emit(t, g.format, g.output);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const zetalat::Error& e) {
        report_error(e.kind(), e.what());
        return zetalat::is_numerical(e) ? kExitNumerical : kExitInvalid;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return kExitNumerical;
    }
}
