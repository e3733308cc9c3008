#include "normform/cli.hpp"

#include "normform/experiments.hpp"
#include "normform/geometry.hpp"
#include "normform/lattice.hpp"
#include "normform/local.hpp"
#include "normform/primes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace normform::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kSubcommands{"norms", "sseries", "lattice", "census", "typei", "theorem", "integral", "buchstab"};

int log_level()
{
    const char* v = std::getenv("NORMFORM_LOG");
    if (!v) return 0;
    std::string s(v);
    if (s == "debug" || s == "2") return 2;
    if (s == "info" || s == "1") return 1;
    return 0;
}

struct Flags {
    std::optional<u64> seed, threads, pcut, budget;
};

// Reads keys from a config object, filling defaults into `resolved`; keys never read are rejected.
class Config {
public:
    explicit Config(json in) : in_(std::move(in))
    {
        if (!in_.is_object()) throw Error(Errc::InvalidArgument, "config must be a JSON object");
    }

    bool has(const std::string& key) const { return in_.contains(key); }

    template <class T>
    T get(const std::string& key, const T& def)
    {
        used_.insert(key);
        T v = def;
        if (in_.contains(key)) {
            try {
                v = in_.at(key).get<T>();
            } catch (const json::exception&) {
                throw Error(Errc::InvalidArgument, "config key '" + key + "' has the wrong type");
            }
        }
        resolved_[key] = v;
        return v;
    }

    const json& raw(const std::string& key)
    {
        used_.insert(key);
        if (!in_.contains(key)) throw Error(Errc::InvalidArgument, "config key '" + key + "' is required");
        resolved_[key] = in_.at(key);
        return in_.at(key);
    }

    // Flag value wins over the config value.
    template <class T>
    T overridable(const std::string& key, const T& def, const std::optional<u64>& flag)
    {
        T v = get<T>(key, def);
        if (flag) {
            v = static_cast<T>(*flag);
            resolved_[key] = v;
        }
        return v;
    }

    void set(const std::string& key, json v) { resolved_[key] = std::move(v); }

    void reject_unknown() const
    {
        for (const auto& [k, _] : in_.items())
            if (!used_.count(k)) throw Error(Errc::InvalidArgument, "unknown config key '" + k + "'");
    }

    const json& resolved() const { return resolved_; }

private:
    json in_;
    json resolved_ = json::object();
    std::set<std::string> used_;
};

FieldSpec read_field(Config& c)
{
    FieldSpec f = field_from_json(c.raw("field"));
    c.set("field", to_json(f));
    return f;
}

Rational read_rational(const json& j)
{
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        Rational r(j.get<std::string>());
        r.canonicalize();
        return r;
    }
    throw Error(Errc::InvalidArgument, "box bounds must be integers or rational strings");
}

AxisBox read_box(const json& j, size_t dim)
{
    if (!j.is_array() || j.size() != dim) throw Error(Errc::InvalidArgument, "box needs one [lo, hi] pair per free coordinate");
    AxisBox b;
    for (const auto& iv : j) {
        if (!iv.is_array() || iv.size() != 2) throw Error(Errc::InvalidArgument, "box entries must be [lo, hi]");
        b.iv.emplace_back(read_rational(iv[0]), read_rational(iv[1]));
    }
    return b;
}

ExperimentConfig read_experiment(Config& c, const Flags& fl)
{
    FieldSpec f = read_field(c);
    double X = c.get<double>("X", 10);
    ExperimentConfig e = make_experiment(f, X);
    if (c.has("box")) e.box = read_box(c.raw("box"), static_cast<size_t>(f.m()));
    json bj = json::array();
    for (const auto& [lo, hi] : e.box.iv) bj.push_back({lo.get_str(), hi.get_str()});
    c.set("box", bj);
    e.eta1 = c.get<double>("eta1", e.eta1);
    e.eta2 = c.get<double>("eta2", e.eta2);
    e.epsilon = c.get<double>("epsilon", e.epsilon);
    e.P_cut = c.overridable<u64>("P_cut", e.P_cut, fl.pcut);
    e.seed = c.overridable<u64>("seed", e.seed, fl.seed);
    e.threads = c.overridable<unsigned>("threads", e.threads, fl.threads);
    e.budget = c.overridable<u64>("budget", e.budget, fl.budget);
    e.samples = c.get<u64>("samples", e.samples);
    e.slabs = c.get<unsigned>("slabs", e.slabs);
    e.c0 = c.get<double>("c0", e.c0);
    return e;
}

struct Output {
    json report;
    std::string csv;
    std::string line;  // one-line summary for stdout
};

json stamp(json j, const Config& c)
{
    j["config"] = c.resolved();
    j["version"] = kVersion;
    if (!j.contains("runtime_s")) j["runtime_s"] = nullptr;
    return j;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// ---- subcommands ----

Output cmd_norms(Config& c, const Flags& fl)
{
    ExperimentConfig e = read_experiment(c, fl);
    c.reject_unknown();
    NormPoly np(e.field);
    std::vector<Int> lo, hi;
    Int total = 1;
    for (const auto& [a, b] : e.box.iv) {
        Int l, h;
        mpz_cdiv_q(l.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
        mpz_fdiv_q(h.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
        lo.push_back(l);
        hi.push_back(h);
        total *= h >= l ? Int(h - l + 1) : Int(0);
    }
    if (total > Int(static_cast<unsigned long>(e.budget))) throw Error(Errc::BudgetExceeded, "box has more points than the budget");
    std::ostringstream csv;
    for (size_t i = 0; i < lo.size(); ++i) csv << 'x' << i + 1 << ',';
    csv << "norm,prime_abs\n";
    u64 points = 0, primes = 0, abs_primes = 0, negative = 0;
    bool probabilistic = false;
    if (total > 0) {
        IntVec x = lo;
        while (true) {
            Int v = np.eval(x);
            Int a = abs(v);
            auto pr = is_prime(a);
            probabilistic |= pr.probabilistic;
            ++points;
            abs_primes += pr.prime;
            primes += pr.prime && v > 0;
            negative += v < 0;
            for (const auto& xi : x) csv << xi.get_str() << ',';
            csv << v.get_str() << ',' << (pr.prime ? 1 : 0) << '\n';
            size_t d = 0;
            while (d < x.size() && ++x[d] > hi[d]) x[d] = lo[d], ++d;
            if (d == x.size()) break;
        }
    }
    json j{{"points", points},
           {"positive_primes", primes},
           {"abs_primes", abs_primes},
           {"negative_values", negative},
           {"probabilistic_primality", probabilistic}};
    return {stamp(j, c), csv.str(), std::to_string(points) + " points, " + std::to_string(primes) + " prime values"};
}

Output cmd_sseries(Config& c, const Flags& fl)
{
    FieldSpec f = read_field(c);
    u64 P = c.overridable<u64>("P_cut", 10000, fl.pcut);
    bool tilde = c.get<bool>("tilde", false);
    SeriesOptions opt;
    opt.keep_rows = true;
    opt.good_only = c.get<bool>("good_only", false);
    c.reject_unknown();
    SeriesEstimate s = tilde ? singular_series_tilde(f, P, opt) : singular_series(f, P, opt);
    return {stamp(s.summary(), c), s.csv(), "S = " + fmt(s.value)};
}

IntVec random_vec(std::mt19937_64& rng, int n, long bound)
{
    std::uniform_int_distribution<long> u(-bound, bound);
    IntVec v(n);
    do
        for (auto& x : v) x = u(rng);
    while (is_zero(v));
    return v;
}

std::string vec_str(const IntVec& v)
{
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].get_str();
    return s;
}

struct LatticeCheck {
    u64 checked = 0, mismatches = 0, degenerate = 0;
};

void check_lattices(const FieldSpec& f, u64 samples, long bound, bool pairs, u64 seed, std::ostream* csv, LatticeCheck& out)
{
    std::mt19937_64 rng(seed);
    for (u64 i = 0; i < samples; ++i) {
        IntVec v = random_vec(rng, f.n, bound);
        Rational formula = det_squared_formula(wedge(v, f));
        IntLattice L = lambda_v(v, f);
        Rational gd(gram_det(L));
        bool ok = formula == gd;
        bool oracle_ok = same_lattice(L, kernel_oracle(constraint_rows(v, f)));
        ++out.checked;
        out.mismatches += !(ok && oracle_ok);
        if (csv)
            *csv << i << ",single," << vec_str(v) << ",," << formula.get_str() << ',' << gd.get_str() << ',' << (ok && oracle_ok) << '\n';
        if (!pairs) continue;
        IntVec w = random_vec(rng, f.n, bound);
        auto r = try_lambda_pair(v, w, f);
        if (std::holds_alternative<DegeneratePair>(r)) {
            ++out.degenerate;
            if (csv) *csv << i << ",pair," << vec_str(v) << ',' << vec_str(w) << ",,,degenerate\n";
            continue;
        }
        const IntLattice& P = std::get<IntLattice>(r);
        Rational pf = det_squared_formula(wedge_pair(v, w, f));
        Rational pg(gram_det(P));
        bool pok = pf == pg;
        ++out.checked;
        out.mismatches += !pok;
        if (csv) *csv << i << ",pair," << vec_str(v) << ',' << vec_str(w) << ',' << pf.get_str() << ',' << pg.get_str() << ',' << pok << '\n';
    }
}

int lattice_selftest(std::ostream& out)
{
    const std::vector<std::pair<std::vector<long>, int>> fields{
        {{-2, 0, 0, 0, 1}, 1},       {{-3, 0, 0, 0, 0, 1}, 2},    {{1, 1, 0, 0, 0, 0, 1}, 1},
        {{-2, 0, 0, 0, 0, 0, 0, 1}, 2}, {{1, 0, 1, 0, 0, 0, 0, 1}, 1}, {{-5, 0, 0, 0, 0, 0, 0, 0, 1}, 2},
    };
    u64 bad = 0;
    for (size_t i = 0; i < fields.size(); ++i) {
        FieldSpec f = make_context(fields[i].first, fields[i].second);
        LatticeCheck lc;
        check_lattices(f, 40, 6, true, 1000 + i, nullptr, lc);
        out << "n=" << f.n << " k=" << f.k << " checked=" << lc.checked << " mismatches=" << lc.mismatches << " degenerate=" << lc.degenerate
            << '\n';
        bad += lc.mismatches;
    }
    out << (bad ? "selftest FAILED\n" : "selftest passed\n");
    return bad ? 1 : 0;
}

Output cmd_lattice(Config& c, const Flags& fl)
{
    FieldSpec f = read_field(c);
    u64 samples = c.get<u64>("samples", 20);
    long bound = c.get<long>("coord_bound", 10);
    bool pairs = c.get<bool>("pairs", true);
    u64 seed = c.overridable<u64>("seed", 1, fl.seed);
    c.reject_unknown();
    if (bound < 1) throw Error(Errc::InvalidArgument, "coord_bound must be positive");
    std::ostringstream csv;
    csv << "sample,kind,v1,v2,det2_formula,gram_det,match\n";
    LatticeCheck lc;
    check_lattices(f, samples, bound, pairs, seed, &csv, lc);
    json j{{"checked", lc.checked}, {"mismatches", lc.mismatches}, {"degenerate_pairs", lc.degenerate}};
    return {stamp(j, c), csv.str(), std::to_string(lc.checked) + " checked, " + std::to_string(lc.mismatches) + " mismatches"};
}

Output cmd_census(Config& c, const Flags& fl)
{
    FieldSpec f = read_field(c);
    std::string mode = c.get<std::string>("mode", "fp");
    CensusReport rep;
    if (mode == "fp") {
        auto primes = c.get<std::vector<u64>>("primes", {3, 5, 7});
        u64 budget = c.overridable<u64>("budget", 100000000, fl.budget);
        c.reject_unknown();
        const int e = f.pure_theta ? f.k - 1 : 2 * f.k - 2;
        rep.param_name = "p";
        for (u64 p : primes) {
            if (!is_prime_u64(p)) throw Error(Errc::CompositeP, std::to_string(p) + " is not prime");
            CensusRow r;
            r.param = static_cast<double>(p);
            r.count = fp_wedge_census(p, f, budget);
            r.reference = std::pow(static_cast<double>(p), e);
            r.ratio = r.count / r.reference;
            rep.max_ratio = std::max(rep.max_ratio, r.ratio);
            rep.rows.push_back(r);
        }
    } else if (mode == "skew") {
        double A = c.get<double>("A", 10);
        long B = c.get<long>("B", 4);
        u64 samples = c.get<u64>("samples", 2000);
        auto kappas = c.get<std::vector<double>>("kappas", {0.01, 0.1, 1.0});
        u64 seed = c.overridable<u64>("seed", 1, fl.seed);
        unsigned threads = c.overridable<unsigned>("threads", 1, fl.threads);
        c.reject_unknown();
        rep = skew_census(f, A, B, samples, kappas, seed, threads);
    } else {
        throw Error(Errc::InvalidArgument, "census mode must be fp or skew");
    }
    return {stamp(rep.summary(), c), rep.csv(), "max ratio " + fmt(rep.max_ratio)};
}

Output cmd_typei(Config& c, const Flags& fl)
{
    u64 D_lo = c.get<u64>("D_lo", 16), D_hi = c.get<u64>("D_hi", 128);
    ExperimentConfig e = read_experiment(c, fl);
    c.reject_unknown();
    TypeIReport r = typeI_discrepancy(e, D_lo, D_hi);
    return {stamp(r.json(), c), r.csv(), "worst block / fit = " + fmt(r.worst_over_fit)};
}

Output cmd_theorem(Config& c, const Flags& fl)
{
    ExperimentConfig e = read_experiment(c, fl);
    c.reject_unknown();
    TheoremReport r = theorem_check(e);
    return {stamp(r.json(), c), r.csv(), "observed " + std::to_string(r.observed.positive_primes) + ", predicted " + fmt(r.predicted.value)};
}

PolytopeSpec read_polytope(Config& c)
{
    PolytopeSpec s;
    const json& iv = c.raw("intervals");
    if (!iv.is_array() || iv.empty()) throw Error(Errc::InvalidArgument, "intervals must be a non-empty list of [lo, hi]");
    for (const auto& p : iv) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw Error(Errc::InvalidArgument, "intervals must be [lo, hi] pairs of numbers");
        s.intervals.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    if (c.has("split")) {
        const json& sp = c.raw("split");
        if (!sp.is_object() || !sp.contains("index") || !sp.contains("lo") || !sp.contains("hi") || sp.size() != 3)
            throw Error(Errc::InvalidArgument, "split needs exactly index, lo, hi");
        s.split = PolytopeSpec::Split{sp["index"].get<size_t>(), sp["lo"].get<double>(), sp["hi"].get<double>()};
    }
    return s;
}

Output cmd_integral(Config& c, const Flags& fl)
{
    PolytopeSpec s = read_polytope(c);
    auto targets = c.get<std::vector<double>>("targets", {1.0});
    std::optional<double> X;
    double eta = 0.5;
    std::optional<FieldSpec> field;
    u64 ideal_budget = 0;
    if (c.has("X")) {
        X = c.get<double>("X", 0);
        eta = c.get<double>("eta", eta);
        ideal_budget = c.overridable<u64>("budget", 20000000, fl.budget);
        if (c.has("field")) field = read_field(c);
    }
    c.reject_unknown();
    std::ostringstream csv;
    csv << "target,value,error,empty\n";
    json slices = json::array();
    for (double t : targets) {
        auto r = polytope_integral(s, t);
        csv << fmt(t) << ',' << fmt(r.value) << ',' << fmt(r.error) << ',' << r.empty << '\n';
        slices.push_back({{"target", t}, {"value", r.value}, {"error", r.error}, {"empty", r.empty}});
    }
    json j{{"slices", slices}};
    std::string line = std::to_string(targets.size()) + " slices";
    if (X) {
        auto t = typeII_density_check(s, *X, eta, field ? &*field : nullptr, ideal_budget);
        j["density"] = t.json();
        line += ", density ratio " + (t.ratio ? fmt(*t.ratio) : std::string("n/a"));
    }
    return {stamp(j, c), csv.str(), line};
}

Output cmd_buchstab(Config& c, const Flags& fl)
{
    std::vector<Int> A;
    if (c.has("values")) {
        for (const auto& v : c.raw("values")) A.push_back(read_rational(v).get_num());
    } else {
        ExperimentConfig e = read_experiment(c, fl);
        NormPoly np(e.field);
        Int total = 1;
        std::vector<long> lo, hi;
        for (const auto& [a, b] : e.box.iv) {
            lo.push_back(static_cast<long>(std::ceil(a.get_d())));
            hi.push_back(static_cast<long>(std::floor(b.get_d())));
            total *= std::max(0L, hi.back() - lo.back() + 1);
        }
        if (total > Int(static_cast<unsigned long>(e.budget))) throw Error(Errc::BudgetExceeded, "box has more points than the budget");
        if (total > 0) {
            std::vector<long> x = lo;
            while (true) {
                IntVec xv(x.begin(), x.end());
                Int v = abs(np.eval(xv));
                if (v > 0) A.push_back(v);
                size_t d = 0;
                while (d < x.size() && ++x[d] > hi[d]) x[d] = lo[d], ++d;
                if (d == x.size()) break;
            }
        }
    }
    u64 z1 = c.get<u64>("z1", 5), z2 = c.get<u64>("z2", 30);
    u64 instances = c.get<u64>("instances", 0);
    u64 seed = c.has("values") ? c.overridable<u64>("seed", 1, fl.seed) : c.resolved().value("seed", u64(1));
    c.reject_unknown();
    std::vector<std::pair<u64, u64>> zs{{z1, z2}};
    std::mt19937_64 rng(seed);
    for (u64 i = 0; i < instances; ++i) {
        u64 a = 2 + rng() % 40, b = a + 1 + rng() % 200;
        zs.emplace_back(a, b);
    }
    std::ostringstream csv;
    csv << "z1,z2,lhs,rhs,residual\n";
    u64 nonzero = 0;
    for (auto [a, b] : zs) {
        auto r = buchstab_check(A, a, b);
        nonzero += r.residual != 0;
        csv << a << ',' << b << ',' << r.lhs << ',' << r.rhs << ',' << r.residual << '\n';
    }
    json j{{"set_size", A.size()}, {"instances", zs.size()}, {"nonzero_residuals", nonzero}};
    return {stamp(j, c), csv.str(), std::to_string(nonzero) + " nonzero residuals"};
}

json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::InvalidArgument, "config '" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file(const std::filesystem::path& p, const std::string& s)
{
    std::ofstream o(p, std::ios::binary);
    if (!o) throw Error(Errc::InvalidArgument, "cannot write '" + p.string() + "'");
    o << s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Incomplete norm form experiments"};
    std::string sub, config, outdir = ".";
    Flags fl;
    u64 seed = 0, threads = 0, pcut = 0, budget = 0;
    bool selftest = false;
    app.add_option("subcommand", sub, "norms | sseries | lattice | census | typei | theorem | integral | buchstab")
        ->required()
        ->check(CLI::IsMember(kSubcommands));
    auto* o_config = app.add_option("--config", config, "JSON config file");
    app.add_option("--out", outdir, "output directory");
    auto* o_seed = app.add_option("--seed", seed);
    auto* o_threads = app.add_option("--threads", threads);
    auto* o_pcut = app.add_option("--pcut", pcut, "singular series cutoff");
    auto* o_budget = app.add_option("--budget", budget, "enumeration budget");
    app.add_flag("--selftest", selftest, "run the built-in formula-vs-oracle suite");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (*o_seed) fl.seed = seed;
    if (*o_threads) fl.threads = threads;
    if (*o_pcut) fl.pcut = pcut;
    if (*o_budget) fl.budget = budget;
    const int verbosity = log_level();

    try {
        if (selftest) {
            if (sub != "lattice") throw Error(Errc::InvalidArgument, "--selftest is only available for lattice");
            return lattice_selftest(out);
        }
        if (!*o_config) throw Error(Errc::InvalidArgument, "--config is required");
        Config c(load_config(config));
        if (verbosity >= 1) err << "[normform] " << sub << " with " << config << '\n';
        Output res;
        if (sub == "norms") res = cmd_norms(c, fl);
        else if (sub == "sseries") res = cmd_sseries(c, fl);
        else if (sub == "lattice") res = cmd_lattice(c, fl);
        else if (sub == "census") res = cmd_census(c, fl);
        else if (sub == "typei") res = cmd_typei(c, fl);
        else if (sub == "theorem") res = cmd_theorem(c, fl);
        else if (sub == "integral") res = cmd_integral(c, fl);
        else res = cmd_buchstab(c, fl);
        if (verbosity >= 2) err << "[normform] resolved config " << c.resolved().dump() << '\n';
        std::filesystem::create_directories(outdir);
        const std::filesystem::path dir(outdir);
        write_file(dir / (sub + ".json"), res.report.dump(2) + "\n");
        write_file(dir / (sub + ".csv"), res.csv);
        out << sub << ": " << res.line << '\n';
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_budget(e.code()) ? 3 : 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, char** argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace normform::cli
