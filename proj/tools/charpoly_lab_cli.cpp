/*
 * Copyright 2026 The charpoly-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// charpoly-lab: command-line front end for the library.

#include <charpoly_lab/certify.hpp>
#include <charpoly_lab/exact.hpp>
#include <charpoly_lab/measures.hpp>
#include <charpoly_lab/montecarlo.hpp>
#include <charpoly_lab/primes.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace cpl;
using Json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string subcommand;
    std::string q = "2";
    std::string measure = "uniform";
    unsigned n = 0;
    u64 trials = 10000;
    std::optional<u64> seed;
    unsigned threads = 0;
    bool json = true;
    bool csv = false;
    std::string out;
    bool no_timestamp = false;

    // subcommand specific
    std::string ring = "z", matrix, poly, perp, lambdas = "1", source = "perm", source_b = "poisson", primes = "2,3,5,7";
    unsigned k = 0, r = 1, m = 1, block = 0;
    double x = 12.0;
    double spectrum_t = -1.0;
    u64 samples = 20000, budget = 100, an_budget = 10000;
    bool exact = false, an = false;
    std::string per_prime;
};

// Invariant violations surface as exit code 2.
struct InvariantFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string read_poly_arg(const std::string& arg) {
    std::ifstream in(arg);
    if (!in) return arg;
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

std::vector<u64> parse_u64_list(const std::string& text) {
    std::vector<u64> out;
    for (const auto& tok : detail::split(text, ',')) out.push_back(detail::parse_u64(detail::strip(tok), "list entry"));
    return out;
}

Json partition_json(const Partition& p) { return Json(p); }

Json estimate_json(const Estimate& e) {
    Json j;
    j["value"] = e.value;
    j["stderr"] = e.stderr_;
    j["trials"] = e.trials;
    j["seed"] = e.seed;
    j["successes"] = e.successes;
    j["target"] = e.target ? Json(*e.target) : Json(nullptr);
    if (!e.params.empty()) j["params"] = e.params;
    if (!e.warnings.empty()) j["warnings"] = e.warnings;
    return j;
}

void merge(Json& into, const Json& from) {
    for (const auto& [key, val] : from.items()) into[key] = val;
}

std::string named_type_string(const NamedType& t) {
    std::string s;
    for (const auto& [coeffs, mult] : t) {
        if (!s.empty()) s += '*';
        s += '(';
        for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? " " : "") + std::to_string(coeffs[i]);
        s += ')';
        if (mult > 1) s += '^' + std::to_string(mult);
    }
    return s;
}

Json certificate_json(const Certificate& c) {
    Json j;
    j["kind"] = kind_name(c.kind);
    j["certified"] = static_cast<bool>(c);
    j["poly"] = c.poly;
    j["n"] = c.n;
    Json ws = Json::array();
    for (const auto& w : c.witnesses) {
        Json wj;
        wj["p"] = w.p;
        wj["degrees"] = partition_json(w.degrees);
        wj["squarefree"] = w.squarefree;
        if (w.cycle) wj["cycle"] = w.cycle;
        ws.push_back(wj);
    }
    j["witnesses"] = ws;
    if (!c) {
        j["residual"] = c.residual;
        j["reason"] = c.reason;
    }
    j["justification"] = c.justification;
    return j;
}

std::string csv_cell(const Json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// CSV rendering: a "table" array of flat objects becomes a table; otherwise
// the scalar fields are listed as key,value rows.
std::string to_csv(const Json& doc) {
    std::ostringstream os;
    if (doc.contains("table") && doc["table"].is_array() && !doc["table"].empty()) {
        const Json& rows = doc["table"];
        bool first = true;
        for (const auto& [key, v] : rows.front().items()) {
            os << (first ? "" : ",") << csv_cell(key);
            first = false;
        }
        os << '\n';
        for (const auto& row : rows) {
            first = true;
            for (const auto& [key, v] : row.items()) {
                os << (first ? "" : ",") << csv_cell(v);
                first = false;
            }
            os << '\n';
        }
        return os.str();
    }
    os << "key,value\n";
    for (const auto& [key, v] : doc.items())
        if (!v.is_object() && !v.is_array()) os << csv_cell(key) << ',' << csv_cell(v) << '\n';
    for (const auto& [key, v] : doc.items())
        if (v.is_object() && key != "config")
            for (const auto& [k2, v2] : v.items())
                if (!v2.is_object() && !v2.is_array()) os << csv_cell(key + "." + k2) << ',' << csv_cell(v2) << '\n';
    return os.str();
}

MeasureMatrix iid_matrix(const RunConfig& c, const Field& f) {
    if (c.n == 0) throw std::invalid_argument("--n must be positive");
    return MeasureMatrix::iid(c.n, parse_measure(c.measure, f));
}

void stamp_params(Json& doc, const RunConfig& c, const Field& f) {
    doc["params"] = {{"n", c.n}, {"q", f.order()}, {"field", f.label()}, {"measure", c.measure}};
}

// ---------------------------------------------------------------------------
// field-selftest

Json field_selftest(const Field& f, u64 seed) {
    const u64 q = f.order(), p = f.characteristic();
    std::mt19937_64 rng(seed);
    const bool exhaustive = q <= 64;
    const u64 samples = exhaustive ? q * q * q : 20000;
    auto pick = [&] { return FieldElem{uniform_below(rng, q)}; };
    u64 checks = 0, failures = 0;
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const char* what) {
        ++checks;
        if (!ok) {
            ++failures;
            if (failed.size() < 10) failed.emplace_back(what);
        }
    };
    for (u64 s = 0; s < samples; ++s) {
        FieldElem a, b, c;
        if (exhaustive) {
            a = {s % q};
            b = {s / q % q};
            c = {s / q / q};
        } else {
            a = pick(), b = pick(), c = pick();
        }
        expect(f.add(a, b) == f.add(b, a), "addition commutes");
        expect(f.mul(a, b) == f.mul(b, a), "multiplication commutes");
        expect(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c), "multiplication associates");
        expect(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), "distributive law");
        expect(f.sub(f.add(a, b), b) == a, "subtraction inverts addition");
        expect(f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p)), "Frobenius is additive");
        expect((f.trace(a) + f.trace(b)) % p == f.trace(f.add(a, b)), "trace is additive");
    }
    const u64 singles = std::min<u64>(q, 1u << 16);
    std::complex<double> char_sum = 0;
    for (u64 s = 0; s < singles; ++s) {
        const FieldElem a = q <= (1u << 16) ? FieldElem{s} : pick();
        expect(f.pow(a, q) == a, "a^q = a");
        if (a.code) expect(f.mul(a, f.inv(a)) == f.one(), "inverse");
        char_sum += f.character(a);
    }
    if (q <= (1u << 16)) expect(std::abs(char_sum) < 1e-6 * static_cast<double>(q), "character sum vanishes");
    if (!f.is_prime_field()) {
        std::vector<u64> mod(f.modulus().begin(), f.modulus().end());
        expect(detail::fp_poly::is_irreducible(mod, f.prime_arith()), "modulus irreducible");
    }
    Json j;
    j["field"] = f.label();
    j["q"] = q;
    j["p"] = p;
    j["k"] = f.degree();
    j["modulus"] = f.modulus();
    j["exhaustive"] = exhaustive;
    j["checks"] = checks;
    j["failures"] = failures;
    j["failed"] = failed;
    j["pass"] = failures == 0;
    return j;
}

// ---------------------------------------------------------------------------
// selftest: the exact-oracle suite

Json run_selftest(u64 seed, unsigned threads) {
    Json checks = Json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool ok, Json detail = {}) {
        Json c;
        c["check"] = name;
        c["pass"] = ok;
        if (!detail.is_null()) c["detail"] = detail;
        checks.push_back(c);
        all = all && ok;
    };
    for (u64 q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u, 49u, 64u, 1024u}) {
        const Json r = field_selftest(parse_field_spec(std::to_string(q)), seed);
        record("field q=" + std::to_string(q), r["pass"].get<bool>(), r["checks"]);
    }
    for (auto [q, n] : std::vector<std::pair<u64, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {4, 2}, {2, 4}}) {
        const auto rows = reiner_verify(parse_field_spec(std::to_string(q)), n, threads);
        const bool ok = std::all_of(rows.begin(), rows.end(), [](const ReinerRow& r) { return r.match; });
        record("reiner q=" + std::to_string(q) + " n=" + std::to_string(n), ok, rows.size());
    }
    {
        const TypeTally t = enumerate_types(Field(2), 3, threads);
        const auto report = cr_ratio_test(tally_law(t), 2, 3);
        record("conditioning ratio q=2 n=3", report.relative_spread < 1e-8, report.relative_spread);
        record("matrix law equals closed form q=2 n=3", tally_law(t) == partition_law(2, 3));
    }
    {
        double worst = 0;
        for (u64 q : {2u, 3u, 5u})
            for (unsigned d = 1; d <= 8; ++d) {
                const ZdLaw z = zd_law(q, d);
                worst = std::max(worst, std::abs(z.zeta - z.zeta_euler));
            }
        record("zeta series vs Euler product", worst < 1e-10, worst);
    }
    {
        const Field f2(2);
        const mpq_class p = exact_nonsingular(MeasureMatrix::iid(2, MeasureFq::uniform(f2)));
        record("P(nonsingular) q=2 n=2 is 3/8", p == mpq_class(3, 8), p.get_str());
    }
    {
        const Field f5(5);
        const auto mu = reduce_mod(MeasureZ::pm1(), f5);
        record("balancedness of pm1 mod 5 is 1/2", balancedness(mu) == mpq_class(1, 2), balancedness(mu).get_str());
    }
    {
        const PolyZ phi({-1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 1});
        const auto irr = certify_irreducible(phi);
        const auto an = irr ? certify_at_least_An(phi, irr) : Certificate{};
        record("t^10 - t - 1 irreducible and A_n", irr && an && detail::verify_An_witness(phi, an.witnesses.at(0)));
        const auto red = certify_irreducible(PolyZ({1, 0, 1}) * PolyZ({1, 1, 1}));
        record("reducible product refused", !red);
    }
    {
        const PolyZ phi({1, 1});
        record("Hadamard bound covers a discriminant", abs(discriminant(PolyZ({-1, 0, 1}))) <= hadamard_disc_bound(2, 1) && phi.degree() == 1);
    }
    Json j;
    j["checks"] = checks;
    j["pass"] = all;
    return j;
}

// ---------------------------------------------------------------------------

Json dispatch(const RunConfig& c, u64 seed, unsigned threads) {
    Json doc;
    const std::string& cmd = c.subcommand;
    if (cmd == "field-selftest") {
        const Field f = parse_field_spec(c.q);
        doc = field_selftest(f, seed);
        if (!doc["pass"].get<bool>()) throw InvariantFailure("field self-test failed for " + f.label());
    } else if (cmd == "charpoly") {
        if (c.matrix.empty()) throw std::invalid_argument("--matrix is required");
        if (c.ring == "z") {
            doc["ring"] = "z";
            doc["charpoly"] = charpoly(parse_matrix_z(c.matrix)).to_string();
        } else {
            const Field f = parse_field_spec(c.ring);
            doc["ring"] = f.label();
            doc["charpoly"] = charpoly(parse_matrix(f, c.matrix)).to_string();
        }
    } else if (cmd == "factor" || cmd == "roots") {
        const Field f = parse_field_spec(c.q);
        const PolyFq phi = parse_poly(f, read_poly_arg(c.poly));
        if (phi.degree() < 1) throw std::invalid_argument("need a polynomial of degree >= 1");
        const Factorization fac = factor(phi, seed);
        if (!(fac.expand(f) == phi)) throw InvariantFailure("factorization does not multiply back");
        doc["field"] = f.label();
        doc["poly"] = phi.to_string();
        if (cmd == "factor") {
            doc["unit"] = fac.unit.code;
            Json table = Json::array();
            for (const auto& [g, m] : fac.factors) table.push_back({{"factor", g.to_string()}, {"degree", g.degree()}, {"multiplicity", m}});
            doc["degrees"] = fac.degrees();
            doc["squarefree"] = fac.squarefree();
            doc["table"] = table;
        } else {
            std::vector<u64> roots;
            Json table = Json::array();
            for (const auto& [g, m] : fac.factors)
                if (g.degree() == 1) roots.push_back(f.neg(g.coeffs()[0]).code);
            std::sort(roots.begin(), roots.end());
            for (u64 r : roots) table.push_back({{"root", r}});
            doc["count"] = roots.size();
            doc["roots"] = roots;
            doc["table"] = table;
        }
    } else if (cmd == "measure-info") {
        const Field f = parse_field_spec(c.q);
        const MeasureFq mu = parse_measure(c.measure, f);
        const mpq_class alpha = balancedness(mu);
        const double t = c.spectrum_t >= 0 ? c.spectrum_t : 1.0 - alpha.get_d() / 2;
        doc["field"] = f.label();
        doc["measure"] = c.measure;
        Json table = Json::array();
        for (const auto& [x, w] : mu.atoms()) table.push_back({{"element", x.code}, {"weight", w.get_str()}});
        doc["uniform"] = mu.is_uniform();
        doc["alpha"] = alpha.get_str();
        doc["alpha_value"] = alpha.get_d();
        std::vector<u64> spec;
        for (auto u : large_spectrum(mu, t)) spec.push_back(u.code);
        doc["spectrum_threshold"] = t;
        doc["large_spectrum"] = spec;
        if (f.order() <= 64) {
            std::vector<double> mags;
            for (u64 u = 0; u < f.order(); ++u) mags.push_back(std::abs(mu.fourier({u})));
            doc["fourier_abs"] = mags;
        }
        doc["table"] = table;
    } else if (cmd == "rho") {
        const Field f = parse_field_spec(c.q);
        if (c.perp.empty()) throw std::invalid_argument("--perp is required (rows of B with V = ker B)");
        const Subspace v = Subspace::from_perp(parse_matrix(f, c.perp));
        const std::size_t n = c.n ? c.n : v.ambient_dim();
        if (n != v.ambient_dim()) throw std::invalid_argument("--n disagrees with the width of --perp");
        const RhoResult r = rho(v, MeasureMatrix::iid(n, parse_measure(c.measure, f)));
        doc["field"] = f.label();
        doc["codim"] = v.codim();
        doc["rho"] = r.rho;
        doc["per_row"] = r.per_row;
        doc["cross_checked"] = r.cross_checked;
        doc["path_gap"] = r.path_gap;
        if (r.cross_checked && r.path_gap > 1e-9) throw InvariantFailure("coset-law paths disagree");
    } else if (cmd == "singularity") {
        const Field f = parse_field_spec(c.q);
        const MeasureMatrix mm = iid_matrix(c, f);
        if (c.exact) {
            const mpq_class p = exact_nonsingular(mm);
            doc["exact"] = p.get_str();
            doc["value"] = p.get_d();
            doc["stderr"] = 0.0;
            doc["trials"] = 0;
            doc["seed"] = seed;
            doc["target"] = euler_tail_product(static_cast<double>(f.order()));
        } else {
            merge(doc, estimate_json(estimate_nonsingular(mm, c.trials, seed, threads)));
        }
        stamp_params(doc, c, f);
    } else if (cmd == "rank-dist") {
        const Field f = parse_field_spec(c.q);
        const MeasureMatrix mm = iid_matrix(c, f);
        const std::size_t k = c.k ? c.k : c.n;
        merge(doc, estimate_json(estimate_rank_full(mm, k, c.trials, seed, threads)));
        stamp_params(doc, c, f);
        doc["params"]["k"] = k;
    } else if (cmd == "eig-corr") {
        const Field f = parse_field_spec(c.q);
        const MeasureMatrix mm = iid_matrix(c, f);
        std::vector<FieldElem> lambdas;
        for (const auto& tok : detail::split(c.lambdas, ',')) lambdas.push_back(parse_element(f, tok));
        const JointEigenResult r = estimate_joint_eigen(mm, lambdas, c.trials, seed, threads);
        merge(doc, estimate_json(r.joint));
        doc["target"] = r.reference;
        Json marg = Json::array();
        for (const auto& e : r.marginal) marg.push_back(estimate_json(e));
        doc["marginals"] = marg;
        doc["product"] = r.product;
        doc["product_stderr"] = r.product_stderr;
        doc["reference"] = r.reference;
        stamp_params(doc, c, f);
        std::vector<u64> codes;
        for (auto l : lambdas) codes.push_back(l.code);
        doc["params"]["lambdas"] = codes;
    } else if (cmd == "factor-stats") {
        const Field f = parse_field_spec(c.q);
        if (c.n == 0) throw std::invalid_argument("--n must be positive");
        const PartitionSource src = parse_source(c.source);
        const PartitionSample s = sample_partitions(src, c.n, f, c.trials, seed, threads);
        std::map<Partition, u64> hist;
        u64 irreducible = 0, parts = 0;
        for (const auto& p : s.partitions) {
            ++hist[p];
            irreducible += p.size() == 1;
            parts += p.size();
        }
        merge(doc, estimate_json(indicator_estimate(irreducible, c.trials, seed)));
        if (src == PartitionSource::perm || src == PartitionSource::poisson)
            doc["target"] = 1.0 / c.n;
        else if (src == PartitionSource::unipoly)
            doc["target"] = mpq_class(count_irreducibles(c.n, f), mpz_pow(f.order(), c.n)).get_d();
        doc["mean_parts"] = static_cast<double>(parts) / static_cast<double>(c.trials);
        std::vector<std::pair<Partition, u64>> top(hist.begin(), hist.end());
        std::stable_sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        if (top.size() > 25) top.resize(25);
        Json table = Json::array();
        for (const auto& [p, cnt] : top)
            table.push_back({{"partition", partition_to_string(p)}, {"count", cnt}, {"frequency", static_cast<double>(cnt) / static_cast<double>(c.trials)}});
        doc["distinct_partitions"] = hist.size();
        doc["table"] = table;
        doc["params"] = {{"n", c.n}, {"q", f.order()}, {"source", source_name(src)}};
    } else if (cmd == "tv-compare") {
        const Field f = parse_field_spec(c.q);
        if (c.n == 0) throw std::invalid_argument("--n must be positive");
        const PartitionSource a = parse_source(c.source), b = parse_source(c.source_b);
        const TvResult r = tv_compare(a, b, c.n, f, c.r, c.samples, seed, threads);
        doc["value"] = r.tv;
        doc["stderr"] = r.bootstrap_stderr;
        doc["trials"] = r.samples;
        doc["seed"] = seed;
        doc["target"] = nullptr;
        doc["alphabet"] = r.alphabet;
        doc["params"] = {{"n", c.n}, {"q", f.order()}, {"a", source_name(a)}, {"b", source_name(b)}, {"r", c.r}};
    } else if (cmd == "reiner-verify") {
        const Field f = parse_field_spec(c.q);
        if (c.n == 0) throw std::invalid_argument("--n must be positive");
        const auto rows = reiner_verify(f, c.n, threads);
        Json table = Json::array();
        bool all = true;
        for (const auto& r : rows) {
            table.push_back({{"type", named_type_string(r.type)},
                             {"shape", shape_to_string(r.shape)},
                             {"formula", r.formula.get_str()},
                             {"enumerated", r.enumerated.get_str()},
                             {"match", r.match}});
            all = all && r.match;
        }
        doc["field"] = f.label();
        doc["n"] = c.n;
        doc["types"] = rows.size();
        doc["all_match"] = all;
        doc["table"] = table;
        if (!all) throw InvariantFailure("Reiner count disagrees with enumeration");
    } else if (cmd == "moment") {
        const PolyZ phi = parse_poly_z(read_poly_arg(c.poly));
        const MomentReport r = weighted_moment(phi, c.m, c.x, !c.per_prime.empty(), threads);
        doc["poly"] = phi.to_string();
        doc["m"] = r.m;
        doc["x"] = r.x;
        doc["value"] = r.weighted_sum;
        doc["bell_target"] = r.bell_target.get_str();
        doc["primes"] = r.primes;
        doc["discriminant_primes"] = r.discriminant_primes;
        doc["max_roots"] = r.max_roots;
        if (!c.per_prime.empty()) {
            std::ofstream os(c.per_prime);
            if (!os) throw std::invalid_argument("cannot write " + c.per_prime);
            os << "p,R,weight,contribution\n" << std::setprecision(17);
            for (const auto& pc : r.per_prime) os << pc.p << ',' << pc.roots << ',' << pc.weight << ',' << pc.contribution << '\n';
            doc["per_prime_csv"] = c.per_prime;
        }
    } else if (cmd == "certify") {
        const PolyZ phi = parse_poly_z(read_poly_arg(c.poly));
        const Certificate irr = certify_irreducible(phi, c.budget);
        doc["irreducible"] = certificate_json(irr);
        if (c.an) {
            if (irr) {
                const Certificate an = certify_at_least_An(phi, irr, c.an_budget);
                if (an && !detail::verify_An_witness(phi, an.witnesses.at(0))) throw InvariantFailure("A_n witness failed re-verification");
                doc["at_least_An"] = certificate_json(an);
            } else {
                Certificate none;
                none.poly = phi.to_string();
                none.n = static_cast<unsigned>(phi.degree());
                none.reason = "no irreducibility certificate";
                doc["at_least_An"] = certificate_json(none);
            }
        }
    } else if (cmd == "four-prime") {
        if (c.n == 0) throw std::invalid_argument("--n must be positive");
        FourPrimeOptions opt;
        opt.primes = parse_u64_list(c.primes);
        opt.block = c.block;
        opt.threads = threads;
        const MeasureZ mu = parse_measure_z(c.measure);
        const FourPrimeReport r = four_prime_experiment(mu, c.n, c.trials, seed, opt);
        merge(doc, estimate_json(r.certified));
        doc["threshold"] = r.threshold;
        doc["large_common"] = estimate_json(r.large_common);
        doc["no_small_common"] = estimate_json(r.no_small_common);
        doc["thresholded"] = estimate_json(r.thresholded);
        doc["middle_common"] = estimate_json(r.middle_common);
        doc["params"] = {{"n", c.n}, {"measure", c.measure}, {"primes", opt.primes}, {"block", c.block}};
    } else if (cmd == "selftest") {
        doc = run_selftest(seed, threads);
        if (!doc["pass"].get<bool>()) {
            std::cout << doc.dump(2) << '\n';
            throw InvariantFailure("selftest failed");
        }
    } else {
        throw std::invalid_argument("unknown subcommand '" + cmd + "'");
    }
    return doc;
}

Json config_json(const RunConfig& c, u64 seed, bool generated, unsigned threads) {
    Json j;
    j["subcommand"] = c.subcommand;
    j["q"] = c.q;
    j["measure"] = c.measure;
    j["n"] = c.n;
    j["trials"] = c.trials;
    j["seed"] = seed;
    j["seed_generated"] = generated;
    j["threads"] = threads;
    j["format"] = c.csv ? "csv" : "json";
    const auto& s = c.subcommand;
    if (s == "charpoly") j["ring"] = c.ring, j["matrix"] = c.matrix;
    if (s == "factor" || s == "roots" || s == "moment" || s == "certify") j["poly"] = c.poly;
    if (s == "rho") j["perp"] = c.perp;
    if (s == "rank-dist") j["k"] = c.k;
    if (s == "eig-corr") j["lambdas"] = c.lambdas;
    if (s == "factor-stats" || s == "tv-compare") j["source"] = c.source;
    if (s == "tv-compare") j["source_b"] = c.source_b, j["r"] = c.r, j["samples"] = c.samples;
    if (s == "moment") j["m"] = c.m, j["x"] = c.x;
    if (s == "certify") j["budget"] = c.budget, j["an"] = c.an, j["an_budget"] = c.an_budget;
    if (s == "four-prime") j["primes"] = c.primes, j["block"] = c.block;
    if (s == "singularity") j["exact"] = c.exact;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"charpoly-lab: characteristic polynomials of random matrices, exact and Monte Carlo"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "master RNG seed (random if omitted; always echoed)");
        sub->add_option("--threads", c.threads, "worker threads (default $CHARPOLY_LAB_THREADS or all cores); results do not depend on it");
        auto* js = sub->add_flag("--json", c.json, "JSON output (default)");
        sub->add_flag("--csv", c.csv, "CSV output")->excludes(js);
        sub->add_option("--out", c.out, "write output here instead of stdout");
        sub->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp so reruns are byte-identical");
    };
    auto add = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&c, name] { c.subcommand = name; });
        common(s);
        return s;
    };
    auto field_opt = [&](CLI::App* s) { s->add_option("--q", c.q, "field: q=p^k, p^k or a prime power N")->capture_default_str(); };
    auto measure_opt = [&](CLI::App* s, const char* def) {
        c.measure = def;
        s->add_option("--measure", c.measure, "entry measure: pm1 | uniform | range:a..b | table:v:w,...")->capture_default_str();
    };

    auto* fs = add("field-selftest", "Field axioms, Frobenius, trace and character checks for F_q in the polynomial basis over the least irreducible modulus");
    field_opt(fs);

    auto* cp = add("charpoly", "Characteristic polynomial det(tI - M), coefficients low to high, over Z (division-free) or F_q (Hessenberg)");
    cp->add_option("--ring", c.ring, "z or a field spec")->capture_default_str();
    cp->add_option("--matrix", c.matrix, "rows separated by ';', entries by ','")->required();

    auto* fa = add("factor", "Complete factorization over F_q: squarefree, distinct-degree and equal-degree splitting");
    field_opt(fa);
    fa->add_option("--poly", c.poly, "c0,c1,...,cd low to high, or a file")->required();

    auto* ro = add("roots", "Distinct roots of a polynomial in F_q (the count R_phi(q))");
    field_opt(ro);
    ro->add_option("--poly", c.poly, "c0,c1,...,cd low to high, or a file")->required();

    auto* mi = add("measure-info", "Atoms, balancedness alpha (max coset mass of proper additive subgroups), Fourier magnitudes and large spectrum of an entry measure on F_q");
    field_opt(mi);
    measure_opt(mi, "uniform");
    mi->add_option("--spectrum-t", c.spectrum_t, "large-spectrum threshold t (default 1 - alpha/2)");

    auto* rh = add("rho", "Row nonuniformity rho_i(V): worst deviation of a row's coset law mod V = ker B from uniform, by DP and Fourier paths");
    field_opt(rh);
    measure_opt(rh, "uniform");
    rh->add_option("--n", c.n, "ambient dimension (defaults to the width of --perp)");
    rh->add_option("--perp", c.perp, "rows of B, V = {x : Bx = 0}")->required();

    auto* si = add("singularity", "P(M nonsingular) for iid entries; target prod_{i>=1} (1 - q^-i)");
    field_opt(si);
    measure_opt(si, "uniform");
    si->add_option("--n", c.n)->required();
    si->add_option("--trials", c.trials)->capture_default_str();
    si->add_flag("--exact", c.exact, "enumerate all matrices instead of sampling (q^(n^2) <= 2^24)");

    auto* rd = add("rank-dist", "P(top k rows of M have full rank k); target prod_{i>=n-k+1} (1 - q^-i)");
    field_opt(rd);
    measure_opt(rd, "uniform");
    rd->add_option("--n", c.n)->required();
    rd->add_option("--k", c.k, "rows (default n)");
    rd->add_option("--trials", c.trials)->capture_default_str();

    auto* ec = add("eig-corr", "Joint eigenvalue events: P(det(M - lambda_j) = 0 for all j) against (q-1)^-m and the product of the marginals");
    field_opt(ec);
    measure_opt(ec, "uniform");
    ec->add_option("--n", c.n)->required();
    ec->add_option("--lambda", c.lambdas, "distinct eigenvalues, comma separated")->capture_default_str();
    ec->add_option("--trials", c.trials)->capture_default_str();

    auto* fst = add("factor-stats", "Factor-degree partitions from a source (matrix, gl, unipoly, perm, poisson); value is P(partition = (n))");
    field_opt(fst);
    fst->add_option("--n", c.n)->required();
    fst->add_option("--source", c.source, "matrix | gl | unipoly | perm | poisson, or 1..5")->capture_default_str();
    fst->add_option("--trials", c.trials)->capture_default_str();

    auto* tv = add("tv-compare", "Plug-in total variation between two partition laws after keeping only parts >= r, with bootstrap stderr");
    field_opt(tv);
    tv->add_option("--n", c.n)->required();
    tv->add_option("--a", c.source, "first source")->capture_default_str();
    tv->add_option("--b", c.source_b, "second source")->capture_default_str();
    tv->add_option("--r", c.r, "smallest part kept")->capture_default_str();
    tv->add_option("--samples", c.samples, "samples per source")->capture_default_str();

    auto* rv = add("reiner-verify", "Reiner's count of matrices with a given characteristic polynomial against enumeration of M_n(q), for every monic polynomial");
    field_opt(rv);
    rv->add_option("--n", c.n)->required();

    auto* mo = add("moment", "Prime-weighted root moment sum_p R_phi(p)^m w_X(log p) over primes in (e^X/2, e^X], against the Bell number B_m");
    mo->add_option("--poly", c.poly, "monic integer polynomial c0,...,cd or a file")->required();
    mo->add_option("--m", c.m)->capture_default_str();
    mo->add_option("--x", c.x, "window parameter X (<= 16)")->capture_default_str();
    mo->add_option("--per-prime", c.per_prime, "CSV file for p,R,weight,contribution");

    auto* ce = add("certify", "Irreducibility certificate from disjoint degree sets mod small primes; with --an, a Jordan-prime witness for Gal containing A_n");
    ce->add_option("--poly", c.poly, "monic integer polynomial c0,...,cd or a file")->required();
    ce->add_option("--budget", c.budget, "largest prime tried")->capture_default_str();
    ce->add_flag("--an", c.an, "also try to certify Gal >= A_n");
    ce->add_option("--an-budget", c.an_budget, "largest prime tried for the A_n witness")->capture_default_str();

    auto* fp = add("four-prime", "Random integer matrices: rate at which degree sets mod four primes share no proper degree, plus the event splits");
    measure_opt(fp, "range:1..210");
    fp->add_option("--n", c.n)->required();
    fp->add_option("--trials", c.trials)->capture_default_str();
    fp->add_option("--primes", c.primes)->capture_default_str();
    fp->add_option("--block", c.block, "> 0: block-diagonal M with a block of this size");

    add("selftest", "Exact-oracle suite: field axioms, Reiner counts, conditioning ratio, zeta cross-check, certificates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    // Defaults set by measure_opt for the last registered subcommand must not
    // leak into the others.
    if (app.got_subcommand("four-prime")) {
        if (fp->count("--measure") == 0) c.measure = "range:1..210";
    } else {
        bool given = false;
        for (auto* s : app.get_subcommands())
            if (s->get_option_no_throw("--measure") && s->count("--measure")) given = true;
        if (!given) c.measure = "uniform";
    }

    try {
        const unsigned threads = c.threads ? c.threads : cpl::default_threads();
        const bool generated = !c.seed.has_value();
        const u64 seed = generated ? (static_cast<u64>(std::random_device{}()) << 32 | std::random_device{}()) : *c.seed;
        Json doc;
        doc["command"] = c.subcommand;
        doc["config"] = config_json(c, seed, generated, threads);
        if (!c.no_timestamp) doc["timestamp"] = utc_timestamp();
        merge(doc, dispatch(c, seed, threads));
        const std::string text = c.csv ? to_csv(doc) : doc.dump(2) + "\n";
        if (c.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream os(c.out);
            if (!os) throw std::invalid_argument("cannot write " + c.out);
            os << text;
        }
        return 0;
    } catch (const InvariantFailure& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
