// Acceptance run: one PASS/FAIL line per criterion. With arguments, only the
// listed criteria run; `--cli PATH` names the qnehari executable for the
// cross-process determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qnehari/bmo.hpp"
#include "qnehari/hardy.hpp"
#include "qnehari/lab.hpp"
#include "qnehari/measures.hpp"
#include "qnehari/operators.hpp"
#include "qnehari/rng.hpp"
#include "qnehari/series.hpp"

using namespace qnehari;

namespace {

constexpr double kPi = std::numbers::pi;

std::string g_cli;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Quaternion rand_quat(std::mt19937_64& rng, double scale = 1.0) {
    return Quaternion{2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1} *
           scale;
}

TruncatedSeries rand_series(std::mt19937_64& rng, std::size_t deg, double scale = 1.0) {
    std::vector<Quaternion> c(deg + 1);
    for (auto& a : c) a = rand_quat(rng, scale);
    return TruncatedSeries(std::move(c));
}

Quaternion rand_ball(std::mt19937_64& rng, double radius) {
    const Quaternion q = rand_quat(rng);
    return q * (radius * uniform01(rng) / q.norm());
}

std::size_t rand_deg(std::mt19937_64& rng, std::size_t max) { return rng() % (max + 1); }

double coeff_dist(const TruncatedSeries& f, const TruncatedSeries& g) {
    double m = 0.0;
    for (std::size_t n = 0; n < std::max(f.size(), g.size()); ++n) m = std::max(m, (f[n] - g[n]).norm());
    return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome algebra_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    double assoc = 0, conj_err = 0, sym_im = 0, inv_ratio = 0, inv_abs = 0;
    std::size_t inv_fail = 0;
    for (int t = 0; t < 500; ++t) {
        const auto f = rand_series(rng, rand_deg(rng, 32));
        const auto g = rand_series(rng, rand_deg(rng, 32));
        const auto h = rand_series(rng, rand_deg(rng, 32));
        assoc = std::max(assoc, coeff_dist(star_mul(star_mul(f, g), h), star_mul(f, star_mul(g, h))));
        conj_err = std::max(conj_err, coeff_dist(regular_conj(star_mul(f, g)), star_mul(regular_conj(g), regular_conj(f))));
        const auto sym = symmetrize(f);
        for (const auto& c : sym.coeffs()) sym_im = std::max(sym_im, c.imag_norm());

        // |a_0| = 1, |a_n| <= 0.3.
        std::vector<Quaternion> a(rand_deg(rng, 32) + 1);
        const Quaternion a0 = rand_quat(rng);
        a[0] = a0 * (1.0 / a0.norm());
        for (std::size_t n = 1; n < a.size(); ++n) a[n] = rand_ball(rng, 0.3);
        const TruncatedSeries p(a);
        const auto inv = star_inv(p, 32);
        const double allowed = 1e-12 * inv.condition;
        inv_ratio = std::max(inv_ratio, inv.residual / allowed);
        inv_abs = std::max(inv_abs, inv.residual);
        if (inv.residual > allowed) ++inv_fail;
    }
    const double secs = seconds_since(t0);
    const bool pass = assoc < 1e-13 && conj_err < 1e-14 && sym_im < 1e-13 && inv_fail == 0 && inv_abs < 1e-10 && secs < 10.0;
    return {pass, "assoc " + fmt("%.2e", assoc) + " (<1e-13), conj " + fmt("%.2e", conj_err) + " (<1e-14), sym Im " +
                      fmt("%.2e", sym_im) + " (<1e-13), inverse residual/(1e-12 cond) max " + fmt("%.2e", inv_ratio) +
                      " (<=1), absolute " + fmt("%.1e", inv_abs) + " (<1e-10), " + fmt("%.2f", secs) + " s (<10)"};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(102);
    double worst = 0.0;
    int used = 0;
    while (used < 100) {
        const auto f = rand_series(rng, rand_deg(rng, 16));
        const auto g = rand_series(rng, rand_deg(rng, 16));
        const Quaternion q = rand_ball(rng, 0.95);
        if (!(eval(f, q).norm() > 1e-6)) continue;
        ++used;
        worst = std::max(worst, (eval(star_mul(f, g), q) - eval_via_transform(f, g, q)).norm());
    }
    return {worst < 1e-10, "100 triples, max error " + fmt("%.2e", worst) + " (<1e-10)"};
}

Outcome representation_splitting() {
    std::mt19937_64 rng(103);
    const auto us = sample_units(2000, 1031);
    double rep = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const auto f = rand_series(rng, rand_deg(rng, 20));
        const double rho = 0.99 * uniform01(rng), theta = kPi * uniform01(rng);
        const double x = rho * std::cos(theta), y = rho * std::sin(theta);
        const auto& I = us[2 * t];
        const auto& J = us[2 * t + 1];
        const Quaternion plus = eval(f, slice_point(x, y, I));
        const Quaternion minus = eval(f, slice_point(x, -y, I));
        rep = std::max(rep, (rep_formula(plus, minus, I, J) - eval(f, slice_point(x, y, J))).norm());
    }
    double split = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const auto f = rand_series(rng, rand_deg(rng, 32));
        const auto& I = us[t];
        split = std::max(split, coeff_dist(split_coeffs(f, I, orthogonal_unit(I)).recombine(), f));
    }
    return {rep < 1e-12 && split < 1e-14,
            "representation max error " + fmt("%.2e", rep) + " (<1e-12), recombination " + fmt("%.2e", split) +
                " (<1e-14)"};
}

Outcome reproducing_kernel() {
    std::mt19937_64 rng(104);
    const auto us = sample_units(300, 1041);
    double repro = 0.0, excess = 0.0;
    for (const auto& u : us) {
        const Quaternion w = from_polar(0.9 * uniform01(rng), kPi * uniform01(rng), u);
        const std::size_t deg = rand_deg(rng, 32);
        const auto f = rand_series(rng, deg);
        for (std::size_t n : {deg, deg + 7, std::size_t{200}}) {
            const auto k = kernel(w, n);
            repro = std::max(repro, (h2_inner(f, k) - eval(f, w)).norm());
            const double nk = h2_norm(k);
            const double gap = 1.0 / (1.0 - w.norm_sq()) - nk * nk;
            // 0 <= gap <= tail, up to roundoff.
            excess = std::max({excess, -gap, gap - kernel_tail_mass(w.norm(), n)});
        }
    }
    return {repro < 1e-12 && excess < 1e-12,
            "max |<f,k_w> - f(w)| " + fmt("%.2e", repro) + " (<1e-12), norm outside tail bound by " +
                fmt("%.2e", std::max(0.0, excess)) + " (<1e-12)"};
}

Outcome norm_cross_check() {
    std::mt19937_64 rng(105);
    const QuadratureSpec quad;
    double worst = 0.0;
    int monotone_fail = 0;
    for (int t = 0; t < 20; ++t) {
        const auto f = rand_series(rng, 1 + rand_deg(rng, 15));
        const double exact = h2_norm(f);
        worst = std::max(worst, std::abs(h2_norm_volume(f, quad) / exact - 1.0));
        double previous = INFINITY;
        for (std::size_t n : {16u, 24u, 32u}) {
            QuadratureSpec q = quad;
            q.n_radial = n;
            const double err = std::abs(h2_norm_volume(f, q) - exact);
            if (!(err < previous)) ++monotone_fail;
            previous = err;
        }
    }
    return {worst < 5e-3 && monotone_fail == 0,
            "20 polynomials, max relative error " + fmt("%.2e", worst) + " (<5e-3), non-monotone refinements " +
                std::to_string(monotone_fail) + " (radial nodes 16/24/32)"};
}

Outcome theorem_a() {
    LabConfig cfg;
    cfg.experiment = "theoremA";
    cfg.ladder = {64, 128, 256, 512};
    cfg.hinf_samples = 100000;
    double lo = INFINITY, hi = -INFINITY, slowest = 0.0;
    bool ok = true;
    for (const auto& text : default_multiplier_suite()) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = theoremA_report(make_symbol(text), cfg);
        slowest = std::max(slowest, seconds_since(t0));
        const auto r = rep.value("ratio(mult_norm:hinf)");
        if (!r) {
            ok = false;
            continue;
        }
        lo = std::min(lo, *r);
        hi = std::max(hi, *r);
    }
    ok = ok && lo >= 0.95 && hi <= 1.02 && slowest < 120.0;
    return {ok, "10 symbols at N=512, ratio in [" + fmt("%.5f", lo) + ", " + fmt("%.5f", hi) +
                    "] (within [0.95, 1.02]), slowest " + fmt("%.1f", slowest) + " s (<120)"};
}

Outcome hankel_basics() {
    double mono = 0.0;
    const std::vector<std::size_t> ladder{8, 16, 32, 64, 128};
    for (std::size_t n : {0u, 1u, 3u, 7u}) {
        for (const Quaternion& u : {units::one, units::i, units::j, -units::k}) {
            const auto norms = hankel_norm_estimate(TruncatedSeries::monomial(n, u), ladder);
            for (double v : norms) mono = std::max(mono, std::abs(v - 1.0));
        }
    }
    const std::vector<std::size_t> hilbert_ladder{256, 512, 1024, 2048, 4096};
    std::vector<Quaternion> alpha(2 * hilbert_ladder.back() - 1);
    for (std::size_t m = 0; m < alpha.size(); ++m) alpha[m] = Quaternion(1.0 / (m + 1.0));
    const auto b = HankelSymbolPair::from_alpha(alpha).b;
    const auto norms = hankel_norm_estimate(b, hilbert_ladder);
    bool monotone = true;
    for (std::size_t m = 1; m < norms.size(); ++m) monotone = monotone && norms[m] >= norms[m - 1];
    const double last = norms.back();
    std::string ladder_text;
    for (std::size_t m = 0; m < norms.size(); ++m)
        ladder_text += (m ? ", " : "") + std::to_string(hilbert_ladder[m]) + ":" + fmt("%.4f", norms[m]);
    return {mono < 1e-12 && monotone && last >= 3.10 && last <= kPi,
            "monomial deviation " + fmt("%.1e", mono) + " (<1e-12); 1/(n+1) ladder " + ladder_text +
                (monotone ? " monotone" : " NOT monotone") + ", final in [3.10, pi] required"};
}

Outcome theorem1_comparability() {
    const auto t0 = std::chrono::steady_clock::now();
    LabConfig cfg;
    cfg.experiment = "theorem1";
    const auto rep = run_experiment(cfg);
    const double secs = seconds_since(t0);
    const auto window = rep.value("suite/log_window_max");
    double excess = -INFINITY;
    std::size_t checked = 0;
    for (const auto& s : rep.symbols) {
        const std::string label = parse_symbol(s).label();
        const auto bs = rep.value(label + "/bilinear_sup");
        const auto hn = rep.value(label + "/hankel_norm");
        if (!bs || !hn) continue;
        excess = std::max(excess, *bs - *hn);
        ++checked;
    }
    // Spread of every ratio row of every symbol taken as one window, reported only.
    double all_lo = INFINITY, all_hi = -INFINITY;
    for (const auto& q : rep.quantities)
        if (q.name.find("/ratio(") != std::string::npos && q.status == "ok") {
            all_lo = std::min(all_lo, std::log(q.value));
            all_hi = std::max(all_hi, std::log(q.value));
        }
    const bool pass = window && *window <= std::log(50.0) && checked == rep.symbols.size() && excess <= 1e-9 &&
                      !rep.partial() && secs < 900.0;
    return {pass, std::to_string(rep.symbols.size()) + " symbols, widest log-ratio window " +
                      (window ? fmt("%.4f", *window) : std::string("n/a")) + " (<= log 50 = " +
                      fmt("%.4f", std::log(50.0)) + "), single window over all pairs " +
                      fmt("%.4f", all_hi - all_lo) + ", max bilinear_sup - hankel_norm " + fmt("%.2e", excess) +
                      " (<=1e-9), " + fmt("%.0f", secs) + " s (<900)"};
}

Outcome bmo_slice_bounds() {
    std::mt19937_64 rng(109);
    const auto fam = ArcFamily::dyadic();
    const auto us = sample_units(64, 1091);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto f = rand_series(rng, 1 + rand_deg(rng, 31));
        const BmoMoments m(f, fam);
        double lo = INFINITY, hi = 0.0;
        for (const auto& u : us) {
            const double v = m.slice_norm(u);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        worst = std::max(worst, hi / lo);
    }
    return {worst <= 2.0 * 1.05, "50 polynomials x 64 slices, max ratio over slice pairs " + fmt("%.4f", worst) +
                                      " (<= 2 x 1.05)"};
}

Outcome moebius() {
    const auto s = moebius_sweep(40, 16, 0.999, 200);
    std::mt19937_64 rng(110);
    bool exact = true;
    for (int t = 0; t < 2000; ++t) {
        const std::complex<double> w = std::polar(0.999 * uniform01(rng), 2 * kPi * uniform01(rng));
        const std::complex<double> z = std::polar(0.999 * uniform01(rng), 2 * kPi * uniform01(rng));
        exact = exact && moebius_ratio(w, 0.0) == 1.0 && moebius_ratio({w.real(), 0.0}, z) == 1.0;
    }
    return {s.constant < 100.0 && exact, std::to_string(s.evaluations) + " evaluations, ratio in [" +
                                             fmt("%.4f", s.min_ratio) + ", " + fmt("%.4f", s.max_ratio) + "], c = " +
                                             fmt("%.4f", s.constant) + " (<100), z=0 and real w exact: " +
                                             (exact ? "yes" : "no")};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism() {
    std::vector<LabConfig> runs;
    for (const char* exp : {"theorem1", "theoremA", "rkt", "selftest"}) {
        LabConfig cfg;
        cfg.experiment = exp;
        cfg.symbols = {std::string(exp) == "theoremA" ? "random_poly:deg=8,seed=3" : "random_poly:deg=32,seed=5",
                       "kernel_symbol:w0=0.4,w1=0.3,w2=0.5"};
        runs.push_back(cfg);
    }
    bool in_process = true;
    for (const auto& cfg : runs) {
        std::ostringstream a, b;
        write_report_csv(a, run_experiment(cfg));
        write_report_csv(b, run_experiment(cfg));
        in_process = in_process && a.str() == b.str();
    }
    bool same = in_process;
    std::string cli = "not run";
    if (!g_cli.empty()) {
        const auto dir = std::filesystem::temp_directory_path() / "qnehari_acceptance";
        std::filesystem::remove_all(dir);
        std::string outputs[2];
        bool ran = true;
        for (int k = 0; k < 2; ++k) {
            const auto out = dir / ("run" + std::to_string(k));
            const std::string cmd = "\"" + g_cli + "\" theorem1 --symbol 'random_poly:deg=16,seed=2' --seed 7 --out \"" +
                                    out.string() + "\" > /dev/null";
            ran = ran && std::system(cmd.c_str()) == 0;
            outputs[k] = slurp(out / "report.csv");
        }
        const bool cli_same = ran && !outputs[0].empty() && outputs[0] == outputs[1];
        cli = cli_same ? "identical" : "DIFFERENT";
        same = same && cli_same;
        std::filesystem::remove_all(dir);
    }
    return {same, std::string("4 experiments repeated in process: ") + (in_process ? "identical" : "DIFFERENT") +
                      "; report.csv across two CLI runs: " + cli};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "algebra suite", algebra_suite},
        {2, "oracle equivalence", oracle_equivalence},
        {3, "representation and splitting", representation_splitting},
        {4, "reproducing kernel", reproducing_kernel},
        {5, "norm formula cross-check", norm_cross_check},
        {6, "multiplier norm vs H-infinity", theorem_a},
        {7, "Hankel basics", hankel_basics},
        {8, "Hankel comparability suite", theorem1_comparability},
        {9, "BMO slice bounds", bmo_slice_bounds},
        {10, "Moebius sweep", moebius},
        {11, "determinism", determinism},
    };
    std::vector<int> selected;
    for (int a = 1; a < argc; ++a) {
        const std::string arg = argv[a];
        if (arg == "--cli" && a + 1 < argc)
            g_cli = argv[++a];
        else
            selected.push_back(std::atoi(arg.c_str()));
    }

    int failed = 0;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << ": " << o.detail << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
