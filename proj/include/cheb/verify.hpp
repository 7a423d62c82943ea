#pragma once

#include "cheb/annulus.hpp"
#include "cheb/arc.hpp"
#include "cheb/braids.hpp"
#include "cheb/chebyshev.hpp"
#include "cheb/idempotents.hpp"
#include "cheb/projector.hpp"
#include "cheb/serialize.hpp"
#include "cheb/skein.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace cheb {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string witness;
    double seconds = 0;
};

struct SuiteReport {
    std::string name;
    std::vector<CheckResult> checks;
    bool ok() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct VerifyConfig {
    int n_max = 6;
    int depth = 12;
    int parallelism = 1;
};

/// Runs f, which returns a witness string and throws or returns std::nullopt-like failure via
/// the bool; exceptions count as failures with their message as witness.
inline CheckResult run_check(const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
    CheckResult r;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        auto [ok, w] = f();
        r.pass = ok;
        r.witness = w;
    } catch (const std::exception& e) {
        r.pass = false;
        r.witness = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace checks {

using Outcome = std::pair<bool, std::string>;

inline Outcome fail(const std::string& what) { return {false, what}; }

inline Outcome quantum_integers(int n_max) {
    for (int n = 1; n <= n_max + 1; ++n) {
        LaurentPoly lhs = quantum_integer(2) * quantum_integer(n);
        LaurentPoly rhs = quantum_integer(n + 1) + quantum_integer(n - 1);
        if (!(lhs == rhs)) return fail("[2][n] != [n+1] + [n-1] at n=" + std::to_string(n));
        if (!(FieldElem(quantum_integer(n)).specialize(Rational(1)) == Rational(n))) return fail("[n] at q=1 at n=" + std::to_string(n));
    }
    return {true, "[2][n] = [n+1] + [n-1] and [n]|_{q=1} = n for n <= " + std::to_string(n_max + 1)};
}

inline Outcome field_inverses(int trials) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-4, 4), e(-3, 3);
    for (int i = 0; i < trials; ++i) {
        LaurentPoly a = LaurentPoly::from_terms({{e(rng), Integer(c(rng))}, {e(rng), Integer(c(rng))}, {0, Integer(c(rng))}});
        LaurentPoly b = LaurentPoly::from_terms({{e(rng), Integer(c(rng))}, {1, Integer(1)}});
        if (a.is_zero() || b.is_zero()) continue;
        FieldElem x(a, b);
        if (!(x * x.inverse()).is_one()) return fail("x * x^{-1} != 1 for " + x.to_string());
        if (!((x + FieldElem(1)) * x == x * x + x)) return fail("distributivity");
    }
    return {true, std::to_string(trials) + " random elements"};
}

inline Outcome jones_wenzl_checks(int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        TLElement p = jones_wenzl(n);
        if (!(p * p == p)) return fail("p_n^2 != p_n at n=" + std::to_string(n));
        for (int i = 1; i < n; ++i)
            if (!(TLElement::e(n, i) * p).is_zero() || !(p * TLElement::e(n, i)).is_zero())
                return fail("e_i p_n != 0 at n=" + std::to_string(n) + " i=" + std::to_string(i));
        if (!(markov_trace(p) == FieldElem(quantum_integer(n + 1)))) return fail("tr(p_n) != [n+1] at n=" + std::to_string(n));
    }
    return {true, "p_n^2 = p_n, e_i p_n = p_n e_i = 0, tr = [n+1] for n <= " + std::to_string(n_max)};
}

inline Outcome central_checks(int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        std::vector<TLElement> ps;
        TLElement sum(n, n);
        for (int k = n % 2; k <= n; k += 2) {
            ps.push_back(central_idempotent(n, k));
            sum += ps.back();
        }
        std::string at = " at n=" + std::to_string(n);
        if (!(sum == TLElement::identity(n))) return fail("sum != id" + at);
        if (!(ps.back() == jones_wenzl(n))) return fail("p_{n,n} != p_n" + at);
        for (std::size_t a = 0; a < ps.size(); ++a)
            for (std::size_t b = 0; b < ps.size(); ++b) {
                TLElement prod = ps[a] * ps[b];
                if (a == b ? !(prod == ps[a]) : !prod.is_zero()) return fail("orthogonality" + at);
            }
        for (int k = n % 2, j = 0; k <= n; k += 2, ++j) {
            TLElement small = k <= n - 2 ? central_idempotent(n - 2, k) : TLElement::zero(n - 2, n - 2);
            for (int i = 1; i < n; ++i) {
                TLElement cap = TLElement::from_tangle(FlatTangle::cap(n, i)), cup = TLElement::from_tangle(FlatTangle::cup(n, i));
                if (!(cap * ps[static_cast<std::size_t>(j)] == small * cap) || !(ps[static_cast<std::size_t>(j)] * cup == cup * small))
                    return fail("centrality" + at + " k=" + std::to_string(k) + " i=" + std::to_string(i));
            }
        }
        if (n >= 2)
            for (int k = (n - 1) % 2; k <= n - 1; k += 2)
                for (int l = n % 2; l <= n; l += 2) {
                    bool zero = (pad_right(central_idempotent(n - 1, k), 1) * central_idempotent(n, l)).is_zero();
                    if (zero != (l != k + 1 && l != k - 1)) return fail("branching" + at + " k=" + std::to_string(k) + " l=" + std::to_string(l));
                }
    }
    return {true, "completeness, orthogonality, p_{n,n} = p_n, centrality vs caps/cups, branching for n <= " + std::to_string(n_max)};
}

inline Outcome primitive_checks(int n_max) {
    if (admissible_count(4, 0).enumerated != 2 || admissible_count(4, 2).enumerated != 3 || admissible_count(4, 4).enumerated != 1)
        return fail("C_{4,k} examples");
    for (int n = 1; n <= n_max; ++n) {
        for (int k = n % 2; k <= n; k += 2) {
            auto c = admissible_count(n, k);
            if (c.enumerated != c.formula) return fail("Catalan count at n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
        auto seqs = admissible_sequences(n);
        std::vector<TLElement> ps;
        TLElement sum(n, n);
        for (auto& s : seqs) {
            ps.push_back(primitive_idempotent(s));
            sum += ps.back();
            if (!(chebyshev_coefficients(annular_skein_closure(ps.back())) == ZPoly::monomial(s.total())))
                return fail("closure of p_eps for eps=" + s.to_string());
        }
        if (!(sum == TLElement::identity(n))) return fail("sum p_eps != id at n=" + std::to_string(n));
        for (std::size_t a = 0; a < ps.size(); ++a)
            for (std::size_t b = 0; b < ps.size(); ++b) {
                TLElement prod = ps[a] * ps[b];
                if (a == b ? !(prod == ps[a]) : !prod.is_zero()) return fail("p_eps orthogonality at n=" + std::to_string(n));
            }
    }
    return {true, "completeness, orthogonality, Catalan counts, closure = S_|eps| for n <= " + std::to_string(n_max)};
}

inline Outcome bar_natan_local(int n_max) {
    FlatTangle e(0, 0, {}, 0), o(0, 0, {}, 1);
    Cobordism cup = Cobordism::disks(e, o, 0), cap = Cobordism::disks(o, e, 0), dcup = Cobordism::disks(e, o, 1);
    Cobordism one = Cobordism::disks(e, e, 0);
    if (!(cap * cup).is_zero()) return fail("sphere != 0");
    if (!(cap * dcup == one)) return fail("dotted sphere != 1");
    if (!(Cobordism::from_blocks(e, e, {{}}, {0}, {1}) == one.scaled(FieldElem(2)))) return fail("torus != 2");
    Cobordism id1 = Cobordism::identity(FlatTangle::identity(1));
    if (!id1.add_dot({0, 0}).add_dot({0, 0}).is_zero()) return fail("dot^2 != 0");
    int looped = 0;
    for (int n = 0; n <= n_max; ++n)
        for (auto& t : TangleBasis::get(n, n).all())
            for (int c = 1; c <= 2; ++c) {
                FlatTangle tc = t.with_circles(c);
                Delooping d = deloop(tc);
                Cobordism idr = Cobordism::identity(d.reduced);
                if (!(d.up * d.up_inv == idr) || !(d.down * d.down_inv == idr) || !(d.up * d.down_inv).is_zero() ||
                    !(d.down * d.up_inv).is_zero() || !(d.up_inv * d.up + d.down_inv * d.down == Cobordism::identity(tc)))
                    return fail("delooping round trip on " + tc.to_string());
                ++looped;
            }
    return {true, "sphere 0, dotted sphere 1, torus 2, dot^2 0, " + std::to_string(looped) + " delooping round trips"};
}

inline Outcome khovanov_checks(int n_max, int cone_max) {
    for (int n = 0; n <= n_max; ++n) {
        auto v = khovanov_complex(n);
        std::string at = " at n=" + std::to_string(n);
        if (d_squared_check(v)) return fail("d^2 != 0" + at);
        for (int k = 0; 2 * k <= n; ++k)
            if (Integer(v.in_degree(-k).size()) != binomial(n - k, k)) return fail("rank" + at);
        auto chi = graded_euler(v);
        auto g = grothendieck_formula(n);
        if (chi.size() != g.size()) return fail("chi" + at);
        for (auto& [w, x] : g)
            if (!chi.count(w) || !(chi.at(w) == x)) return fail("chi" + at);
        if (!(chebyshev_coefficients(euler_closure(chi)) == ZPoly::monomial(n))) return fail("closure != S_n" + at);
    }
    for (int n = 2; n <= cone_max; ++n) {
        auto d = kh_cone_decomposition(n);
        if (!d.matches || !d.map_is_cup) return fail("cone decomposition at n=" + std::to_string(n));
    }
    return {true, "d^2 = 0, ranks binom(n-k,k), chi = Grothendieck formula, closure = S_n for n <= " + std::to_string(n_max) +
                      "; cone decomposition for n <= " + std::to_string(cone_max)};
}

inline Outcome triangle_checks(int n_max, int theta_max) {
    auto kh = khovanov_system(n_max), jw = jw_system(n_max);
    for (int n = 2; n <= n_max; ++n) {
        auto r = jw_identities(n);
        if (!r.dh || !r.hd || !r.pi_rho) return fail("JW model identities at n=" + std::to_string(n));
        triangle_check(jw, n);
        triangle_check(kh, n);
    }
    auto kh4 = khovanov_system(theta_max), jw4 = jw_system(theta_max);
    auto th = build_theta(kh4, jw4, theta_max);
    for (auto& t : th)
        if (!verify_inverse(kh4.V[t.n], jw4.V[t.n], t.theta, t.inverse) || !t.right_square)
            return fail("theta at n=" + std::to_string(t.n));
    return {true, "JW and Khovanov triangles for 2 <= n <= " + std::to_string(n_max) + "; theta equivalences V_n ~ im p_n for n <= " +
                      std::to_string(theta_max)};
}

inline Outcome projector_checks(int p2_depth) {
    std::ostringstream w;
    auto p2 = p2_complex(p2_depth);
    if (d_squared_check(p2.complex)) return fail("P2 d^2 != 0");
    auto win = std::pair{-p2_depth + 2, 0};
    for (auto& r : kills_turnbacks(p2, win))
        if (!r.left.contractible || !r.right.contractible) return fail("B1 * P2 not contractible on the window");
    w << "P2 depth " << p2_depth << ": d^2 = 0, B1*P2 contractible on [" << win.first << ", 0]";
    auto q3 = build_qn(3, p2_complex(12), 8);
    if (d_squared_check(q3.complex)) return fail("Q3 d^2 != 0");
    w << "; Q3 depth 8: h, k, gamma solved (" << q3.h.size() << ", " << q3.k.size() << ", " << q3.gamma.size() << " entries), d^2 = 0";
    auto q = build_qn(3, p2_complex(30), 24);
    auto p3 = splice_pn(q, 7, 24);
    if (d_squared_check(p3.complex)) return fail("P3 d^2 != 0");
    for (auto& r : kills_turnbacks(p3))
        if (!r.left.contractible || !r.right.contractible) return fail("B" + std::to_string(r.i) + " * P3 not contractible");
    w << "; P3 depth 24: B1, B2 killed on [" << p3.safe_window.first << ", 0]";
    for (auto& [tp, n] : std::vector<std::pair<TruncatedProjector, int>>{{p2_complex(p2_depth), 2}, {p3, 3}}) {
        auto tt = trace_euler(tp);
        if (tt.cutoff < 2 * n) return fail("trace cutoff too low for n=" + std::to_string(n));
        auto coeffs = chebyshev_coefficients(tt.trace);
        for (int k = 0; k <= n; ++k) {
            FieldElem want = k == n ? FieldElem(1) : FieldElem(0);
            if (q_valuation(coeffs[k] - want) < tt.cutoff) return fail("trace_euler(P" + std::to_string(n) + ") differs from S_n below the cutoff");
        }
        w << "; trace_euler(P" << n << ") = S_" << n << " below q^" << tt.cutoff;
    }
    return {true, w.str()};
}

inline Outcome arc_checks(int n_max) {
    const int catalan[] = {1, 1, 2, 5, 14};
    for (int n = 1; n <= n_max; ++n) {
        ArcAlgebra h(n);
        if (h.graded_dimension() != arc_dimension_formula(n)) return fail("dim H^n at n=" + std::to_string(n));
        auto r = quantum_coinvariants_rank(h);
        if (r.rank != catalan[n] || !r.idempotents_span || !r.idempotents_independent) return fail("coInv_q at n=" + std::to_string(n));
    }
    auto q = quantum_hochschild_bar(1, 2);
    if (q.ranks != std::vector<int>{1, 0, 0}) return fail("HH^q(H^1) ranks");
    auto c = classical_hochschild_bar(1, 2);
    if (c.ranks[1] == 0) return fail("q = 1 control has HH_1 = 0");
    return {true, "HH_0^q ranks 1, 2, 5 spanned by idempotents; HH_1^q = HH_2^q = 0 at n=1; classical HH_1 = " + std::to_string(c.ranks[1])};
}

inline Outcome arc_associativity(int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        ArcAlgebra h(n);
        int d = static_cast<int>(h.dim());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                ArcVector ij = h.mul(i, j);
                for (int k = 0; k < d; ++k)
                    if (h.mul(ij, {{k, FieldElem(1)}}) != h.mul({{i, FieldElem(1)}}, h.mul(j, k))) return fail("associativity at n=" + std::to_string(n));
            }
    }
    return {true, "exhaustive triples for n <= " + std::to_string(n_max)};
}

/// Full (unwindowed) trace of P2 at depth N telescopes to z^2 - 1 + (-1)^N q^{2N}.
inline Outcome p2_trace_exact(int depth) {
    for (int N = 2; N <= depth; ++N) {
        ZPoly want;
        want.add(2, FieldElem(1));
        want.add(0, FieldElem(-1) + (N % 2 ? -FieldElem::q_power(2 * N) : FieldElem::q_power(2 * N)));
        if (!(trace_euler(p2_complex(N).complex) == want)) return fail("trace of P2 at depth " + std::to_string(N));
        auto tt = trace_euler(p2_complex(N));
        ZPoly diff = chebyshev_coefficients(tt.trace);
        diff -= ZPoly::monomial(2);
        if (q_valuation(diff) < tt.cutoff) return fail("windowed P2 trace below cutoff at depth " + std::to_string(N));
    }
    return {true, "trace_euler(P2 depth N) = z^2 - 1 + (-1)^N q^{2N} for 2 <= N <= " + std::to_string(depth)};
}

inline Outcome annular_local() {
    if (!essential_dot_vanishing({{{true, false, 0, 1}}, 0}).zero) return fail("dot on an essential annulus survives");
    if (essential_dot_vanishing({{{true, false, 0, 0}}, 0}).zero) return fail("identity annulus vanishes");
    auto torus = essential_dot_vanishing({{{false, true, 1, 0}}, 0});
    if (torus.zero || !(torus.scalar == FieldElem(2))) return fail("torus != 2");
    if (!essential_dot_vanishing({{{false, true, 0, 0}}, 0}).zero) return fail("sphere != 0");
    for (int n = 2; n <= 4; ++n)
        for (int i = 1; i < n; ++i)
            for (int j = 1; j < n; ++j) {
                std::vector<TLElement> w{TLElement::e(n, i), jones_wenzl(n) + TLElement::e(n, j)};
                auto r = cyclicity_rotate(w, 1);
                if (!(annular_skein_closure(w[0] * w[1]) == annular_skein_closure(r.rotated))) return fail("closure not cyclic at n=" + std::to_string(n));
            }
    return {true, "essential dots vanish, closed components evaluate, closure(gf) = closure(fg) for n <= 4"};
}

struct BatteryStats {
    int cases = 0;
    int d2_checks = 0;
    int trace_checks = 0;
    int json_checks = 0;
    std::string first_failure;
};

/// Randomized infrastructure battery: random braid complexes pushed through every complex
/// operation, with d^2, trace and JSON round-trip checks after each step.
inline BatteryStats infrastructure_battery(int cases, unsigned seed = 2024) {
    BatteryStats st;
    std::mt19937 rng(seed);
    auto note = [&](bool ok, const std::string& what) {
        if (!ok && st.first_failure.empty()) st.first_failure = "case " + std::to_string(st.cases) + ": " + what;
        return ok;
    };
    auto d2 = [&](const Complex<BNBase>& c, const std::string& op) {
        ++st.d2_checks;
        note(!d_squared_check(c), "d^2 != 0 after " + op);
    };
    auto json = [&](const Complex<BNBase>& c) {
        ++st.json_checks;
        Json j = to_json(c);
        Complex<BNBase> back = complex_from_json<BNBase>(Json::parse(j.dump()));
        note(same_complex(back, c) && to_json(back) == j, "JSON round trip");
    };
    for (int i = 0; i < cases; ++i, ++st.cases) {
        int n = 1 + i % 3;
        auto word = n > 1 ? random_word(rng, n, std::uniform_int_distribution<int>(0, 3)(rng)) : std::vector<int>{};
        auto c = braid(n, word);
        d2(c, "braid");
        int dt = std::uniform_int_distribution<int>(-2, 2)(rng), dq = std::uniform_int_distribution<int>(-3, 3)(rng);
        auto sh = shifted(c, dt, dq);
        d2(sh, "shift");
        switch (i % 6) {
        case 0: {
            auto cn = cone(c, c, identity_map(c)).complex;
            d2(cn, "cone");
            note(simplify(cn).empty(), "cone of id not contractible");
            break;
        }
        case 1: {
            auto h = random_homotopy(rng, c, c);
            auto f = commutator(c, c, h);
            auto cn = cone(c, c, f).complex;
            d2(cn, "cone of a null-homotopic map");
            json(cn);
            break;
        }
        case 2: {
            auto other = braid(n, n > 1 ? random_word(rng, n, 1) : std::vector<int>{});
            d2(star_compose(other, c).complex, "star_compose");
            d2(direct_sum<BNBase>({&c, &other}).complex, "direct_sum");
            break;
        }
        case 3: {
            auto j = juxtapose(c, one_term<BNBase>(1, 1, FlatTangle::identity(1))).complex;
            d2(j, "juxtapose");
            d2(truncate(j, 1), "truncate");
            break;
        }
        case 4: {
            auto d = c;
            deloop_pass(d);
            d2(d, "deloop_pass");
            gaussian_eliminate(d);
            d2(d, "gaussian_eliminate");
            break;
        }
        default: {
            int copies = 2 + i % 3, depth = 2 * copies;
            auto p = splice_pn(build_qn(2, p1_complex(), depth), copies, depth);
            d2(p.complex, "splice");
            ++st.trace_checks;
            note(trace_euler(p.complex, p.safe_window) == trace_euler(p2_complex(depth).complex, p.safe_window), "spliced P2 trace");
            break;
        }
        }
        auto s = simplify(c);
        d2(s, "simplify");
        ++st.trace_checks;
        note(trace_euler(s) == trace_euler(c), "trace_euler changed under simplify");
        json(c);
        json(sh);
        ++st.json_checks;
        auto tr = trace_euler(c);
        note(zpoly_from_json(Json::parse(to_json(tr).dump())) == tr, "trace JSON round trip");
    }
    return st;
}

inline Outcome battery_check(int cases) {
    auto st = infrastructure_battery(cases);
    if (!st.first_failure.empty()) return fail(st.first_failure);
    // element-level round trips on emitted data
    for (int n = 0; n <= 5; ++n) {
        TLElement p = jones_wenzl(n);
        if (!(tl_from_json(Json::parse(to_json(p).dump())) == p)) return fail("JSON round trip of p_" + std::to_string(n));
        auto v = khovanov_complex(n);
        if (!same_complex(complex_from_json<TLBase>(Json::parse(to_json(v).dump())), v)) return fail("JSON round trip of V_n");
    }
    return {true, std::to_string(st.cases) + " cases: " + std::to_string(st.d2_checks) + " d^2 checks, " + std::to_string(st.trace_checks) +
                      " trace checks, " + std::to_string(st.json_checks) + " JSON round trips"};
}

}  // namespace checks

using Job = std::pair<std::string, std::function<checks::Outcome()>>;

/// Runs jobs on at most `workers` threads; results keep the job order.
inline std::vector<CheckResult> run_jobs(const std::vector<Job>& jobs, int workers) {
    std::vector<CheckResult> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) out[i] = run_check(jobs[i].first, jobs[i].second);
    };
    int w = std::max(1, std::min(workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < w; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

inline SuiteReport verify_suite(const std::string& name, const VerifyConfig& cfg) {
    if (cfg.n_max < 1 || cfg.depth < 2) throw std::invalid_argument("verify: need n_max >= 1 and depth >= 2");
    std::vector<Job> jobs;
    auto add = [&](const std::string& n, std::function<checks::Outcome()> f) { jobs.emplace_back(n, std::move(f)); };
    const int n_max = cfg.n_max, depth = cfg.depth, n6 = std::min(n_max, 6);
    bool all = name == "all";
    if (all || name == "coeff") {
        add("coeff.quantum_integers", [=] { return checks::quantum_integers(n_max); });
        add("coeff.field_inverses", [] { return checks::field_inverses(200); });
    }
    if (all || name == "tl") {
        add("tl.jones_wenzl", [=] { return checks::jones_wenzl_checks(n_max); });
        add("tl.central_idempotents", [=] { return checks::central_checks(n_max); });
        add("tl.primitive_idempotents", [=] { return checks::primitive_checks(n6); });
    }
    if (all || name == "cob") add("cob.local_relations", [=] { return checks::bar_natan_local(std::min(n_max, 4)); });
    if (all || name == "chebyshev") {
        add("chebyshev.khovanov", [=] { return checks::khovanov_checks(n_max, n6); });
        add("chebyshev.triangles_theta", [=] { return checks::triangle_checks(std::max(2, n6), std::min(n_max, 4)); });
    }
    if (all || name == "projector") add("projector.truncated", [=] { return checks::projector_checks(depth); });
    if (all || name == "annulus") {
        add("annulus.p2_trace", [=] { return checks::p2_trace_exact(depth); });
        add("annulus.local_evaluation", [] { return checks::annular_local(); });
        add("annulus.simplify_invariance", [] {
            auto st = checks::infrastructure_battery(60);
            return checks::Outcome{st.first_failure.empty(), st.first_failure.empty() ? std::to_string(st.trace_checks) + " complexes" : st.first_failure};
        });
    }
    if (all || name == "arc") {
        add("arc.hh", [=] { return checks::arc_checks(std::min(n_max, 3)); });
        add("arc.associativity", [=] { return checks::arc_associativity(std::min(n_max, 3)); });
    }
    if (jobs.empty()) throw std::invalid_argument("verify: unknown suite '" + name + "'");
    return {name, run_jobs(jobs, cfg.parallelism)};
}

/// Acceptance criteria 1-9 at their stated parameters.
inline CheckResult acceptance_criterion(int k) {
    switch (k) {
    case 1: return run_check("jones-wenzl", [] { return checks::jones_wenzl_checks(8); });
    case 2: return run_check("central idempotents", [] { return checks::central_checks(8); });
    case 3: return run_check("primitive idempotents", [] { return checks::primitive_checks(6); });
    case 4: return run_check("khovanov model", [] { return checks::khovanov_checks(8, 6); });
    case 5: return run_check("chebyshev triangles", [] { return checks::triangle_checks(6, 4); });
    case 6: return run_check("bar-natan calculus", [] { return checks::bar_natan_local(4); });
    case 7: return run_check("truncated projectors", [] { return checks::projector_checks(12); });
    case 8: return run_check("arc algebra", [] { return checks::arc_checks(3); });
    case 9: return run_check("infrastructure", [] { return checks::battery_check(1000); });
    default: throw std::invalid_argument("no acceptance criterion " + std::to_string(k));
    }
}

inline Json to_json(const CheckResult& c) {
    return {{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}, {"seconds", c.seconds}};
}

inline Json to_json(const SuiteReport& r) {
    Json j;
    j["suite"] = r.name;
    j["ok"] = r.ok();
    j["checks"] = Json::array();
    for (auto& c : r.checks) j["checks"].push_back(to_json(c));
    return j;
}

}  // namespace cheb
