//! The acceptance criteria as runnable checks, shared by `selftest` and the
//! `acceptance` test target.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;
use serre_lab::bdj2::{self, Gl2Ctx, Gl2TameType, Gl2Weight, RextMode, Side};
use serre_lab::characters::{brauer_expand, char_of_virtual, weyl_character, weyl_dimension, VirtualWeylSum};
use serre_lab::jantzen::jantzen_virtual;
use serre_lab::lattice::{dominance_leq, dot_action, enumerate_restricted_alcoves, is_deep, up_arrow, Alcove};
use serre_lab::modreps::{
    canonical_serre, decompose_virtual_fp, dual_twist, gl3_reflection, is_regular, r_operator, steinberg_factorize,
    SerreWeight,
};
use serre_lab::tametypes::{all_tame_types, is_generic, is_good, TamePair, TameType};
use serre_lab::weightsets::{
    adps_weights_gl3, deep_generic_type, predicted_count, structural_checks, w_question_exact, w_question_generic,
    w_question_gl3, CTauMode, CountVia, Route,
};
use serre_lab::{Perm, RootCtx, Weight};

/// Outcome of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {} ({:.1}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn timed(id: u32, name: &'static str, body: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let out = body();
    let seconds = start.elapsed().as_secs_f64();
    match out {
        Ok(detail) => CheckResult { id, name, passed: true, detail, seconds },
        Err(detail) => CheckResult { id, name, passed: false, detail, seconds },
    }
}

fn w(v: &[i64]) -> Weight {
    Weight(v.to_vec())
}

fn sw(v: &[i64], p: i64) -> SerreWeight {
    canonical_serre(&w(v), p).expect("restricted")
}

/// Criterion 1: Generic counts 2, 9, 88 on several deep types each, and 1640 for `n = 5`.
pub fn generic_counts() -> CheckResult {
    timed(1, "generic weight counts", || {
        let gl2: Vec<TameType> = all_tame_types(2, 11)
            .map_err(e2s)?
            .into_iter()
            .filter(|t| is_generic(t, 2).unwrap_or(false))
            .take(3)
            .collect();
        ensure(gl2.len() == 3, || "fewer than three 2-generic GL2 types at p = 11".into())?;
        for t in &gl2 {
            let ws = w_question_generic(t, 2).map_err(e2s)?;
            ensure(ws.len() == 2 && ws.warnings.is_empty(), || format!("{t}: {} weights", ws.len()))?;
        }
        let perms3 = [Perm::identity(3), Perm::simple(3, 0), Perm::coxeter(3)];
        for w in &perms3 {
            let t = deep_generic_type(3, 3, w).map_err(e2s)?;
            ensure(t.p == 13, || format!("unexpected prime for {t}"))?;
            let ws = w_question_generic(&t, 3).map_err(e2s)?;
            ensure(ws.len() == 9 && ws.lower_alcove_count() == 3, || {
                format!("{t}: {} weights, {} lower", ws.len(), ws.lower_alcove_count())
            })?;
        }
        let perms4 = [Perm::identity(4), Perm::simple(4, 1), Perm::coxeter(4)];
        for w in &perms4 {
            let t = deep_generic_type(4, 4, w).map_err(e2s)?;
            ensure(t.p == 23, || format!("unexpected prime for {t}"))?;
            let ws = w_question_generic(&t, 4).map_err(e2s)?;
            ensure(ws.len() == 88, || format!("{t}: {} weights", ws.len()))?;
        }
        let c5 = predicted_count(5, CountVia::Formula).map_err(e2s)?;
        ensure(c5 == 1640, || format!("n = 5 count {c5}"))?;
        Ok("2 (p=11), 9 with 3 lower (p=13), 88 (p=23) on 3 types each; n=5 formula 1640".into())
    })
}

/// Criterion 2: The extra weight table and its absence from the ADPS lists.
pub fn extra_weight_table() -> CheckResult {
    timed(2, "extra weight table", || {
        let rows: [(i64, &str, [i64; 3]); 3] =
            [(5, "2:8,1:0", [6, 3, 0]), (7, "2:12,1:3", [13, 8, 3]), (11, "2:40,1:0", [16, 9, 2])];
        for (p, tau, extra) in rows {
            let t = TameType::parse(tau, p).map_err(e2s)?;
            let ws = w_question_gl3(&t, CTauMode::ClosedForm).map_err(e2s)?;
            let f = sw(&extra, p);
            ensure(ws.weights.contains(&f), || format!("{f} missing from W?({t}) at p = {p}"))?;
            let adps = adps_weights_gl3(&t).map_err(e2s)?;
            let diff: BTreeSet<_> = ws.weights.difference(&adps.weights).cloned().collect();
            ensure(adps.weights.is_subset(&ws.weights) && diff == [f.clone()].into(), || {
                format!("p = {p}: W? minus ADPS is {diff:?}")
            })?;
        }
        Ok("F(6,3,0), F(13,8,3), F(16,9,2) present and exactly the ADPS omissions".into())
    })
}

fn weyl_sum(ctx: &RootCtx, terms: &[[i64; 3]]) -> VirtualWeylSum {
    let mut v = VirtualWeylSum::zero();
    for t in terms {
        v.add_weyl(&w(t), 1, ctx);
    }
    v
}

/// Criterion 3: The six-term expansions of the principal series and 3-cycle reductions.
pub fn jantzen_six_terms() -> CheckResult {
    timed(3, "Jantzen six-term expansions", || {
        let mut cases = 0;
        for p in [5i64, 7] {
            let ctx = RootCtx::new(3, p).map_err(e2s)?;
            for i in 0..2 * p {
                for j in 0..=i {
                    for k in 0..=j {
                        if i - k < p {
                            let expect = weyl_sum(
                                &ctx,
                                &[
                                    [k + p - 1, j, i - p + 1],
                                    [i, k, j - p + 1],
                                    [j + p - 1, i, k],
                                    [i, j, k],
                                    [j, k, i - p + 1],
                                    [k + p - 1, i, j],
                                ],
                            );
                            let pair = TamePair::new(Perm::identity(3), w(&[i, j, k]), p).map_err(e2s)?;
                            let got = jantzen_virtual(&pair).map_err(e2s)?;
                            ensure(got.reduce_det_twist(p) == expect.reduce_det_twist(p), || {
                                format!("principal series ({i},{j},{k}) at p = {p}")
                            })?;
                            cases += 1;
                        }
                        if j < i && i - k <= p {
                            let expect = weyl_sum(
                                &ctx,
                                &[
                                    [k + p - 1, j, i - p + 1],
                                    [i - 1, k, j - p + 2],
                                    [j + p - 1, i - 1, k + 1],
                                    [i - 2, j + 1, k + 1],
                                    [j - 1, k + 1, i - p + 1],
                                    [k + p - 2, i, j + 1],
                                ],
                            );
                            let pair = TamePair::new(Perm::coxeter(3), w(&[i, j, k]), p).map_err(e2s)?;
                            let got = jantzen_virtual(&pair).map_err(e2s)?;
                            ensure(got.reduce_det_twist(p) == expect.reduce_det_twist(p), || {
                                format!("3-cycle ({i},{j},{k}) at p = {p}")
                            })?;
                            cases += 1;
                        }
                    }
                }
            }
        }
        Ok(format!("{cases} expansions match for p in {{5, 7}}"))
    })
}

/// Criterion 4: Exact and list routes agree exhaustively; the generic route agrees
/// on 3-generic types.
pub fn route_agreement(quick: bool) -> CheckResult {
    timed(4, "route agreement", || {
        let primes: &[i64] = if quick { &[5] } else { &[5, 7] };
        let mut exhaustive = 0;
        for &p in primes {
            for t in all_tame_types(3, p).map_err(e2s)? {
                let e = w_question_exact(&t).map_err(e2s)?;
                let l = w_question_gl3(&t, CTauMode::ClosedForm).map_err(e2s)?;
                ensure(e == l, || format!("exact and lists differ on {t}"))?;
                exhaustive += 1;
            }
        }
        let generic_primes: &[i64] = if quick { &[13] } else { &[11, 13] };
        let mut detail = Vec::new();
        for &p in generic_primes {
            let types: Vec<TameType> = all_tame_types(3, p)
                .map_err(e2s)?
                .into_iter()
                .filter(|t| is_generic(t, 3).unwrap_or(false))
                .collect();
            for t in &types {
                let g = w_question_generic(t, 3).map_err(e2s)?;
                let e = w_question_exact(t).map_err(e2s)?;
                let l = w_question_gl3(t, CTauMode::ClosedForm).map_err(e2s)?;
                ensure(g == e && g == l, || format!("generic route differs on {t}"))?;
            }
            detail.push(format!("{} generic at p={p}", types.len()));
        }
        Ok(format!("{exhaustive} types exact = lists; generic agrees ({})", detail.join(", ")))
    })
}

pub const BDJ_CASES: [(i64, u32); 8] = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2)];

/// Criterion 5: Both parts of the comparison theorem, strict and weak `R_ext`.
pub fn bdj_theorem(quick: bool) -> CheckResult {
    timed(5, "BDJ comparison theorem", || {
        let cases: &[(i64, u32)] = if quick { &BDJ_CASES[..4] } else { &BDJ_CASES };
        let mut checked = 0;
        for &(p, f) in cases {
            let ctx = Gl2Ctx::new(p, f).map_err(e2s)?;
            for mode in [RextMode::Strict, RextMode::Weak] {
                let r = bdj2::verify_bdj_theorem(&ctx, mode);
                ensure(r.passed, || {
                    format!("p = {p}, f = {f}, {mode:?}: {} counterexamples", r.counterexamples.len())
                })?;
                checked += r.checked;
            }
        }
        Ok(format!("{} (p, f) cases, {checked} type checks, no counterexamples", cases.len()))
    })
}

/// Criterion 6: Jantzen's reduction for `GL_2(F_p)` matches Diamond's constituents.
pub fn gl2_cross_theory() -> CheckResult {
    timed(6, "GL2 Jantzen vs Diamond", || {
        let mut count = 0;
        for p in [3i64, 5, 7, 11, 13] {
            let ctx = Gl2Ctx::new(p, 1).map_err(e2s)?;
            for tau in all_tame_types(2, p).map_err(e2s)? {
                let rho = Gl2TameType::from_tame_type(&tau).map_err(e2s)?;
                let pair = serre_lab::tametypes::good_pair_for(&tau);
                let dec = decompose_virtual_fp(&jantzen_virtual(&pair).map_err(e2s)?, p).map_err(e2s)?;
                let ours = dec
                    .keys()
                    .map(Gl2Weight::from_serre)
                    .collect::<Result<BTreeSet<_>, _>>()
                    .map_err(e2s)?;
                ensure(ours == bdj2::diamond_constituents(&rho, &ctx), || format!("JH sets differ for {tau}"))?;
                let mass: i64 = dec
                    .iter()
                    .map(|(f, k)| k * Gl2Weight::from_serre(f).map(|g| g.dimension()).unwrap_or(0))
                    .sum();
                let want = bdj2::v_p(&rho, &ctx).map_err(e2s)?.dimension(&ctx);
                ensure(mass == want, || format!("mass {mass} != {want} for {tau}"))?;
                count += 1;
            }
        }
        Ok(format!("{count} types over p <= 13 agree with mass q+1 / q-1"))
    })
}

/// Criterion 7: Deterministic invariant sweeps; the acceptance target adds
/// randomized suites on top of these.
pub fn invariant_sweeps(quick: bool) -> CheckResult {
    timed(7, "invariant sweeps", || {
        let mut parts = Vec::new();
        brauer_sweep()?;
        parts.push("Brauer");
        weyl_dimension_sweep()?;
        parts.push("Weyl dimension");
        steinberg_sweep()?;
        parts.push("Steinberg");
        r_and_reflection_sweep()?;
        parts.push("R^2 and reflection");
        linkage_sweep()?;
        parts.push("dot/up-arrow");
        alcove_count_sweep()?;
        parts.push("alcove count");
        deep_good_sweep()?;
        parts.push("deep => good");
        twist_dual_sweep()?;
        parts.push("twist/dual");
        if !quick {
            gee_sweep()?;
            parts.push("Gee closure");
        }
        phi_sweep()?;
        parts.push("phi bijection");
        Ok(parts.join(", "))
    })
}

pub fn brauer_sweep() -> Result<(), String> {
    for n in 2..=3usize {
        let ctx = RootCtx::new(n, 5).map_err(e2s)?;
        let base: Vec<Vec<i64>> = match n {
            2 => vec![vec![0, 0], vec![3, 1], vec![2, -2]],
            _ => vec![vec![0, 0, 0], vec![2, 1, 0], vec![4, 1, -1]],
        };
        let chis: Vec<Vec<i64>> = match n {
            2 => vec![vec![1, 0], vec![2, 0], vec![3, 1]],
            _ => vec![vec![1, 0, 0], vec![1, 1, 0], vec![2, 1, 0]],
        };
        for l in &base {
            for c in &chis {
                let chi = weyl_character(&w(c), &ctx).map_err(e2s)?;
                let v = brauer_expand(&w(l), &chi, &ctx).map_err(e2s)?;
                let lhs = char_of_virtual(&v, &ctx).map_err(e2s)?;
                let rhs = weyl_character(&w(l), &ctx).map_err(e2s)?.mul(&chi);
                ensure(lhs == rhs, || format!("Brauer fails for {l:?} with {c:?}"))?;
            }
        }
    }
    Ok(())
}

pub fn weyl_dimension_sweep() -> Result<(), String> {
    for n in 2..=4usize {
        let ctx = RootCtx::new(n, 5).map_err(e2s)?;
        for a in 0..4 {
            for b in 0..=a {
                let mut v = vec![0i64; n];
                v[0] = a;
                v[1] = b;
                let l = w(&v);
                let mass = weyl_character(&l, &ctx).map_err(e2s)?.mass() as i128;
                ensure(mass == weyl_dimension(&l), || format!("dimension mismatch at {l}"))?;
            }
        }
    }
    Ok(())
}

pub fn steinberg_sweep() -> Result<(), String> {
    for a in 0..25i64 {
        for b in 0..=a.min(24) {
            let l = w(&[a, a - b]);
            let s = steinberg_factorize(&l, 5, 2).map_err(e2s)?;
            ensure(s.reassemble() == l, || format!("Steinberg round trip fails at {l}"))?;
            ensure(s.factors.iter().all(|x| x.is_restricted(5)), || format!("non-restricted digit for {l}"))?;
        }
    }
    Ok(())
}

pub fn r_and_reflection_sweep() -> Result<(), String> {
    let p = 5;
    for a in 0..3 * p {
        for b in 0..=a {
            for c in 0..=b.min(p - 2) {
                let l = w(&[a, b, c]);
                if !l.is_restricted(p) {
                    continue;
                }
                let f = canonical_serre(&l, p).map_err(e2s)?;
                if !is_regular(&f) {
                    continue;
                }
                let rr = r_operator(&r_operator(&f));
                ensure(rr == dual_twist(&f, -2, false), || format!("R^2 F != F (x) det^-2 for {f}"))?;
                let g = gl3_reflection(&f).map_err(e2s)?;
                ensure(gl3_reflection(&g).map_err(e2s)? == f, || format!("reflection not an involution at {f}"))?;
                ensure(f.in_lower_alcove() == g.in_upper_alcove(), || format!("reflection does not swap at {f}"))?;
            }
        }
    }
    Ok(())
}

pub fn linkage_sweep() -> Result<(), String> {
    for (n, p) in [(2usize, 3i64), (2, 5), (2, 7), (3, 3), (3, 5), (3, 7)] {
        let ctx = RootCtx::new(n, p).map_err(e2s)?;
        let perms = Perm::all(n);
        // A box of weights of total degree zero.
        let range = -(p + 1)..=(p + 1);
        let mut pts = Vec::new();
        for a in range.clone() {
            for b in range.clone() {
                if n == 2 {
                    pts.push(w(&[a, -a]));
                    break;
                }
                pts.push(w(&[a, b, -a - b]));
            }
        }
        pts.sort();
        pts.dedup();
        for x in &pts {
            for s in &perms {
                for t in &perms {
                    let lhs = dot_action(s, &dot_action(t, x, &ctx), &ctx);
                    ensure(lhs == dot_action(&s.compose(t), x, &ctx), || format!("dot action not an action at {x}"))?;
                }
            }
        }
        let small: Vec<&Weight> = pts.iter().filter(|x| x.0.iter().all(|c| c.abs() <= p)).collect();
        let rel: Vec<Vec<bool>> = small.iter().map(|x| small.iter().map(|y| up_arrow(x, y, &ctx)).collect()).collect();
        for (i, x) in small.iter().enumerate() {
            ensure(rel[i][i], || format!("up-arrow not reflexive at {x}"))?;
            for (j, y) in small.iter().enumerate() {
                if rel[i][j] {
                    ensure(dominance_leq(x, y), || format!("{x} up {y} without dominance"))?;
                    ensure(i == j || !rel[j][i], || format!("up-arrow not antisymmetric at {x}, {y}"))?;
                    for (k, z) in small.iter().enumerate() {
                        ensure(!rel[j][k] || rel[i][k], || format!("up-arrow not transitive at {x}, {y}, {z}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn alcove_count_sweep() -> Result<(), String> {
    for (n, p, want) in [(2usize, 3i64, 1usize), (3, 5, 2), (4, 5, 6), (5, 7, 24)] {
        let ctx = RootCtx::new(n, p).map_err(e2s)?;
        let got = enumerate_restricted_alcoves(&ctx).map_err(e2s)?.len();
        ensure(got == want, || format!("n = {n}: {got} restricted alcoves"))?;
    }
    Ok(())
}

pub fn deep_good_sweep() -> Result<(), String> {
    for n in 2..=3usize {
        for p in [3i64, 5, 7, 11] {
            if p <= n as i64 {
                continue;
            }
            let ctx = RootCtx::new(n, p).map_err(e2s)?;
            let c0 = Alcove::lowest(n);
            let mut mu = vec![0i64; n];
            loop {
                let m = Weight(mu.clone());
                if is_deep(&m, n as i64, &c0, &ctx) {
                    for w in Perm::all(n) {
                        let pair = TamePair { w, mu: m.clone(), p, r: 1 };
                        ensure(is_good(&pair), || format!("deep but not good: {m} at p = {p}"))?;
                    }
                }
                let mut i = 0;
                while i < n {
                    mu[i] += 1;
                    if mu[i] < p {
                        break;
                    }
                    mu[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    Ok(())
}

pub fn twist_dual_sweep() -> Result<(), String> {
    for t in all_tame_types(3, 5).map_err(e2s)? {
        let r = structural_checks(&t, Route::Gl3Lists, 1).map_err(e2s)?;
        ensure(r.twist_ok && r.dual_ok, || format!("{:?}", r.failures))?;
    }
    Ok(())
}

pub fn gee_sweep() -> Result<(), String> {
    let mut pairs = 0;
    for t in all_tame_types(3, 13).map_err(e2s)? {
        let r = structural_checks(&t, Route::Gl3Lists, 3).map_err(e2s)?;
        ensure(r.gee_ok == Some(true), || format!("{:?}", r.failures))?;
        pairs += r.gee_pairs_checked;
    }
    ensure(pairs > 0, || "no Gee pairs checked".into())
}

pub fn phi_sweep() -> Result<(), String> {
    for p in [3i64, 5] {
        for f in 1..=3usize {
            let l0 = bdj2::enumerate_side(f, p, Side::L0);
            let l1: BTreeSet<_> = bdj2::enumerate_side(f, p, Side::L1).into_iter().collect();
            let image: BTreeSet<_> =
                l0.iter().map(|s| bdj2::phi(s, p).map(|x| x.0)).collect::<Result<_, _>>().map_err(e2s)?;
            ensure(image.len() == l0.len() && image == l1, || format!("phi not a bijection at p = {p}, f = {f}"))?;
            for s in &l0 {
                let back = bdj2::phi_inverse(&bdj2::phi(s, p).map_err(e2s)?.0, p).map_err(e2s)?;
                ensure(&back == s, || format!("phi inverse fails at p = {p}, f = {f}"))?;
            }
        }
    }
    Ok(())
}

/// Runs every criterion in order.
pub fn run_all(quick: bool) -> Vec<CheckResult> {
    vec![
        generic_counts(),
        extra_weight_table(),
        jantzen_six_terms(),
        route_agreement(quick),
        bdj_theorem(quick),
        gl2_cross_theory(),
        invariant_sweeps(quick),
    ]
}
