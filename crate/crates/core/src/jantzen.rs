//! The Hulsurkar matrix, Jantzen's reduction formula for Deligne-Lusztig
//! representations of `GL_n(F_q)`, and the generic Jordan-Hölder recipe.
//!
//! Throughout, a [`TamePair`] `(w, lambda)` stands for `R_w(lambda)`; the
//! formula is written in terms of `mu = lambda - rho`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::characters::{brauer_expand_unchecked, normalize_weyl, weyl_character_arc, FormalCharacter, VirtualWeylSum};
use crate::lattice::{
    dot_action, epsilon_sigma, is_deep, rho_sigma, same_wp_orbit, up_arrow, Alcove, Perm, RootCtx, Weight,
};
use crate::modreps::{canonical_serre, SerreWeight};
use crate::tametypes::TamePair;
use crate::{Error, Result};

/// Hulsurkar's matrix `det(tau) ch W(-eps'_{w0 sigma} + eps'_tau - rho')`
/// over `W x W` and its inverse `gamma'`.
#[derive(Clone, Debug, Serialize)]
pub struct HulsurkarData {
    pub n: usize,
    /// The elements of `W`, indexing rows and columns.
    pub perms: Vec<Perm>,
    pub entries: Vec<Vec<FormalCharacter>>,
    pub gamma: Vec<Vec<FormalCharacter>>,
    /// An ordering of `W` (as indices) in which `entries` is upper triangular.
    pub ordering: Vec<usize>,
}

fn signed_weyl(lambda: &Weight, ctx: &RootCtx) -> Result<FormalCharacter> {
    match normalize_weyl(lambda, ctx) {
        (_, None) => Ok(FormalCharacter::zero()),
        (s, Some(l)) => Ok(weyl_character_arc(&l)?.scale(s)),
    }
}

fn invert_unit(c: &FormalCharacter) -> Result<FormalCharacter> {
    match c.as_monomial() {
        Some((x, s)) if s == 1 || s == -1 => Ok(FormalCharacter::from_terms([(-&x, s)])),
        _ => Err(Error::Inconsistent("Hulsurkar diagonal entry is not a unit".into())),
    }
}

/// Builds the matrix, finds a triangular ordering and inverts it.
pub fn hulsurkar(ctx: &RootCtx) -> Result<HulsurkarData> {
    let n = ctx.n;
    let perms = Perm::all(n);
    let w0 = Perm::longest(n);
    let rho = ctx.rho();
    let eps: Vec<Weight> = perms.iter().map(|s| epsilon_sigma(s, n)).collect();
    let eps_w0: Vec<Weight> = perms.iter().map(|s| epsilon_sigma(&w0.compose(s), n)).collect();
    let size = perms.len();
    let mut entries = vec![vec![FormalCharacter::zero(); size]; size];
    for i in 0..size {
        for j in 0..size {
            let arg = &(&eps[j] - &eps_w0[i]) - &rho;
            entries[i][j] = signed_weyl(&arg, ctx)?.scale(perms[j].sign());
        }
    }
    let ordering = triangular_ordering(&entries)?;
    let gamma = invert_triangular(&entries, &ordering)?;
    Ok(HulsurkarData { n, perms, entries, gamma, ordering })
}

/// Kahn's algorithm on the support graph `i -> j` for `entries[i][j] != 0`.
fn triangular_ordering(entries: &[Vec<FormalCharacter>]) -> Result<Vec<usize>> {
    let size = entries.len();
    let mut indeg = vec![0usize; size];
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if i != j && !e.is_zero() {
                indeg[j] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..size).filter(|&j| indeg[j] == 0).collect();
    let mut order = Vec::with_capacity(size);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for j in 0..size {
            if i != j && !entries[i][j].is_zero() {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
    }
    if order.len() != size {
        return Err(Error::Inconsistent("Hulsurkar matrix admits no triangular ordering".into()));
    }
    Ok(order)
}

fn invert_triangular(entries: &[Vec<FormalCharacter>], order: &[usize]) -> Result<Vec<Vec<FormalCharacter>>> {
    let size = entries.len();
    let u = |a: usize, b: usize| &entries[order[a]][order[b]];
    let inv_diag: Vec<FormalCharacter> = (0..size).map(|a| invert_unit(u(a, a))).collect::<Result<_>>()?;
    let mut g = vec![vec![FormalCharacter::zero(); size]; size];
    for b in 0..size {
        g[b][b] = inv_diag[b].clone();
        for a in (0..b).rev() {
            let mut acc = FormalCharacter::zero();
            for k in a + 1..=b {
                if !u(a, k).is_zero() && !g[k][b].is_zero() {
                    acc = acc.add(&u(a, k).mul(&g[k][b]));
                }
            }
            g[a][b] = inv_diag[a].mul(&acc).scale(-1);
        }
    }
    let mut gamma = vec![vec![FormalCharacter::zero(); size]; size];
    for a in 0..size {
        for b in 0..size {
            gamma[order[a]][order[b]] = std::mem::take(&mut g[a][b]);
        }
    }
    Ok(gamma)
}

impl HulsurkarData {
    /// `entries * gamma` is the identity.
    pub fn check_inverse(&self) -> bool {
        let size = self.perms.len();
        (0..size).all(|i| {
            (0..size).all(|j| {
                let mut acc = FormalCharacter::zero();
                for k in 0..size {
                    if !self.entries[i][k].is_zero() && !self.gamma[k][j].is_zero() {
                        acc = acc.add(&self.entries[i][k].mul(&self.gamma[k][j]));
                    }
                }
                if i == j {
                    acc == FormalCharacter::exp(Weight::zero(self.n))
                } else {
                    acc.is_zero()
                }
            })
        })
    }

    /// `entries` vanishes below the diagonal in the stored ordering.
    pub fn check_triangular(&self) -> bool {
        let o = &self.ordering;
        (0..o.len()).all(|a| (0..a).all(|b| self.entries[o[a]][o[b]].is_zero()))
    }

    pub fn gamma_is_diagonal(&self) -> bool {
        let size = self.perms.len();
        (0..size).all(|i| (0..size).all(|j| i == j || self.gamma[i][j].is_zero()))
    }

    /// Every diagonal entry is `+-e(x)` with `x` in `X^0`.
    pub fn diagonal_units(&self) -> bool {
        (0..self.perms.len()).all(|i| match self.entries[i][i].as_monomial() {
            Some((x, s)) => s.abs() == 1 && x.0.iter().all(|&a| a == x[0]),
            None => false,
        })
    }
}

type HulsurkarCache = Mutex<HashMap<usize, Arc<HulsurkarData>>>;

/// The Hulsurkar data for `GL_n`, computed once per `n`.
pub fn hulsurkar_cached(n: usize) -> Result<Arc<HulsurkarData>> {
    static CACHE: OnceLock<HulsurkarCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().expect("cache lock").get(&n) {
        return Ok(d.clone());
    }
    // Any odd prime works: the matrix does not depend on `p`.
    let ctx = RootCtx::new(n, 3)?;
    let d = Arc::new(hulsurkar(&ctx)?);
    cache.lock().expect("cache lock").insert(n, d.clone());
    Ok(d)
}

/// `sum_{sigma, tau} gamma'_{sigma,tau} W(sigma . (mu - w eps'_{w0 tau}) + q rho'_sigma)`
/// with `mu = lambda - rho`, expanded by Brauer's formula: the reduction of
/// `R_w(lambda)` as a virtual sum of Weyl modules.
pub fn jantzen_virtual(pair: &TamePair) -> Result<VirtualWeylSum> {
    let data = hulsurkar_cached(pair.n())?;
    jantzen_virtual_with(&data, pair)
}

/// [`jantzen_virtual`] with explicitly supplied Hulsurkar data.
pub fn jantzen_virtual_with(data: &HulsurkarData, pair: &TamePair) -> Result<VirtualWeylSum> {
    let n = pair.n();
    if data.n != n {
        return Err(Error::Invalid(format!("Hulsurkar data for n = {} used with n = {n}", data.n)));
    }
    let ctx = RootCtx::new(n, pair.p)?;
    let q = pair.q();
    let w0 = Perm::longest(n);
    let mu = &pair.mu - &ctx.rho();
    let shifted: Vec<Weight> =
        data.perms.iter().map(|t| &mu - &pair.w.act(&epsilon_sigma(&w0.compose(t), n))).collect();
    let mut out = VirtualWeylSum::zero();
    for (i, sigma) in data.perms.iter().enumerate() {
        let lift = q * &rho_sigma(sigma, n);
        for (j, g) in data.gamma[i].iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let kappa = &dot_action(sigma, &shifted[j], &ctx) + &lift;
            out.add_sum(&brauer_expand_unchecked(&kappa, g, &ctx), 1);
        }
    }
    Ok(out)
}

/// `dim R_w(lambda) = prod_{i=1}^n (q^i - 1) / prod_{orbits} (q^{d_j} - 1)`.
pub fn dl_dimension(w: &Perm, q: i64) -> i128 {
    let q = q as i128;
    let num: i128 = (1..=w.n() as u32).map(|i| q.pow(i) - 1).product();
    let den: i128 = w.cycles().iter().map(|c| q.pow(c.len() as u32) - 1).product();
    num / den
}

/// The Jordan-Hölder constituents of the reduction of `R_w(lambda)` for
/// `lambda - rho` deep in `C_0`, by the generic recipe.
#[derive(Clone, Debug, Serialize)]
pub struct GenericJh {
    pub weights: BTreeSet<SerreWeight>,
    /// Depth requested of `lambda - rho` in `C_0`.
    pub delta: i64,
    /// `false` when the input is not `delta`-deep: no correctness guarantee.
    pub deep: bool,
    /// Final bound on `|nu|_inf`; no contributing `nu` lies on its boundary.
    pub nu_bound: i64,
}

/// All restricted `lambda` with `sigma . (mu + (w - p) nu) ↑ w0 . (lambda - p rho)`
/// for some `sigma`, `nu` making the left side dominant (`q = p`).
pub fn generic_jh(pair: &TamePair, delta: i64) -> Result<GenericJh> {
    if pair.r != 1 {
        return Err(Error::Unsupported("the generic recipe needs q = p".into()));
    }
    let n = pair.n();
    let p = pair.p;
    let ctx = RootCtx::new_alcoves(n, p)?;
    let rho = ctx.rho();
    let mu = &pair.mu - &rho;
    let deep = is_deep(&mu, delta, &Alcove::lowest(n), &ctx);
    let w0 = Perm::longest(n);
    // Shifting nu by X^0 only twists by det^{p-1}, so sum(nu) runs over 0..n.
    // Each sum pins the sum of lambda.
    let targets: Vec<Vec<(Weight, Weight)>> = (0..n as i64)
        .map(|s| {
            let total = mu.sum() + (1 - p) * s + p * rho.sum();
            restricted_with_sum(n, p, total)
                .into_iter()
                .map(|l| {
                    let z = dot_action(&w0, &(&l - &(p * &rho)), &ctx);
                    (l, z)
                })
                .collect()
        })
        .collect();
    let perms = Perm::all(n);
    let mut bound = n as i64;
    loop {
        let mut found = BTreeSet::new();
        let mut touches = false;
        for nu in nu_box(n, bound) {
            let base = &(&mu + &pair.w.act(&nu)) - &(p * &nu);
            let tg = &targets[nu.sum() as usize];
            for sigma in &perms {
                let y = dot_action(sigma, &base, &ctx);
                if !y.is_dominant() {
                    continue;
                }
                for (l, z) in tg {
                    if same_wp_orbit(&y, z, &ctx) && up_arrow(&y, z, &ctx) {
                        found.insert(canonical_serre(l, p)?);
                        if nu.0.iter().any(|x| x.abs() == bound) {
                            touches = true;
                        }
                    }
                }
            }
        }
        if !touches {
            return Ok(GenericJh { weights: found, delta, deep, nu_bound: bound });
        }
        bound += 1;
        if bound > 4 * n as i64 + 4 {
            return Err(Error::Inconsistent("generic recipe: nu enumeration does not stabilise".into()));
        }
    }
}

fn restricted_with_sum(n: usize, p: i64, total: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut gaps = vec![0i64; n - 1];
    loop {
        // lambda_i = lambda_n + sum_{k >= i} gaps[k].
        let offset: i64 = (0..n).map(|i| gaps[i..].iter().sum::<i64>()).sum();
        if (total - offset).rem_euclid(n as i64) == 0 {
            let last = (total - offset) / n as i64;
            let v: Vec<i64> = (0..n).map(|i| last + gaps[i..].iter().sum::<i64>()).collect();
            out.push(Weight(v));
        }
        let mut i = 0;
        loop {
            if i == gaps.len() {
                return out;
            }
            gaps[i] += 1;
            if gaps[i] < p {
                break;
            }
            gaps[i] = 0;
            i += 1;
        }
    }
}

/// `nu` with `|nu|_inf <= b` and `0 <= sum(nu) < n`.
fn nu_box(n: usize, b: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut v = vec![-b; n - 1];
    loop {
        let s: i64 = v.iter().sum();
        for t in 0..n as i64 {
            if (t - s).abs() <= b {
                let mut full = v.clone();
                full.push(t - s);
                out.push(Weight(full));
            }
        }
        let mut i = 0;
        loop {
            if i == v.len() {
                return out;
            }
            v[i] += 1;
            if v[i] <= b {
                break;
            }
            v[i] = -b;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modreps::decompose_virtual_fp;
    use crate::tametypes::{act_pair, is_good};
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn pair(n: usize, perm: &str, lambda: &[i64], p: i64) -> TamePair {
        TamePair::new(Perm::parse(n, perm).unwrap(), w(lambda), p).unwrap()
    }

    fn sum(ctx: &RootCtx, terms: &[&[i64]]) -> VirtualWeylSum {
        let mut v = VirtualWeylSum::zero();
        for t in terms {
            v.add_weyl(&w(t), 1, ctx);
        }
        v
    }

    #[test]
    fn hulsurkar_gl2_by_hand() {
        let h = hulsurkar_cached(2).unwrap();
        let id = h.perms.iter().position(|x| x.is_identity()).unwrap();
        let s = 1 - id;
        assert_eq!(h.entries[id][id], FormalCharacter::exp(w(&[-1, -1])));
        assert_eq!(h.entries[s][s], FormalCharacter::exp(w(&[0, 0])));
        assert_eq!(h.gamma[id][id], FormalCharacter::exp(w(&[1, 1])));
        assert_eq!(h.gamma[s][s], FormalCharacter::exp(w(&[0, 0])));
        assert!(h.gamma_is_diagonal());
    }

    #[test]
    fn hulsurkar_structure() {
        for n in 2..=4 {
            let h = hulsurkar_cached(n).unwrap();
            assert!(h.check_inverse(), "n = {n}");
            assert!(h.check_triangular(), "n = {n}");
            assert!(h.diagonal_units(), "n = {n}");
            assert_eq!(h.gamma_is_diagonal(), n <= 3, "n = {n}");
        }
    }

    #[test]
    fn gl2_principal_series() {
        let ctx = RootCtx::new(2, 7).unwrap();
        for m in 0..7 {
            let got = jantzen_virtual(&pair(2, "id", &[m, 0], 7)).unwrap();
            assert_eq!(got, sum(&ctx, &[&[m, 0], &[6, m]]), "m = {m}");
            assert_eq!(got.dimension(), 8);
        }
    }

    #[test]
    fn gl3_principal_series_six_terms() {
        for p in [5i64, 7] {
            let ctx = RootCtx::new(3, p).unwrap();
            for i in 0..2 * p {
                for j in 0..=i {
                    for k in 0..=j {
                        if i - k > p - 1 {
                            continue;
                        }
                        let expect = sum(
                            &ctx,
                            &[
                                &[k + p - 1, j, i - p + 1],
                                &[i, k, j - p + 1],
                                &[j + p - 1, i, k],
                                &[i, j, k],
                                &[j, k, i - p + 1],
                                &[k + p - 1, i, j],
                            ],
                        );
                        let got = jantzen_virtual(&pair(3, "id", &[i, j, k], p)).unwrap();
                        assert_eq!(got.reduce_det_twist(p), expect.reduce_det_twist(p));
                    }
                }
            }
        }
    }

    #[test]
    fn gl3_cuspidal_six_terms() {
        for p in [5i64, 7] {
            let ctx = RootCtx::new(3, p).unwrap();
            for i in 0..2 * p {
                for j in 0..i {
                    for k in 0..=j {
                        if i - k > p {
                            continue;
                        }
                        let expect = sum(
                            &ctx,
                            &[
                                &[k + p - 1, j, i - p + 1],
                                &[i - 1, k, j - p + 2],
                                &[j + p - 1, i - 1, k + 1],
                                &[i - 2, j + 1, k + 1],
                                &[j - 1, k + 1, i - p + 1],
                                &[k + p - 2, i, j + 1],
                            ],
                        );
                        let got = jantzen_virtual(&pair(3, "(1 2 3)", &[i, j, k], p)).unwrap();
                        assert_eq!(got.reduce_det_twist(p), expect.reduce_det_twist(p), "{i} {j} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn fault_injection_breaks_mass() {
        let mut h = (*hulsurkar_cached(3).unwrap()).clone();
        let x = pair(3, "id", &[4, 2, 0], 7);
        assert_eq!(jantzen_virtual_with(&h, &x).unwrap().dimension(), dl_dimension(&x.w, 7));
        h.gamma[0][0] = h.gamma[0][0].scale(2);
        assert_ne!(jantzen_virtual_with(&h, &x).unwrap().dimension(), dl_dimension(&x.w, 7));
    }

    #[test]
    fn generic_counts() {
        let g = generic_jh(&pair(2, "id", &[9, 2], 11), 2).unwrap();
        assert!(g.deep);
        assert_eq!(g.weights.len(), 2);
        for perm in ["id", "(1 2)", "(1 2 3)"] {
            let g = generic_jh(&pair(3, perm, &[9, 5, 1], 13), 3).unwrap();
            assert!(g.deep);
            assert_eq!(g.weights.len(), 9, "w = {perm}");
        }
    }

    #[test]
    fn generic_matches_exact_gl3() {
        for perm in ["id", "(1 2)", "(1 2 3)", "(1 3 2)"] {
            let x = pair(3, perm, &[8, 5, 1], 11);
            assert!(is_good(&x));
            let g = generic_jh(&x, 3).unwrap();
            let exact = decompose_virtual_fp(&jantzen_virtual(&x).unwrap(), 11).unwrap();
            let exact: BTreeSet<_> = exact.into_keys().collect();
            assert_eq!(g.weights, exact, "w = {perm}");
        }
    }

    fn arb_pair(n: usize) -> impl Strategy<Value = (TamePair, Weight, Perm)> {
        (prop::sample::select(vec![5i64, 7, 11]), 0..1000usize, 0..1000usize).prop_flat_map(move |(p, a, b)| {
            (prop::collection::vec(0..p, n), prop::collection::vec(-2i64..=2, n)).prop_map(move |(lam, nu)| {
                let perms = Perm::all(n);
                let x = TamePair { w: perms[a % perms.len()].clone(), mu: Weight(lam), p, r: 1 };
                (x, Weight(nu), perms[b % perms.len()].clone())
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mass_is_dl_dimension_gl3((x, _nu, _s) in arb_pair(3)) {
            let v = jantzen_virtual(&x).unwrap();
            prop_assert_eq!(v.dimension(), dl_dimension(&x.w, x.p));
        }

        #[test]
        fn mass_is_dl_dimension_gl2((x, _nu, _s) in arb_pair(2), r in 1u32..=2) {
            let x = TamePair { r, ..x };
            let v = jantzen_virtual(&x).unwrap();
            prop_assert_eq!(v.dimension(), dl_dimension(&x.w, x.q()));
        }

        #[test]
        fn reduction_is_orbit_invariant((x, nu, sigma) in arb_pair(3)) {
            let y = act_pair(&nu, &sigma, &x);
            let a = decompose_virtual_fp(&jantzen_virtual(&x).unwrap(), x.p).unwrap();
            let b = decompose_virtual_fp(&jantzen_virtual(&y).unwrap(), x.p).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
