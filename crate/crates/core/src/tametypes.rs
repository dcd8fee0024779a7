//! Tame inertial types and the pairs `(w, mu)` that describe them.
//!
//! A tame type `I_p -> GL_n` that extends to `G_q` is a Frobenius-stable
//! multiset of characters. It is stored as a list of orbits `(d, e)`: the
//! characters `omega_d^{e q^k}`, `0 <= k < d`, where `omega_d` is the
//! fundamental character of niveau `d` over `F_q` and `e` has exact niveau `d`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::lattice::{is_deep, Alcove, Perm, RootCtx, Weight};
use crate::util::{check_odd_prime, divisors, ipow};
use crate::{Error, Result};

/// A pair `(w, mu)` in `W x X(T)`, with `q = p^r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TamePair {
    pub w: Perm,
    pub mu: Weight,
    pub p: i64,
    #[serde(skip_serializing_if = "is_one")]
    pub r: u32,
}

fn one() -> u32 {
    1
}

fn is_one(r: &u32) -> bool {
    *r == 1
}

impl TamePair {
    pub fn new(w: Perm, mu: Weight, p: i64) -> Result<Self> {
        Self::with_r(w, mu, p, 1)
    }

    pub fn with_r(w: Perm, mu: Weight, p: i64, r: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if r == 0 {
            return Err(Error::Invalid("r must be positive".into()));
        }
        if w.n() != mu.n() {
            return Err(Error::Invalid(format!("w acts on {} letters but mu has {} entries", w.n(), mu.n())));
        }
        Ok(TamePair { w, mu, p, r })
    }

    pub fn n(&self) -> usize {
        self.mu.n()
    }

    pub fn q(&self) -> i64 {
        ipow(self.p, self.r)
    }

    /// `sum_k mu_{w^k(i)} q^k` modulo `q^m - 1` for the `w`-orbit `cycle`
    /// listed as `i, w(i), w^2(i), ...`.
    fn orbit_exponent(&self, cycle: &[usize]) -> i64 {
        let q = self.q() as i128;
        let modulus = q.pow(cycle.len() as u32) - 1;
        let mut e: i128 = 0;
        let mut qk: i128 = 1;
        for &i in cycle {
            e += self.mu[i] as i128 * qk;
            qk *= q;
        }
        e.rem_euclid(modulus) as i64
    }
}

/// One Frobenius orbit of characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TameOrbit {
    pub niveau: u32,
    pub exp: i64,
}

impl Ord for TameOrbit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.niveau.cmp(&self.niveau).then(self.exp.cmp(&other.exp))
    }
}

impl PartialOrd for TameOrbit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A tame inertial type in canonical form: every exponent has exact niveau
/// equal to its orbit size and is minimal in its `q`-power orbit; orbits are
/// sorted by decreasing niveau, then exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TameType {
    pub p: i64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub r: u32,
    pub n: usize,
    pub orbits: Vec<TameOrbit>,
}

/// Splits `omega_m^e` into orbits of exact niveau.
fn reduce_orbit(m: u32, e: i64, q: i64) -> (u32, i64, u32) {
    let q = q as i128;
    let big = q.pow(m) - 1;
    let e = (e as i128).rem_euclid(big);
    for d in divisors(m) {
        let small = q.pow(d) - 1;
        let norm = big / small;
        if e % norm == 0 {
            let e2 = e / norm;
            return (d, min_in_orbit(d, e2 as i64, q as i64), m / d);
        }
    }
    unreachable!("d = m always divides")
}

fn min_in_orbit(d: u32, e: i64, q: i64) -> i64 {
    let q = q as i128;
    let modulus = q.pow(d) - 1;
    let mut x = (e as i128).rem_euclid(modulus);
    let mut best = x;
    for _ in 1..d {
        x = (x * q) % modulus;
        best = best.min(x);
    }
    best as i64
}

impl TameType {
    /// Builds the canonical type from arbitrary `(m, e)` data, splitting
    /// exponents that factor through a smaller field.
    pub fn from_orbits(p: i64, r: u32, raw: &[(u32, i64)]) -> Result<Self> {
        check_odd_prime(p)?;
        if r == 0 {
            return Err(Error::Invalid("r must be positive".into()));
        }
        let q = ipow(p, r);
        let mut orbits = Vec::new();
        for &(m, e) in raw {
            if m == 0 {
                return Err(Error::Invalid("niveau must be positive".into()));
            }
            let (d, e2, copies) = reduce_orbit(m, e, q);
            for _ in 0..copies {
                orbits.push(TameOrbit { niveau: d, exp: e2 });
            }
        }
        orbits.sort();
        let n = orbits.iter().map(|o| o.niveau as usize).sum();
        if n == 0 {
            return Err(Error::Invalid("empty tame type".into()));
        }
        Ok(TameType { p, r, n, orbits })
    }

    /// Parses the string form `"2:8,1:0"` (niveau:exponent, comma separated).
    pub fn parse(s: &str, p: i64) -> Result<Self> {
        let mut raw = Vec::new();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (d, e) = part
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("expected niveau:exponent, got {part:?}")))?;
            let d = u32::from_str(d.trim()).map_err(|e| Error::Invalid(format!("bad niveau {d:?}: {e}")))?;
            let e = i64::from_str(e.trim()).map_err(|e| Error::Invalid(format!("bad exponent {e:?}: {e}")))?;
            raw.push((d, e));
        }
        Self::from_orbits(p, 1, &raw)
    }

    pub fn q(&self) -> i64 {
        ipow(self.p, self.r)
    }

    /// The niveau-one type with the given exponents.
    pub fn principal_series(p: i64, exps: &[i64]) -> Result<Self> {
        let raw: Vec<_> = exps.iter().map(|&e| (1, e)).collect();
        Self::from_orbits(p, 1, &raw)
    }
}

impl fmt::Display for TameType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orbits.iter().map(|o| format!("{}:{}", o.niveau, o.exp)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `(nu, sigma) . (w, mu) = (sigma w sigma^{-1}, sigma mu + (q - sigma w sigma^{-1}) nu)`.
pub fn act_pair(nu: &Weight, sigma: &Perm, pair: &TamePair) -> TamePair {
    let w2 = sigma.compose(&pair.w).compose(&sigma.inverse());
    let q = pair.q();
    let mu2 = &(&sigma.act(&pair.mu) + &(q * nu)) - &w2.act(nu);
    TamePair { w: w2, mu: mu2, p: pair.p, r: pair.r }
}

/// Every orbit exponent is primitive over `F_q`.
pub fn is_good(pair: &TamePair) -> bool {
    let q = pair.q() as i128;
    pair.w.cycles().iter().all(|c| {
        let m = c.len() as u32;
        let e = pair.orbit_exponent(c) as i128;
        let big = q.pow(m) - 1;
        divisors(m).into_iter().filter(|&d| d < m).all(|d| e % (big / (q.pow(d) - 1)) != 0)
    })
}

/// `tau(w, mu)` in canonical form.
pub fn tau_of_pair(pair: &TamePair) -> TameType {
    let raw: Vec<(u32, i64)> =
        pair.w.cycles().iter().map(|c| (c.len() as u32, pair.orbit_exponent(c))).collect();
    TameType::from_orbits(pair.p, pair.r, &raw).expect("pair already validated")
}

pub fn tau_iso(a: &TameType, b: &TameType) -> bool {
    a == b
}

/// `tau^vee` (if `dualize`) twisted by `omega^k`.
pub fn tau_transform(tau: &TameType, k: i64, dualize: bool) -> TameType {
    let p = tau.p as i128;
    let raw: Vec<(u32, i64)> = tau
        .orbits
        .iter()
        .map(|o| {
            let big = (tau.q() as i128).pow(o.niveau) - 1;
            let e = if dualize { -(o.exp as i128) } else { o.exp as i128 };
            let tw = (k as i128).rem_euclid(big) * (big / (p - 1));
            (o.niveau, (e + tw).rem_euclid(big) as i64)
        })
        .collect();
    TameType::from_orbits(tau.p, tau.r, &raw).expect("valid type")
}

/// A good pair realising `tau`: consecutive cycles carrying the base-`q`
/// digits of each exponent.
pub fn good_pair_for(tau: &TameType) -> TamePair {
    let q = tau.q();
    let mut images = Vec::with_capacity(tau.n);
    let mut mu = Vec::with_capacity(tau.n);
    let mut start = 0;
    for o in &tau.orbits {
        let d = o.niveau as usize;
        let mut e = o.exp;
        for k in 0..d {
            images.push(if k + 1 == d { start } else { start + k + 1 });
            mu.push(e % q);
            e /= q;
        }
        start += d;
    }
    TamePair { w: Perm(images), mu: Weight(mu), p: tau.p, r: tau.r }
}

/// A box `lo_i <= mu_i <= hi_i` of weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl WeightBox {
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        WeightBox { lo: vec![lo; n], hi: vec![hi; n] }
    }

    fn range(&self, i: usize) -> std::ops::RangeInclusive<i64> {
        self.lo[i]..=self.hi[i]
    }
}

fn sub_multiset(small: &BTreeMap<TameOrbit, usize>, big: &BTreeMap<TameOrbit, usize>) -> bool {
    small.iter().all(|(k, &c)| big.get(k).copied().unwrap_or(0) >= c)
}

/// Exponents on one cycle with the orbit multiset they produce.
type BlockOption = (Vec<i64>, BTreeMap<TameOrbit, usize>);

/// All `(w, mu)` with `mu` in the box and `tau(w, mu) = tau`, sorted.
pub fn pairs_for_tau(tau: &TameType, bx: &WeightBox) -> Vec<TamePair> {
    let n = tau.n;
    if bx.lo.len() != n || bx.hi.len() != n {
        return Vec::new();
    }
    let q = tau.q();
    let mut target: BTreeMap<TameOrbit, usize> = BTreeMap::new();
    for o in &tau.orbits {
        *target.entry(*o).or_default() += 1;
    }
    let mut out = Vec::new();
    for w in Perm::all(n) {
        let cycles = w.cycles();
        // Per cycle: the partial assignments whose orbits fit inside `tau`.
        let mut options: Vec<Vec<BlockOption>> = Vec::new();
        for c in &cycles {
            let mut opts = Vec::new();
            let ranges: Vec<_> = c.iter().map(|&i| bx.range(i)).collect();
            for vals in ranges.into_iter().map(|r| r.collect::<Vec<_>>()).multi_cartesian_product() {
                let (d, e, copies) = reduce_orbit(c.len() as u32, horner(&vals, q), q);
                let mut got = BTreeMap::new();
                got.insert(TameOrbit { niveau: d, exp: e }, copies as usize);
                if sub_multiset(&got, &target) {
                    opts.push((vals, got));
                }
            }
            options.push(opts);
        }
        let mut mu = vec![0i64; n];
        combine(&cycles, &options, 0, &mut BTreeMap::new(), &target, &mut mu, &w, tau, &mut out);
    }
    out.sort();
    out
}

fn horner(vals: &[i64], q: i64) -> i64 {
    let q = q as i128;
    let m = vals.len() as u32;
    let modulus = q.pow(m) - 1;
    let mut e: i128 = 0;
    for &v in vals.iter().rev() {
        e = e * q + v as i128;
    }
    e.rem_euclid(modulus) as i64
}

#[allow(clippy::too_many_arguments)]
fn combine(
    cycles: &[Vec<usize>],
    options: &[Vec<BlockOption>],
    k: usize,
    acc: &mut BTreeMap<TameOrbit, usize>,
    target: &BTreeMap<TameOrbit, usize>,
    mu: &mut Vec<i64>,
    w: &Perm,
    tau: &TameType,
    out: &mut Vec<TamePair>,
) {
    if k == cycles.len() {
        if acc == target {
            out.push(TamePair { w: w.clone(), mu: Weight(mu.clone()), p: tau.p, r: tau.r });
        }
        return;
    }
    for (vals, got) in &options[k] {
        for (o, c) in got {
            *acc.entry(*o).or_default() += c;
        }
        if sub_multiset(acc, target) {
            for (&i, &v) in cycles[k].iter().zip(vals) {
                mu[i] = v;
            }
            combine(cycles, options, k + 1, acc, target, mu, w, tau, out);
        }
        for (o, c) in got {
            let e = acc.get_mut(o).expect("just inserted");
            *e -= c;
            if *e == 0 {
                acc.remove(o);
            }
        }
    }
}

/// A good pair `(w, mu)` with `tau(w, mu) = tau` and `mu` `delta`-deep in
/// `C_0`, if one exists (`q = p`). Weights are taken up to `(p-1)X^0`.
pub fn generic_witness(tau: &TameType, delta: i64) -> Result<Option<TamePair>> {
    if tau.r != 1 {
        return Err(Error::Unsupported("genericity is defined for q = p".into()));
    }
    let ctx = RootCtx::new_alcoves(tau.n, tau.p)?;
    let n = tau.n;
    let p = tau.p;
    let c0 = Alcove::lowest(n);
    let perms = Perm::all(n);
    let mut found = None;
    // mu_n in [0, p-2], gaps g_i >= 0 with sum(g) + n - 1 < p.
    let max_spread = p - n as i64;
    let mut gaps = vec![0i64; n.saturating_sub(1)];
    'outer: loop {
        let spread: i64 = gaps.iter().sum();
        if spread <= max_spread {
            for base in 0..p - 1 {
                let mut v = vec![base; n];
                for i in (0..n - 1).rev() {
                    v[i] = v[i + 1] + gaps[i];
                }
                let mu = Weight(v);
                if !is_deep(&mu, delta, &c0, &ctx) {
                    break;
                }
                for w in &perms {
                    let pair = TamePair { w: w.clone(), mu: mu.clone(), p, r: 1 };
                    if is_good(&pair) && tau_of_pair(&pair) == *tau {
                        found = Some(pair);
                        break 'outer;
                    }
                }
            }
        }
        // Odometer over gaps in [0, max_spread].
        let mut i = 0;
        loop {
            if i == gaps.len() {
                break 'outer;
            }
            gaps[i] += 1;
            if gaps[i] <= max_spread {
                break;
            }
            gaps[i] = 0;
            i += 1;
        }
    }
    Ok(found)
}

/// `tau` is `delta`-generic.
pub fn is_generic(tau: &TameType, delta: i64) -> Result<bool> {
    Ok(generic_witness(tau, delta)?.is_some())
}

/// The cuspidal support of `R_w(mu)` for a good pair: one `(d, e)` per
/// `w`-orbit, `V(tau) = PInd(kappa(theta_1), ..., kappa(theta_r))`.
pub fn cuspidal_support(pair: &TamePair) -> Result<Vec<(u32, i64)>> {
    if !is_good(pair) {
        return Err(Error::Invalid("cuspidal support is only described for good pairs".into()));
    }
    Ok(tau_of_pair(pair).orbits.iter().map(|o| (o.niveau, o.exp)).collect())
}

/// The primitive orbit representatives of exact niveau `d` over `F_q`.
pub fn primitive_orbits(d: u32, q: i64) -> Vec<i64> {
    let big = ipow(q, d) - 1;
    (0..big)
        .filter(|&e| {
            let (d2, e2, _) = reduce_orbit(d, e, q);
            d2 == d && e2 == e
        })
        .collect()
}

/// Every tame type of dimension `n` over `F_p` (`q = p`), sorted.
pub fn all_tame_types(n: usize, p: i64) -> Result<Vec<TameType>> {
    check_odd_prime(p)?;
    let orbits: Vec<TameOrbit> = (1..=n as u32)
        .rev()
        .flat_map(|d| primitive_orbits(d, p).into_iter().map(move |e| TameOrbit { niveau: d, exp: e }))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, left: usize, orbits: &[TameOrbit], cur: &mut Vec<TameOrbit>, p: i64, n: usize, out: &mut Vec<TameType>) {
        if left == 0 {
            let mut o = cur.clone();
            o.sort();
            out.push(TameType { p, r: 1, n, orbits: o });
            return;
        }
        for i in start..orbits.len() {
            let d = orbits[i].niveau as usize;
            if d <= left {
                cur.push(orbits[i]);
                rec(i, left - d, orbits, cur, p, n, out);
                cur.pop();
            }
        }
    }
    rec(0, n, &orbits, &mut cur, p, n, &mut out);
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(n: usize, w: &str, mu: &[i64], p: i64) -> TamePair {
        TamePair::new(Perm::parse(n, w).unwrap(), Weight(mu.to_vec()), p).unwrap()
    }

    #[test]
    fn tame_type_counts() {
        // Niveau-one multisets, then one niveau-2 orbit with a character, then niveau 3.
        assert_eq!(all_tame_types(2, 5).unwrap().len(), 10 + 10);
        assert_eq!(all_tame_types(3, 5).unwrap().len(), 20 + 10 * 4 + 40);
    }

    #[test]
    fn every_type_is_realised_by_a_good_pair() {
        let p = 5;
        let mut seen = std::collections::BTreeSet::new();
        for w in Perm::all(3) {
            for v in (0..3).map(|_| 0..p).multi_cartesian_product() {
                let pair = TamePair::new(w.clone(), Weight(v), p).unwrap();
                if is_good(&pair) {
                    seen.insert(tau_of_pair(&pair));
                }
            }
        }
        let all: std::collections::BTreeSet<_> = all_tame_types(3, p).unwrap().into_iter().collect();
        assert_eq!(seen, all);
    }

    #[test]
    fn act_pair_examples() {
        let x = pair(2, "(1 2)", &[3, 1], 5);
        assert_eq!(act_pair(&Weight::zero(2), &Perm::identity(2), &x), x);
        let y = act_pair(&Weight::zero(2), &Perm::parse(2, "(1 2)").unwrap(), &x);
        assert_eq!(y.mu, Weight(vec![1, 3]));
        let z = act_pair(&Weight(vec![1, 0]), &Perm::identity(2), &x);
        assert_eq!(z.mu, Weight(vec![8, 0]));
        assert_eq!(tau_of_pair(&z), tau_of_pair(&x));
    }

    #[test]
    fn goodness_examples() {
        assert!(is_good(&pair(3, "(1 2 3)", &[1, 0, 0], 5)));
        assert!(!is_good(&pair(3, "(1 2 3)", &[1, 1, 1], 5)));
        assert!(is_good(&pair(3, "id", &[4, 4, 4], 5)));
    }

    #[test]
    fn tau_examples() {
        let t = tau_of_pair(&pair(3, "id", &[7, 2, -1], 5));
        assert_eq!(t.to_string(), "1:2,1:3,1:3");
        let t = tau_of_pair(&pair(3, "(1 2 3)", &[1, 0, 0], 5));
        assert_eq!(t.to_string(), "3:1");
        assert_eq!(tau_of_pair(&pair(2, "(1 2)", &[3, 0], 5)), tau_of_pair(&pair(2, "(1 2)", &[0, 3], 5)));
        // omega_2^{6} = omega_1 twice.
        assert_eq!(tau_of_pair(&pair(2, "(1 2)", &[1, 1], 5)).to_string(), "1:1,1:1");
    }

    #[test]
    fn iso_and_parse() {
        let a = TameType::parse("2:8,1:0", 5).unwrap();
        assert_eq!(a.to_string(), "2:8,1:0");
        assert_eq!(a.n, 3);
        assert!(tau_iso(&TameType::parse("2:16,1:0", 5).unwrap(), &a));
        assert!(!tau_iso(&TameType::parse("1:2,1:3", 5).unwrap(), &TameType::parse("1:2,1:2", 5).unwrap()));
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"p":5,"n":3,"orbits":[{"niveau":2,"exp":8},{"niveau":1,"exp":0}]}"#);
        assert!(TameType::parse("2", 5).is_err());
    }

    #[test]
    fn transform_examples() {
        let a = TameType::parse("2:8,1:0", 5).unwrap();
        assert_eq!(tau_transform(&a, 0, false), a);
        assert_eq!(tau_transform(&TameType::parse("1:3", 5).unwrap(), 2, false).to_string(), "1:1");
        let t = tau_transform(&TameType::parse("2:8", 5).unwrap(), 1, false);
        assert_eq!(t, TameType::parse("2:14", 5).unwrap());
    }

    #[test]
    fn pairs_for_tau_examples() {
        let t = TameType::principal_series(5, &[3, 1, 0]).unwrap();
        let ps = pairs_for_tau(&t, &WeightBox::cube(3, 0, 4));
        assert!(ps.contains(&pair(3, "id", &[3, 1, 0], 5)));
        assert!(ps.contains(&pair(3, "id", &[0, 3, 1], 5)));
        assert!(ps.iter().all(|x| tau_of_pair(x) == t));
        let t = TameType::parse("3:1", 5).unwrap();
        assert!(pairs_for_tau(&t, &WeightBox::cube(3, 0, 4)).contains(&pair(3, "(1 2 3)", &[1, 0, 0], 5)));
        assert!(pairs_for_tau(&t, &WeightBox::cube(3, 2, 2)).is_empty());
    }

    #[test]
    fn pairs_for_tau_matches_brute_force() {
        let t = TameType::parse("2:7,1:2", 5).unwrap();
        let bx = WeightBox::cube(3, -1, 5);
        let mut brute = Vec::new();
        for w in Perm::all(3) {
            for mu in (0..3).map(|_| -1..=5i64).multi_cartesian_product() {
                let x = TamePair { w: w.clone(), mu: Weight(mu), p: 5, r: 1 };
                if tau_of_pair(&x) == t {
                    brute.push(x);
                }
            }
        }
        brute.sort();
        assert_eq!(pairs_for_tau(&t, &bx), brute);
    }

    #[test]
    fn genericity_examples() {
        let t = TameType::principal_series(31, &[20, 10, 0]).unwrap();
        assert!(is_generic(&t, 5).unwrap());
        let w = generic_witness(&t, 5).unwrap().unwrap();
        assert!(is_deep(&w.mu, 5, &Alcove::lowest(3), &RootCtx::new(3, 31).unwrap()));
        let t = TameType::principal_series(11, &[3, 3, 0]).unwrap();
        assert!(!is_generic(&t, 1).unwrap());
        let t = TameType::principal_series(7, &[4, 2, 0]).unwrap();
        assert!(!is_generic(&t, 7).unwrap());
    }

    #[test]
    fn cuspidal_examples() {
        assert_eq!(cuspidal_support(&pair(3, "id", &[2, 1, 0], 5)).unwrap().len(), 3);
        assert_eq!(cuspidal_support(&pair(3, "(1 2 3)", &[1, 0, 0], 5)).unwrap(), vec![(3, 1)]);
        let c = cuspidal_support(&pair(4, "(1 2)(3 4)", &[1, 0, 2, 0], 5)).unwrap();
        assert_eq!(c.iter().map(|x| x.0).collect::<Vec<_>>(), vec![2, 2]);
        assert!(cuspidal_support(&pair(3, "(1 2 3)", &[1, 1, 1], 5)).is_err());
    }

    #[test]
    fn good_pair_round_trip() {
        for s in ["2:8,1:0", "3:1", "1:0,1:0,1:3", "2:13,2:7"] {
            let t = TameType::parse(s, 5).unwrap();
            let x = good_pair_for(&t);
            assert!(is_good(&x));
            assert_eq!(tau_of_pair(&x), t);
        }
    }

    #[test]
    fn deep_implies_good() {
        for n in 2..=3usize {
            for p in [5i64, 7, 11] {
                let ctx = RootCtx::new(n, p).unwrap();
                let c0 = Alcove::lowest(n);
                for mu in (0..n).map(|_| 0..p).multi_cartesian_product() {
                    let mu = Weight(mu);
                    if !is_deep(&mu, n as i64, &c0, &ctx) {
                        continue;
                    }
                    for w in Perm::all(n) {
                        assert!(is_good(&TamePair { w, mu: mu.clone(), p, r: 1 }));
                    }
                }
            }
        }
    }

    fn arb_pair() -> impl Strategy<Value = (TamePair, Weight, Perm)> {
        (2usize..=4, prop::sample::select(vec![3i64, 5, 7]), 1u32..=2).prop_flat_map(|(n, p, r)| {
            (
                prop::collection::vec(-20i64..20, n),
                prop::collection::vec(-5i64..5, n),
                Just(Perm::all(n)),
                0..1000usize,
                0..1000usize,
            )
                .prop_map(move |(mu, nu, perms, a, b)| {
                    let pr = TamePair { w: perms[a % perms.len()].clone(), mu: Weight(mu), p, r };
                    (pr, Weight(nu), perms[b % perms.len()].clone())
                })
        })
    }

    proptest! {
        #[test]
        fn tau_is_orbit_invariant((x, nu, sigma) in arb_pair()) {
            let y = act_pair(&nu, &sigma, &x);
            prop_assert_eq!(tau_of_pair(&y), tau_of_pair(&x));
            prop_assert_eq!(is_good(&y), is_good(&x));
        }

        #[test]
        fn cuspidal_degrees_sum_to_n((x, _nu, _s) in arb_pair()) {
            if let Ok(c) = cuspidal_support(&x) {
                prop_assert_eq!(c.iter().map(|t| t.0 as usize).sum::<usize>(), x.n());
            }
        }

        #[test]
        fn twists_compose((x, _nu, _s) in arb_pair(), k1 in -10i64..10, k2 in -10i64..10) {
            let t = tau_of_pair(&x);
            prop_assert_eq!(tau_transform(&tau_transform(&t, k1, false), k2, false), tau_transform(&t, k1 + k2, false));
            prop_assert_eq!(tau_transform(&tau_transform(&t, 0, true), 0, true), t.clone());
            prop_assert_eq!(t.orbits.iter().map(|o| o.niveau as usize).sum::<usize>(), x.n());
        }
    }
}
