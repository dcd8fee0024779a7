//! Irreducible representations of `GL_n(F_p)` and `GL_n(F_q)`.
//!
//! Serre weights `F(a_1, ..., a_n)` are labelled by `p`-restricted weights,
//! normalised so that `a_n` lies in `[0, p-2]`. The second half of the
//! module decomposes Weyl modules, and virtual sums of them, into such
//! irreducibles. That needs the characters of the simple `GL_n`-modules with
//! restricted highest weight, which are known here for `n <= 3`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::characters::{weyl_character_arc, FormalCharacter, VirtualWeylSum};
use crate::lattice::{RootCtx, Weight};
use crate::util::ipow;
use crate::{Error, Result};

/// A Serre weight `F(lambda)` for `GL_n(F_p)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SerreWeight {
    pub n: usize,
    pub p: i64,
    pub weight: Weight,
}

impl fmt::Debug for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.weight)
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.weight)
    }
}

impl SerreWeight {
    pub fn coords(&self) -> &[i64] {
        &self.weight.0
    }

    /// `F(a, b, c)` lies in the lower alcove `C_0`.
    pub fn in_lower_alcove(&self) -> bool {
        let w = &self.weight;
        w.0.windows(2).all(|x| x[0] - x[1] < self.p - 1) && w[0] - w[self.n - 1] + (self.n as i64 - 1) < self.p
    }

    /// `F(a, b, c)` lies in the upper restricted alcove (`n = 3`).
    pub fn in_upper_alcove(&self) -> bool {
        self.n == 3
            && is_regular(self)
            && self.weight[0] - self.weight[2] + 2 > self.p
    }
}

/// Shifts a `p`-restricted weight by `(p-1)X^0` so that `a_n` is in `[0, p-2]`.
pub fn canonical_serre(lambda: &Weight, p: i64) -> Result<SerreWeight> {
    if !lambda.is_restricted(p) {
        return Err(Error::Invalid(format!("{lambda} is not {p}-restricted")));
    }
    Ok(canonical_unchecked(lambda, p))
}

fn canonical_unchecked(lambda: &Weight, p: i64) -> SerreWeight {
    let n = lambda.n();
    let shift = lambda[n - 1].rem_euclid(p - 1) - lambda[n - 1];
    SerreWeight { n, p, weight: lambda + &Weight::constant(n, shift) }
}

/// An irreducible representation of `GL_n(F_q)`, `q = p^r`, as its
/// Steinberg factors `lambda_0, ..., lambda_{r-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GLnFqIrred {
    pub n: usize,
    pub p: i64,
    pub r: u32,
    pub factors: Vec<Weight>,
}

impl GLnFqIrred {
    /// `sum lambda_i p^i`.
    pub fn reassemble(&self) -> Weight {
        let mut acc = Weight::zero(self.n);
        for (i, f) in self.factors.iter().enumerate() {
            acc = &acc + &(ipow(self.p, i as u32) * f);
        }
        acc
    }

    /// Dimension for `n = 2`, as the product over the factors.
    pub fn dimension_gl2(&self) -> Option<i64> {
        if self.n != 2 {
            return None;
        }
        Some(self.factors.iter().map(|f| f[0] - f[1] + 1).product())
    }
}

/// The digit decomposition `lambda = sum lambda_i p^i` of a `q`-restricted
/// weight into `p`-restricted weights; the last coordinate rides on `lambda_0`.
pub fn steinberg_factorize(lambda: &Weight, p: i64, r: u32) -> Result<GLnFqIrred> {
    let q = ipow(p, r);
    if !lambda.is_restricted(q) {
        return Err(Error::Invalid(format!("{lambda} is not {q}-restricted")));
    }
    let n = lambda.n();
    let diffs: Vec<i64> = lambda.0.windows(2).map(|x| x[0] - x[1]).collect();
    let mut factors = Vec::with_capacity(r as usize);
    for k in 0..r {
        let pk = ipow(p, k);
        let dk: Vec<i64> = diffs.iter().map(|d| (d / pk) % p).collect();
        let mut v = vec![0i64; n];
        v[n - 1] = if k == 0 { lambda[n - 1] } else { 0 };
        for i in (0..n - 1).rev() {
            v[i] = v[i + 1] + dk[i];
        }
        factors.push(Weight(v));
    }
    Ok(GLnFqIrred { n, p, r, factors })
}

/// `0 <= a_i - a_{i+1} < p - 1` for all `i`.
pub fn is_regular(f: &SerreWeight) -> bool {
    f.weight.0.windows(2).all(|x| x[0] - x[1] < f.p - 1)
}

/// The regular Serre weight congruent to `b` coordinatewise modulo `p - 1`.
pub fn reg_normalize(b: &Weight, p: i64) -> SerreWeight {
    let n = b.n();
    let m = p - 1;
    let mut v = vec![0i64; n];
    v[n - 1] = b[n - 1].rem_euclid(m);
    for i in (0..n - 1).rev() {
        v[i] = v[i + 1] + (b[i] - b[i + 1]).rem_euclid(m);
    }
    SerreWeight { n, p, weight: Weight(v) }
}

/// `R(F(a_1, ..., a_n)) = F(a_n - (n-1), ..., a_2 - 1, a_1)_reg`.
pub fn r_operator(f: &SerreWeight) -> SerreWeight {
    let n = f.n;
    let b: Vec<i64> = (0..n).map(|i| f.weight[n - 1 - i] - (n - 1 - i) as i64).collect();
    reg_normalize(&Weight(b), f.p)
}

/// `F(a, b, c) -> F(c + p - 2, b, a - p + 2)` on regular weights (`n = 3`).
pub fn gl3_reflection(f: &SerreWeight) -> Result<SerreWeight> {
    if f.n != 3 || !is_regular(f) {
        return Err(Error::Invalid(format!("gl3_reflection needs a regular GL3 weight, got {f}")));
    }
    let (a, b, c) = (f.weight[0], f.weight[1], f.weight[2]);
    let p = f.p;
    canonical_serre(&Weight(vec![c + p - 2, b, a - p + 2]), p)
}

/// Dual `(a_1..a_n) -> (-a_n..-a_1)` if requested, then twist by `det^k`.
pub fn dual_twist(f: &SerreWeight, k: i64, dualize: bool) -> SerreWeight {
    let base = if dualize { -&f.weight.reversed() } else { f.weight.clone() };
    canonical_unchecked(&(&base + &Weight::constant(f.n, k)), f.p)
}

fn upper_interior(lambda: &Weight, p: i64) -> bool {
    let (a, b, c) = (lambda[0], lambda[1], lambda[2]);
    a - b <= p - 2 && b - c <= p - 2 && a - c >= p - 1
}

/// The Jordan-Hölder set of `W(lambda)` for restricted `lambda`, `n = 3`.
pub fn weyl_jh_gl3(lambda: &Weight, p: i64) -> Result<BTreeSet<SerreWeight>> {
    if lambda.n() != 3 {
        return Err(Error::Invalid("weyl_jh_gl3 needs n = 3".into()));
    }
    let f = canonical_serre(lambda, p)?;
    let mut out = BTreeSet::new();
    if upper_interior(lambda, p) {
        out.insert(gl3_reflection(&f)?);
    }
    out.insert(f);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Decomposition into irreducible GL_n(F_p)-representations.

type SimpleCache = RwLock<HashMap<(i64, Weight), Arc<FormalCharacter>>>;
type FpCache = RwLock<HashMap<(i64, Weight), Arc<BTreeMap<SerreWeight, i64>>>>;

fn simple_cache() -> &'static SimpleCache {
    static C: OnceLock<SimpleCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn fp_cache() -> &'static FpCache {
    static C: OnceLock<FpCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn weyl_fp_cache() -> &'static FpCache {
    static C: OnceLock<FpCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Splits a dominant weight as `lambda_0 + p lambda_1` with `lambda_0`
/// restricted and `lambda_1` having last coordinate `0`.
fn p_digits(lambda: &Weight, p: i64) -> (Weight, Weight) {
    let n = lambda.n();
    let mut v0 = vec![0i64; n];
    let mut v1 = vec![0i64; n];
    v0[n - 1] = lambda[n - 1];
    for i in (0..n - 1).rev() {
        let d = lambda[i] - lambda[i + 1];
        v0[i] = v0[i + 1] + d % p;
        v1[i] = v1[i + 1] + d / p;
    }
    (Weight(v0), Weight(v1))
}

/// The character of the simple `GL_n`-module `L(lambda)`, `lambda` dominant.
pub fn simple_character(lambda: &Weight, p: i64) -> Result<Arc<FormalCharacter>> {
    if !lambda.is_dominant() {
        return Err(Error::Invalid(format!("simple_character: {lambda} is not dominant")));
    }
    let key = (p, lambda.clone());
    if let Some(c) = simple_cache().read().expect("cache lock").get(&key) {
        return Ok(c.clone());
    }
    let n = lambda.n();
    let ch = if lambda.is_restricted(p) {
        match n {
            2 => (*weyl_character_arc(lambda)?).clone(),
            3 => {
                let w = weyl_character_arc(lambda)?;
                if upper_interior(lambda, p) {
                    let (a, b, c) = (lambda[0], lambda[1], lambda[2]);
                    let low = Weight(vec![c + p - 2, b, a - p + 2]);
                    w.add_scaled(weyl_character_arc(&low)?.as_ref(), -1)
                } else {
                    (*w).clone()
                }
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "simple characters for n = {n} (decomposition numbers unknown)"
                )))
            }
        }
    } else {
        let (l0, l1) = p_digits(lambda, p);
        simple_character(&l0, p)?.mul(&simple_character(&l1, p)?.frobenius(p))
    };
    let ch = Arc::new(ch);
    simple_cache().write().expect("cache lock").insert(key, ch.clone());
    Ok(ch)
}

/// Writes a virtual character as `sum m_lambda ch L(lambda)` by peeling off
/// lexicographically largest dominant weights.
pub fn peel_simples(chi: &FormalCharacter, p: i64) -> Result<BTreeMap<Weight, i64>> {
    let mut dom = chi.dominant_part();
    let mut out = BTreeMap::new();
    while let Some((lam, c)) = dom.iter().next_back().map(|(l, &c)| (l.clone(), c)) {
        let s = simple_character(&lam, p)?;
        for (w, &m) in s.terms.iter() {
            if !w.is_dominant() {
                continue;
            }
            let e = dom.entry(w.clone()).or_insert(0);
            *e -= c * m;
            if *e == 0 {
                dom.remove(w);
            }
        }
        if dom.contains_key(&lam) {
            return Err(Error::Inconsistent(format!("peeling stalled at {lam}")));
        }
        out.insert(lam, c);
    }
    Ok(out)
}

/// The restriction of `L(lambda)` to `GL_n(F_p)`, as multiplicities of
/// Serre weights.
pub fn simple_to_fp(lambda: &Weight, p: i64) -> Result<Arc<BTreeMap<SerreWeight, i64>>> {
    let key = (p, lambda.clone());
    if let Some(c) = fp_cache().read().expect("cache lock").get(&key) {
        return Ok(c.clone());
    }
    let mut out: BTreeMap<SerreWeight, i64> = BTreeMap::new();
    if lambda.is_restricted(p) {
        out.insert(canonical_unchecked(lambda, p), 1);
    } else {
        // L(l0) (x) L(l1)^(1) restricts to L(l0) (x) L(l1) on GL_n(F_p).
        let (l0, l1) = p_digits(lambda, p);
        let prod = simple_character(&l0, p)?.mul(simple_character(&l1, p)?.as_ref());
        for (mu, m) in peel_simples(&prod, p)? {
            for (f, k) in simple_to_fp(&mu, p)?.iter() {
                *out.entry(f.clone()).or_insert(0) += m * k;
            }
        }
        out.retain(|_, m| *m != 0);
    }
    let out = Arc::new(out);
    fp_cache().write().expect("cache lock").insert(key, out.clone());
    Ok(out)
}

/// `[W(nu)]` in the Grothendieck group of `GL_n(F_p)`, `nu` dominant.
pub fn weyl_to_fp(nu: &Weight, p: i64) -> Result<Arc<BTreeMap<SerreWeight, i64>>> {
    let key = (p, nu.clone());
    if let Some(c) = weyl_fp_cache().read().expect("cache lock").get(&key) {
        return Ok(c.clone());
    }
    let ch = weyl_character_arc(nu)?;
    let mut out: BTreeMap<SerreWeight, i64> = BTreeMap::new();
    for (mu, m) in peel_simples(&ch, p)? {
        for (f, k) in simple_to_fp(&mu, p)?.iter() {
            *out.entry(f.clone()).or_insert(0) += m * k;
        }
    }
    out.retain(|_, m| *m != 0);
    let out = Arc::new(out);
    weyl_fp_cache().write().expect("cache lock").insert(key, out.clone());
    Ok(out)
}

/// A virtual sum of Weyl modules in the Grothendieck group of `GL_n(F_p)`.
pub fn decompose_virtual_fp(v: &VirtualWeylSum, p: i64) -> Result<BTreeMap<SerreWeight, i64>> {
    let mut out: BTreeMap<SerreWeight, i64> = BTreeMap::new();
    for (nu, &c) in &v.terms {
        for (f, k) in weyl_to_fp(nu, p)?.iter() {
            *out.entry(f.clone()).or_insert(0) += c * k;
        }
    }
    out.retain(|_, m| *m != 0);
    Ok(out)
}

/// Constituents of a virtual sum that is a genuine representation mod `p`.
pub fn jh_set(v: &VirtualWeylSum, p: i64) -> Result<BTreeSet<SerreWeight>> {
    let dec = decompose_virtual_fp(v, p)?;
    if let Some((f, m)) = dec.iter().find(|(_, &m)| m < 0) {
        return Err(Error::Inconsistent(format!("negative multiplicity {m} of {f}")));
    }
    Ok(dec.into_keys().collect())
}

/// `R(JH(W(nu)))` for an arbitrary weight `nu`, empty when `W(nu) = 0`.
///
/// For a term with negative sign after normalisation the returned set is
/// that of `W(nu_plus)`; the sign is reported alongside.
pub fn rjh_of_weyl_term(nu: &Weight, p: i64) -> Result<(i64, BTreeSet<SerreWeight>)> {
    let ctx = RootCtx { n: nu.n(), p };
    let (s, plus) = crate::characters::normalize_weyl(nu, &ctx);
    let Some(plus) = plus else {
        return Ok((0, BTreeSet::new()));
    };
    let dec = weyl_to_fp(&plus, p)?;
    Ok((s, dec.keys().map(r_operator).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn f(v: &[i64], p: i64) -> SerreWeight {
        canonical_serre(&w(v), p).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(f(&[3, 1, -1], 5).weight, w(&[7, 5, 3]));
        assert_eq!(f(&[2, 1, 0], 5).weight, w(&[2, 1, 0]));
        assert_eq!(f(&[10, 8, 6], 5), f(&[6, 4, 2], 5));
        assert!(canonical_serre(&w(&[5, 0, 0]), 5).is_err());
    }

    #[test]
    fn steinberg_examples() {
        let s = steinberg_factorize(&w(&[4, 1]), 5, 1).unwrap();
        assert_eq!(s.factors, vec![w(&[4, 1])]);
        let s = steinberg_factorize(&w(&[7, 0]), 5, 2).unwrap();
        assert_eq!(s.factors, vec![w(&[2, 0]), w(&[1, 0])]);
        let s = steinberg_factorize(&w(&[6, 5, 0]), 5, 2).unwrap();
        assert_eq!(s.factors, vec![w(&[1, 0, 0]), w(&[1, 1, 0])]);
        assert_eq!(s.reassemble(), w(&[6, 5, 0]));
        assert!(steinberg_factorize(&w(&[25, 0]), 5, 2).is_err());
    }

    #[test]
    fn regularity() {
        assert!(is_regular(&f(&[2, 1, 0], 5)));
        assert!(!is_regular(&f(&[4, 0, 0], 5)));
        assert!(is_regular(&f(&[6, 3, 0], 5)));
    }

    #[test]
    fn reg_normalize_examples() {
        assert_eq!(reg_normalize(&w(&[-2, 1, 4]), 5).weight, w(&[2, 1, 0]));
        assert_eq!(reg_normalize(&w(&[0, 3, 2]), 5).weight, w(&[4, 3, 2]));
        let g = f(&[6, 3, 0], 5);
        assert_eq!(reg_normalize(&g.weight, 5), g);
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_operator(&f(&[4, 2, 0], 5)).weight, w(&[2, 1, 0]));
        assert_eq!(r_operator(&f(&[2, 1, 0], 5)).weight, w(&[6, 4, 2]));
        assert_eq!(r_operator(&f(&[3, 0], 5)).weight, w(&[3, 3]));
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(gl3_reflection(&f(&[2, 1, 0], 5)).unwrap().weight, w(&[7, 5, 3]));
        assert_eq!(gl3_reflection(&f(&[3, 2, 1], 5)).unwrap().weight, w(&[4, 2, 0]));
        assert!(gl3_reflection(&f(&[4, 0, 0], 5)).is_err());
    }

    #[test]
    fn dual_twist_examples() {
        let g = f(&[2, 1, 0], 5);
        assert_eq!(dual_twist(&g, 0, false), g);
        assert_eq!(dual_twist(&g, 0, true).weight, w(&[4, 3, 2]));
        assert_eq!(dual_twist(&g, 4, false), g);
    }

    #[test]
    fn weyl_jh_examples() {
        let s: Vec<_> = weyl_jh_gl3(&w(&[4, 2, 0]), 5).unwrap().into_iter().map(|x| x.weight).collect();
        assert_eq!(s, vec![w(&[3, 2, 1]), w(&[4, 2, 0])]);
        assert_eq!(weyl_jh_gl3(&w(&[2, 1, 0]), 5).unwrap().len(), 1);
        assert_eq!(weyl_jh_gl3(&w(&[4, 0, 0]), 5).unwrap().len(), 1);
    }

    #[test]
    fn rjh_examples() {
        let (s, set) = rjh_of_weyl_term(&w(&[4, 2, 0]), 5).unwrap();
        assert_eq!(s, 1);
        let got: Vec<_> = set.into_iter().map(|x| x.weight).collect();
        assert_eq!(got, vec![w(&[2, 1, 0]), w(&[7, 5, 3])]);
        let (s, set) = rjh_of_weyl_term(&w(&[0, 1, 0]), 5).unwrap();
        assert_eq!((s, set.len()), (0, 0));
        let (s, _) = rjh_of_weyl_term(&w(&[-1, 1, 0]), 5).unwrap();
        assert_eq!(s, -1);
    }

    #[test]
    fn restricted_weyl_modules_decompose_as_expected() {
        // For restricted lambda, [W(lambda)] is the set weyl_jh_gl3 with multiplicity one.
        for p in [5i64, 7] {
            for a in 0..2 * p {
                for b in 0..=a {
                    if a - b >= p || b >= p {
                        continue;
                    }
                    let lam = w(&[a, b, 0]);
                    let dec = weyl_to_fp(&lam, p).unwrap();
                    let want = weyl_jh_gl3(&lam, p).unwrap();
                    assert_eq!(dec.keys().cloned().collect::<BTreeSet<_>>(), want, "{lam}");
                    assert!(dec.values().all(|&m| m == 1));
                }
            }
        }
    }

    #[test]
    fn gl2_symmetric_powers_mod_p() {
        let dec = weyl_to_fp(&w(&[5, 0]), 5).unwrap();
        let got: Vec<_> = dec.iter().map(|(f, &m)| (f.weight.clone(), m)).collect();
        // W(5,0) = L(5,0) + L(4,1) and L(5,0) = L(1,0)^(1) restricts to F(1,0).
        assert_eq!(got, vec![(w(&[1, 0]), 1), (w(&[4, 1]), 1)]);
        // W(6,0) = L(6,0) + L(4,2); L(6,0) = L(1,0) (x) L(1,0)^(1) gives F(2,0) + F(1,1).
        let dec = weyl_to_fp(&w(&[6, 0]), 5).unwrap();
        let got: Vec<_> = dec.iter().map(|(f, &m)| (f.weight.clone(), m)).collect();
        assert_eq!(got, vec![(w(&[1, 1]), 1), (w(&[2, 0]), 1), (w(&[4, 2]), 1)]);
    }
}
