//! Formal characters in `Z[X(T)]`, Weyl characters and Brauer's formula.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::lattice::{RootCtx, Weight};
use crate::{Error, Result};

/// A finite integer combination of formal exponentials `e(lambda)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FormalCharacter {
    pub terms: BTreeMap<Weight, i64>,
}

impl FormalCharacter {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `e(lambda)`.
    pub fn exp(lambda: Weight) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(lambda, 1);
        FormalCharacter { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(it: I) -> Self {
        let mut c = Self::zero();
        for (w, m) in it {
            c.add_term(w, m);
        }
        c
    }

    pub fn add_term(&mut self, w: Weight, m: i64) {
        if m == 0 {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(m);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += m;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Sum of all multiplicities (the dimension, for a genuine character).
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, 1)
    }

    pub fn add_scaled(&self, other: &Self, c: i64) -> Self {
        let mut map: HashMap<&Weight, i64> = HashMap::new();
        for (w, &m) in self.terms.iter() {
            *map.entry(w).or_insert(0) += m;
        }
        for (w, &m) in other.terms.iter() {
            *map.entry(w).or_insert(0) += c * m;
        }
        FormalCharacter {
            terms: map.into_iter().filter(|(_, m)| *m != 0).map(|(w, m)| (w.clone(), m)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        FormalCharacter { terms: self.terms.iter().map(|(w, m)| (w.clone(), c * m)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map: HashMap<Weight, i64> = HashMap::new();
        for (a, &ma) in &self.terms {
            for (b, &mb) in &other.terms {
                *map.entry(a + b).or_insert(0) += ma * mb;
            }
        }
        FormalCharacter { terms: map.into_iter().filter(|(_, m)| *m != 0).collect() }
    }

    /// Multiplication by `e(mu)`.
    pub fn shift(&self, mu: &Weight) -> Self {
        FormalCharacter { terms: self.terms.iter().map(|(w, &m)| (w + mu, m)).collect() }
    }

    /// The image under `e(lambda) -> e(q lambda)`.
    pub fn frobenius(&self, q: i64) -> Self {
        FormalCharacter { terms: self.terms.iter().map(|(w, &m)| (q * w, m)).collect() }
    }

    /// Invariance under permutation of coordinates.
    pub fn is_symmetric(&self) -> bool {
        let mut by_orbit: HashMap<Vec<i64>, (i64, usize)> = HashMap::new();
        for (w, &m) in &self.terms {
            let mut key = w.0.clone();
            key.sort_unstable();
            let e = by_orbit.entry(key).or_insert((m, 0));
            if e.0 != m {
                return false;
            }
            e.1 += 1;
        }
        by_orbit.iter().all(|(key, &(_, count))| count == orbit_size(key))
    }

    /// Multiplicities of the dominant weights.
    pub fn dominant_part(&self) -> BTreeMap<Weight, i64> {
        self.terms.iter().filter(|(w, _)| w.is_dominant()).map(|(w, &m)| (w.clone(), m)).collect()
    }

    /// If the character is a single term `c e(lambda)`, returns it.
    pub fn as_monomial(&self) -> Option<(Weight, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(w, &m)| (w.clone(), m))
        } else {
            None
        }
    }
}

fn orbit_size(sorted: &[i64]) -> usize {
    let n = sorted.len();
    let mut size: usize = (1..=n).product();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && sorted[j] == sorted[i] {
            j += 1;
        }
        size /= (1..=(j - i)).product::<usize>();
        i = j;
    }
    size
}

impl Serialize for FormalCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(&Weight, i64)> = self.terms.iter().map(|(w, &m)| (w, m)).collect();
        let mut st = s.serialize_struct("FormalCharacter", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// `W(lambda) = sign W(lambda_plus)`; sign `0` when `lambda + rho` lies on a wall.
pub fn normalize_weyl(lambda: &Weight, ctx: &RootCtx) -> (i64, Option<Weight>) {
    let rho = ctx.rho();
    let v = lambda + &rho;
    let mut idx: Vec<usize> = (0..v.n()).collect();
    idx.sort_by(|&a, &b| v[b].cmp(&v[a]));
    for k in 1..idx.len() {
        if v[idx[k]] == v[idx[k - 1]] {
            return (0, None);
        }
    }
    // Parity of the sorting permutation.
    let mut sign = 1;
    let mut seen = vec![false; idx.len()];
    for i in 0..idx.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = idx[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    let sorted = Weight(idx.iter().map(|&i| v[i]).collect());
    (sign, Some(&sorted - &rho))
}

/// `prod_{alpha > 0} <lambda + rho, alpha^vee> / <rho, alpha^vee>`.
pub fn weyl_dimension(lambda: &Weight) -> i128 {
    let n = lambda.n();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..n {
        for j in (i + 1)..n {
            num *= (lambda[i] - lambda[j] + (j - i) as i64) as i128;
            den *= (j - i) as i128;
        }
    }
    num / den
}

type CharCache = RwLock<HashMap<Weight, Arc<FormalCharacter>>>;

fn weyl_cache() -> &'static CharCache {
    static CACHE: OnceLock<CharCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The character of the Weyl module `W(lambda)` for dominant `lambda`,
/// by Gelfand-Tsetlin branching.
pub fn weyl_character(lambda: &Weight, _ctx: &RootCtx) -> Result<FormalCharacter> {
    weyl_character_arc(lambda).map(|c| (*c).clone())
}

/// Shared-handle variant of [`weyl_character`].
pub fn weyl_character_arc(lambda: &Weight) -> Result<Arc<FormalCharacter>> {
    if !lambda.is_dominant() {
        return Err(Error::Invalid(format!("weyl_character: {lambda} is not dominant")));
    }
    if let Some(c) = weyl_cache().read().expect("cache lock").get(lambda) {
        return Ok(c.clone());
    }
    let mut memo: HashMap<Vec<i64>, Arc<HashMap<Vec<i64>, i64>>> = HashMap::new();
    let table = gt_branch(&lambda.0, &mut memo);
    let ch = FormalCharacter { terms: table.iter().map(|(w, &m)| (Weight(w.clone()), m)).collect() };
    let ch = Arc::new(ch);
    weyl_cache().write().expect("cache lock").insert(lambda.clone(), ch.clone());
    Ok(ch)
}

fn gt_branch(
    row: &[i64],
    memo: &mut HashMap<Vec<i64>, Arc<HashMap<Vec<i64>, i64>>>,
) -> Arc<HashMap<Vec<i64>, i64>> {
    if let Some(t) = memo.get(row) {
        return t.clone();
    }
    let k = row.len();
    let total: i64 = row.iter().sum();
    let mut out: HashMap<Vec<i64>, i64> = HashMap::new();
    if k == 1 {
        out.insert(vec![row[0]], 1);
    } else {
        // Rows mu of length k-1 with row[i] >= mu[i] >= row[i+1].
        let mut mu = vec![0i64; k - 1];
        fn rec(
            i: usize,
            row: &[i64],
            mu: &mut Vec<i64>,
            total: i64,
            memo: &mut HashMap<Vec<i64>, Arc<HashMap<Vec<i64>, i64>>>,
            out: &mut HashMap<Vec<i64>, i64>,
        ) {
            if i == mu.len() {
                let sub = gt_branch(mu, memo);
                let last = total - mu.iter().sum::<i64>();
                for (w, &m) in sub.iter() {
                    let mut key = w.clone();
                    key.push(last);
                    *out.entry(key).or_insert(0) += m;
                }
                return;
            }
            for x in row[i + 1]..=row[i] {
                mu[i] = x;
                rec(i + 1, row, mu, total, memo, out);
            }
        }
        rec(0, row, &mut mu, total, memo, &mut out);
    }
    let t = Arc::new(out);
    memo.insert(row.to_vec(), t.clone());
    t
}

/// An integer combination `sum c_lambda W(lambda)` over dominant labels.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VirtualWeylSum {
    pub terms: BTreeMap<Weight, i64>,
}

impl VirtualWeylSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Adds `c W(lambda)` after folding `lambda` into the dominant chamber.
    pub fn add_weyl(&mut self, lambda: &Weight, c: i64, ctx: &RootCtx) {
        let (s, plus) = normalize_weyl(lambda, ctx);
        if let Some(l) = plus {
            self.add_dominant(l, s * c);
        }
    }

    pub fn add_dominant(&mut self, lambda: Weight, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_sum(&mut self, other: &VirtualWeylSum, c: i64) {
        for (l, &m) in &other.terms {
            self.add_dominant(l.clone(), c * m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Replaces each `W(lambda)` by its twist by a power of `det^{q-1}` with
    /// `lambda_n` in `[0, q-2]`. Such twists agree on `GL_n(F_q)`.
    pub fn reduce_det_twist(&self, q: i64) -> VirtualWeylSum {
        let mut out = VirtualWeylSum::zero();
        for (l, &c) in &self.terms {
            let shift = l[l.n() - 1].div_euclid(q - 1) * (q - 1);
            out.add_dominant(l - &Weight::constant(l.n(), shift), c);
        }
        out
    }

    /// `sum c_lambda dim W(lambda)`.
    pub fn dimension(&self) -> i128 {
        self.terms.iter().map(|(l, &c)| c as i128 * weyl_dimension(l)).sum()
    }
}

impl Serialize for VirtualWeylSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(&Weight, i64)> = self.terms.iter().map(|(w, &m)| (w, m)).collect();
        let mut st = s.serialize_struct("VirtualWeylSum", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// `ch W(lambda) * chi = sum_mu a_mu ch W(lambda + mu)` for symmetric `chi`.
pub fn brauer_expand(lambda: &Weight, chi: &FormalCharacter, ctx: &RootCtx) -> Result<VirtualWeylSum> {
    if !chi.is_symmetric() {
        return Err(Error::Invalid("brauer_expand: character is not W-symmetric".into()));
    }
    Ok(brauer_expand_unchecked(lambda, chi, ctx))
}

pub(crate) fn brauer_expand_unchecked(
    lambda: &Weight,
    chi: &FormalCharacter,
    ctx: &RootCtx,
) -> VirtualWeylSum {
    let mut out = VirtualWeylSum::zero();
    for (mu, &a) in &chi.terms {
        out.add_weyl(&(lambda + mu), a, ctx);
    }
    out
}

/// `sum c_lambda ch W(lambda)`.
pub fn char_of_virtual(v: &VirtualWeylSum, ctx: &RootCtx) -> Result<FormalCharacter> {
    let mut map: HashMap<Weight, i64> = HashMap::new();
    for (l, &c) in &v.terms {
        let ch = weyl_character_arc(l)?;
        for (w, &m) in ch.terms.iter() {
            *map.entry(w.clone()).or_insert(0) += c * m;
        }
    }
    let _ = ctx;
    Ok(FormalCharacter { terms: map.into_iter().filter(|(_, m)| *m != 0).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn ch(terms: &[(&[i64], i64)]) -> FormalCharacter {
        FormalCharacter::from_terms(terms.iter().map(|(v, m)| (w(v), *m)))
    }

    #[test]
    fn weyl_character_examples() {
        let c2 = RootCtx::new(2, 5).unwrap();
        assert_eq!(weyl_character(&w(&[1, 0]), &c2).unwrap(), ch(&[(&[1, 0], 1), (&[0, 1], 1)]));
        let c3 = RootCtx::new(3, 5).unwrap();
        assert_eq!(
            weyl_character(&w(&[1, 1, 0]), &c3).unwrap(),
            ch(&[(&[1, 1, 0], 1), (&[1, 0, 1], 1), (&[0, 1, 1], 1)])
        );
        let adj = weyl_character(&w(&[2, 1, 0]), &c3).unwrap();
        assert_eq!(adj.mass(), 8);
        assert_eq!(adj.get(&w(&[1, 1, 1])), 2);
        assert!(weyl_character(&w(&[0, 1, 0]), &c3).is_err());
    }

    #[test]
    fn weyl_character_matches_alternant() {
        // Multiply by the Weyl denominator and compare with the alternant.
        let ctx = RootCtx::new(3, 5).unwrap();
        for lam in [[3, 1, 0], [4, 4, -2], [5, 2, 2], [2, 0, -3]] {
            let lam = w(&lam);
            let c = weyl_character(&lam, &ctx).unwrap();
            let mut denom = FormalCharacter::exp(Weight::zero(3));
            for (i, j) in ctx.positive_roots() {
                let mut f = FormalCharacter::exp(Weight::zero(3));
                f.add_term(Weight::root(3, j, i), -1);
                denom = denom.mul(&f);
            }
            let lhs = c.mul(&denom).shift(&ctx.rho());
            let mut rhs = FormalCharacter::zero();
            for s in crate::lattice::Perm::all(3) {
                rhs.add_term(s.act(&(&lam + &ctx.rho())), s.sign());
            }
            assert_eq!(lhs, rhs, "lambda = {lam}");
        }
    }

    #[test]
    fn normalize_examples() {
        let ctx = RootCtx::new(2, 5).unwrap();
        assert_eq!(normalize_weyl(&w(&[0, 1]), &ctx), (0, None));
        assert_eq!(normalize_weyl(&w(&[-1, 1]), &ctx), (-1, Some(w(&[0, 0]))));
        assert_eq!(normalize_weyl(&w(&[3, 1]), &ctx), (1, Some(w(&[3, 1]))));
    }

    #[test]
    fn brauer_examples() {
        let ctx = RootCtx::new(2, 5).unwrap();
        let unit = FormalCharacter::exp(w(&[0, 0]));
        let v = brauer_expand(&w(&[3, 1]), &unit, &ctx).unwrap();
        assert_eq!(v.terms.into_iter().collect::<Vec<_>>(), vec![(w(&[3, 1]), 1)]);
        let std = weyl_character(&w(&[1, 0]), &ctx).unwrap();
        let v = brauer_expand(&w(&[1, 0]), &std, &ctx).unwrap();
        assert_eq!(v.terms.into_iter().collect::<Vec<_>>(), vec![(w(&[1, 1]), 1), (w(&[2, 0]), 1)]);
        let chi = ch(&[(&[1, -1], 1), (&[0, 0], 1), (&[-1, 1], 1)]);
        let v = brauer_expand(&w(&[0, 0]), &chi, &ctx).unwrap();
        assert_eq!(v.terms.clone().into_iter().collect::<Vec<_>>(), vec![(w(&[1, -1]), 1)]);
        assert_eq!(char_of_virtual(&v, &ctx).unwrap(), weyl_character(&w(&[0, 0]), &ctx).unwrap().mul(&chi));
        assert!(brauer_expand(&w(&[0, 0]), &FormalCharacter::exp(w(&[1, 0])), &ctx).is_err());
    }

    #[test]
    fn char_of_virtual_examples() {
        let ctx = RootCtx::new(2, 5).unwrap();
        assert!(char_of_virtual(&VirtualWeylSum::zero(), &ctx).unwrap().is_zero());
        let mut v = VirtualWeylSum::zero();
        v.add_weyl(&w(&[1, 0]), 1, &ctx);
        assert_eq!(char_of_virtual(&v, &ctx).unwrap(), ch(&[(&[1, 0], 1), (&[0, 1], 1)]));
    }

    #[test]
    fn symmetric_detection() {
        assert!(ch(&[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]).is_symmetric());
        assert!(!ch(&[(&[1, 0, 0], 1), (&[0, 1, 0], 1)]).is_symmetric());
        assert!(!ch(&[(&[1, 0], 2), (&[0, 1], 1)]).is_symmetric());
    }

    #[test]
    fn json_shape() {
        let c = ch(&[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"terms":[[[0,1],1],[[1,0],1]]}"#);
    }
}
