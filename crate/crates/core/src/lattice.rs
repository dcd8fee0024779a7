//! Weights of `GL_n`, the Weyl group `S_n`, the dot action, alcoves and the
//! strong linkage order.
//!
//! Weights are integer vectors `(a_1, ..., a_n)`; the positive root
//! `(i, j)` with `i < j` pairs with a weight as `a_i - a_j`. Permutations act
//! by `w(e_i) = e_{w(i)}`. Alcoves are recorded by their level vector,
//! one integer per positive root.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::util::check_odd_prime;
use crate::{Error, Result};

/// An integral weight `(a_1, ..., a_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn constant(n: usize, c: i64) -> Self {
        Weight(vec![c; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Pairing with the coroot of `e_i - e_j`.
    pub fn pair(&self, i: usize, j: usize) -> i64 {
        self.0[i] - self.0[j]
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// `0 <= a_i - a_{i+1} <= q - 1` for all `i`.
    pub fn is_restricted(&self, q: i64) -> bool {
        self.0.windows(2).all(|w| w[0] - w[1] >= 0 && w[0] - w[1] < q)
    }

    /// Unit vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Weight(v)
    }

    /// The root `e_i - e_j`.
    pub fn root(n: usize, i: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[i] += 1;
        v[j] -= 1;
        Weight(v)
    }

    pub fn reversed(&self) -> Self {
        Weight(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        debug_assert_eq!(self.n(), o.n());
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        debug_assert_eq!(self.n(), o.n());
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Weight> for i64 {
    type Output = Weight;
    fn mul(self, o: &Weight) -> Weight {
        Weight(o.0.iter().map(|a| self * a).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        &self + &o
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        &self - &o
    }
}

/// Rank and characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootCtx {
    pub n: usize,
    pub p: i64,
}

impl RootCtx {
    /// Validates `n >= 2` and that `p` is an odd prime.
    pub fn new(n: usize, p: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("rank n = {n} must be at least 2")));
        }
        check_odd_prime(p)?;
        Ok(RootCtx { n, p })
    }

    /// As [`RootCtx::new`], additionally rejecting `p <= n`.
    pub fn new_alcoves(n: usize, p: i64) -> Result<Self> {
        let ctx = Self::new(n, p)?;
        ctx.require_alcove_weights()?;
        Ok(ctx)
    }

    pub fn require_alcove_weights(&self) -> Result<()> {
        if self.p <= self.n as i64 {
            Err(Error::Degenerate { n: self.n, p: self.p })
        } else {
            Ok(())
        }
    }

    /// `(n-1, ..., 1, 0)`.
    pub fn rho(&self) -> Weight {
        Weight((0..self.n).rev().map(|i| i as i64).collect())
    }

    pub fn positive_roots(&self) -> Vec<(usize, usize)> {
        (0..self.n).tuple_combinations().collect()
    }

    pub fn simple_roots(&self) -> Vec<(usize, usize)> {
        (0..self.n - 1).map(|i| (i, i + 1)).collect()
    }

    /// `<lambda + rho, (e_i - e_j)^vee>`.
    pub fn shifted_pair(&self, lambda: &Weight, i: usize, j: usize) -> i64 {
        lambda.pair(i, j) + (j as i64 - i as i64)
    }
}

/// A permutation of `{0, ..., n-1}`; `self.0[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Validating constructor from an image vector.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation from cycles written with 1-based points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for &x in c {
                if x == 0 || x > n || used[x - 1] {
                    return Err(Error::Invalid(format!("bad cycle {c:?} for n = {n}")));
                }
                used[x - 1] = true;
            }
            for k in 0..c.len() {
                img[c[k] - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        Ok(Perm(img))
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)`, `(2,3)` or `id`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "id" || s == "1" || s == "e" || s == "()" {
            return Ok(Self::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            if !rest_trim.starts_with('(') {
                return Err(Error::Invalid(format!("cannot parse permutation {s:?}")));
            }
            let close = rest_trim
                .find(')')
                .ok_or_else(|| Error::Invalid(format!("unbalanced parentheses in {s:?}")))?;
            let body = &rest_trim[1..close];
            let toks: Vec<&str> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect();
            let points: Vec<usize> = if toks.len() == 1 && toks[0].len() > 1 {
                toks[0]
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Invalid(format!("bad cycle {body:?}")))?
            } else {
                toks.iter()
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Invalid(format!("bad cycle {body:?}")))?
            };
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = rest_trim[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    /// The longest element `i -> n-1-i`.
    pub fn longest(n: usize) -> Self {
        Perm((0..n).rev().collect())
    }

    /// The `n`-cycle `(1 2 ... n)`.
    pub fn coxeter(n: usize) -> Self {
        Perm((0..n).map(|i| (i + 1) % n).collect())
    }

    /// Simple transposition `(i+1 i+2)` in 1-based notation.
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, i + 1);
        Perm(v)
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Perm(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.n()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x] = i;
        }
        Perm(v)
    }

    pub fn sign(&self) -> i64 {
        let mut s = 1;
        for c in self.cycles() {
            if c.len() % 2 == 0 {
                s = -s;
            }
        }
        s
    }

    /// Orbits of `{0..n}` listed as `i, w(i), w^2(i), ...` from their least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut c = vec![i];
            seen[i] = true;
            let mut j = self.0[i];
            while j != i {
                seen[j] = true;
                c.push(j);
                j = self.0[j];
            }
            out.push(c);
        }
        out
    }

    /// `(w lambda)_{w(i)} = lambda_i`.
    pub fn act(&self, lambda: &Weight) -> Weight {
        let mut v = vec![0; lambda.n()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x] = lambda.0[i];
        }
        Weight(v)
    }

    pub fn all(n: usize) -> Vec<Perm> {
        (0..n).permutations(n).map(Perm).collect()
    }

    pub fn power(&self, k: usize) -> Perm {
        let mut r = Perm::identity(self.n());
        for _ in 0..k {
            r = self.compose(&r);
        }
        r
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "id");
        }
        for c in nontrivial {
            write!(f, "({})", c.iter().map(|x| x + 1).join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `w . lambda = w(lambda + rho) - rho`.
pub fn dot_action(w: &Perm, lambda: &Weight, ctx: &RootCtx) -> Weight {
    let rho = ctx.rho();
    &w.act(&(lambda + &rho)) - &rho
}

/// `lambda <= mu`: `mu - lambda` is a non-negative sum of simple roots.
pub fn dominance_leq(lambda: &Weight, mu: &Weight) -> bool {
    let mut s = 0;
    let n = lambda.n();
    for i in 0..n {
        s += mu.0[i] - lambda.0[i];
        if i + 1 < n && s < 0 {
            return false;
        }
    }
    s == 0
}

/// An alcove, given by its level `n_alpha` for each positive root in
/// lexicographic order of `(i, j)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Alcove {
    pub n: usize,
    pub levels: Vec<i64>,
}

impl Alcove {
    /// Level of the root `(i, j)`.
    pub fn level(&self, i: usize, j: usize) -> i64 {
        let idx = root_index(self.n, i, j);
        self.levels[idx]
    }

    pub fn lowest(n: usize) -> Alcove {
        Alcove { n, levels: vec![0; n * (n - 1) / 2] }
    }

    pub fn predicates(&self) -> AlcovePredicates {
        alcove_predicates(self)
    }
}

impl Serialize for Alcove {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let levels: Vec<[i64; 3]> = (0..self.n)
            .tuple_combinations()
            .zip(&self.levels)
            .map(|((i, j), &l)| [i as i64 + 1, j as i64 + 1, l])
            .collect();
        let mut st = s.serialize_struct("Alcove", 1)?;
        st.serialize_field("levels", &levels)?;
        st.end()
    }
}

fn root_index(n: usize, i: usize, j: usize) -> usize {
    // Position of (i, j) in the lexicographic list of pairs i < j.
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Result of locating a weight relative to the affine hyperplanes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlcoveOrWall {
    Alcove(Alcove),
    OnWall { root: (usize, usize), level: i64 },
}

impl AlcoveOrWall {
    pub fn alcove(self) -> Option<Alcove> {
        match self {
            AlcoveOrWall::Alcove(a) => Some(a),
            AlcoveOrWall::OnWall { .. } => None,
        }
    }
}

pub fn alcove_of(lambda: &Weight, ctx: &RootCtx) -> AlcoveOrWall {
    let mut levels = Vec::with_capacity(ctx.n * (ctx.n - 1) / 2);
    for (i, j) in ctx.positive_roots() {
        let x = ctx.shifted_pair(lambda, i, j);
        if x.rem_euclid(ctx.p) == 0 {
            return AlcoveOrWall::OnWall { root: (i, j), level: x / ctx.p };
        }
        levels.push(x.div_euclid(ctx.p));
    }
    AlcoveOrWall::Alcove(Alcove { n: ctx.n, levels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlcovePredicates {
    pub restricted: bool,
    pub dominant: bool,
    pub is_c0: bool,
}

pub fn alcove_predicates(c: &Alcove) -> AlcovePredicates {
    let simple: Vec<i64> = (0..c.n - 1).map(|i| c.level(i, i + 1)).collect();
    AlcovePredicates {
        restricted: simple.iter().all(|&l| l == 0),
        dominant: simple.iter().all(|&l| l >= 0),
        is_c0: c.levels.iter().all(|&l| l == 0),
    }
}

/// An interior weight of `c` with last coordinate fixed, if one exists.
pub fn alcove_point(c: &Alcove, ctx: &RootCtx) -> Option<Weight> {
    let n = ctx.n;
    let p = ctx.p;
    let ranges: Vec<Vec<i64>> = (0..n - 1)
        .map(|i| {
            let l = c.level(i, i + 1);
            ((l * p + 1)..((l + 1) * p)).collect()
        })
        .collect();
    for diffs in ranges.iter().multi_cartesian_product() {
        // v_i - v_{i+1} = diffs[i], v_{n-1} = 0.
        let mut v = vec![0i64; n];
        for i in (0..n - 1).rev() {
            v[i] = v[i + 1] + diffs[i];
        }
        let ok = (0..n).tuple_combinations().all(|(i, j)| {
            let x = v[i] - v[j];
            let l = c.level(i, j);
            l * p < x && x < (l + 1) * p
        });
        if ok {
            let rho = ctx.rho();
            return Some(&Weight(v) - &rho);
        }
    }
    None
}

/// The restricted alcoves, sorted, each with one interior weight.
pub fn restricted_alcove_points(ctx: &RootCtx) -> Result<Vec<(Alcove, Weight)>> {
    ctx.require_alcove_weights()?;
    let n = ctx.n;
    let p = ctx.p;
    let mut found: std::collections::BTreeMap<Alcove, Weight> = Default::default();
    let diffs = (0..n - 1).map(|_| 0..p).multi_cartesian_product();
    for d in diffs {
        let mut v = vec![0i64; n];
        for i in (0..n - 1).rev() {
            v[i] = v[i + 1] + d[i];
        }
        let lambda = Weight(v);
        if let AlcoveOrWall::Alcove(a) = alcove_of(&lambda, ctx) {
            found.entry(a).or_insert(lambda);
        }
    }
    Ok(found.into_iter().collect())
}

pub fn enumerate_restricted_alcoves(ctx: &RootCtx) -> Result<Vec<Alcove>> {
    Ok(restricted_alcove_points(ctx)?.into_iter().map(|(a, _)| a).collect())
}

/// An element `lambda -> w . lambda + t` of the affine Weyl group (with
/// `t` in `pZR`) or of its extension (with `t` in `pX(T)`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineElem {
    pub w: Perm,
    pub t: Weight,
}

impl AffineElem {
    pub fn identity(n: usize) -> Self {
        AffineElem { w: Perm::identity(n), t: Weight::zero(n) }
    }

    pub fn act(&self, lambda: &Weight, ctx: &RootCtx) -> Weight {
        &dot_action(&self.w, lambda, ctx) + &self.t
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineElem) -> AffineElem {
        AffineElem { w: self.w.compose(&other.w), t: &self.w.act(&other.t) + &self.t }
    }

    pub fn inverse(&self) -> AffineElem {
        let wi = self.w.inverse();
        let t = -&wi.act(&self.t);
        AffineElem { w: wi, t }
    }

    /// The reflection `s_{alpha, m p}` for `alpha = e_i - e_j`.
    pub fn reflection(n: usize, i: usize, j: usize, m: i64, p: i64) -> AffineElem {
        AffineElem { w: Perm::transposition(n, i, j), t: (m * p) * &Weight::root(n, i, j) }
    }

    /// Whether the translation part lies in `pZR`.
    pub fn in_affine_weyl_group(&self, p: i64) -> bool {
        self.t.sum() == 0 && self.t.0.iter().all(|x| x % p == 0)
    }
}

/// `lambda` and `mu` lie in the same `W_p`-orbit under the dot action.
pub fn same_wp_orbit(lambda: &Weight, mu: &Weight, ctx: &RootCtx) -> bool {
    if lambda.sum() != mu.sum() {
        return false;
    }
    let rho = ctx.rho();
    let res = |x: &Weight| -> Vec<i64> {
        let mut r: Vec<i64> = (x + &rho).0.iter().map(|a| a.rem_euclid(ctx.p)).collect();
        r.sort_unstable();
        r
    };
    res(lambda) == res(mu)
}

/// The unique point `lambda_0` of `W_p . lambda` in `C_0`, with `u` in `W_p`
/// such that `u . lambda_0 = lambda`. `None` if `lambda` lies on a wall.
pub fn c0_rep(lambda: &Weight, ctx: &RootCtx) -> Option<(Weight, AffineElem)> {
    let n = ctx.n;
    let p = ctx.p;
    let rho = ctx.rho();
    let v = lambda + &rho;
    let res: Vec<i64> = v.0.iter().map(|a| a.rem_euclid(p)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| res[b].cmp(&res[a]));
    for k in 1..n {
        if res[order[k]] == res[order[k - 1]] {
            return None;
        }
    }
    let s: Vec<i64> = order.iter().map(|&i| res[i]).collect();
    let total: i64 = s.iter().sum();
    let kk = (v.sum() - total) / p;
    let t = kk.rem_euclid(n as i64) as usize;
    let c = (kk - t as i64) / n as i64;
    // Positions 0..t carry the t smallest residues plus p.
    let mut v0 = vec![0i64; n];
    let mut src = vec![0usize; n];
    for pos in 0..n {
        let (val, idx) = if pos < t {
            let k = n - t + pos;
            (s[k] + p, order[k])
        } else {
            let k = pos - t;
            (s[k], order[k])
        };
        v0[pos] = val + p * c;
        src[pos] = idx;
    }
    let v0 = Weight(v0);
    let w = Perm(src);
    let tvec = &v - &w.act(&v0);
    let lambda0 = &v0 - &rho;
    Some((lambda0, AffineElem { w, t: tvec }))
}

/// The affine Weyl group element carrying `C_0` onto the alcove of `point`.
pub fn alcove_map(point: &Weight, ctx: &RootCtx) -> Option<AffineElem> {
    c0_rep(point, ctx).map(|(_, u)| u)
}

/// The unique point of `W_p . lambda` in the alcove `u . C_0`.
pub fn orbit_point_via(lambda: &Weight, u: &AffineElem, ctx: &RootCtx) -> Option<Weight> {
    c0_rep(lambda, ctx).map(|(l0, _)| u.act(&l0, ctx))
}

/// Strong linkage: a chain of affine reflections raising `lambda` to `mu`
/// step by step in the dominance order.
pub fn up_arrow(lambda: &Weight, mu: &Weight, ctx: &RootCtx) -> bool {
    if lambda == mu {
        return true;
    }
    if !dominance_leq(lambda, mu) || !same_wp_orbit(lambda, mu, ctx) {
        return false;
    }
    let n = ctx.n;
    let p = ctx.p;
    let roots = ctx.positive_roots();
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(lambda.clone());
    queue.push_back(lambda.clone());
    while let Some(nu) = queue.pop_front() {
        for &(i, j) in &roots {
            let x = ctx.shifted_pair(&nu, i, j);
            let mut m = x.div_euclid(p) + 1;
            loop {
                let k = m * p - x;
                let mut next = nu.clone();
                next.0[i] += k;
                next.0[j] -= k;
                if !dominance_leq(&next, mu) {
                    break;
                }
                if &next == mu {
                    return true;
                }
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
                m += 1;
            }
        }
        debug_assert!(nu.n() == n);
    }
    false
}

/// `C ↑ C'`, decided on an interior weight of `C` and its orbit point in `C'`.
pub fn up_arrow_alcove(c: &Alcove, c2: &Alcove, ctx: &RootCtx) -> Result<bool> {
    ctx.require_alcove_weights()?;
    let lam = alcove_point(c, ctx)
        .ok_or_else(|| Error::Inconsistent(format!("no weight in alcove {c:?}")))?;
    let target = alcove_point(c2, ctx)
        .ok_or_else(|| Error::Inconsistent(format!("no weight in alcove {c2:?}")))?;
    let u = alcove_map(&target, ctx).expect("interior point");
    let lam2 = orbit_point_via(&lam, &u, ctx).expect("interior point");
    Ok(up_arrow(&lam, &lam2, ctx))
}

/// `rho'_sigma`: sum of `e_1 + ... + e_i` over simple `alpha_i` with
/// `sigma^{-1}(alpha_i) < 0`.
pub fn rho_sigma(sigma: &Perm, n: usize) -> Weight {
    let inv = sigma.inverse();
    let mut v = vec![0i64; n];
    for i in 0..n - 1 {
        if inv.image(i) > inv.image(i + 1) {
            for x in v.iter_mut().take(i + 1) {
                *x += 1;
            }
        }
    }
    Weight(v)
}

/// `epsilon'_sigma = sigma^{-1} rho'_sigma`.
pub fn epsilon_sigma(sigma: &Perm, n: usize) -> Weight {
    sigma.inverse().act(&rho_sigma(sigma, n))
}

/// The cyclic subgroup generated by `(1 2 ... n)`, each element checked to
/// satisfy `sigma . C_0 + p rho'_sigma = C_0`.
pub fn w1_subgroup(ctx: &RootCtx) -> Result<Vec<Perm>> {
    if ctx.p < ctx.n as i64 {
        return Err(Error::Degenerate { n: ctx.n, p: ctx.p });
    }
    let c = Perm::coxeter(ctx.n);
    let zero = Weight::zero(ctx.n);
    let c0 = Alcove::lowest(ctx.n);
    let mut out = Vec::new();
    for k in 0..ctx.n {
        let s = c.power(k);
        let img = &dot_action(&s, &zero, ctx) + &(ctx.p * &rho_sigma(&s, ctx.n));
        if alcove_of(&img, ctx) != AlcoveOrWall::Alcove(c0.clone()) {
            return Err(Error::Inconsistent(format!("{s} does not stabilise C_0")));
        }
        out.push(s);
    }
    out.sort();
    Ok(out)
}

/// `n_alpha p + delta < <lambda + rho, alpha^vee> < (n_alpha + 1) p - delta`
/// for every positive root.
pub fn is_deep(lambda: &Weight, delta: i64, c: &Alcove, ctx: &RootCtx) -> bool {
    ctx.positive_roots().into_iter().all(|(i, j)| {
        let x = ctx.shifted_pair(lambda, i, j);
        let l = c.level(i, j);
        l * ctx.p + delta < x && x < (l + 1) * ctx.p - delta
    })
}

/// Dominant weights in `W_p . lambda` that are `<= lambda`, sorted.
pub fn dominant_orbit_points_below(lambda: &Weight, ctx: &RootCtx) -> Vec<Weight> {
    let n = ctx.n;
    let p = ctx.p;
    let rho = ctx.rho();
    let v = lambda + &rho;
    let mut residues: Vec<i64> = v.0.iter().map(|a| a.rem_euclid(p)).collect();
    residues.sort_unstable();
    let prefix: Vec<i64> = lambda
        .0
        .iter()
        .scan(0, |s, &x| {
            *s += x;
            Some(*s)
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        n: usize,
        p: i64,
        residues: &[i64],
        used: &mut [bool],
        cur: &mut [i64],
        prefix: &[i64],
        lambda: &Weight,
        sum_so_far: i64,
        out: &mut Vec<Weight>,
    ) {
        if k == n {
            if sum_so_far == prefix[n - 1] {
                out.push(Weight(cur.iter().enumerate().map(|(i, x)| x - (n - 1 - i) as i64).collect()));
            }
            return;
        }
        // cur holds v = nu + rho; strictly decreasing; nu_k <= lambda_0 for k = 0.
        let shift = (n - 1 - k) as i64;
        let lo = lambda[n - 1] + shift;
        let hi = if k == 0 { lambda[0] + shift } else { cur[k - 1] - 1 };
        for r in 0..n {
            if used[r] || (r > 0 && residues[r] == residues[r - 1] && !used[r - 1]) {
                continue;
            }
            let res = residues[r];
            let mut x = lo + (res - lo).rem_euclid(p);
            while x <= hi {
                let nu_k = x - shift;
                let s = sum_so_far + nu_k;
                if s <= prefix[k] {
                    used[r] = true;
                    cur[k] = x;
                    rec(k + 1, n, p, residues, used, cur, prefix, lambda, s, out);
                    used[r] = false;
                }
                x += p;
            }
        }
    }
    rec(0, n, p, &residues, &mut used, &mut cur, &prefix, lambda, 0, &mut out);
    out.sort();
    out.dedup();
    out
}

/// All dominant `lambda'` with `lambda' ↑ lambda`, sorted lexicographically.
pub fn dominant_below(lambda: &Weight, ctx: &RootCtx) -> Vec<Weight> {
    dominant_orbit_points_below(lambda, ctx)
        .into_iter()
        .filter(|x| up_arrow(x, lambda, ctx))
        .collect()
}

/// The restricted alcoves together with, for each, the dominant alcoves
/// linked below it. Each alcove carries the affine map from `C_0`.
#[derive(Clone, Debug)]
pub struct AlcoveAtlas {
    pub ctx: RootCtx,
    /// Restricted alcoves with their maps from `C_0`.
    pub restricted: Vec<(Alcove, AffineElem)>,
    /// Dominant alcoves `C'` with `C' ↑ C` for some restricted `C`.
    pub dominant: Vec<(Alcove, AffineElem)>,
    /// Pairs `(i, j)`: `dominant[i] ↑ restricted[j]`.
    pub links: Vec<(usize, usize)>,
}

impl AlcoveAtlas {
    pub fn build(ctx: &RootCtx) -> Result<Self> {
        let pts = restricted_alcove_points(ctx)?;
        let mut restricted = Vec::new();
        let mut dominant: Vec<(Alcove, AffineElem)> = Vec::new();
        let mut links = BTreeSet::new();
        for (j, (a, pt)) in pts.iter().enumerate() {
            let u = alcove_map(pt, ctx).expect("interior point");
            restricted.push((a.clone(), u));
            for below in dominant_below(pt, ctx) {
                let b = alcove_of(&below, ctx).alcove().expect("orbit of interior point");
                let i = match dominant.iter().position(|(x, _)| *x == b) {
                    Some(i) => i,
                    None => {
                        dominant.push((b, alcove_map(&below, ctx).expect("interior point")));
                        dominant.len() - 1
                    }
                };
                links.insert((i, j));
            }
        }
        Ok(AlcoveAtlas { ctx: *ctx, restricted, dominant, links: links.into_iter().collect() })
    }

    /// `#{(C', C) : C' dominant, C restricted, C' ↑ C}`.
    pub fn pair_count(&self) -> usize {
        self.links.len()
    }
}
