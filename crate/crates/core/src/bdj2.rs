//! Serre weights for `GL_2` over `F_q`, `q = p^f`, attached to tame
//! two-dimensional types, and the operators relating them to the reduction
//! of characteristic-zero representations.
//!
//! A weight `F_{m,b}` is `⊗ (Sym^{m_i} ⊗ det^{b_i})^{(p^i)}`; it is stored as
//! the digit vector `m` and `b = sum b_i p^i` modulo `q - 1`, so that
//! `F_{m,b} = F(a, b)` with `a - b = sum m_i p^i`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::modreps::SerreWeight;
use crate::tametypes::TameType;
use crate::util::{check_odd_prime, ipow};
use crate::{Error, Result};

/// The residue field `F_q`, `q = p^f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Gl2Ctx {
    pub p: i64,
    pub f: u32,
}

impl Gl2Ctx {
    pub fn new(p: i64, f: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if f == 0 {
            return Err(Error::Invalid("f must be positive".into()));
        }
        Ok(Gl2Ctx { p, f })
    }

    pub fn q(&self) -> i64 {
        ipow(self.p, self.f)
    }

    fn fu(&self) -> usize {
        self.f as usize
    }

    /// `p^i` for `i` in `Z/f` (or `Z/2f` when `i < 2f`).
    fn pw(&self, i: usize) -> i64 {
        ipow(self.p, i as u32)
    }

    /// Base-`p` digits of `x` in `[0, q - 1]`, least significant first.
    fn digits(&self, mut x: i64) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.fu());
        for _ in 0..self.f {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    fn value(&self, digits: &[i64]) -> i64 {
        digits.iter().enumerate().map(|(i, d)| d * self.pw(i)).sum()
    }

    /// Every Serre weight of `GL_2(F_q)`.
    pub fn all_weights(&self) -> Vec<Gl2Weight> {
        let q = self.q();
        let mut out = Vec::with_capacity((q * (q - 1)) as usize);
        for d in 0..q {
            let m = self.digits(d);
            for b in 0..q - 1 {
                out.push(Gl2Weight { p: self.p, f: self.f, m: m.clone(), b });
            }
        }
        out
    }
}

/// The Serre weight `F_{m,b}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Gl2Weight {
    pub p: i64,
    pub f: u32,
    pub m: Vec<i64>,
    /// `sum b_i p^i` modulo `q - 1`, in `[0, q - 2]`.
    pub b: i64,
}

impl fmt::Debug for Gl2Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Gl2Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}, {})", self.a(), self.b)
    }
}

impl Gl2Weight {
    pub fn new(ctx: &Gl2Ctx, m: Vec<i64>, b: i64) -> Result<Self> {
        if m.len() != ctx.fu() || m.iter().any(|&x| !(0..ctx.p).contains(&x)) {
            return Err(Error::Invalid(format!("digits {m:?} must be {} values in [0, {}]", ctx.f, ctx.p - 1)));
        }
        Ok(Gl2Weight { p: ctx.p, f: ctx.f, m, b: b.rem_euclid(ctx.q() - 1) })
    }

    /// `F(a, b)` with `0 <= a - b <= q - 1`.
    pub fn from_ab(ctx: &Gl2Ctx, a: i64, b: i64) -> Result<Self> {
        let d = a - b;
        if !(0..ctx.q()).contains(&d) {
            return Err(Error::Invalid(format!("F({a}, {b}) needs 0 <= a - b <= q - 1")));
        }
        Gl2Weight::new(ctx, ctx.digits(d), b)
    }

    pub fn ctx(&self) -> Gl2Ctx {
        Gl2Ctx { p: self.p, f: self.f }
    }

    /// `a = b + sum m_i p^i`.
    pub fn a(&self) -> i64 {
        self.b + self.ctx().value(&self.m)
    }

    pub fn b_digits(&self) -> Vec<i64> {
        self.ctx().digits(self.b)
    }

    pub fn dimension(&self) -> i64 {
        self.m.iter().map(|x| x + 1).product()
    }

    /// All `m_i < p - 1`.
    pub fn is_regular(&self) -> bool {
        self.m.iter().all(|&x| x < self.p - 1)
    }

    /// `F ⊗ det^k`.
    pub fn twist(&self, k: i64) -> Gl2Weight {
        Gl2Weight { b: (self.b + k).rem_euclid(self.ctx().q() - 1), ..self.clone() }
    }

    /// The `f = 1` weight as a `GL_2(F_p)` Serre weight.
    pub fn to_serre(&self) -> Result<SerreWeight> {
        if self.f != 1 {
            return Err(Error::Unsupported("only f = 1 weights are GL_2(F_p) weights".into()));
        }
        crate::modreps::canonical_serre(&crate::Weight(vec![self.a(), self.b]), self.p)
    }

    pub fn from_serre(f: &SerreWeight) -> Result<Self> {
        if f.n != 2 {
            return Err(Error::Invalid("expected a GL_2 weight".into()));
        }
        Gl2Weight::from_ab(&Gl2Ctx::new(f.p, 1)?, f.weight[0], f.weight[1])
    }
}

/// A tame type `I -> GL_2` at a prime with residue field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "niveau")]
pub enum Gl2TameType {
    /// `psi^c ⊕ psi^{c2}`, exponents modulo `q - 1` with `c <= c2`.
    #[serde(rename = "1")]
    Niveau1 { c: i64, c2: i64 },
    /// `psi'^gamma ⊕ psi'^{q gamma}` with `gamma` not a multiple of `q + 1`,
    /// stored as the smaller of `gamma`, `q gamma` modulo `q^2 - 1`.
    #[serde(rename = "2")]
    Niveau2 { gamma: i64 },
}

impl Gl2TameType {
    pub fn niveau1(ctx: &Gl2Ctx, c: i64, c2: i64) -> Self {
        let m = ctx.q() - 1;
        let (x, y) = (c.rem_euclid(m), c2.rem_euclid(m));
        Gl2TameType::Niveau1 { c: x.min(y), c2: x.max(y) }
    }

    pub fn niveau2(ctx: &Gl2Ctx, gamma: i64) -> Result<Self> {
        let q = ctx.q() as i128;
        let big = q * q - 1;
        let g = (gamma as i128).rem_euclid(big);
        if g % (q + 1) == 0 {
            return Err(Error::Invalid(format!("gamma = {gamma} factors through the norm; the type has niveau 1")));
        }
        let g2 = (g * q) % big;
        Ok(Gl2TameType::Niveau2 { gamma: g.min(g2) as i64 })
    }

    /// Parses `niv1:c,c'` or `niv2:gamma`.
    pub fn parse(ctx: &Gl2Ctx, s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("expected niv1:c,c' or niv2:gamma, got {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<i64> =
            rest.split(',').map(|x| x.trim().parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        match (kind.trim(), nums.as_slice()) {
            ("niv1", [c, c2]) => Ok(Self::niveau1(ctx, *c, *c2)),
            ("niv2", [g]) => Self::niveau2(ctx, *g),
            _ => Err(bad()),
        }
    }

    /// A tame type for `GL_2` over `F_p` (`f = 1`).
    pub fn from_tame_type(tau: &TameType) -> Result<Self> {
        if tau.n != 2 || tau.r != 1 {
            return Err(Error::Invalid(format!("{tau} is not a GL_2 type over F_p")));
        }
        let ctx = Gl2Ctx::new(tau.p, 1)?;
        match tau.orbits.as_slice() {
            [a, b] => Ok(Self::niveau1(&ctx, a.exp, b.exp)),
            [a] => Self::niveau2(&ctx, a.exp),
            _ => Err(Error::Inconsistent(format!("bad GL_2 type {tau}"))),
        }
    }

    /// `⊗ psi^k` (`psi = psi'^{q+1}` in niveau 2).
    pub fn twist(&self, ctx: &Gl2Ctx, k: i64) -> Self {
        match *self {
            Gl2TameType::Niveau1 { c, c2 } => Self::niveau1(ctx, c + k, c2 + k),
            Gl2TameType::Niveau2 { gamma } => {
                let q = ctx.q();
                let big = q * q - 1;
                let g = (gamma as i128 + (k as i128).rem_euclid(big as i128) * (q as i128 + 1)) % big as i128;
                Self::niveau2(ctx, g as i64).expect("twisting keeps niveau 2")
            }
        }
    }

    /// Every tame type over `F_q`, sorted.
    pub fn all(ctx: &Gl2Ctx) -> Vec<Self> {
        let q = ctx.q();
        let mut out = BTreeSet::new();
        for c in 0..q - 1 {
            for c2 in c..q - 1 {
                out.insert(Self::niveau1(ctx, c, c2));
            }
        }
        for g in 0..q * q - 1 {
            if let Ok(t) = Self::niveau2(ctx, g) {
                out.insert(t);
            }
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for Gl2TameType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gl2TameType::Niveau1 { c, c2 } => write!(f, "niv1:{c},{c2}"),
            Gl2TameType::Niveau2 { gamma } => write!(f, "niv2:{gamma}"),
        }
    }
}

/// Characteristic-zero representation of `GL_2(F_q)` attached to a type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum VpLabel {
    /// `I(chi_1, chi_2)` with Teichmüller exponents.
    PrincipalSeries { c: i64, c2: i64 },
    /// `kappa(chi)` for `chi` of `F_{q^2}^x` with exponent `gamma`.
    Cuspidal { gamma: i64 },
}

impl VpLabel {
    pub fn dimension(&self, ctx: &Gl2Ctx) -> i64 {
        match self {
            VpLabel::PrincipalSeries { .. } => ctx.q() + 1,
            VpLabel::Cuspidal { .. } => ctx.q() - 1,
        }
    }
}

pub fn v_p(rho: &Gl2TameType, ctx: &Gl2Ctx) -> Result<VpLabel> {
    match *rho {
        Gl2TameType::Niveau1 { c, c2 } => Ok(VpLabel::PrincipalSeries { c, c2 }),
        Gl2TameType::Niveau2 { gamma } => {
            let q = ctx.q();
            if gamma % (q + 1) == 0 {
                return Err(Error::Invalid(format!("gamma = {gamma} is not primitive")));
            }
            Ok(VpLabel::Cuspidal { gamma })
        }
    }
}

/// Subsets `J` of `Z/f` as bitmasks.
fn subsets(f: usize) -> impl Iterator<Item = u32> {
    0..(1u32 << f)
}

/// Every weight `F_{m,b}` with `rho ~ diag(prod_J psi_i^{e_i}, prod_{J^c} psi_i^{e_i}) ⊗ psi^t`
/// for some `J`, where `(e, t) = exps(m)`. In niveau 2, `J` runs over subsets
/// of `Z/2f` projecting bijectively onto `Z/f` and `psi_i` becomes `psi_{i'}`.
fn weights_with_shape(rho: &Gl2TameType, ctx: &Gl2Ctx, exps: impl Fn(&[i64]) -> (Vec<i64>, i64)) -> BTreeSet<Gl2Weight> {
    let q = ctx.q();
    let f = ctx.fu();
    let mut out = BTreeSet::new();
    for d in 0..q {
        let m = ctx.digits(d);
        let (e, t) = exps(&m);
        match *rho {
            Gl2TameType::Niveau1 { c, c2 } => {
                let modulus = q - 1;
                for j in subsets(f) {
                    let (mut x1, mut x2) = (0i64, 0i64);
                    for (i, ei) in e.iter().enumerate() {
                        if j >> i & 1 == 1 {
                            x1 += ei * ctx.pw(i);
                        } else {
                            x2 += ei * ctx.pw(i);
                        }
                    }
                    // x1 + t + b = c and x2 + t + b = c2.
                    let b = (c - x1 - t).rem_euclid(modulus);
                    if (x2 + t + b - c2).rem_euclid(modulus) == 0 {
                        out.insert(Gl2Weight { p: ctx.p, f: ctx.f, m: m.clone(), b });
                    }
                }
            }
            Gl2TameType::Niveau2 { gamma } => {
                let big = (q as i128) * (q as i128) - 1;
                for j in subsets(f) {
                    // Bit i set: J contains i + f rather than i.
                    let mut x1: i128 = 0;
                    for (i, ei) in e.iter().enumerate() {
                        let pos = if j >> i & 1 == 1 { i + f } else { i };
                        x1 += *ei as i128 * ctx.pw(pos) as i128;
                    }
                    // x1 + (q + 1)(t + b) = gamma; the conjugate entry then matches.
                    let r = (gamma as i128 - x1).rem_euclid(big);
                    if r % (q as i128 + 1) != 0 {
                        continue;
                    }
                    let b = ((r / (q as i128 + 1)) as i64 - t).rem_euclid(q - 1);
                    out.insert(Gl2Weight { p: ctx.p, f: ctx.f, m: m.clone(), b });
                }
            }
        }
    }
    out
}

/// The weights predicted by Buzzard, Diamond and Jarvis for a tame type.
pub fn w_bdj(rho: &Gl2TameType, ctx: &Gl2Ctx) -> BTreeSet<Gl2Weight> {
    weights_with_shape(rho, ctx, |m| (m.iter().map(|x| x + 1).collect(), 0))
}

/// The Jordan-Hölder constituents of the reduction of `V_p(rho)`, from the
/// congruence description with exponents `p - 1 - m_i` and twist `m_i + b_i`.
pub fn diamond_constituents(rho: &Gl2TameType, ctx: &Gl2Ctx) -> BTreeSet<Gl2Weight> {
    weights_with_shape(rho, ctx, |m| (m.iter().map(|x| ctx.p - 1 - x).collect(), ctx.value(m)))
}

/// The constituents of the reduction of `I(psi^c, psi^{c2})` with
/// multiplicity, by the explicit `(c_J, d_J)` formulas. Subsets `J` giving a
/// digit `-1` contribute nothing.
pub fn diamond_principal_series(c: i64, c2: i64, ctx: &Gl2Ctx) -> Vec<Gl2Weight> {
    let q = ctx.q();
    let f = ctx.fu();
    let n = ctx.digits((c - c2).rem_euclid(q - 1));
    let mut out = Vec::new();
    for j in subsets(f) {
        let in_j = |i: usize| j >> (i % f) & 1 == 1;
        let mut cj = vec![0i64; f];
        let mut dj = vec![0i64; f];
        for i in 0..f {
            let delta = i64::from(in_j((i + f - 1) % f));
            if in_j(i) {
                cj[i] = n[i] + delta - 1;
                dj[i] = 0;
            } else {
                cj[i] = ctx.p - 1 - n[i] - delta;
                dj[i] = n[i] + delta;
            }
        }
        if cj.contains(&-1) {
            continue;
        }
        let b = ctx.value(&dj) + c2;
        out.push(Gl2Weight { p: ctx.p, f: ctx.f, m: cj, b: b.rem_euclid(q - 1) });
    }
    out.sort();
    out
}

/// `R_p(F(a, b)) = F(b + (p - 2) sum p^i, a)` on regular weights.
pub fn r_p(w: &Gl2Weight) -> Result<Gl2Weight> {
    if !w.is_regular() {
        return Err(Error::Invalid(format!("{w} is not regular")));
    }
    let ctx = w.ctx();
    let m = w.m.iter().map(|x| ctx.p - 2 - x).collect();
    Gl2Weight::new(&ctx, m, w.a())
}

/// How the stretch `m_i = p - 1, m_{i+1} = ... = m_{s-1} = p - 2` in `SS(F)`
/// is read when `i = s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StretchReading {
    /// `i = s` means the whole cycle `s, ..., s - 1`, which meets `S`.
    WholeCycle,
    /// `i = s` means the empty stretch, leaving only `m_s = p - 1`.
    Empty,
}

/// Whether `S` ⊂ `Z/f` (bitmask) belongs to `SS(F)`.
fn in_ss(m: &[i64], p: i64, s_mask: u32, require_nonzero: bool, reading: StretchReading) -> bool {
    let f = m.len();
    let in_s = |i: usize| s_mask >> i & 1 == 1;
    (0..f).filter(|&s| in_s(s)).all(|s| {
        if require_nonzero && m[s] == 0 {
            return false;
        }
        (0..f).any(|i| {
            if m[i] != p - 1 {
                return false;
            }
            let len = if i == s {
                match reading {
                    StretchReading::WholeCycle => f,
                    StretchReading::Empty => return true,
                }
            } else {
                (s + f - i) % f
            };
            // Positions i, i+1, ..., i+len-1 = s-1.
            (0..len).all(|k| {
                let x = (i + k) % f;
                !in_s(x) && (k == 0 || m[x] == p - 2)
            })
        })
    })
}

fn ss_sets_with(w: &Gl2Weight, require_nonzero: bool, reading: StretchReading) -> Vec<BTreeSet<usize>> {
    let f = w.m.len();
    subsets(f)
        .filter(|&s| in_ss(&w.m, w.p, s, require_nonzero, reading))
        .map(|s| (0..f).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

/// `SS(F)`: the sets `S` with `m_s != 0` for `s` in `S`, each `s` preceded by a
/// stretch `m_i = p - 1, m_{i+1} = ... = m_{s-1} = p - 2` disjoint from `S`.
pub fn ss_sets(w: &Gl2Weight) -> Vec<BTreeSet<usize>> {
    ss_sets_with(w, true, StretchReading::WholeCycle)
}

/// Which variant of `R_ext` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RextMode {
    /// `SS(F)` as defined.
    Strict,
    /// Without the condition `m_s != 0`.
    Weak,
}

/// `R_ext(F)` with an explicit stretch reading.
pub fn r_ext_with(w: &Gl2Weight, mode: RextMode, reading: StretchReading) -> BTreeSet<Gl2Weight> {
    let ctx = w.ctx();
    let q = ctx.q();
    let f = ctx.fu();
    let mut out = BTreeSet::new();
    for s in ss_sets_with(w, mode == RextMode::Strict, reading) {
        let in_s: i64 = s.iter().map(|&i| ctx.pw(i)).sum();
        let out_s: i64 = (0..f).filter(|i| !s.contains(i)).map(|i| ctx.pw(i)).sum();
        let a2 = w.b - out_s;
        let b2 = (w.a() - in_s).rem_euclid(q - 1);
        let d = (a2 - b2).rem_euclid(q - 1);
        out.insert(Gl2Weight::from_ab(&ctx, b2 + d, b2).expect("difference in range"));
        if d == 0 {
            out.insert(Gl2Weight::from_ab(&ctx, b2 + q - 1, b2).expect("difference in range"));
        }
    }
    out
}

/// `R_ext(F)`: for each `S` in `SS(F)`, every `F(a', b')` with
/// `a' = b - sum_{i not in S} p^i` and `b' = a - sum_{i in S} p^i` mod `q - 1`.
pub fn r_ext(w: &Gl2Weight) -> BTreeSet<Gl2Weight> {
    r_ext_with(w, RextMode::Strict, StretchReading::WholeCycle)
}

/// `R_ext'`: as [`r_ext`] without the condition `m_s != 0`.
pub fn r_ext_prime(w: &Gl2Weight) -> BTreeSet<Gl2Weight> {
    r_ext_with(w, RextMode::Weak, StretchReading::WholeCycle)
}

// ---------------------------------------------------------------------------
// Interval systems.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// The stretch `[[start, start + len - 1]]` in `Z/f` with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub start: usize,
    pub len: usize,
    pub sign: Sign,
}

/// A function `Z/f -> Z` with disjoint signed intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntervalSystem {
    pub values: Vec<i64>,
    pub intervals: Vec<Interval>,
}

/// Which family of interval systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `L_[0,p-1]`, axioms A1-A5.
    L0,
    /// `L_[1,p]`, axioms B1-B4.
    L1,
}

impl IntervalSystem {
    fn f(&self) -> usize {
        self.values.len()
    }

    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        let f = self.f();
        self.intervals.iter().flat_map(move |iv| (0..iv.len).map(move |k| (iv.start + k) % f))
    }

    /// For each point, the index of the interval containing it. `None` if
    /// intervals overlap or are malformed.
    fn owner(&self) -> Option<Vec<Option<usize>>> {
        let f = self.f();
        let mut own = vec![None; f];
        for (idx, iv) in self.intervals.iter().enumerate() {
            if iv.len == 0 || iv.len > f || iv.start >= f {
                return None;
            }
            for k in 0..iv.len {
                let x = (iv.start + k) % f;
                if own[x].is_some() {
                    return None;
                }
                own[x] = Some(idx);
            }
        }
        Some(own)
    }

    fn successor(&self, iv: &Interval) -> usize {
        (iv.start + iv.len) % self.f()
    }

    /// The successors of the positive intervals.
    pub fn positive_successors(&self) -> BTreeSet<usize> {
        self.intervals.iter().filter(|iv| iv.sign == Sign::Plus).map(|iv| self.successor(iv)).collect()
    }

    fn sorted(mut self) -> Self {
        self.intervals.sort();
        self
    }
}

/// Membership in `L_[0,p-1]` (A1-A5) or `L_[1,p]` (B1-B4).
pub fn check_interval_axioms(sys: &IntervalSystem, side: Side, p: i64) -> bool {
    let f = sys.f();
    if f == 0 {
        return false;
    }
    let Some(own) = sys.owner() else { return false };
    let v = &sys.values;
    let inside = |i: usize| own[i].is_some();
    let prev = |i: usize| (i + f - 1) % f;
    let is_start = |i: usize| sys.intervals.iter().any(|iv| iv.start == i);
    // The successor lies in an interval other than `idx`.
    let succ_in_other = |idx: usize, s: usize| own[s].is_some_and(|o| o != idx);
    match side {
        Side::L0 => {
            if v.iter().any(|&x| !(0..p).contains(&x)) {
                return false;
            }
            let a1 = sys.members().all(|i| v[i] == 0 || v[i] == 1);
            let a2 = sys.members().all(|i| (v[i] == 1) == (is_start(i) && inside(prev(i))));
            let a3 = (0..f).all(|i| inside(i) || v[i] != 0 || inside(prev(i)));
            let a45 = sys.intervals.iter().enumerate().all(|(idx, iv)| {
                let s = sys.successor(iv);
                match iv.sign {
                    Sign::Plus => !inside(s) && (0..=p - 2).contains(&v[s]),
                    Sign::Minus => succ_in_other(idx, s) || (2..=p - 1).contains(&v[s]),
                }
            });
            a1 && a2 && a3 && a45
        }
        Side::L1 => {
            if v.iter().any(|&x| !(1..=p).contains(&x)) {
                return false;
            }
            let b1 = sys.members().all(|i| v[i] == p - 1 || v[i] == p);
            let b2 = (0..f).all(|i| is_start(i) == (v[i] == p));
            let b34 = sys.intervals.iter().enumerate().all(|(idx, iv)| {
                let s = sys.successor(iv);
                match iv.sign {
                    Sign::Plus => !inside(s) && (1..=p - 1).contains(&v[s]),
                    Sign::Minus => succ_in_other(idx, s) || (1..=p - 2).contains(&v[s]),
                }
            });
            b1 && b2 && b34
        }
    }
}

/// Every collection of disjoint signed intervals in `Z/f`.
pub fn all_interval_collections(f: usize) -> Vec<Vec<Interval>> {
    // Label each point: 0 outside, 1 start, 2 continuation.
    let mut out = Vec::new();
    let total = 3usize.pow(f as u32);
    for code in 0..total {
        let mut labels = Vec::with_capacity(f);
        let mut c = code;
        for _ in 0..f {
            labels.push(c % 3);
            c /= 3;
        }
        let ok = (0..f).all(|i| labels[i] != 2 || labels[(i + f - 1) % f] != 0);
        if !ok || (labels.contains(&2) && !labels.contains(&1)) {
            continue;
        }
        let starts: Vec<usize> = (0..f).filter(|&i| labels[i] == 1).collect();
        let lens: Vec<usize> = starts
            .iter()
            .map(|&s| 1 + (1..f).take_while(|k| labels[(s + k) % f] == 2).count())
            .collect();
        for signs in 0..(1u32 << starts.len()) {
            let ivs = starts
                .iter()
                .zip(&lens)
                .enumerate()
                .map(|(k, (&start, &len))| Interval {
                    start,
                    len,
                    sign: if signs >> k & 1 == 1 { Sign::Plus } else { Sign::Minus },
                })
                .collect();
            out.push(ivs);
        }
    }
    out
}

/// Every member of `L_[0,p-1]` (or `L_[1,p]`) for the given `f`.
pub fn enumerate_side(f: usize, p: i64, side: Side) -> Vec<IntervalSystem> {
    let range: Vec<i64> = match side {
        Side::L0 => (0..p).collect(),
        Side::L1 => (1..=p).collect(),
    };
    let collections = all_interval_collections(f);
    let mut out = Vec::new();
    let mut values = vec![0usize; f];
    loop {
        let v: Vec<i64> = values.iter().map(|&k| range[k]).collect();
        for ivs in &collections {
            let sys = IntervalSystem { values: v.clone(), intervals: ivs.clone() };
            if check_interval_axioms(&sys, side, p) {
                out.push(sys);
            }
        }
        let mut i = 0;
        loop {
            if i == f {
                out.sort();
                return out;
            }
            values[i] += 1;
            if values[i] < range.len() {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

/// `phi : L_[0,p-1] -> L_[1,p]`. Interval entries become `p` at start points
/// and `p - 1` elsewhere; the successor `a` of an interval becomes `a ± 1`
/// unless it starts another interval. Also returns the successors of the
/// positive intervals, the points where the twist picks up `psi_i^{-1}`.
pub fn phi(sys: &IntervalSystem, p: i64) -> Result<(IntervalSystem, BTreeSet<usize>)> {
    if !check_interval_axioms(sys, Side::L0, p) {
        return Err(Error::Invalid("phi needs a member of L_[0,p-1]".into()));
    }
    let own = sys.owner().expect("checked");
    let mut beta = sys.values.clone();
    for iv in &sys.intervals {
        for k in 0..iv.len {
            beta[(iv.start + k) % sys.f()] = if k == 0 { p } else { p - 1 };
        }
    }
    for iv in &sys.intervals {
        let s = sys.successor(iv);
        if own[s].is_none() {
            beta[s] = match iv.sign {
                Sign::Plus => sys.values[s] + 1,
                Sign::Minus => sys.values[s] - 1,
            };
        }
    }
    let out = IntervalSystem { values: beta, intervals: sys.intervals.clone() }.sorted();
    Ok((out, sys.positive_successors()))
}

/// The inverse of [`phi`].
pub fn phi_inverse(sys: &IntervalSystem, p: i64) -> Result<IntervalSystem> {
    if !check_interval_axioms(sys, Side::L1, p) {
        return Err(Error::Invalid("phi_inverse needs a member of L_[1,p]".into()));
    }
    let f = sys.f();
    let own = sys.owner().expect("checked");
    let mut alpha = sys.values.clone();
    for iv in &sys.intervals {
        for k in 0..iv.len {
            let x = (iv.start + k) % f;
            alpha[x] = i64::from(k == 0 && own[(x + f - 1) % f].is_some());
        }
    }
    for iv in &sys.intervals {
        let s = sys.successor(iv);
        if own[s].is_none() {
            alpha[s] = match iv.sign {
                Sign::Plus => sys.values[s] - 1,
                Sign::Minus => sys.values[s] + 1,
            };
        }
    }
    Ok(IntervalSystem { values: alpha, intervals: sys.intervals.clone() }.sorted())
}

/// Compares the sets `S` in `SS(F_{p-1-alpha, x})` with the sets of
/// successors of positive intervals over members `(alpha, I)` of `L_[0,p-1]`.
pub fn successors_equivalence(alpha: &[i64], p: i64) -> bool {
    let f = alpha.len();
    let m: Vec<i64> = alpha.iter().map(|a| p - 1 - a).collect();
    let from_ss: BTreeSet<BTreeSet<usize>> = subsets(f)
        .filter(|&s| in_ss(&m, p, s, true, StretchReading::WholeCycle))
        .map(|s| (0..f).filter(|&i| s >> i & 1 == 1).collect())
        .collect();
    let from_intervals: BTreeSet<BTreeSet<usize>> = all_interval_collections(f)
        .into_iter()
        .map(|ivs| IntervalSystem { values: alpha.to_vec(), intervals: ivs })
        .filter(|sys| check_interval_axioms(sys, Side::L0, p))
        .map(|sys| sys.positive_successors())
        .collect();
    from_ss == from_intervals
}

// ---------------------------------------------------------------------------
// The comparison theorem.

/// One failure of the comparison theorem.
#[derive(Clone, Debug, Serialize)]
pub struct BdjCounterexample {
    pub rho: String,
    pub part: &'static str,
    pub expected: Vec<String>,
    pub got: Vec<String>,
}

/// Outcome of [`verify_bdj_theorem`].
#[derive(Clone, Debug, Serialize)]
pub struct BdjReport {
    pub p: i64,
    pub f: u32,
    pub mode: RextMode,
    pub checked: usize,
    pub passed: bool,
    pub counterexamples: Vec<BdjCounterexample>,
}

fn labels(s: &BTreeSet<Gl2Weight>) -> Vec<String> {
    s.iter().map(|w| w.to_string()).collect()
}

/// Checks, for every tame type, that the regular predicted weights are
/// `R_p` of the regular constituents, and that all predicted weights are
/// `R_ext` of all constituents.
pub fn verify_bdj_theorem(ctx: &Gl2Ctx, mode: RextMode) -> BdjReport {
    verify_bdj_theorem_with(ctx, mode, StretchReading::WholeCycle)
}

pub fn verify_bdj_theorem_with(ctx: &Gl2Ctx, mode: RextMode, reading: StretchReading) -> BdjReport {
    let types = Gl2TameType::all(ctx);
    let counterexamples: Vec<BdjCounterexample> = types
        .par_iter()
        .flat_map_iter(|rho| {
            let mut bad = Vec::new();
            let bdj = w_bdj(rho, ctx);
            let jh = diamond_constituents(rho, ctx);
            let reg_bdj: BTreeSet<_> = bdj.iter().filter(|w| w.is_regular()).cloned().collect();
            let reg_r: BTreeSet<_> =
                jh.iter().filter(|w| w.is_regular()).map(|w| r_p(w).expect("regular")).collect();
            if reg_bdj != reg_r {
                bad.push(BdjCounterexample {
                    rho: rho.to_string(),
                    part: "i",
                    expected: labels(&reg_bdj),
                    got: labels(&reg_r),
                });
            }
            let ext: BTreeSet<_> = jh.iter().flat_map(|w| r_ext_with(w, mode, reading)).collect();
            if ext != bdj {
                bad.push(BdjCounterexample { rho: rho.to_string(), part: "ii", expected: labels(&bdj), got: labels(&ext) });
            }
            bad
        })
        .collect();
    BdjReport {
        p: ctx.p,
        f: ctx.f,
        mode,
        checked: types.len(),
        passed: counterexamples.is_empty(),
        counterexamples,
    }
}
