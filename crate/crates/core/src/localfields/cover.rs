//! Residue-class covers of X(Q_p) for X: w² = A x⁶ + B y⁶ + C z⁶ with
//! integer coefficients, local solubility witnesses, and the generic
//! adaptive refinement used to certify invariant value sets.
//!
//! Points are normalized in P²: chart j fixes coordinate j to 1 and forces
//! the coordinates before it into pZ_p. A ball of depth k fixes the other two
//! coordinates modulo p^k.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::padic::{is_square_rational, ppow, PadicNumber};
use super::symbols::Place;
use crate::error::{Error, Result};
use crate::exact::rational::Rational;
use crate::geometry::Surface;

/// Digits carried for exact inputs (coefficients, fixed coordinates).
const EXACT: u32 = 200;

/// Integral diagonal sextic surface data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntSurface {
    #[serde(with = "crate::exact::decimal")]
    pub a: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub b: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub c: BigInt,
}

impl IntSurface {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        IntSurface { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn from_surface(s: &Surface) -> Result<Self> {
        let int = |q: &Rational| {
            if q.is_integer() {
                Ok(q.numer().clone())
            } else {
                Err(Error::Degenerate(format!("non-integral coefficient {}", q)))
            }
        };
        Ok(IntSurface {
            a: int(&s.a)?,
            b: int(&s.b)?,
            c: int(&s.c)?,
        })
    }

    pub fn to_surface(&self) -> Surface {
        Surface {
            a: Rational::from_integer(self.a.clone()),
            b: Rational::from_integer(self.b.clone()),
            c: Rational::from_integer(self.c.clone()),
        }
    }

    pub fn rhs(&self, x: &BigInt, y: &BigInt, z: &BigInt) -> BigInt {
        let p6 = |t: &BigInt| num_traits::pow(t.clone(), 6);
        &self.a * p6(x) + &self.b * p6(y) + &self.c * p6(z)
    }

    pub fn rhs_padic(&self, x: &PadicNumber, y: &PadicNumber, z: &PadicNumber) -> PadicNumber {
        let p = &x.p;
        let coef = |n: &BigInt| PadicNumber::from_int_mod(n, p, EXACT as i64);
        coef(&self.a)
            .mul(&x.pow(6))
            .add(&coef(&self.b).mul(&y.pow(6)))
            .add(&coef(&self.c).mul(&z.pow(6)))
    }
}

/// A ball of primitive points in one chart of P²(Z_p).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ball {
    pub chart: u8,
    #[serde(with = "crate::exact::decimal::array3")]
    pub center: [BigInt; 3],
    pub k: u32,
}

impl Ball {
    pub fn coords(&self, p: &BigInt) -> [PadicNumber; 3] {
        let mk = |j: usize| {
            if j == self.chart as usize {
                PadicNumber::one(p, EXACT)
            } else {
                PadicNumber::from_int_mod(&self.center[j], p, self.k as i64)
            }
        };
        [mk(0), mk(1), mk(2)]
    }

    pub fn children(&self, p: &BigInt) -> Vec<Ball> {
        let free: Vec<usize> = (0..3).filter(|&j| j != self.chart as usize).collect();
        let step = ppow(p, self.k);
        let pu = p.to_u64().expect("cover primes are small");
        let mut out = Vec::with_capacity((pu * pu) as usize);
        for d0 in 0..pu {
            for d1 in 0..pu {
                let mut c = self.center.clone();
                c[free[0]] += &step * d0;
                c[free[1]] += &step * d1;
                out.push(Ball {
                    chart: self.chart,
                    center: c,
                    k: self.k + 1,
                });
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let names = ["x", "y", "z"];
        let parts: Vec<String> = (0..3)
            .map(|j| {
                if j == self.chart as usize {
                    format!("{}=1", names[j])
                } else {
                    format!("{}={}", names[j], self.center[j])
                }
            })
            .collect();
        format!("{} (mod p^{})", parts.join(","), self.k)
    }
}

/// The p² + p + 1 balls of depth 1.
pub fn initial_balls(p: &BigInt) -> Vec<Ball> {
    let pu = p.to_u64().expect("cover primes are small");
    let mut out = Vec::new();
    for chart in 0..3u8 {
        let ranges: Vec<u64> = (0..3)
            .map(|j| if j < chart as usize { 1 } else if j == chart as usize { 1 } else { pu })
            .collect();
        for a in 0..ranges[0] {
            for b in 0..ranges[1] {
                for c in 0..ranges[2] {
                    let mut center = [BigInt::from(a), BigInt::from(b), BigInt::from(c)];
                    center[chart as usize] = BigInt::one();
                    out.push(Ball { chart, center, k: 1 });
                }
            }
        }
    }
    out
}

/// What the ball says about w.
#[derive(Clone, Debug)]
pub enum WStatus {
    /// R is a non-square on the whole ball
    Empty,
    /// R is a nonzero square on the whole ball; one root
    Square(PadicNumber),
    /// undetermined; any root has this form
    Unknown(PadicNumber),
}

pub fn w_status(s: &IntSurface, coords: &[PadicNumber; 3]) -> WStatus {
    let r = s.rhs_padic(&coords[0], &coords[1], &coords[2]);
    let p = r.p.clone();
    if !r.is_known_nonzero() {
        let n = r.val.max(0);
        return WStatus::Unknown(PadicNumber::zero_mod(&p, (n + 1) / 2));
    }
    match r.is_square() {
        Ok(true) => WStatus::Square(r.sqrt().unwrap().unwrap()),
        Ok(false) => WStatus::Empty,
        Err(_) => {
            // p = 2 with fewer than three unit digits and even valuation: w is 2^(v/2)·odd
            WStatus::Unknown(PadicNumber {
                p: p.clone(),
                val: r.val / 2,
                unit: BigInt::one(),
                prec: 1,
            })
        }
    }
}

/// A point of X(Q_p) with exact integer (x, y, z) and w known to `w.prec` digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPoint {
    #[serde(with = "crate::exact::decimal")]
    pub p: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub y: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub z: BigInt,
    pub w: PadicNumber,
}

impl LocalPoint {
    /// Lifts w from an exact (x, y, z) with R(x, y, z) a square (or zero).
    pub fn lift(s: &IntSurface, p: &BigInt, x: &BigInt, y: &BigInt, z: &BigInt, digits: u32) -> Option<Self> {
        let r = s.rhs(x, y, z);
        let w = if r.is_zero() {
            PadicNumber::zero_mod(p, digits as i64)
        } else {
            let rp = PadicNumber::from_rational(&Rational::from_integer(r), p, digits + 1);
            rp.sqrt().ok()??
        };
        Some(LocalPoint {
            p: p.clone(),
            x: x.clone(),
            y: y.clone(),
            z: z.clone(),
            w,
        })
    }

    /// w² ≡ R(x, y, z) to the tracked precision of w².
    pub fn verify(&self, s: &IntSurface) -> bool {
        let r = s.rhs(&self.x, &self.y, &self.z);
        let w2 = self.w.mul(&self.w);
        let rp = PadicNumber::from_int_mod(&r, &self.p, w2.abs_prec());
        match w2.sub(&rp) {
            d if !d.is_known_nonzero() => true,
            _ => false,
        }
    }

    pub fn negate_w(&self) -> Self {
        let mut o = self.clone();
        o.w = o.w.neg();
        o
    }
}

/// A real point: w = √r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealPoint {
    #[serde(with = "crate::exact::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub y: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub z: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub r: BigInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solubility {
    Witness {
        point: LocalPoint,
        tag: String,
    },
    RealWitness {
        point: RealPoint,
    },
    /// all primes above a bound outside the bad set, by a uniform argument
    Tag {
        tag: String,
    },
    /// certified empty: every residue class was ruled out
    Empty {
        classes: usize,
    },
    Undecided {
        reason: String,
    },
}

impl Solubility {
    pub fn is_soluble(&self) -> bool {
        matches!(self, Solubility::Witness { .. } | Solubility::RealWitness { .. } | Solubility::Tag { .. })
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoverConfig {
    /// maximal p-adic depth of a ball
    pub max_depth: u32,
    /// maximal number of balls examined
    pub max_classes: usize,
    /// digits for lifted witnesses
    pub witness_digits: u32,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            max_depth: 60,
            max_classes: 400_000,
            witness_digits: 20,
        }
    }
}

/// Small integer vectors tried before any cover.
pub fn special_vectors(p: &BigInt) -> Vec<[i64; 3]> {
    let mut out = vec![
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, 1],
    ];
    // y⁶ ≡ −1 mod 13 for y = 2
    if p == &BigInt::from(13) {
        out.push([1, 2, 0]);
    }
    for a in 0..4i64 {
        for b in 0..4i64 {
            for c in 0..4i64 {
                let v = [a, b, c];
                if !out.contains(&v) && v.iter().any(|&t| t != 0) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Local solubility at one place: sign test at ∞; special vectors, then an
/// adaptive cover (small p only).
pub fn local_points_exists(s: &IntSurface, place: &Place, cfg: &CoverConfig) -> Solubility {
    let p = match place {
        Place::Infinity => return real_points(s),
        Place::Prime(p) => p,
    };
    for v in special_vectors(p) {
        let (x, y, z) = (BigInt::from(v[0]), BigInt::from(v[1]), BigInt::from(v[2]));
        let r = s.rhs(&x, &y, &z);
        if r.is_zero() || is_square_rational(&Rational::from_integer(r.clone()), p) {
            if let Some(pt) = LocalPoint::lift(s, p, &x, &y, &z, cfg.witness_digits) {
                return Solubility::Witness {
                    point: pt,
                    tag: format!("special point ({}, {}, {})", v[0], v[1], v[2]),
                };
            }
        }
    }
    if p.bits() > 20 {
        return Solubility::Undecided {
            reason: format!("no special point at p = {} and the prime is too large for a cover", p),
        };
    }
    let mut stack = initial_balls(p);
    let mut seen = 0usize;
    while let Some(ball) = stack.pop() {
        seen += 1;
        if seen > cfg.max_classes {
            return Solubility::Undecided {
                reason: format!("class budget {} exhausted", cfg.max_classes),
            };
        }
        let coords = ball.coords(p);
        match w_status(s, &coords) {
            WStatus::Empty => {}
            WStatus::Square(_) => {
                let pt = LocalPoint::lift(s, p, &ball.center[0], &ball.center[1], &ball.center[2], cfg.witness_digits);
                if let Some(pt) = pt {
                    return Solubility::Witness {
                        point: pt,
                        tag: format!("residue class {}", ball.label()),
                    };
                }
                // the center itself may sit on R = 0; look deeper
                stack.extend(ball.children(p));
            }
            WStatus::Unknown(_) => {
                if ball.k >= cfg.max_depth {
                    return Solubility::Undecided {
                        reason: format!("depth cap {} reached at {}", cfg.max_depth, ball.label()),
                    };
                }
                stack.extend(ball.children(p));
            }
        }
    }
    Solubility::Empty { classes: seen }
}

fn real_points(s: &IntSurface) -> Solubility {
    for (i, c) in [&s.a, &s.b, &s.c].iter().enumerate() {
        if c.is_positive() {
            let mut v = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
            v[i] = BigInt::one();
            let [x, y, z] = v;
            return Solubility::RealWitness {
                point: RealPoint {
                    x,
                    y,
                    z,
                    r: (*c).clone(),
                },
            };
        }
    }
    Solubility::Empty { classes: 0 }
}

/// One class of a certified cover together with the data computed on it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassRecord<T> {
    pub ball: Ball,
    pub data: Vec<T>,
    pub witnessed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverResult<T> {
    #[serde(with = "crate::exact::decimal")]
    pub p: BigInt,
    pub classes: Vec<ClassRecord<T>>,
    pub dropped: usize,
    pub undecided: Vec<Ball>,
    pub max_depth: u32,
    pub examined: usize,
}

impl<T: Clone + Ord> CoverResult<T> {
    /// Data realized on classes known to contain points.
    pub fn witnessed_set(&self) -> BTreeSet<T> {
        self.classes.iter().filter(|c| c.witnessed).flat_map(|c| c.data.iter().cloned()).collect()
    }

    /// Data of all classes, witnessed or not.
    pub fn possible_set(&self) -> BTreeSet<T> {
        self.classes.iter().flat_map(|c| c.data.iter().cloned()).collect()
    }

    /// The value set is certified when nothing is undecided and every
    /// possible value is witnessed.
    pub fn is_certified(&self) -> bool {
        self.undecided.is_empty() && self.witnessed_set() == self.possible_set()
    }
}

/// Adaptive cover: `eval(coords, w)` returns the datum for the branch with
/// root w (called for w and −w), or None if the ball is too coarse.
pub fn adaptive_cover<T, F>(s: &IntSurface, p: &BigInt, cfg: &CoverConfig, eval: F) -> CoverResult<T>
where
    T: Clone + Ord,
    F: Fn(&[PadicNumber; 3], &PadicNumber) -> Option<T>,
{
    let mut stack = initial_balls(p);
    stack.reverse();
    let mut classes: Vec<ClassRecord<T>> = Vec::new();
    let mut dropped = 0;
    let mut undecided = Vec::new();
    let mut examined = 0usize;
    let mut depth = 1;
    let eval_ball = |coords: &[PadicNumber; 3], w: &PadicNumber| -> Option<Vec<T>> {
        let a = eval(coords, w)?;
        let b = eval(coords, &w.neg())?;
        let mut v = vec![a, b];
        v.sort();
        v.dedup();
        Some(v)
    };
    while let Some(ball) = stack.pop() {
        examined += 1;
        if examined > cfg.max_classes {
            undecided.push(ball);
            undecided.extend(stack.drain(..));
            break;
        }
        depth = depth.max(ball.k);
        let coords = ball.coords(p);
        let st = w_status(s, &coords);
        let (w, witnessed) = match &st {
            WStatus::Empty => {
                dropped += 1;
                continue;
            }
            WStatus::Square(w) => (w.clone(), true),
            WStatus::Unknown(w) => (w.clone(), false),
        };
        match eval_ball(&coords, &w) {
            Some(data) => classes.push(ClassRecord { ball, data, witnessed }),
            None if ball.k < cfg.max_depth => stack.extend(ball.children(p).into_iter().rev()),
            None => undecided.push(ball),
        }
    }
    // second pass: look for points in unwitnessed classes carrying new data
    let mut known: BTreeSet<T> = classes.iter().filter(|c| c.witnessed).flat_map(|c| c.data.iter().cloned()).collect();
    let mut budget = cfg.max_classes.saturating_sub(examined);
    let mut i = 0;
    while i < classes.len() {
        if classes[i].witnessed || classes[i].data.iter().all(|d| known.contains(d)) {
            i += 1;
            continue;
        }
        match find_point_in(s, p, &classes[i].ball, cfg, &mut budget) {
            Some(true) => {
                classes[i].witnessed = true;
                known.extend(classes[i].data.iter().cloned());
                i += 1;
            }
            Some(false) => {
                classes.remove(i);
                dropped += 1;
            }
            None => {
                undecided.push(classes[i].ball.clone());
                i += 1;
            }
        }
    }
    CoverResult {
        p: p.clone(),
        classes,
        dropped,
        undecided,
        max_depth: depth,
        examined,
    }
}

/// Some(true) if a sub-ball with R a nonzero square exists, Some(false) if
/// every sub-ball is ruled out, None at the caps.
fn find_point_in(s: &IntSurface, p: &BigInt, ball: &Ball, cfg: &CoverConfig, budget: &mut usize) -> Option<bool> {
    let mut stack = vec![ball.clone()];
    while let Some(b) = stack.pop() {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        match w_status(s, &b.coords(p)) {
            WStatus::Empty => {}
            WStatus::Square(_) => return Some(true),
            WStatus::Unknown(_) => {
                if b.k >= cfg.max_depth {
                    return None;
                }
                stack.extend(b.children(p));
            }
        }
    }
    Some(false)
}

/// All primitive classes mod p^k (in chart normal form) containing Q_p-points,
/// each with a witness. Errors if some class cannot be decided.
pub fn residue_class_cover(s: &IntSurface, p: &BigInt, k: u32, cfg: &CoverConfig) -> Result<Vec<(Ball, LocalPoint)>> {
    if k == 0 {
        return Err(Error::Degenerate("residue class cover needs k ≥ 1".into()));
    }
    let mut level = initial_balls(p);
    for _ in 1..k {
        let mut next = Vec::new();
        for b in level {
            if !matches!(w_status(s, &b.coords(p)), WStatus::Empty) {
                next.extend(b.children(p));
            }
        }
        level = next;
    }
    let mut out = Vec::new();
    for b in level {
        if let Some(pt) = witness_in(s, p, &b, cfg)? {
            out.push((b, pt));
        }
    }
    Ok(out)
}

/// A lifted point inside the ball, None if the ball has no points.
pub fn witness_in(s: &IntSurface, p: &BigInt, ball: &Ball, cfg: &CoverConfig) -> Result<Option<LocalPoint>> {
    let mut stack = vec![ball.clone()];
    let mut seen = 0;
    while let Some(b) = stack.pop() {
        seen += 1;
        if seen > cfg.max_classes {
            return Err(Error::PrecisionExhausted {
                p: p.to_string(),
                cap: cfg.max_depth,
            });
        }
        match w_status(s, &b.coords(p)) {
            WStatus::Empty => {}
            WStatus::Square(_) => {
                if let Some(pt) = LocalPoint::lift(s, p, &b.center[0], &b.center[1], &b.center[2], cfg.witness_digits) {
                    return Ok(Some(pt));
                }
                stack.extend(b.children(p));
            }
            WStatus::Unknown(_) => {
                if b.k >= cfg.max_depth {
                    return Err(Error::PrecisionExhausted {
                        p: p.to_string(),
                        cap: cfg.max_depth,
                    });
                }
                stack.extend(b.children(p));
            }
        }
    }
    Ok(None)
}

/// Residue of an integer center coordinate modulo p^j.
pub fn center_mod(b: &Ball, j: usize, m: &BigInt) -> BigInt {
    b.center[j].mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_cover_is_projective_plane() {
        for p in [2i64, 3, 7] {
            let pb = BigInt::from(p);
            assert_eq!(initial_balls(&pb).len() as i64, p * p + p + 1);
        }
    }

    #[test]
    fn negative_definite_has_no_real_points() {
        let s = IntSurface::from_i64(-1, -1, -1);
        assert!(matches!(local_points_exists(&s, &Place::Infinity, &CoverConfig::default()), Solubility::Empty { .. }));
    }

    #[test]
    fn quaternion_example_is_soluble_at_two() {
        let s = IntSurface::from_i64(-4, 2, 2 * 343);
        match local_points_exists(&s, &Place::prime(2), &CoverConfig::default()) {
            Solubility::Witness { point, .. } => assert!(point.verify(&s)),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn empty_surface_is_certified_empty() {
        // x⁶ + y⁶ + z⁶ ≡ 1, 2 or 3 mod 8 on primitive vectors, so −(…) is never a 2-adic square
        let s = IntSurface::from_i64(-1, -1, -1);
        let res = local_points_exists(&s, &Place::prime(2), &CoverConfig::default());
        assert!(matches!(res, Solubility::Empty { .. }), "{:?}", res);
    }
}
