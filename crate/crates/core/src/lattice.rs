//! Full-rank sublattices of `Z²` in Hermite normal form.
//!
//! Coordinates are `(x, y)` meaning `x + y·ω` over the maximal-order basis.
//! A lattice is stored as the basis `{(a, 0), (b, c)}` with `a, c > 0` and
//! `0 <= b < a`, which is unique.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{modulo, xgcd, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice<I> {
    a: I,
    b: I,
    c: I,
}

/// Decimal-string form of a lattice, used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeRepr {
    pub a: String,
    pub b: String,
    pub c: String,
}

impl<I: Scalar> Lattice<I> {
    /// Builds from HNF coordinates; `None` unless they are already reduced.
    pub fn from_hnf(a: I, b: I, c: I) -> Option<Self> {
        if a.is_positive() && c.is_positive() && !b.is_negative() && b < a {
            Some(Lattice { a, b, c })
        } else {
            None
        }
    }

    /// HNF of the lattice spanned by `vectors`; `None` if they do not span a full-rank lattice.
    pub fn from_vectors(vectors: &[(I, I)]) -> Option<Self> {
        let mut pivot: Option<(I, I)> = None;
        let mut xs = I::zero();
        for (x, y) in vectors {
            if y.is_zero() {
                xs = xs.gcd(x);
                continue;
            }
            match pivot.take() {
                None => pivot = Some((x.clone(), y.clone())),
                Some((px, py)) => {
                    let (g, s, t) = xgcd(&py, y);
                    let nx = s.clone() * px.clone() + t.clone() * x.clone();
                    // (y/g)·p − (py/g)·v has zero second coordinate
                    let other = (y.clone() / g.clone()) * px - (py / g.clone()) * x.clone();
                    xs = xs.gcd(&other);
                    pivot = Some((nx, g));
                }
            }
        }
        let (px, py) = pivot?;
        if xs.is_zero() {
            return None;
        }
        let (px, py) = if py.is_negative() { (-px, -py) } else { (px, py) };
        Some(Lattice { b: modulo(&px, &xs), a: xs, c: py })
    }

    pub fn a(&self) -> &I {
        &self.a
    }

    pub fn b(&self) -> &I {
        &self.b
    }

    pub fn c(&self) -> &I {
        &self.c
    }

    /// Index of the lattice in `Z²`.
    pub fn index(&self) -> I {
        self.a.clone() * self.c.clone()
    }

    pub fn basis(&self) -> [(I, I); 2] {
        [(self.a.clone(), I::zero()), (self.b.clone(), self.c.clone())]
    }

    pub fn contains(&self, v: &(I, I)) -> bool {
        let (x, y) = v;
        if !y.is_multiple_of(&self.c) {
            return false;
        }
        let k = y.clone() / self.c.clone();
        (x.clone() - k * self.b.clone()).is_multiple_of(&self.a)
    }

    pub fn contains_lattice(&self, other: &Self) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// Canonical representative of `v` modulo the lattice, in `[0, a) × [0, c)`.
    pub fn reduce(&self, v: &(I, I)) -> (I, I) {
        let (x, y) = v;
        let q = y.div_floor(&self.c);
        let y = y.clone() - q.clone() * self.c.clone();
        let x = x.clone() - q * self.b.clone();
        (modulo(&x, &self.a), y)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut vs = self.basis().to_vec();
        vs.extend(other.basis());
        Self::from_vectors(&vs).expect("sum of full-rank lattices is full rank")
    }

    /// `self ∩ other`, computed coordinatewise.
    ///
    /// Second coordinates of the intersection are multiples of
    /// `l = lcm(c1, c2)`; at `y = l·s` the first coordinate must satisfy
    /// `x ≡ s·(l/c1)·b1 (mod a1)` and `x ≡ s·(l/c2)·b2 (mod a2)`, which is
    /// solvable iff `s·e ≡ 0 (mod gcd(a1, a2))` with `e` the residue gap.
    pub fn intersect(&self, other: &Self) -> Self {
        let l = self.c.lcm(&other.c);
        let r1 = (l.clone() / self.c.clone()) * self.b.clone();
        let r2 = (l.clone() / other.c.clone()) * other.b.clone();
        let g = self.a.gcd(&other.a);
        let e = r1.clone() - r2.clone();
        let s = g.clone() / e.gcd(&g);
        let c = l * s.clone();
        let x = crt_pair(&(s.clone() * r1), &self.a, &(s * r2), &other.a)
            .expect("intersection congruences are compatible by construction");
        let a = self.a.lcm(&other.a);
        Lattice { b: modulo(&x, &a), a, c }
    }

    /// `{v ∈ Z² : M·v ∈ self}` for an integer matrix `M` given by rows.
    ///
    /// `index·Z²` lies in the preimage, so it suffices to test residues.
    pub fn preimage(&self, m: &[[I; 2]; 2]) -> Self {
        let n = self.index();
        let mut gens = vec![(n.clone(), I::zero()), (I::zero(), n.clone())];
        let mut x = I::zero();
        while x < n {
            let mut y = I::zero();
            while y < n {
                let img = (
                    m[0][0].clone() * x.clone() + m[0][1].clone() * y.clone(),
                    m[1][0].clone() * x.clone() + m[1][1].clone() * y.clone(),
                );
                if self.contains(&img) {
                    gens.push((x.clone(), y.clone()));
                }
                y = y + I::one();
            }
            x = x + I::one();
        }
        Self::from_vectors(&gens).expect("preimage contains index·Z²")
    }

    pub fn repr(&self) -> LatticeRepr {
        LatticeRepr { a: self.a.to_string(), b: self.b.to_string(), c: self.c.to_string() }
    }
}

impl LatticeRepr {
    /// Parses back into a lattice; `None` unless the coordinates are a valid HNF.
    pub fn parse<I: Scalar + std::str::FromStr>(&self) -> Option<Lattice<I>> {
        Lattice::from_hnf(self.a.parse().ok()?, self.b.parse().ok()?, self.c.parse().ok()?)
    }
}

impl<I: Scalar> fmt::Display for Lattice<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}+{}ω]", self.a, self.b, self.c)
    }
}

/// Solves `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)` for positive moduli.
pub fn crt_pair<I: Scalar>(r1: &I, m1: &I, r2: &I, m2: &I) -> Option<I> {
    let (g, s, _) = xgcd(m1, m2);
    let diff = r2.clone() - r1.clone();
    if !diff.is_multiple_of(&g) {
        return None;
    }
    let m2g = m2.clone() / g.clone();
    let k = modulo(&((diff / g) * s), &m2g);
    let l = m1.clone() * m2g;
    Some(modulo(&(r1.clone() + m1.clone() * k), &l))
}

/// A generator carrying its integer coefficients over the input list.
#[derive(Debug, Clone)]
struct Tracked<I> {
    v: (I, I),
    coeffs: Vec<I>,
}

impl<I: Scalar> Tracked<I> {
    fn combine(&self, s: &I, other: &Self, t: &I) -> Self {
        Tracked {
            v: (
                s.clone() * self.v.0.clone() + t.clone() * other.v.0.clone(),
                s.clone() * self.v.1.clone() + t.clone() * other.v.1.clone(),
            ),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(p, q)| s.clone() * p.clone() + t.clone() * q.clone())
                .collect(),
        }
    }
}

/// Integer coefficients `k` with `Σ k_i·vectors[i] = target`, if `target`
/// lies in the span.
pub fn express_in_span<I: Scalar>(vectors: &[(I, I)], target: &(I, I)) -> Option<Vec<I>> {
    let k = vectors.len();
    let unit = |i: usize| (0..k).map(|j| if i == j { I::one() } else { I::zero() }).collect();
    let mut pivot: Option<Tracked<I>> = None;
    let mut xrow: Option<Tracked<I>> = None;
    let push_x = |xrow: &mut Option<Tracked<I>>, w: Tracked<I>| {
        if w.v.0.is_zero() {
            return;
        }
        *xrow = Some(match xrow.take() {
            None => w,
            Some(cur) => {
                let (_, s, t) = xgcd(&cur.v.0, &w.v.0);
                cur.combine(&s, &w, &t)
            }
        });
    };
    for (i, v) in vectors.iter().enumerate() {
        let w = Tracked { v: v.clone(), coeffs: unit(i) };
        if w.v.1.is_zero() {
            push_x(&mut xrow, w);
            continue;
        }
        match pivot.take() {
            None => pivot = Some(w),
            Some(p) => {
                let (g, s, t) = xgcd(&p.v.1, &w.v.1);
                let np = p.combine(&s, &w, &t);
                let other = p.combine(&(w.v.1.clone() / g.clone()), &w, &-(p.v.1.clone() / g));
                push_x(&mut xrow, other);
                pivot = Some(np);
            }
        }
    }
    let (tx, ty) = target;
    let mut coeffs: Vec<I> = vec![I::zero(); k];
    let mut rest_x = tx.clone();
    if !ty.is_zero() {
        let p = pivot?;
        if !ty.is_multiple_of(&p.v.1) {
            return None;
        }
        let q = ty.clone() / p.v.1.clone();
        rest_x = rest_x - q.clone() * p.v.0.clone();
        for (c, pc) in coeffs.iter_mut().zip(&p.coeffs) {
            *c = c.clone() + q.clone() * pc.clone();
        }
    }
    if !rest_x.is_zero() {
        let xr = xrow?;
        if !rest_x.is_multiple_of(&xr.v.0) {
            return None;
        }
        let q = rest_x / xr.v.0.clone();
        for (c, xc) in coeffs.iter_mut().zip(&xr.coeffs) {
            *c = c.clone() + q.clone() * xc.clone();
        }
    }
    Some(coeffs)
}
