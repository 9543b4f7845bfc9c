//! Exact multivariate and univariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{JointsError, Result};
use crate::geometry::{DirectionN, Line, PointN};
use crate::rational::{self, Rational};

/// Exponent vector of a monomial `x_1^e_1 ... x_n^e_n`.
///
/// Ordered graded-lexicographically: total degree first, then by exponent
/// vectors with `x_1` heaviest, so in dimension 2 the order begins
/// `1, x1, x2, x1^2, x1 x2, x2^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `dim` variables of total degree at most `d`, in
/// ascending graded-lex order. There are `C(d + dim, dim)` of them.
pub fn monomials_up_to(dim: usize, d: u32) -> Vec<Monomial> {
    fn fill(rest: u32, prefix: &mut Vec<u32>, dim: usize, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == dim {
            prefix.push(rest);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=rest).rev() {
            prefix.push(e);
            fill(rest - e, prefix, dim, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        out.push(Monomial(Vec::new()));
        return out;
    }
    for total in 0..=d {
        fill(total, &mut Vec::with_capacity(dim), dim, &mut out);
    }
    out
}

/// A polynomial in `dim` variables. Only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::from_terms(dim, [(Monomial::one(dim), c)])
    }

    /// The coordinate function `x_{i+1}` (zero-based `i`).
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::from_terms(dim, [(Monomial(e), Rational::one())])
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "monomial dimension");
            p.add_term(m, c);
        }
        p
    }

    /// Convenience for tests and fixtures: `[(coeff, exponents), ...]`.
    pub fn from_int_terms(dim: usize, terms: &[(i64, &[u32])]) -> Self {
        Self::from_terms(
            dim,
            terms
                .iter()
                .map(|(c, e)| (Monomial(e.to_vec()), rational::rat(*c))),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.dim))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn evaluate(&self, p: &PointN) -> Result<Rational> {
        if p.dim() != self.dim {
            return Err(JointsError::DimensionMismatch {
                expected: self.dim,
                actual: p.dim(),
            });
        }
        if self.terms.is_empty() {
            return Ok(Rational::zero());
        }
        // Integer arithmetic throughout: x = X / e, coefficients a / D, so
        // Q(x) = sum a X^alpha e^(deg - |alpha|) / (D e^deg).
        let e = rational::common_denominator(p.coords());
        let xs: Vec<BigInt> = p.coords().iter().map(|v| v.numer() * (&e / v.denom())).collect();
        let deg = self.degree().unwrap_or(0) as usize;
        let powers = |base: &BigInt, top: usize| {
            let mut v = vec![BigInt::one()];
            for k in 1..=top {
                let next = &v[k - 1] * base;
                v.push(next);
            }
            v
        };
        let x_pows: Vec<Vec<BigInt>> = xs.iter().map(|xi| powers(xi, deg)).collect();
        let e_pows = powers(&e, deg);
        let d = rational::common_denominator(self.terms.values());
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = c.numer() * (&d / c.denom());
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    v *= &x_pows[i][k as usize];
                }
            }
            v *= &e_pows[deg - m.degree() as usize];
            acc += v;
        }
        Ok(Rational::new(acc, d * &e_pows[deg]))
    }

    /// `dQ/dx_{i+1}`.
    pub fn partial(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[i];
            (e > 0).then(|| {
                let mut exps = m.0.clone();
                exps[i] -= 1;
                (Monomial(exps), c * Rational::from_integer(BigInt::from(e)))
            })
        });
        Self::from_terms(self.dim, terms)
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.dim).map(|i| self.partial(i)).collect()
    }

    /// `grad Q . v`.
    pub fn directional_derivative(&self, v: &DirectionN) -> Result<MultiPoly> {
        if v.dim() != self.dim {
            return Err(JointsError::DimensionMismatch {
                expected: self.dim,
                actual: v.dim(),
            });
        }
        let mut acc = MultiPoly::zero(self.dim);
        for (i, vi) in v.components().iter().enumerate() {
            if !vi.is_zero() {
                acc = &acc + &self.partial(i).scale(vi);
            }
        }
        Ok(acc)
    }

    /// `t -> Q(base + t * dir)`, expanding each `(b_i + t v_i)^e` by the
    /// binomial theorem.
    pub fn restrict_to_line(&self, line: &Line) -> Result<UniPoly> {
        if line.dim() != self.dim {
            return Err(JointsError::DimensionMismatch {
                expected: self.dim,
                actual: line.dim(),
            });
        }
        let b = line.base().coords();
        let v = line.dir().components();
        let mut acc = UniPoly::zero();
        for (m, c) in &self.terms {
            let mut term = UniPoly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = &term * &binomial_power(&b[i], &v[i], e);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `t -> Q(g_1(t), ..., g_n(t))`.
    pub fn compose(&self, components: &[UniPoly]) -> Result<UniPoly> {
        if components.len() != self.dim {
            return Err(JointsError::DimensionMismatch {
                expected: self.dim,
                actual: components.len(),
            });
        }
        // powers[i][e] = g_i^e, grown on demand.
        let mut powers: Vec<Vec<UniPoly>> = components
            .iter()
            .map(|_| vec![UniPoly::constant(Rational::one())])
            .collect();
        let mut acc = UniPoly::zero();
        for (m, c) in &self.terms {
            let mut term = UniPoly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &components[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

/// `(b + v t)^e`.
fn binomial_power(b: &Rational, v: &Rational, e: u32) -> UniPoly {
    let coeffs = (0..=e)
        .map(|k| {
            let binom = Rational::from_integer(BigInt::from(rational::binomial(e as u64, k as u64)));
            binom
                * num_traits::pow(b.clone(), (e - k) as usize)
                * num_traits::pow(v.clone(), k as usize)
        })
        .collect();
    UniPoly::new(coeffs)
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension");
        let mut out = MultiPoly::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let exps = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(exps), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest degree first reads more naturally.
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTermJson {
    exponents: Vec<u32>,
    #[serde(with = "rational::serde_str")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    dimension: usize,
    terms: Vec<PolyTermJson>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            dimension: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| PolyTermJson {
                    exponents: m.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        if let Some(t) = raw.terms.iter().find(|t| t.exponents.len() != raw.dimension) {
            return Err(serde::de::Error::custom(format!(
                "monomial {:?} does not have {} exponents",
                t.exponents, raw.dimension
            )));
        }
        Ok(MultiPoly::from_terms(
            raw.dimension,
            raw.terms.into_iter().map(|t| (Monomial(t.exponents), t.coeff)),
        ))
    }
}

/// A polynomial in one variable, coefficients in ascending powers, with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational::rat(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The identity `t`.
    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn evaluate(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Whether vanishing at `roots` forces this polynomial to be zero: a
    /// nonzero polynomial has fewer distinct roots than its degree plus one.
    /// Returns `true` when the degree is below the number of distinct roots
    /// supplied and all of them are roots.
    pub fn forced_zero_by(&self, roots: &[Rational]) -> bool {
        let mut distinct: Vec<&Rational> = roots.iter().collect();
        distinct.sort();
        distinct.dedup();
        let bound_ok = self.degree().map_or(true, |d| d < distinct.len());
        bound_ok && distinct.iter().all(|r| self.evaluate(r).is_zero())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        UniPoly::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let neg = UniPoly::new(rhs.coeffs.iter().map(|c| -c).collect());
        self + &neg
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*t", c)?,
                _ => write!(f, "{}*t^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl Serialize for UniPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_str_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        rational::serde_str_vec::deserialize(d).map(UniPoly::new)
    }
}
