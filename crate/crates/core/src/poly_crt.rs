//! Univariate polynomials over GF(q) and CRT lifting across the cosets of a
//! cyclic subgroup.
//!
//! For `n | q - 1` with primitive `n`-th root `γ` and `ν = n / n_l`, the
//! evaluation set `{1, γ, …, γ^{n-1}}` splits into the cosets
//! `A(i) = γ^i · ⟨γ^ν⟩`, each annihilated by `f(i) = x^{n_l} - γ^{i·n_l}`.
//! The idempotents `e(i)` (≡ 1 mod `f(i)`, ≡ 0 mod the others) identify
//! `F[x]/(x^n - 1)` with the product of the `F[x]/(f(i))`, which is what
//! [`CosetStructure::lift`] computes.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{GfContext, GfElement};

/// Dense polynomial; `coeffs[t]` is the coefficient of `x^t`, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<GfElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: GfElement) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: GfElement, degree: usize) -> Self {
        let mut coeffs = vec![GfElement::ZERO; degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// `x^n - c`.
    pub fn binomial(n: usize, c: GfElement, f: &GfContext) -> Self {
        let mut coeffs = vec![GfElement::ZERO; n + 1];
        coeffs[n] = GfElement::ONE;
        coeffs[0] = f.sub(coeffs[0], c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<GfElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[GfElement] {
        &self.coeffs
    }

    /// Coefficient of `x^t` (zero beyond the degree).
    pub fn coeff(&self, t: usize) -> GfElement {
        self.coeffs.get(t).copied().unwrap_or(GfElement::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(t, _)| t).collect()
    }

    pub fn add(&self, other: &Poly, f: &GfContext) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..len).map(|t| f.add(self.coeff(t), other.coeff(t))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &GfContext) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..len).map(|t| f.sub(self.coeff(t), other.coeff(t))).collect())
    }

    pub fn scale(&self, c: GfElement, f: &GfContext) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &GfContext) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GfElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Poly::from_coeffs(out)
    }

    /// Euclidean division: `self = q · divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly, f: &GfContext) -> Result<(Poly, Poly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::ZeroPolynomialDivisor);
        };
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        let Some(quot_len) = (rem.len() + 1).checked_sub(dd + 1).filter(|&l| l > 0) else {
            return Ok((Poly::zero(), self.clone()));
        };
        let mut quot = vec![GfElement::ZERO; quot_len];
        for shift in (0..quot_len).rev() {
            let c = f.mul(rem[shift + dd], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[shift] = c;
            let neg = f.neg(c);
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.mul_add(rem[shift + i], neg, d);
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Remainder modulo `modulus`.
    pub fn rem(&self, modulus: &Poly, f: &GfContext) -> Result<Poly> {
        Ok(self.div_rem(modulus, f)?.1)
    }

    /// Horner evaluation.
    pub fn eval(&self, a: GfElement, f: &GfContext) -> GfElement {
        self.coeffs.iter().rev().fold(GfElement::ZERO, |acc, &c| f.mul_add(c, acc, a))
    }

    pub fn evaluate(&self, points: &[GfElement], f: &GfContext) -> Vec<GfElement> {
        points.iter().map(|&a| self.eval(a, f)).collect()
    }

    /// The unique polynomial of degree `< points.len()` through all pairs.
    pub fn interpolate(points: &[(GfElement, GfElement)], f: &GfContext) -> Result<Poly> {
        for (i, &(x, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|&(y, _)| y == x) {
                return Err(Error::RepeatedAbscissa(x.value()));
            }
        }
        let m = points.len();
        // Newton divided differences.
        let mut dd: Vec<GfElement> = points.iter().map(|&(_, y)| y).collect();
        for j in 1..m {
            for i in (j..m).rev() {
                let num = f.sub(dd[i], dd[i - 1]);
                let den = f.sub(points[i].0, points[i - j].0);
                dd[i] = f.div(num, den)?;
            }
        }
        let mut acc = Poly::zero();
        for i in (0..m).rev() {
            let linear = Poly::from_coeffs(vec![f.neg(points[i].0), GfElement::ONE]);
            acc = acc.mul(&linear, f).add(&Poly::constant(dd[i]), f);
        }
        Ok(acc)
    }

    /// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g` and `g` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly, f: &GfContext) -> Result<(Poly, Poly, Poly)> {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::constant(GfElement::ONE), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(GfElement::ONE));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1, f)?;
            let s2 = s0.sub(&q.mul(&s1, f), f);
            let t2 = t0.sub(&q.mul(&t1, f), f);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if let Some(d) = r0.degree() {
            let inv = f.inv(r0.coeffs[d])?;
            r0 = r0.scale(inv, f);
            s0 = s0.scale(inv, f);
            t0 = t0.scale(inv, f);
        }
        Ok((r0, s0, t0))
    }
}

/// Evaluation-point cosets with their annihilators and CRT idempotents.
#[derive(Clone, Debug)]
pub struct CosetStructure {
    field: GfContext,
    n: usize,
    n_l: usize,
    nu: usize,
    gamma: GfElement,
    cosets: Vec<Vec<GfElement>>,
    annihilators: Vec<Poly>,
    idempotents: Vec<Poly>,
    /// `idempotent_coeffs[s][a]` is the coefficient of `x^{a·n_l}` in `e(s)`.
    idempotent_coeffs: Vec<Vec<GfElement>>,
}

impl CosetStructure {
    pub fn build(field: GfContext, n: usize, n_l: usize) -> Result<Self> {
        if n_l == 0 || n % n_l != 0 {
            return Err(crate::error::invalid("n_l must divide n"));
        }
        let gamma = field.primitive_nth_root(n as u64)?;
        let nu = n / n_l;
        let f = &field;
        let stride = f.pow_u64(gamma, nu as u64);

        let cosets: Vec<Vec<GfElement>> = (0..nu)
            .map(|i| {
                let shift = f.pow_u64(gamma, i as u64);
                let mut acc = shift;
                (0..n_l)
                    .map(|_| {
                        let p = acc;
                        acc = f.mul(acc, stride);
                        p
                    })
                    .collect()
            })
            .collect();

        let annihilators: Vec<Poly> =
            (0..nu).map(|i| Poly::binomial(n_l, f.pow_u64(gamma, (i * n_l) as u64), f)).collect();

        let big = Poly::binomial(n, GfElement::ONE, f);
        let mut idempotents = Vec::with_capacity(nu);
        for fi in &annihilators {
            let (cofactor, rem) = big.div_rem(fi, f)?;
            debug_assert!(rem.is_zero());
            let (g, _, t) = Poly::ext_gcd(fi, &cofactor, f)?;
            if g != Poly::constant(GfElement::ONE) {
                return Err(crate::error::invalid("coset annihilators are not coprime"));
            }
            idempotents.push(t.mul(&cofactor, f).rem(&big, f)?);
        }

        let idempotent_coeffs = idempotents.iter().map(|e| (0..nu).map(|a| e.coeff(a * n_l)).collect()).collect();

        Ok(CosetStructure { field, n, n_l, nu, gamma, cosets, annihilators, idempotents, idempotent_coeffs })
    }

    pub fn field(&self) -> &GfContext {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_l(&self) -> usize {
        self.n_l
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn gamma(&self) -> GfElement {
        self.gamma
    }

    pub fn cosets(&self) -> &[Vec<GfElement>] {
        &self.cosets
    }

    pub fn coset(&self, i: usize) -> &[GfElement] {
        &self.cosets[i]
    }

    /// All `n` evaluation points, coset-major.
    pub fn points(&self) -> Vec<GfElement> {
        self.cosets.concat()
    }

    pub fn annihilators(&self) -> &[Poly] {
        &self.annihilators
    }

    pub fn idempotents(&self) -> &[Poly] {
        &self.idempotents
    }

    /// `e(s)_a`, the coefficient of `(x^{n_l})^a` in the idempotent `e(s)`.
    pub fn idempotent_coeff(&self, s: usize, a: usize) -> GfElement {
        self.idempotent_coeffs[s][a]
    }

    /// `x^n - 1`.
    pub fn full_annihilator(&self) -> Poly {
        Poly::binomial(self.n, GfElement::ONE, &self.field)
    }

    /// The unique polynomial of degree `< n` congruent to `parts[i]` modulo `f(i)`.
    pub fn lift(&self, parts: &[Poly]) -> Result<Poly> {
        if parts.len() != self.nu {
            return Err(Error::LengthMismatch { expected: self.nu, found: parts.len() });
        }
        let f = &self.field;
        let mut acc = Poly::zero();
        for (index, (part, e)) in parts.iter().zip(&self.idempotents).enumerate() {
            if let Some(degree) = part.degree().filter(|&d| d >= self.n_l) {
                return Err(Error::DegreeViolation { index, degree, limit: self.n_l - 1 });
            }
            acc = acc.add(&part.mul(e, f), f);
        }
        acc.rem(&self.full_annihilator(), f)
    }

    /// The residues `p mod f(i)`, the inverse of [`lift`](Self::lift).
    pub fn split(&self, p: &Poly) -> Result<Vec<Poly>> {
        self.annihilators.iter().map(|fi| p.rem(fi, &self.field)).collect()
    }

    /// Linear forms for the coefficients of a lift whose parts have degree `< r_deg`.
    pub fn lifted_coefficient_map(&self, r_deg: usize) -> Result<LiftedCoefficientMap> {
        if r_deg == 0 || r_deg > self.n_l {
            return Err(crate::error::invalid("lifted part degree bound must lie in [1, n_l]"));
        }
        let mut entries = Vec::with_capacity(r_deg * self.nu);
        for a in 0..self.nu {
            for b in 0..r_deg {
                entries.push(LiftedCoefficient {
                    t: a * self.n_l + b,
                    a,
                    b,
                    weights: (0..self.nu).map(|s| self.idempotent_coeff(s, a)).collect(),
                });
            }
        }
        Ok(LiftedCoefficientMap { n: self.n, n_l: self.n_l, r_deg, entries })
    }
}

/// Coefficient `t = a·n_l + b` of a lift is `Σ_s weights[s] · (coefficient b of part s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCoefficient {
    pub t: usize,
    pub a: usize,
    pub b: usize,
    pub weights: Vec<GfElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCoefficientMap {
    n: usize,
    n_l: usize,
    r_deg: usize,
    entries: Vec<LiftedCoefficient>,
}

impl LiftedCoefficientMap {
    /// Indices that can be nonzero in some lift, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.t).collect()
    }

    pub fn entries(&self) -> &[LiftedCoefficient] {
        &self.entries
    }

    /// The linear form for index `t`, or `None` where the coefficient is identically zero.
    pub fn coefficient(&self, t: usize) -> Option<&LiftedCoefficient> {
        if t >= self.n || t % self.n_l >= self.r_deg {
            return None;
        }
        self.entries.iter().find(|e| e.t == t)
    }

    /// Evaluates the map on concrete parts.
    pub fn apply(&self, parts: &[Poly], f: &GfContext) -> Poly {
        let mut coeffs = vec![GfElement::ZERO; self.n];
        for e in &self.entries {
            coeffs[e.t] =
                e.weights.iter().zip(parts).fold(GfElement::ZERO, |acc, (&w, p)| f.mul_add(acc, w, p.coeff(e.b)));
        }
        Poly::from_coeffs(coeffs)
    }
}
