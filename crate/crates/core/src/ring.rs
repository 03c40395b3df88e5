//! Monomial complete intersections `k[t_1..t_e]/(t_1^{a_1}, ..., t_e^{a_e})`
//! and graded polynomial rings with all generators in degree 1 or 2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldChoice};
use crate::series::{binomial_u64, IntLaurentPoly};

/// Maximum number of ring variables.
pub const MAX_VARS: usize = 16;

/// Exponent vector packed eight bits per variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 256, "exponent {e} too large");
            m |= (e as u128) << (8 * i);
        }
        Monomial(m)
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        assert!(i < MAX_VARS && e < 256);
        Monomial((e as u128) << (8 * i))
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    /// Sum of exponents.
    pub fn total(&self) -> u32 {
        (0..MAX_VARS).map(|i| self.exp(i)).sum()
    }

    /// Product without truncation. Exponents must stay below 256.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert!((0..MAX_VARS).all(|i| self.exp(i) + other.exp(i) < 256));
        Monomial(self.0 + other.0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= other.exp(i))
    }

    pub fn raw(&self) -> u128 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Presentation {
    /// Artinian quotient by pure powers; every exponent at least 2.
    CompleteIntersection { exponents: Vec<u32> },
    /// Polynomial ring on `vars` generators of internal degree `gen_degree`.
    Polynomial { vars: usize, gen_degree: u32 },
}

#[derive(Clone, Debug)]
pub struct Ring<F: Field> {
    field: F,
    pres: Presentation,
    // mixed-radix place values for the complete intersection basis
    radix: Vec<usize>,
}

/// A ring element: sorted, nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E> RingElement<E> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Field> Ring<F> {
    pub fn complete_intersection(field: F, exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() || exponents.len() > MAX_VARS {
            return Err(Error::InvalidRing(format!("need 1..={MAX_VARS} variables, got {}", exponents.len())));
        }
        if let Some(a) = exponents.iter().find(|&&a| !(2..256).contains(&a)) {
            return Err(Error::InvalidRing(format!("exponent {a} outside 2..=255")));
        }
        let mut radix = Vec::with_capacity(exponents.len());
        let mut acc = 1usize;
        for &a in &exponents {
            radix.push(acc);
            acc = acc.checked_mul(a as usize).ok_or_else(|| Error::InvalidRing("ring too large".into()))?;
        }
        Ok(Self { field, pres: Presentation::CompleteIntersection { exponents }, radix })
    }

    /// `k[t]/(t_i^a)` for `e` variables.
    pub fn uniform_ci(field: F, e: usize, a: u32) -> Result<Self> {
        Self::complete_intersection(field, vec![a; e])
    }

    pub fn polynomial(field: F, vars: usize, gen_degree: u32) -> Result<Self> {
        if vars == 0 || vars > MAX_VARS {
            return Err(Error::InvalidRing(format!("need 1..={MAX_VARS} variables, got {vars}")));
        }
        if gen_degree != 1 && gen_degree != 2 {
            return Err(Error::InvalidRing(format!("generator degree must be 1 or 2, got {gen_degree}")));
        }
        Ok(Self { field, pres: Presentation::Polynomial { vars, gen_degree }, radix: Vec::new() })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn nvars(&self) -> usize {
        match &self.pres {
            Presentation::CompleteIntersection { exponents } => exponents.len(),
            Presentation::Polynomial { vars, .. } => *vars,
        }
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        match &self.pres {
            Presentation::CompleteIntersection { exponents } => Some(exponents),
            _ => None,
        }
    }

    pub fn gen_degree(&self) -> u32 {
        match &self.pres {
            Presentation::CompleteIntersection { .. } => 1,
            Presentation::Polynomial { gen_degree, .. } => *gen_degree,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.pres, Presentation::CompleteIntersection { .. })
    }

    /// Codimension of the complete intersection (equal to the embedding dimension).
    pub fn codim(&self) -> usize {
        self.nvars()
    }

    /// Every defining relation lies in the cube of the maximal ideal.
    pub fn order_at_least_three(&self) -> bool {
        self.exponents().is_some_and(|a| a.iter().all(|&x| x >= 3))
    }

    /// All exponents equal the characteristic: the group algebra of an
    /// elementary abelian p-group.
    pub fn is_elementary_abelian_group_algebra(&self) -> bool {
        let p = self.field.characteristic();
        p != 0 && self.exponents().is_some_and(|a| a.iter().all(|&x| x as u64 == p))
    }

    /// `dim_k` of the ring; `None` for polynomial rings.
    pub fn kdim(&self) -> Option<usize> {
        self.exponents().map(|a| a.iter().map(|&x| x as usize).product())
    }

    /// `dim_k` of a finite-dimensional module, which is its length here.
    pub fn length_of(&self, kdim: usize) -> Result<usize> {
        if !self.is_finite() {
            return Err(Error::Precondition("length over a ring of infinite k-dimension".into()));
        }
        Ok(kdim)
    }

    pub fn in_range(&self, m: &Monomial) -> bool {
        match &self.pres {
            Presentation::CompleteIntersection { exponents } => {
                exponents.iter().enumerate().all(|(i, &a)| m.exp(i) < a) && (exponents.len()..MAX_VARS).all(|i| m.exp(i) == 0)
            }
            Presentation::Polynomial { vars, .. } => (*vars..MAX_VARS).all(|i| m.exp(i) == 0),
        }
    }

    /// Internal degree of a monomial.
    pub fn degree(&self, m: &Monomial) -> u32 {
        m.total() * self.gen_degree()
    }

    /// Position of a monomial in the k-basis of a complete intersection
    /// (mixed radix, first variable fastest).
    #[inline]
    pub fn basis_index(&self, m: &Monomial) -> usize {
        let mut idx = 0;
        for (i, r) in self.radix.iter().enumerate() {
            idx += m.exp(i) as usize * r;
        }
        idx
    }

    /// The k-basis of a complete intersection in `basis_index` order.
    pub fn basis(&self) -> Vec<Monomial> {
        let a = self.exponents().expect("basis of a finite ring");
        let n = self.kdim().unwrap();
        (0..n)
            .map(|mut idx| {
                let mut exps = vec![0u32; a.len()];
                for (i, &ai) in a.iter().enumerate() {
                    exps[i] = (idx % ai as usize) as u32;
                    idx /= ai as usize;
                }
                Monomial::from_exps(&exps)
            })
            .collect()
    }

    /// Monomials of internal degree `deg`, ordered by `stratum_index`.
    pub fn stratum(&self, deg: i64) -> Vec<Monomial> {
        let g = self.gen_degree() as i64;
        if deg < 0 || deg % g != 0 {
            return Vec::new();
        }
        let k = (deg / g) as u32;
        let n = self.nvars();
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        self.enumerate_stratum(0, k, &mut exps, &mut out);
        out.sort_by_key(|m| self.stratum_index(m));
        out
    }

    fn enumerate_stratum(&self, i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        let cap = |i: usize| match self.exponents() {
            Some(a) => a[i] - 1,
            None => u32::MAX,
        };
        if i == n - 1 {
            if left <= cap(i) {
                exps[i] = left;
                out.push(Monomial::from_exps(exps));
            }
            return;
        }
        for e in 0..=left.min(cap(i)) {
            exps[i] = e;
            self.enumerate_stratum(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }

    pub fn stratum_dim(&self, deg: i64) -> usize {
        match &self.pres {
            Presentation::Polynomial { vars, gen_degree } => {
                let g = *gen_degree as i64;
                if deg < 0 || deg % g != 0 {
                    0
                } else {
                    binomial_u64(deg / g + *vars as i64 - 1, *vars as i64 - 1) as usize
                }
            }
            Presentation::CompleteIntersection { .. } => {
                let h = self.hilbert_series().unwrap();
                num_traits::ToPrimitive::to_usize(&h.coeff(deg)).unwrap()
            }
        }
    }

    /// Index of a monomial among the monomials of its degree: stars and bars
    /// ranked colexicographically. For complete intersections the rank is
    /// taken in the ambient polynomial ring, so it is sparse but injective.
    pub fn stratum_index(&self, m: &Monomial) -> usize {
        let n = self.nvars();
        let mut rank = 0usize;
        let mut bar = 0i64;
        for i in 0..n - 1 {
            bar += m.exp(i) as i64;
            let pos = bar + i as i64;
            rank += binomial_u64(pos, i as i64 + 1) as usize;
        }
        rank
    }

    /// Hilbert series of a complete intersection: `prod (1 + t + ... + t^{a_i-1})`.
    pub fn hilbert_series(&self) -> Option<IntLaurentPoly> {
        let a = self.exponents()?;
        Some(a.iter().fold(IntLaurentPoly::one(), |acc, &ai| {
            acc.mul(&IntLaurentPoly::from_coeffs(0, (0..ai).map(|_| 1u32)))
        }))
    }

    pub fn descriptor(&self) -> RingJson {
        match &self.pres {
            Presentation::CompleteIntersection { exponents } => RingJson {
                char: self.field.characteristic(),
                exponents: Some(exponents.clone()),
                d: None,
                gdeg: None,
            },
            Presentation::Polynomial { vars, gen_degree } => RingJson {
                char: self.field.characteristic(),
                exponents: None,
                d: Some(*vars),
                gdeg: Some(*gen_degree),
            },
        }
    }

    pub fn from_descriptor(field: F, j: &RingJson) -> Result<Self> {
        if j.char != field.characteristic() {
            return Err(Error::Parse(format!("ring over characteristic {} read with field {}", j.char, field.choice())));
        }
        match (&j.exponents, j.d, j.gdeg) {
            (Some(a), None, None) => Self::complete_intersection(field, a.clone()),
            (None, Some(d), Some(g)) => Self::polynomial(field, d, g),
            _ => Err(Error::Parse("ring descriptor needs either exponents or d and gdeg".into())),
        }
    }

    // ---- element arithmetic ----

    pub fn zero(&self) -> RingElement<F::Elem> {
        RingElement::zero()
    }

    pub fn one(&self) -> RingElement<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> RingElement<F::Elem> {
        self.term(Monomial::ONE, c)
    }

    pub fn term(&self, m: Monomial, c: F::Elem) -> RingElement<F::Elem> {
        if self.field.is_zero(&c) || !self.in_range(&m) {
            return RingElement::zero();
        }
        RingElement { terms: vec![(m, c)] }
    }

    pub fn var(&self, i: usize) -> RingElement<F::Elem> {
        self.term(Monomial::var(i), self.field.one())
    }

    pub fn var_pow(&self, i: usize, e: u32) -> RingElement<F::Elem> {
        if e >= 256 {
            return RingElement::zero();
        }
        self.term(Monomial::var_pow(i, e), self.field.one())
    }

    /// Builds an element from arbitrary terms, summing repeats and truncating.
    pub fn element(&self, terms: Vec<(Monomial, F::Elem)>) -> RingElement<F::Elem> {
        let f = &self.field;
        let mut t: Vec<_> = terms.into_iter().filter(|(m, c)| self.in_range(m) && !f.is_zero(c)).collect();
        t.sort_by_key(|x| x.0);
        let mut out: Vec<(Monomial, F::Elem)> = Vec::with_capacity(t.len());
        for (m, c) in t {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !f.is_zero(c));
        RingElement { terms: out }
    }

    pub fn add(&self, a: &RingElement<F::Elem>, b: &RingElement<F::Elem>) -> RingElement<F::Elem> {
        let f = &self.field;
        let (x, y) = (&a.terms, &b.terms);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(x[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(y[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = f.add(&x[i].1, &y[j].1);
                    if !f.is_zero(&v) {
                        out.push((x[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&x[i..]);
        out.extend_from_slice(&y[j..]);
        RingElement { terms: out }
    }

    pub fn neg(&self, a: &RingElement<F::Elem>) -> RingElement<F::Elem> {
        RingElement { terms: a.terms.iter().map(|(m, c)| (*m, self.field.neg(c))).collect() }
    }

    pub fn sub(&self, a: &RingElement<F::Elem>, b: &RingElement<F::Elem>) -> RingElement<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &RingElement<F::Elem>, s: &F::Elem) -> RingElement<F::Elem> {
        if self.field.is_zero(s) {
            return RingElement::zero();
        }
        RingElement { terms: a.terms.iter().map(|(m, c)| (*m, self.field.mul(c, s))).collect() }
    }

    /// Monomial product, or `None` when it is truncated away.
    #[inline]
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        if let Some(ex) = self.exponents() {
            for (i, &e) in ex.iter().enumerate() {
                if a.exp(i) + b.exp(i) >= e {
                    return None;
                }
            }
        }
        Some(a.mul(b))
    }

    pub fn mul(&self, a: &RingElement<F::Elem>, b: &RingElement<F::Elem>) -> RingElement<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return RingElement::zero();
        }
        let f = &self.field;
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some(m) = self.mul_monomials(ma, mb) {
                    terms.push((m, f.mul(ca, cb)));
                }
            }
        }
        self.element(terms)
    }

    pub fn constant_term(&self, a: &RingElement<F::Elem>) -> F::Elem {
        match a.terms.first() {
            Some((m, c)) if *m == Monomial::ONE => c.clone(),
            _ => self.field.zero(),
        }
    }

    /// Units are the elements with nonzero constant term (local or graded rings).
    pub fn is_unit(&self, a: &RingElement<F::Elem>) -> bool {
        !self.field.is_zero(&self.constant_term(a))
    }

    /// Inverse of a unit. In a complete intersection the maximal ideal is
    /// nilpotent, so `(c(1 - n))^{-1} = c^{-1} sum n^k` terminates. In a
    /// polynomial ring only constants are units.
    pub fn inverse(&self, a: &RingElement<F::Elem>) -> Result<RingElement<F::Elem>> {
        let f = &self.field;
        let c = self.constant_term(a);
        let ci = f.inv(&c).ok_or_else(|| Error::Precondition("inverse of a non-unit".into()))?;
        let normalized = self.scale(a, &ci);
        let nil = self.sub(&self.one(), &normalized);
        if nil.is_zero() {
            return Ok(self.constant(ci));
        }
        if !self.is_finite() {
            return Err(Error::Precondition("only constants are units in a polynomial ring".into()));
        }
        let mut sum = self.one();
        let mut pow = self.one();
        loop {
            pow = self.mul(&pow, &nil);
            if pow.is_zero() {
                break;
            }
            sum = self.add(&sum, &pow);
        }
        Ok(self.scale(&sum, &ci))
    }

    /// Internal degree when homogeneous.
    pub fn homogeneous_degree(&self, a: &RingElement<F::Elem>) -> Option<u32> {
        let mut it = a.terms.iter().map(|(m, _)| self.degree(m));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn format_element(&self, a: &RingElement<F::Elem>) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let n = self.nvars();
        a.terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = (0..n)
                    .filter(|&i| m.exp(i) > 0)
                    .map(|i| if m.exp(i) == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, m.exp(i)) })
                    .collect();
                let cs = self.field.format(c);
                match (mono.is_empty(), cs.as_str()) {
                    (true, _) => cs,
                    (false, "1") => mono.join("*"),
                    _ => format!("{cs}*{}", mono.join("*")),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Serialized element: `[[exponents], "coeff"]` pairs.
    pub fn element_to_json(&self, a: &RingElement<F::Elem>) -> Vec<(Vec<u32>, String)> {
        let n = self.nvars();
        a.terms.iter().map(|(m, c)| (m.exps(n), self.field.format(c))).collect()
    }

    pub fn element_from_json(&self, t: &[(Vec<u32>, String)]) -> Result<RingElement<F::Elem>> {
        let n = self.nvars();
        let mut terms = Vec::with_capacity(t.len());
        for (exps, c) in t {
            if exps.len() != n || exps.iter().any(|&e| e >= 256) {
                return Err(Error::Parse(format!("bad exponent vector {exps:?}")));
            }
            let m = Monomial::from_exps(exps);
            if !self.in_range(&m) {
                return Err(Error::Parse(format!("monomial {exps:?} is zero in the ring")));
            }
            terms.push((m, self.field.parse(c)?));
        }
        let e = self.element(terms.clone());
        if e.len() != terms.len() {
            return Err(Error::Parse("repeated or zero terms in ring element".into()));
        }
        Ok(e)
    }
}

impl<F: Field> fmt::Display for Ring<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.field.choice();
        match &self.pres {
            Presentation::CompleteIntersection { exponents } => {
                let rel: Vec<String> = exponents.iter().enumerate().map(|(i, a)| format!("t{}^{a}", i + 1)).collect();
                write!(f, "{k}[t1..t{}]/({})", exponents.len(), rel.join(","))
            }
            Presentation::Polynomial { vars, gen_degree } => write!(f, "{k}[t1..t{vars}], deg t_i = {gen_degree}"),
        }
    }
}

/// Ring descriptor: `{char, exponents}` or `{char, d, gdeg}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingJson {
    pub char: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gdeg: Option<u32>,
}

impl RingJson {
    pub fn field_choice(&self) -> Result<FieldChoice> {
        FieldChoice::from_characteristic(self.char)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn gf3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn truncated_multiplication() {
        let r = Ring::uniform_ci(gf3(), 1, 3).unwrap();
        let t = r.var(0);
        let t2 = r.mul(&t, &t);
        assert_eq!(t2, r.var_pow(0, 2));
        assert!(r.mul(&t2, &t).is_zero());

        let r = Ring::uniform_ci(gf3(), 2, 2).unwrap();
        let a = r.add(&r.one(), &r.var(0));
        let b = r.add(&r.one(), &r.var(1));
        let prod = r.mul(&a, &b);
        assert_eq!(prod.len(), 4);
        let socle = r.term(Monomial::from_exps(&[1, 1]), 1);
        assert!(r.mul(&socle, &r.var(0)).is_zero());
        assert!(r.mul(&socle, &r.var(1)).is_zero());
    }

    #[test]
    fn dimensions_and_series() {
        let r = Ring::uniform_ci(gf3(), 2, 3).unwrap();
        assert_eq!(r.kdim(), Some(9));
        assert_eq!(r.length_of(9).unwrap(), 9);
        assert_eq!(r.hilbert_series().unwrap().eval_at_one(), 9.into());
        let total: usize = (0..=4).map(|k| r.stratum(k).len()).sum();
        assert_eq!(total, 9);
        for k in 0..=4 {
            assert_eq!(r.stratum(k).len(), r.stratum_dim(k));
        }
        assert!(r.order_at_least_three());
        assert!(r.is_elementary_abelian_group_algebra());
        assert!(!Ring::uniform_ci(gf3(), 2, 2).unwrap().order_at_least_three());
    }

    #[test]
    fn basis_index_is_positional() {
        let r = Ring::complete_intersection(gf3(), vec![2, 3, 2]).unwrap();
        for (i, m) in r.basis().iter().enumerate() {
            assert_eq!(r.basis_index(m), i);
        }
    }

    #[test]
    fn polynomial_strata() {
        let s = Ring::polynomial(gf3(), 3, 2).unwrap();
        assert_eq!(s.stratum(3).len(), 0);
        assert_eq!(s.stratum(4).len(), 6);
        assert_eq!(s.stratum_dim(4), 6);
        for (i, m) in s.stratum(6).iter().enumerate() {
            assert_eq!(s.stratum_index(m), i);
        }
        assert!(Ring::polynomial(gf3(), 3, 3).is_err());
    }

    #[test]
    fn unit_inverse() {
        let r = Ring::uniform_ci(PrimeField::new(5).unwrap(), 2, 3).unwrap();
        let u = r.element(vec![(Monomial::ONE, 2), (Monomial::var(0), 1), (Monomial::from_exps(&[1, 1]), 3)]);
        let inv = r.inverse(&u).unwrap();
        assert_eq!(r.mul(&u, &inv), r.one());
        assert!(r.inverse(&r.var(1)).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let r = Ring::complete_intersection(gf3(), vec![3, 3]).unwrap();
        let j = serde_json::to_string(&r.descriptor()).unwrap();
        assert_eq!(j, r#"{"char":3,"exponents":[3,3]}"#);
        let back = Ring::from_descriptor(gf3(), &serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.presentation(), r.presentation());
        let s = Ring::polynomial(gf3(), 8, 1).unwrap();
        assert_eq!(serde_json::to_string(&s.descriptor()).unwrap(), r#"{"char":3,"d":8,"gdeg":1}"#);
    }
}
