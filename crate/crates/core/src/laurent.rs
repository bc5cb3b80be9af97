//! Exact multivariate Laurent polynomials in `A` and the open-arc weights
//! `l` / `l{i}{j}`, with integer coefficients.
//!
//! Every value is kept in canonical form (no zero coefficients, no zero
//! exponents), so structural equality and string equality coincide.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable {0} has a negative exponent and is mapped to a non-unit polynomial")]
    NegativeExponentSubstitution(Variable),
    #[error("cannot parse polynomial at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A polynomial variable. Pair labels are always stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    A,
    Lambda,
    LambdaPair(u32, u32),
}

impl Variable {
    pub fn pair(i: u32, j: u32) -> Self {
        if i <= j {
            Variable::LambdaPair(i, j)
        } else {
            Variable::LambdaPair(j, i)
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Variable::A => write!(f, "A"),
            Variable::Lambda => write!(f, "l"),
            Variable::LambdaPair(i, j) if i <= 9 && j <= 9 => write!(f, "l{i}{j}"),
            Variable::LambdaPair(i, j) => write!(f, "l{i}_{j}"),
        }
    }
}

/// Exponent vector, sorted by variable, zero exponents omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Variable, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable, exp: i32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn exponent(&self, v: Variable) -> i32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Variable, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    fn lambda_part(&self) -> &[(Variable, i32)] {
        match self.0.first() {
            Some((Variable::A, _)) => &self.0[1..],
            _ => &self.0,
        }
    }
}

// Terms are grouped by their lambda part (ascending), and within a group by
// descending power of A.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lambda_part()
            .cmp(other.lambda_part())
            .then_with(|| other.exponent(Variable::A).cmp(&self.exponent(Variable::A)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        LaurentPoly::term(BigInt::from(c), Monomial::one())
    }

    pub fn term(c: BigInt, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(v: Variable) -> Self {
        LaurentPoly::term(BigInt::one(), Monomial::var(v, 1))
    }

    /// `c * A^k`
    pub fn a_term(c: i64, k: i32) -> Self {
        LaurentPoly::term(BigInt::from(c), Monomial::var(Variable::A, k))
    }

    pub fn a_pow(k: i32) -> Self {
        LaurentPoly::a_term(1, k)
    }

    /// The loop value `-A^2 - A^-2`.
    pub fn delta() -> Self {
        LaurentPoly::a_term(-1, 2) + LaurentPoly::a_term(-1, -2)
    }

    pub fn lambda() -> Self {
        LaurentPoly::var(Variable::Lambda)
    }

    pub fn lambda_pair(i: u32, j: u32) -> Self {
        LaurentPoly::var(Variable::pair(i, j))
    }

    /// `(-A^3)^k` for any integer `k`.
    pub fn framing_factor(k: i32) -> Self {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        LaurentPoly::a_term(sign, 3 * k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// If `self` is `±m` for a single monomial, returns its inverse.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if c.abs() != BigInt::one() {
            return None;
        }
        let inv = Monomial(m.0.iter().map(|&(v, e)| (v, -e)).collect());
        Some(LaurentPoly::term(c.clone(), inv))
    }

    /// Replace every mapped variable by its image; unmapped variables stay.
    pub fn substitute(
        &self,
        map: &dyn Fn(Variable) -> Option<LaurentPoly>,
    ) -> Result<LaurentPoly, PolyError> {
        let mut cache: BTreeMap<(Variable, i32), LaurentPoly> = BTreeMap::new();
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut term = LaurentPoly::term(c.clone(), Monomial::one());
            for &(v, e) in &m.0 {
                let factor = match cache.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = match map(v) {
                            None => LaurentPoly::term(BigInt::one(), Monomial::var(v, e)),
                            Some(img) if e >= 0 => img.pow(e as u32),
                            Some(img) => img
                                .unit_inverse()
                                .ok_or(PolyError::NegativeExponentSubstitution(v))?
                                .pow(e.unsigned_abs()),
                        };
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                term = &term * &factor;
            }
            out += term;
        }
        Ok(out)
    }

    /// `A -> A^-1`.
    pub fn mirror(&self) -> Self {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let m = Monomial(
                m.0.iter()
                    .map(|&(v, e)| if v == Variable::A { (v, -e) } else { (v, e) })
                    .collect(),
            );
            out.add_term(m, c.clone());
        }
        out
    }

    /// Sends every `l{i}{j}` to `l`.
    pub fn forget_pairs(&self) -> Self {
        self.substitute(&|v| match v {
            Variable::LambdaPair(..) => Some(LaurentPoly::lambda()),
            _ => None,
        })
        .expect("lambda exponents are non-negative")
    }

    /// True when no variable other than `A` occurs.
    pub fn is_a_only(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.0.iter().all(|(v, _)| *v == Variable::A))
    }

    /// Divides out `l^n`, failing if some term is not divisible by it.
    pub fn strip_lambda_power(&self, n: i32) -> Option<Self> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent(Variable::Lambda) != n {
                return None;
            }
            out.add_term(m.mul(&Monomial::var(Variable::Lambda, -n)), c.clone());
        }
        Some(out)
    }

    /// Integer coefficient of a pure power of `A`, if it fits in an i64.
    pub fn coeff_a(&self, k: i32) -> i64 {
        self.terms
            .get(&Monomial::var(Variable::A, k))
            .and_then(|c| c.to_i64())
            .unwrap_or(0)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if c.is_negative() {
                write!(f, "-")?;
            } else if n > 0 {
                write!(f, "+")?;
            }
            let abs = c.abs();
            let mut first = true;
            if !abs.is_one() || m.is_one() {
                write!(f, "{abs}")?;
                first = false;
            }
            for &(v, e) in &m.0 {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs.clone();
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += rhs;
        self
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.clone() + (-rhs.clone())
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |a, b| a + b)
    }
}

impl FromStr for LaurentPoly {
    type Err = PolyError;

    /// Inverse of `Display`: terms joined by `+`/`-`, each a `*`-separated
    /// product of an integer, `A^k`, `l^k`, `l{i}{j}^k` or `l{i}_{j}^k`.
    fn from_str(s: &str) -> Result<Self, PolyError> {
        Parser { src: s.as_bytes(), pos: 0 }.poly()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn exponent(&mut self) -> Result<i32, PolyError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let Some(d) = self.digits() else { return self.err("expected exponent") };
        let e: i32 = match d.parse() {
            Ok(e) => e,
            Err(_) => return self.err("exponent out of range"),
        };
        Ok(if neg { -e } else { e })
    }

    fn poly(mut self) -> Result<LaurentPoly, PolyError> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        while self.peek().is_some() {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => return self.err("expected '+' or '-'"),
            };
            first = false;
            self.skip_ws();
            let (c, m) = self.term()?;
            out.add_term(m, c * sign);
            self.skip_ws();
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(BigInt, Monomial), PolyError> {
        let mut coeff = BigInt::one();
        let mut mono = Monomial::one();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'0'..=b'9') => {
                    let d = self.digits().unwrap();
                    coeff *= d.parse::<BigInt>().unwrap();
                }
                Some(b'A') => {
                    self.pos += 1;
                    let e = self.exponent()?;
                    mono = mono.mul(&Monomial::var(Variable::A, e));
                }
                Some(b'l') => {
                    self.pos += 1;
                    let v = match self.digits().map(str::to_string) {
                        None => Variable::Lambda,
                        Some(d) => {
                            if self.peek() == Some(b'_') {
                                self.pos += 1;
                                let Some(j) = self.digits() else {
                                    return self.err("expected label after '_'");
                                };
                                let j: u32 = j.parse().map_err(|_| PolyError::Parse {
                                    pos: self.pos,
                                    msg: "label out of range".into(),
                                })?;
                                let i: u32 = d.parse().map_err(|_| PolyError::Parse {
                                    pos: self.pos,
                                    msg: "label out of range".into(),
                                })?;
                                Variable::pair(i, j)
                            } else if d.len() == 2 {
                                let b = d.as_bytes();
                                Variable::pair((b[0] - b'0') as u32, (b[1] - b'0') as u32)
                            } else {
                                return self.err("pair label needs two digits or i_j form");
                            }
                        }
                    };
                    let e = self.exponent()?;
                    mono = mono.mul(&Monomial::var(v, e));
                }
                _ => return self.err("expected factor"),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((coeff, mono));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert!((p("A") + p("-A")).is_zero());
        assert_eq!(p("A+A^-1") + p("A^-1"), p("A+2*A^-1"));
        let d = LaurentPoly::delta();
        assert_eq!(d.clone() + d, p("-2*A^2-2*A^-2"));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(p("A+A^-1") * p("A-A^-1"), p("A^2-A^-2"));
        assert_eq!(p("-A^3") * p("-A^-3"), LaurentPoly::one());
        let d = LaurentPoly::delta();
        assert_eq!(&d * &d, p("A^4+2+A^-4"));
    }

    #[test]
    fn substitution_examples() {
        let to_l = |v| matches!(v, Variable::LambdaPair(..)).then(LaurentPoly::lambda);
        assert_eq!(p("l12*l34").substitute(&to_l).unwrap(), p("l^2"));
        let lam_one = |v| (v == Variable::Lambda).then(LaurentPoly::one);
        assert_eq!(p("A*l").substitute(&lam_one).unwrap(), p("A"));
        let scale = |v| (v == Variable::pair(1, 4)).then(|| LaurentPoly::delta() * p("l14"));
        assert_eq!(
            p("l14*l23").substitute(&scale).unwrap(),
            p("-A^2*l14*l23-A^-2*l14*l23")
        );
    }

    #[test]
    fn negative_exponent_needs_unit() {
        let m = |v| (v == Variable::A).then(|| p("A+1"));
        assert_eq!(
            p("A^-1").substitute(&m),
            Err(PolyError::NegativeExponentSubstitution(Variable::A))
        );
        let inv = |v| (v == Variable::A).then(|| p("-A^2"));
        assert_eq!(p("A^-1").substitute(&inv).unwrap(), p("-A^-2"));
    }

    #[test]
    fn display_forms() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::lambda().to_string(), "l");
        assert_eq!(LaurentPoly::delta().to_string(), "-A^2-A^-2");
        assert_eq!(LaurentPoly::lambda_pair(14, 3).to_string(), "l3_14");
        assert_eq!(p("l34*l12*A^2+l12*l34").to_string(), "A^2*l12*l34+l12*l34");
        assert_eq!(LaurentPoly::framing_factor(-1).to_string(), "-A^-3");
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("A^".parse::<LaurentPoly>().is_err());
        assert!("l123".parse::<LaurentPoly>().is_err());
        assert!("A B".parse::<LaurentPoly>().is_err());
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        let var = prop_oneof![
            Just(None),
            Just(Some(Variable::Lambda)),
            (1u32..5, 1u32..12).prop_map(|(i, j)| Some(Variable::pair(i, i + j))),
        ];
        proptest::collection::vec((-3i64..=3, -6i32..=6, var, 0i32..3), 0..6).prop_map(|ts| {
            ts.into_iter()
                .map(|(c, a, v, e)| {
                    let mut m = Monomial::var(Variable::A, a);
                    if let Some(v) = v {
                        m = m.mul(&Monomial::var(v, e));
                    }
                    LaurentPoly::term(BigInt::from(c), m)
                })
                .sum()
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(x in small_poly()) {
            let s = x.to_string();
            prop_assert_eq!(s.parse::<LaurentPoly>().unwrap(), x);
        }

        #[test]
        fn ring_laws(x in small_poly(), y in small_poly(), z in small_poly()) {
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &LaurentPoly::one(), x.clone());
        }

        #[test]
        fn mirror_is_an_involution(x in small_poly()) {
            prop_assert_eq!(x.mirror().mirror(), x);
        }
    }
}
