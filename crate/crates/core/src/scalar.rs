//! Exact scalar fields: the rationals ℚ and the rational functions ℚ(s).
//!
//! Every value is kept in a canonical form, so equality is structural.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::expr::{self, Expr, ExprError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} is not a constant of this field")]
    NotConstant(String),
    #[error("unknown identifier '{0}' in scalar literal")]
    UnknownIdent(String),
    #[error(transparent)]
    Parse(#[from] ExprError),
}

/// The operations generic linear algebra needs from a scalar field.
pub trait Field:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Short field name used in reports (`q` or `qs`).
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    fn from_rat(r: &Rat) -> Self;
    /// Embeds a rational function, if it is an element of this field.
    fn from_ratfunc(f: &RatFunc) -> Option<Self>;
    fn to_ratfunc(&self) -> RatFunc;

    /// True when the printed form starts with a minus sign.
    fn is_negative(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rat(&Rat::from(n))
    }

    /// Parses a literal in the scalar grammar.
    fn parse_literal(src: &str) -> Result<Self, ScalarError> {
        let f: RatFunc = src.parse()?;
        Self::from_ratfunc(&f).ok_or_else(|| ScalarError::NotConstant(f.to_string()))
    }
}

/// An arbitrary-precision rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rat, ScalarError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num.into(), den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Rat, ScalarError> {
        Rat::parse_literal(s)
    }
}

impl Field for Rat {
    const NAME: &'static str = "q";

    fn zero() -> Rat {
        Rat(BigRational::zero())
    }
    fn one() -> Rat {
        Rat(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, o: &Rat) -> Rat {
        Rat(&self.0 + &o.0)
    }
    fn sub(&self, o: &Rat) -> Rat {
        Rat(&self.0 - &o.0)
    }
    fn mul(&self, o: &Rat) -> Rat {
        Rat(&self.0 * &o.0)
    }
    fn neg(&self) -> Rat {
        Rat(-&self.0)
    }
    fn inv(&self) -> Result<Rat, ScalarError> {
        if self.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Rat(self.0.recip()))
        }
    }
    fn from_rat(r: &Rat) -> Rat {
        r.clone()
    }
    fn from_ratfunc(f: &RatFunc) -> Option<Rat> {
        f.as_constant()
    }
    fn to_ratfunc(&self) -> RatFunc {
        RatFunc::constant(self.clone())
    }
    fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

/// A univariate polynomial in `s` with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `s`.
    pub fn s() -> Poly {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = Rat::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).unwrap_or(&zero);
                    let b = o.coeffs.get(k).unwrap_or(&zero);
                    a.add(b)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(Field::neg).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Euclidean division: `self = q*d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), ScalarError> {
        let dlead = d.leading().ok_or(ScalarError::DivisionByZero)?.inv()?;
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].mul(&dlead);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = rem[idx].sub(&c.mul(dc));
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor by Euclidean remainders.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    fn is_single_term(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() <= 1
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "s".to_string(),
                _ => format!("s^{k}"),
            };
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A rational function `num/den` over ℚ with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero_value());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lc = den.leading().expect("nonzero").inv()?;
        Ok(RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    fn zero_value() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> RatFunc {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// The indeterminate `s`.
    pub fn s() -> RatFunc {
        RatFunc::poly(Poly::s())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Re-normalizes; a no-op on values built through the public API.
    pub fn canonicalize(&self) -> RatFunc {
        RatFunc::new(self.num.clone(), self.den.clone()).expect("denominator is nonzero")
    }

    fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    fn constant_value(&self) -> Option<&Rat> {
        match (self.is_poly(), self.num.degree()) {
            (true, Some(0)) => self.num.coeffs().first(),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.degree() == Some(0) && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeffs().first().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    fn eval_expr(e: &Expr) -> Result<RatFunc, ScalarError> {
        Ok(match e {
            Expr::Int(n) => RatFunc::constant(Rat::from(n.clone())),
            Expr::Ident(name) if name == "s" => RatFunc::s(),
            Expr::Ident(name) => return Err(ScalarError::UnknownIdent(name.clone())),
            Expr::Neg(a) => Self::eval_expr(a)?.neg(),
            Expr::Add(a, b) => Self::eval_expr(a)?.add(&Self::eval_expr(b)?),
            Expr::Sub(a, b) => Self::eval_expr(a)?.sub(&Self::eval_expr(b)?),
            Expr::Mul(a, b) => Self::eval_expr(a)?.mul(&Self::eval_expr(b)?),
            Expr::Div(a, b) => Self::eval_expr(a)?.mul(&Self::eval_expr(b)?.inv()?),
            Expr::Pow(a, k) => {
                let base = Self::eval_expr(a)?;
                let mut acc = RatFunc::one();
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                acc
            }
        })
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            return write!(f, "{}", self.num);
        }
        let num = self.num.to_string();
        let plain_num = self.num.is_single_term() && !num.contains(['/', '*']);
        if plain_num {
            write!(f, "{num}/")?;
        } else {
            write!(f, "({num})/")?;
        }
        if self.den.is_single_term() {
            write!(f, "{}", self.den)
        } else {
            write!(f, "({})", self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RatFunc {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<RatFunc, ScalarError> {
        RatFunc::eval_expr(&expr::parse_expr(s)?)
    }
}

impl From<Rat> for RatFunc {
    fn from(r: Rat) -> RatFunc {
        RatFunc::constant(r)
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> RatFunc {
        RatFunc::constant(Rat::from(n))
    }
}

impl Field for RatFunc {
    const NAME: &'static str = "qs";

    fn zero() -> RatFunc {
        RatFunc::zero_value()
    }
    fn one() -> RatFunc {
        RatFunc::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_poly() && o.is_poly() {
            return RatFunc::poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero")
    }
    fn sub(&self, o: &RatFunc) -> RatFunc {
        Field::add(self, &Field::neg(o))
    }
    fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero_value();
        }
        // Scaling by a nonzero constant keeps the fraction reduced.
        if let Some(c) = o.constant_value() {
            return RatFunc {
                num: self.num.scale(c),
                den: self.den.clone(),
            };
        }
        if let Some(c) = self.constant_value() {
            return RatFunc {
                num: o.num.scale(c),
                den: o.den.clone(),
            };
        }
        if self.is_poly() && o.is_poly() {
            return RatFunc::poly(self.num.mul(&o.num));
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }
    fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Result<RatFunc, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(c) = self.constant_value() {
            return Ok(RatFunc::constant(c.inv()?));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    fn from_rat(r: &Rat) -> RatFunc {
        RatFunc::constant(r.clone())
    }
    fn from_ratfunc(f: &RatFunc) -> Option<RatFunc> {
        Some(f.clone())
    }
    fn to_ratfunc(&self) -> RatFunc {
        self.clone()
    }
    fn is_negative(&self) -> bool {
        self.num.leading().is_some_and(Field::is_negative)
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                Field::add(&self, &o)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                Field::sub(&self, &o)
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                Field::mul(&self, &o)
            }
        }
        /// Panics on division by zero; use [`Field::inv`] for a checked inverse.
        impl std::ops::Div for $t {
            type Output = $t;
            fn div(self, o: $t) -> $t {
                Field::mul(&self, &Field::inv(&o).expect("division by zero"))
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                Field::neg(&self)
            }
        }
    };
}

forward_ops!(Rat);
forward_ops!(RatFunc);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(Rat::new(2, 4).unwrap().to_string(), "1/2");
        assert_eq!(Rat::zero().inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(Rat::new(1, 0), Err(ScalarError::DivisionByZero));
        assert_eq!(Rat::new(0, -7).unwrap().to_string(), "0");
        assert_eq!(Rat::new(3, -6).unwrap().to_string(), "-1/2");
    }

    #[test]
    fn rational_function_canonical_forms() {
        assert_eq!(RatFunc::s() * rf("1/s"), RatFunc::one());
        assert_eq!(rf("(s^2-1)/(s-1)"), rf("s+1"));
        let half_over_s = rf("1/(2*s)");
        assert_eq!(half_over_s.numer(), &Poly::constant(q("1/2")));
        assert_eq!(half_over_s.denom(), &Poly::s());
        assert_eq!(RatFunc::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "(3*s^2+1)/(2*s)",
            "s",
            "1/(s+1)",
            "-7/3",
            "(s-1)/(s^2+s+1)",
            "-s^3/(s^2+2)",
            "5*s/(s+1/2)",
        ] {
            let v = rf(src);
            let printed = v.to_string();
            assert_eq!(rf(&printed), v, "{src} printed as {printed}");
        }
        assert_eq!(rf("(3*s^2+1)/(2*s)").to_string(), "(3/2*s^2+1/2)/s");
    }

    #[test]
    fn literals_reject_non_constants_in_q() {
        assert!(matches!(Rat::parse_literal("s"), Err(ScalarError::NotConstant(_))));
        assert!(matches!(RatFunc::parse_literal("t"), Err(ScalarError::UnknownIdent(_))));
        assert_eq!(Rat::parse_literal("(6/4)").unwrap(), q("3/2"));
        assert!(matches!(Rat::parse_literal("1/0"), Err(ScalarError::DivisionByZero)));
    }

    #[test]
    fn poly_gcd_is_monic() {
        let a = Poly::from_coeffs(vec![q("-2"), q("0"), q("2")]); // 2s^2 - 2
        let b = Poly::from_coeffs(vec![q("3"), q("3")]); // 3s + 3
        assert_eq!(a.gcd(&b), Poly::from_coeffs(vec![q("1"), q("1")]));
        assert_eq!(Poly::zero().degree(), None);
        assert!(Poly::zero().gcd(&Poly::zero()).is_zero());
    }
}
