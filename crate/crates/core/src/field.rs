//! Exact arithmetic in the field of rationals extended by √2 and √3.
//!
//! Every element is stored as `a + b·√2 + c·√3 + d·√6` with rational
//! coefficients. The basis is linearly independent over the rationals, so two
//! elements are equal exactly when their coefficients are.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected {found} at byte {pos} in {input:?}")]
    Unexpected {
        input: String,
        pos: usize,
        found: String,
    },
    #[error("division by zero in {0:?}")]
    DivisionByZero(String),
}

/// `a + b√2 + c√3 + d√6` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl AlgebraicNumber {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        AlgebraicNumber { a, b, c, d }
    }

    pub fn from_rational(a: BigRational) -> Self {
        AlgebraicNumber {
            a,
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn sqrt2() -> Self {
        AlgebraicNumber {
            b: q(1),
            ..Self::zero()
        }
    }

    pub fn sqrt3() -> Self {
        AlgebraicNumber {
            c: q(1),
            ..Self::zero()
        }
    }

    pub fn sqrt6() -> Self {
        AlgebraicNumber {
            d: q(1),
            ..Self::zero()
        }
    }

    /// Coefficients `[a, b, c, d]` of `1, √2, √3, √6`.
    pub fn coefficients(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        // x = p + q√3 with p = a + b√2 and q = c + d√2.
        let p = (self.a.clone(), self.b.clone());
        let qq = (self.c.clone(), self.d.clone());
        let sp = sign_sqrt2(&p);
        let sq = sign_sqrt2(&qq);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return if sp == 0 { sq } else { sp };
        }
        // Opposite signs: compare p² with 3q² inside Q(√2).
        let p2 = mul_sqrt2(&p, &p);
        let q2 = mul_sqrt2(&qq, &qq);
        let diff = (&p2.0 - q(3) * &q2.0, &p2.1 - q(3) * &q2.1);
        match sign_sqrt2(&diff) {
            0 => 0,
            s if s > 0 => sp,
            _ => sq,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(p + q√3) = (p - q√3) / (p² - 3q²), and 1/(r + s√2) = (r - s√2)/(r² - 2s²).
        let p = (self.a.clone(), self.b.clone());
        let qq = (self.c.clone(), self.d.clone());
        let p2 = mul_sqrt2(&p, &p);
        let q2 = mul_sqrt2(&qq, &qq);
        let (r, s) = (&p2.0 - q(3) * &q2.0, &p2.1 - q(3) * &q2.1);
        let norm = &r * &r - q(2) * &s * &s;
        let inv_den = (&r / &norm, -(&s / &norm));
        let num_p = mul_sqrt2(&p, &inv_den);
        let neg_q = (-qq.0, -qq.1);
        let num_q = mul_sqrt2(&neg_q, &inv_den);
        Some(AlgebraicNumber {
            a: num_p.0,
            b: num_p.1,
            c: num_q.0,
            d: num_q.1,
        })
    }

    /// Approximate value, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| {
            let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        };
        f(&self.a) + f(&self.b) * 2f64.sqrt() + f(&self.c) * 3f64.sqrt() + f(&self.d) * 6f64.sqrt()
    }

    /// Least common multiple of the coefficient denominators.
    pub(crate) fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.coefficients()
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }

    /// Integer coefficients when all denominators are 1.
    pub(crate) fn integer_coefficients(&self) -> Option<[BigInt; 4]> {
        let cs = self.coefficients();
        if cs.iter().all(|r| r.is_integer()) {
            Some([
                cs[0].to_integer(),
                cs[1].to_integer(),
                cs[2].to_integer(),
                cs[3].to_integer(),
            ])
        } else {
            None
        }
    }

    pub(crate) fn scale_rational(&self, k: &BigRational) -> Self {
        AlgebraicNumber {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }
}

fn sign_rat(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `r + s√2`.
fn sign_sqrt2((r, s): &(BigRational, BigRational)) -> i32 {
    let sr = sign_rat(r);
    let ss = sign_rat(s);
    if ss == 0 {
        return sr;
    }
    if sr == 0 || sr == ss {
        return if sr == 0 { ss } else { sr };
    }
    let lhs = r * r;
    let rhs = q(2) * s * s;
    match lhs.cmp(&rhs) {
        Ordering::Greater => sr,
        Ordering::Less => ss,
        Ordering::Equal => 0,
    }
}

fn mul_sqrt2(
    (r1, s1): &(BigRational, BigRational),
    (r2, s2): &(BigRational, BigRational),
) -> (BigRational, BigRational) {
    (r1 * r2 + q(2) * s1 * s2, r1 * s2 + s1 * r2)
}

impl Zero for AlgebraicNumber {
    fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

impl One for AlgebraicNumber {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Add<&AlgebraicNumber> for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn add(self, o: &AlgebraicNumber) -> AlgebraicNumber {
        AlgebraicNumber {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }
}

impl Sub<&AlgebraicNumber> for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn sub(self, o: &AlgebraicNumber) -> AlgebraicNumber {
        AlgebraicNumber {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            c: &self.c - &o.c,
            d: &self.d - &o.d,
        }
    }
}

impl Mul<&AlgebraicNumber> for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn mul(self, o: &AlgebraicNumber) -> AlgebraicNumber {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&o.a, &o.b, &o.c, &o.d);
        // √2√3 = √6, √2√6 = 2√3, √3√6 = 3√2.
        AlgebraicNumber {
            a: a * e + q(2) * b * f + q(3) * c * g + q(6) * d * h,
            b: a * f + b * e + q(3) * (c * h + d * g),
            c: a * g + c * e + q(2) * (b * h + d * f),
            d: a * h + d * e + b * g + c * f,
        }
    }
}

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

/// Panics on division by zero, like the integer operators.
impl Div<&AlgebraicNumber> for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn div(self, o: &AlgebraicNumber) -> AlgebraicNumber {
        self * &o.inverse().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}

impl From<i64> for AlgebraicNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// Writes the element as an expression over integers, `r2`, `r3`, `r6` and
/// `/`, e.g. `1/2-r2/4+3*r6`. Parsing the output gives back the same element.
impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (coef, radical) in self.coefficients().into_iter().zip(["", "r2", "r3", "r6"]) {
            if coef.is_zero() {
                continue;
            }
            let neg = coef.is_negative();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let num = coef.numer().abs();
            let den = coef.denom();
            if radical.is_empty() {
                write!(f, "{num}")?;
            } else if num.is_one() {
                f.write_str(radical)?;
            } else {
                write!(f, "{num}*{radical}")?;
            }
            if !den.is_one() {
                write!(f, "/{den}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for AlgebraicNumber {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ExprParser {
            src: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.unexpected());
        }
        Ok(v)
    }
}

/// Recursive-descent parser for `expr := term (('+'|'-') term)*`,
/// `term := unary (('*'|'/') unary)*`, `unary := '-' unary | atom`,
/// `atom := integer | r2 | r3 | r6 | '(' expr ')'`.
struct ExprParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self) -> ExprError {
        ExprError::Unexpected {
            input: self.src.to_string(),
            pos: self.pos,
            found: match self.bytes.get(self.pos) {
                Some(&b) => format!("{:?}", b as char),
                None => "end of input".into(),
            },
        }
    }

    fn expr(&mut self) -> Result<AlgebraicNumber, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgebraicNumber, ExprError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                &acc * &rhs
            } else {
                let inv = rhs
                    .inverse()
                    .ok_or_else(|| ExprError::DivisionByZero(self.src.to_string()))?;
                &acc * &inv
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<AlgebraicNumber, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<AlgebraicNumber, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'r') => {
                let radical = match self.bytes.get(self.pos + 1) {
                    Some(b'2') => AlgebraicNumber::sqrt2(),
                    Some(b'3') => AlgebraicNumber::sqrt3(),
                    Some(b'6') => AlgebraicNumber::sqrt6(),
                    _ => return Err(self.unexpected()),
                };
                self.pos += 2;
                Ok(radical)
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos].parse().expect("digits");
                Ok(AlgebraicNumber::from_rational(BigRational::from_integer(n)))
            }
            _ => Err(self.unexpected()),
        }
    }
}
