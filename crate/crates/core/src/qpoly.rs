//! Exact scalar arithmetic in the field Q(q).
//!
//! Series coefficients throughout the engine are exact rational functions of
//! q, stored as `q^shift * num / den` with `num` and `den` integer
//! polynomials having nonzero constant terms. The form is canonical: the pair
//! is reduced by polynomial gcd and joint integer content, and `den` has a
//! positive constant coefficient, so equality is structural.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Integer polynomial in q, dense coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::new(vec![c])
    }

    /// c * q^k.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        ZPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Smallest exponent with nonzero coefficient; None for the zero polynomial.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiply by q^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    /// Divide by q^k; requires every term to have exponent >= k.
    fn shift_down(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        debug_assert!(self.low_order().map_or(true, |l| l >= k));
        ZPoly::new(self.coeffs[k..].to_vec())
    }

    pub fn add(&self, other: &ZPoly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        ZPoly::new(out)
    }

    pub fn sub(&self, other: &ZPoly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        ZPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &ZPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        ZPoly::new(out)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Gcd of all coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Self {
        debug_assert!(!c.is_zero());
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    let (q, r) = a.div_rem(c);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        }
    }

    fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.div_scalar_exact(&c)
        }
    }

    fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading of zero polynomial")
    }

    /// Exact polynomial division; None if the remainder is nonzero or a
    /// quotient coefficient would be fractional.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        let dd = d.degree().unwrap();
        let dn = self.degree().unwrap();
        if dn < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        let lead = d.leading();
        for k in (dd..=dn).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let (c, r) = rem[k].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            quot[k - dd] = c.clone();
            for (j, dj) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                let t = &c * dj;
                rem[idx] -= t;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::new(quot))
    }

    /// One round of pseudo-division: remainder of lead(d)^m * self by d.
    fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let mut r = self.clone();
        let lead = d.leading().clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().clone();
            let scaled = r.mul_scalar(&lead);
            let shifted = d.shift_up(dr - dd).mul_scalar(&lr);
            r = scaled.sub(&shifted);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
        if a.is_zero() {
            return b.primitive_part().with_positive_leading();
        }
        if b.is_zero() {
            return a.primitive_part().with_positive_leading();
        }
        let mut p = a.primitive_part();
        let mut q = b.primitive_part();
        if p.degree() < q.degree() {
            std::mem::swap(&mut p, &mut q);
        }
        while !q.is_zero() {
            let r = p.pseudo_rem(&q).primitive_part();
            p = q;
            q = r;
        }
        p.with_positive_leading()
    }

    fn with_positive_leading(self) -> Self {
        if self.is_zero() || self.leading().is_positive() {
            self
        } else {
            self.neg()
        }
    }

    /// Value at q = 1.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn eval_f64(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            let cf: f64 = to_f64(c);
            acc = acc * q + cf;
        }
        acc
    }
}

fn to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}", mag)?;
                }
                if k == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

/// Element of Q(q) in canonical reduced form: q^shift * num / den.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCoeff {
    shift: i64,
    num: ZPoly,
    den: ZPoly,
}

impl QCoeff {
    pub fn zero() -> Self {
        QCoeff {
            shift: 0,
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        QCoeff::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        QCoeff {
            shift: 0,
            num: ZPoly::constant(BigInt::from(n)),
            den: ZPoly::one(),
        }
        .normalize()
    }

    /// q^k.
    pub fn q_pow(k: i64) -> Self {
        QCoeff {
            shift: k,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    /// c * q^k.
    pub fn monomial(c: i64, k: i64) -> Self {
        QCoeff {
            shift: k,
            num: ZPoly::constant(BigInt::from(c)),
            den: ZPoly::one(),
        }
        .normalize()
    }

    pub fn from_frac(num: ZPoly, den: ZPoly, shift: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator in Q(q) coefficient");
        QCoeff { shift, num, den }.normalize()
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            return QCoeff::zero();
        }
        let ln = self.num.low_order().unwrap();
        let ld = self.den.low_order().unwrap();
        self.shift += ln as i64 - ld as i64;
        self.num = self.num.shift_down(ln);
        self.den = self.den.shift_down(ld);
        let g = ZPoly::gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.div_exact(&g).expect("gcd divides numerator");
            self.den = self.den.div_exact(&g).expect("gcd divides denominator");
        }
        let c = self.num.content().gcd(&self.den.content());
        if !c.is_one() {
            self.num = self.num.div_scalar_exact(&c);
            self.den = self.den.div_scalar_exact(&c);
        }
        if self.den.coeff(0).is_negative() {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero Q(q) coefficient");
        QCoeff {
            shift: -self.shift,
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalize()
    }

    /// Some((power, integer coefficient)) when the value is c * q^power.
    pub fn as_q_monomial(&self) -> Option<(i64, BigInt)> {
        if self.den.is_one() && self.num.degree() == Some(0) {
            Some((self.shift, self.num.coeff(0)))
        } else if self.is_zero() {
            Some((0, BigInt::zero()))
        } else {
            None
        }
    }

    /// Value at q = 1; None when the reduced denominator vanishes there.
    pub fn eval_one(&self) -> Option<BigRational> {
        let d = self.den.eval_one();
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(self.num.eval_one(), d))
    }

    pub fn parts(&self) -> (i64, &ZPoly, &ZPoly) {
        (self.shift, &self.num, &self.den)
    }
}

impl Add for &QCoeff {
    type Output = QCoeff;
    fn add(self, rhs: &QCoeff) -> QCoeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let a = self
            .num
            .shift_up((self.shift - s) as usize)
            .mul(&rhs.den);
        let b = rhs.num.shift_up((rhs.shift - s) as usize).mul(&self.den);
        QCoeff::from_frac(a.add(&b), self.den.mul(&rhs.den), s)
    }
}

impl Sub for &QCoeff {
    type Output = QCoeff;
    fn sub(self, rhs: &QCoeff) -> QCoeff {
        self + &(-rhs)
    }
}

impl Mul for &QCoeff {
    type Output = QCoeff;
    fn mul(self, rhs: &QCoeff) -> QCoeff {
        if self.is_zero() || rhs.is_zero() {
            return QCoeff::zero();
        }
        // Cross-cancel before multiplying to keep degrees down.
        let g1 = ZPoly::gcd(&self.num, &rhs.den);
        let g2 = ZPoly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        QCoeff::from_frac(n1.mul(&n2), d1.mul(&d2), self.shift + rhs.shift)
    }
}

impl Div for &QCoeff {
    type Output = QCoeff;
    fn div(self, rhs: &QCoeff) -> QCoeff {
        self * &rhs.inv()
    }
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        QCoeff {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.shift != 0 {
            write!(f, "q^{}*", self.shift)?;
        }
        if self.den.is_one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
