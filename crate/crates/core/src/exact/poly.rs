use alloc::fmt;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A univariate polynomial in the loop parameter `d` with `BigInt`
/// coefficients. `coeffs[i]` is the coefficient of `d^i`; trailing zeros are
/// never stored, and the zero polynomial is the empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DeltaPoly {
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// Exact division was requested but the divisor does not divide.
    NotDivisible,
    DivisionByZero,
    Parse(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::NotDivisible => write!(f, "polynomial division is not exact"),
            PolyError::DivisionByZero => write!(f, "division by the zero polynomial"),
            PolyError::Parse(s) => write!(f, "cannot parse polynomial: {s}"),
        }
    }
}

impl core::error::Error for PolyError {}

impl DeltaPoly {
    pub fn zero() -> Self {
        DeltaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DeltaPoly::constant(1)
    }

    /// The polynomial `d`.
    pub fn delta() -> Self {
        DeltaPoly::monomial(BigInt::one(), 1)
    }

    /// The monomial `d^k`.
    pub fn delta_pow(k: usize) -> Self {
        DeltaPoly::monomial(BigInt::one(), k)
    }

    pub fn constant(c: i64) -> Self {
        DeltaPoly::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return DeltaPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        DeltaPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DeltaPoly { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        DeltaPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return DeltaPoly::zero();
        }
        DeltaPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `d^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return DeltaPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        DeltaPoly { coeffs }
    }

    /// Exact rational value at `d = x`.
    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// gcd of the coefficients (zero for the zero polynomial, positive
    /// otherwise).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = gcd_bigint(&g, c);
        }
        g
    }

    /// Divide out the content; the zero polynomial stays zero.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        DeltaPoly::from_coeffs(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact division, failing unless `self = q * div` exactly in `Z[d]`.
    pub fn exact_div(&self, div: &DeltaPoly) -> Result<DeltaPoly, PolyError> {
        if div.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(DeltaPoly::zero());
        }
        let dd = div.degree().unwrap();
        let nd = self.degree().unwrap();
        if nd < dd {
            return Err(PolyError::NotDivisible);
        }
        let lead = div.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            if !(&top % lead).is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let q = &top / lead;
            for (i, c) in div.coeffs.iter().enumerate() {
                let t = &q * c;
                rem[k + i] -= t;
            }
            quo[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::NotDivisible);
        }
        Ok(DeltaPoly::from_coeffs(quo))
    }

    /// Exact division by an integer scalar.
    pub fn exact_div_scalar(&self, c: &BigInt) -> Result<DeltaPoly, PolyError> {
        if c.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            if !(a % c).is_zero() {
                return Err(PolyError::NotDivisible);
            }
            out.push(a / c);
        }
        Ok(DeltaPoly { coeffs: out })
    }
}

pub(crate) fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl Add for &DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, rhs: &DeltaPoly) -> DeltaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        DeltaPoly::from_coeffs(out)
    }
}

impl Sub for &DeltaPoly {
    type Output = DeltaPoly;
    fn sub(self, rhs: &DeltaPoly) -> DeltaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        DeltaPoly::from_coeffs(out)
    }
}

impl Mul for &DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, rhs: &DeltaPoly) -> DeltaPoly {
        if self.is_zero() || rhs.is_zero() {
            return DeltaPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DeltaPoly::from_coeffs(out)
    }
}

impl Neg for &DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        DeltaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for DeltaPoly {
            type Output = DeltaPoly;
            fn $method(self, rhs: DeltaPoly) -> DeltaPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Serialization grammar: terms `c*d^k` joined by ` + `, highest power first,
/// with `c*d` for degree one and a bare integer for the constant term.
/// Negative coefficients ride along in `c`, e.g. `1*d^3 + -2*d`.
impl fmt::Display for DeltaPoly {
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
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*d")?,
                _ => write!(f, "{c}*d^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeltaPoly({self})")
    }
}

impl FromStr for DeltaPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let mut acc = DeltaPoly::zero();
        let normalized = s.replace(' ', "").replace('-', "+-");
        for term in normalized.split('+') {
            let term = term.trim();
            if term.is_empty() {
                continue;
            }
            let (coeff_str, power) = match term.find('d') {
                None => (term, 0usize),
                Some(pos) => {
                    let c = term[..pos].trim().trim_end_matches('*').trim();
                    let rest = term[pos + 1..].trim();
                    let k = if rest.is_empty() {
                        1
                    } else {
                        let rest = rest
                            .strip_prefix('^')
                            .ok_or_else(|| PolyError::Parse(String::from(s)))?;
                        rest.trim()
                            .parse::<usize>()
                            .map_err(|_| PolyError::Parse(String::from(s)))?
                    };
                    (c, k)
                }
            };
            let coeff = match coeff_str {
                "" => BigInt::one(),
                "-" => -BigInt::one(),
                c => c
                    .parse::<BigInt>()
                    .map_err(|_| PolyError::Parse(String::from(s)))?,
            };
            acc = &acc + &DeltaPoly::monomial(coeff, power);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> DeltaPoly {
        DeltaPoly::from_i64_coeffs(coeffs)
    }

    #[test]
    fn ring_identity_difference_of_squares() {
        // (d+1)(d-1) = d^2 - 1
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        assert_eq!(p(&[0, 0, 0]), DeltaPoly::zero());
        assert!(p(&[0]).is_zero());
        assert_eq!(p(&[3, 0]).degree(), Some(0));
    }

    #[test]
    fn degree_is_additive() {
        let a = p(&[2, 0, 5]);
        let b = p(&[0, 7]);
        assert_eq!((&a * &b).degree(), Some(3));
    }

    #[test]
    fn evaluate_at_zero_kills_d_cubed_minus_two_d() {
        let q = p(&[0, -2, 0, 1]); // d^3 - 2d
        assert!(q.evaluate(&BigRational::zero()).is_zero());
        let two = BigRational::from_integer(2.into());
        assert_eq!(
            q.evaluate(&two),
            BigRational::from_integer(4.into())
        );
    }

    #[test]
    fn exact_division_and_failure() {
        let prod = p(&[-1, 0, 1]);
        let a = p(&[1, 1]);
        assert_eq!(prod.exact_div(&a).unwrap(), p(&[-1, 1]));
        assert_eq!(
            p(&[1, 1, 1]).exact_div(&a),
            Err(PolyError::NotDivisible)
        );
        assert_eq!(
            a.exact_div(&DeltaPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        let q = p(&[16, 0, 0, -12, 0, 0, 1]);
        let s = alloc::format!("{q}");
        assert_eq!(s, "1*d^6 + -12*d^3 + 16");
        assert_eq!(s.parse::<DeltaPoly>().unwrap(), q);
        assert_eq!("d^2 - 2".parse::<DeltaPoly>().unwrap(), p(&[-2, 0, 1]));
        assert_eq!("0".parse::<DeltaPoly>().unwrap(), DeltaPoly::zero());
    }
}
