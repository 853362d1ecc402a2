use alloc::fmt;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{DeltaPoly, PolyError};

/// An irreducible factor over `Q`, stored primitive and with positive leading
/// coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Factor {
    /// `a*d + b`, giving the rational root `-b/a`.
    Linear { a: BigInt, b: BigInt },
    /// `a*d^2 + b*d + c` with no rational root.
    Quadratic { a: BigInt, b: BigInt, c: BigInt },
}

impl Factor {
    pub fn to_poly(&self) -> DeltaPoly {
        match self {
            Factor::Linear { a, b } => {
                DeltaPoly::from_coeffs([b.clone(), a.clone()].to_vec())
            }
            Factor::Quadratic { a, b, c } => {
                DeltaPoly::from_coeffs([c.clone(), b.clone(), a.clone()].to_vec())
            }
        }
    }
}

/// Where a root lives: either an exact rational, or the pair of conjugate
/// roots of an irreducible quadratic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RootSite {
    Rational(BigRational),
    /// Both roots of `a*d^2 + b*d + c`.
    QuadraticPair { a: BigInt, b: BigInt, c: BigInt },
}

impl fmt::Display for RootSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSite::Rational(r) => write!(f, "{r}"),
            RootSite::QuadraticPair { a, b, c } => {
                write!(f, "roots of {}", Factor::Quadratic {
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone()
                }
                .to_poly())
            }
        }
    }
}

/// `content * prod factors^mult * residual`, where the residual (degree >= 3,
/// no rational roots, no rational quadratic factor found) is reported rather
/// than silently dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(Factor, usize)>,
    pub residual: Option<DeltaPoly>,
}

impl Factorization {
    /// Multiply everything back together; must reproduce the input exactly.
    pub fn expand(&self) -> DeltaPoly {
        let mut acc = DeltaPoly::from_coeffs([self.content.clone()].to_vec());
        for (f, mult) in &self.factors {
            let fp = f.to_poly();
            for _ in 0..*mult {
                acc = &acc * &fp;
            }
        }
        if let Some(r) = &self.residual {
            acc = &acc * r;
        }
        acc
    }

    pub fn roots(&self) -> Vec<(RootSite, usize)> {
        self.factors
            .iter()
            .map(|(f, mult)| {
                let site = match f {
                    Factor::Linear { a, b } => {
                        RootSite::Rational(BigRational::new(-b.clone(), a.clone()))
                    }
                    Factor::Quadratic { a, b, c } => RootSite::QuadraticPair {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                    },
                };
                (site, *mult)
            })
            .collect()
    }

    /// The multiset of rational roots, with multiplicity, sorted.
    pub fn rational_roots(&self) -> Vec<(BigRational, usize)> {
        let mut out: Vec<(BigRational, usize)> = self
            .factors
            .iter()
            .filter_map(|(f, mult)| match f {
                Factor::Linear { a, b } => {
                    Some((BigRational::new(-b.clone(), a.clone()), *mult))
                }
                Factor::Quadratic { .. } => None,
            })
            .collect();
        out.sort();
        out
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Desk-scale trial division; factorization targets have small content.
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Smallest power of `d` dividing `p`, i.e. the number of zero roots.
fn strip_zero_roots(p: &DeltaPoly) -> (usize, DeltaPoly) {
    let k = p
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial");
    (k, DeltaPoly::from_coeffs(p.coeffs()[k..].to_vec()))
}

fn rational_root_candidates(p: &DeltaPoly) -> Vec<BigRational> {
    let lead = p.leading().expect("nonzero").clone();
    let constant = p.coeff(0);
    let mut out = Vec::new();
    for num in divisors(&constant) {
        for den in divisors(&lead) {
            let r = BigRational::new(num.clone(), den.clone());
            if !out.contains(&r) {
                out.push(r.clone());
            }
            let neg = -r;
            if !out.contains(&neg) {
                out.push(neg);
            }
        }
    }
    out
}

/// Divide out `a*d + b` exactly if possible.
fn try_linear(p: &DeltaPoly, a: &BigInt, b: &BigInt) -> Option<DeltaPoly> {
    let f = DeltaPoly::from_coeffs([b.clone(), a.clone()].to_vec());
    p.exact_div(&f).ok()
}

/// Coefficient bound for factors of a primitive integer polynomial; any
/// integer factor has coefficients bounded by `2^deg * max |coeff|`.
fn factor_coeff_bound(p: &DeltaPoly) -> BigInt {
    let max = p
        .coeffs()
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigInt::zero);
    let deg = p.degree().unwrap_or(0);
    max << deg
}

/// Complete factorization into content x linear x irreducible-quadratic
/// factors where such a factorization exists at desk scale; any stubborn part
/// of degree >= 3 is returned unfactored in `residual`.
pub fn factor(p: &DeltaPoly) -> Result<Factorization, PolyError> {
    if p.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    let mut content = p.content();
    if p.leading().unwrap().is_negative() {
        content = -content;
    }
    let mut rest = p.exact_div_scalar(&content).expect("content divides");
    let mut factors: Vec<(Factor, usize)> = Vec::new();

    let push = |factors: &mut Vec<(Factor, usize)>, f: Factor| {
        if let Some(slot) = factors.iter_mut().find(|(g, _)| *g == f) {
            slot.1 += 1;
        } else {
            factors.push((f, 1));
        }
    };

    let (zeros, stripped) = strip_zero_roots(&rest);
    if zeros > 0 {
        factors.push((
            Factor::Linear {
                a: BigInt::one(),
                b: BigInt::zero(),
            },
            zeros,
        ));
    }
    rest = stripped;

    // Rational roots, with multiplicity via repeated deflation.
    loop {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut found = false;
        for r in rational_root_candidates(&rest) {
            if !rest.evaluate(&r).is_zero() {
                continue;
            }
            let (a, b) = (r.denom().clone(), -r.numer().clone());
            while let Some(q) = try_linear(&rest, &a, &b) {
                push(&mut factors, Factor::Linear { a: a.clone(), b: b.clone() });
                rest = q;
                found = true;
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
            }
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        if !found {
            break;
        }
    }

    // Quadratic factors with integer coefficients, by bounded trial division.
    'outer: loop {
        match rest.degree().unwrap_or(0) {
            0 | 1 => break,
            2 => {
                let (a, b, c) = (rest.coeff(2), rest.coeff(1), rest.coeff(0));
                push(&mut factors, Factor::Quadratic { a, b, c });
                rest = DeltaPoly::one();
                break;
            }
            _ => {
                let bound = factor_coeff_bound(&rest);
                let lead_divs = divisors(rest.leading().unwrap());
                let const_divs = divisors(&rest.coeff(0));
                for a in &lead_divs {
                    for c0 in &const_divs {
                        for c in [c0.clone(), -c0.clone()] {
                            let mut b = -bound.clone();
                            while b <= bound {
                                let f = DeltaPoly::from_coeffs(
                                    [c.clone(), b.clone(), a.clone()].to_vec(),
                                );
                                if let Ok(q) = rest.exact_div(&f) {
                                    // Only keep genuinely irreducible quadratics;
                                    // rational roots were already exhausted, so any
                                    // divisor found here has none.
                                    push(
                                        &mut factors,
                                        Factor::Quadratic {
                                            a: a.clone(),
                                            b: b.clone(),
                                            c: c.clone(),
                                        },
                                    );
                                    rest = q;
                                    continue 'outer;
                                }
                                b += 1;
                            }
                        }
                    }
                }
                break;
            }
        }
    }

    debug_assert!(rest.degree().unwrap_or(0) != 1, "linear leftovers have rational roots");
    let residual = if rest.degree().unwrap_or(0) >= 3 {
        Some(rest)
    } else {
        // A constant leftover must be a unit, since content was divided out.
        debug_assert!(rest.is_constant() && rest.coeff(0).is_one());
        None
    };

    let out = Factorization {
        content,
        factors,
        residual,
    };
    debug_assert_eq!(&out.expand(), p, "factorization must expand back");
    Ok(out)
}

/// Convenience wrapper: the root sites of `p` with multiplicities.
pub fn roots_of(p: &DeltaPoly) -> Result<Vec<(RootSite, usize)>, PolyError> {
    Ok(factor(p)?.roots())
}
