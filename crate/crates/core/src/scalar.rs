//! Complex scalars over two backends: exact Gaussian rationals and
//! double-precision floats. A value never changes backend implicitly;
//! matrix constructors reject mixed-backend data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Approx,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact { re: BigRational, im: BigRational },
    Approx { re: f64, im: f64 },
}

/// Comparison tolerance. Zero on the exact backend; strictly positive
/// whenever approximate values are compared.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

pub const DEFAULT_EPS: f64 = 1e-9;

impl Tolerance {
    pub fn exact() -> Self {
        Tolerance { eps: 0.0 }
    }

    pub fn approx(eps: f64) -> Self {
        assert!(eps > 0.0, "approx tolerance must be positive");
        Tolerance { eps }
    }

    pub fn for_backend(b: Backend) -> Self {
        match b {
            Backend::Exact => Self::exact(),
            Backend::Approx => Self::approx(DEFAULT_EPS),
        }
    }
}

fn mix(a: Backend, b: Backend) -> ! {
    panic!("scalar arithmetic across backends ({a:?} vs {b:?}); this is a constructor-level bug")
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact { .. } => Backend::Exact,
            Scalar::Approx { .. } => Backend::Approx,
        }
    }

    pub fn zero(b: Backend) -> Self {
        match b {
            Backend::Exact => Scalar::Exact {
                re: BigRational::zero(),
                im: BigRational::zero(),
            },
            Backend::Approx => Scalar::Approx { re: 0.0, im: 0.0 },
        }
    }

    pub fn one(b: Backend) -> Self {
        match b {
            Backend::Exact => Scalar::Exact {
                re: BigRational::one(),
                im: BigRational::zero(),
            },
            Backend::Approx => Scalar::Approx { re: 1.0, im: 0.0 },
        }
    }

    pub fn i(b: Backend) -> Self {
        match b {
            Backend::Exact => Scalar::Exact {
                re: BigRational::zero(),
                im: BigRational::one(),
            },
            Backend::Approx => Scalar::Approx { re: 0.0, im: 1.0 },
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn exact(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact { re, im }
    }

    pub fn exact_ratio(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Scalar::Exact {
            re: BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            im: BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        }
    }

    pub fn approx(re: f64, im: f64) -> Self {
        Scalar::Approx { re, im }
    }

    pub fn to_approx(&self) -> Self {
        match self {
            Scalar::Exact { re, im } => Scalar::Approx {
                re: rat_to_f64(re),
                im: rat_to_f64(im),
            },
            s @ Scalar::Approx { .. } => s.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact {
                re: re.clone(),
                im: -im.clone(),
            },
            Scalar::Approx { re, im } => Scalar::Approx { re: *re, im: -im },
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact {
                re: -re.clone(),
                im: -im.clone(),
            },
            Scalar::Approx { re, im } => Scalar::Approx { re: -re, im: -im },
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => Scalar::Exact {
                re: a + c,
                im: b + d,
            },
            (Scalar::Approx { re: a, im: b }, Scalar::Approx { re: c, im: d }) => Scalar::Approx {
                re: a + c,
                im: b + d,
            },
            (x, y) => mix(x.backend(), y.backend()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => Scalar::Exact {
                re: a * c - b * d,
                im: a * d + b * c,
            },
            (Scalar::Approx { re: a, im: b }, Scalar::Approx { re: c, im: d }) => Scalar::Approx {
                re: a * c - b * d,
                im: a * d + b * c,
            },
            (x, y) => mix(x.backend(), y.backend()),
        }
    }

    /// Multiplicative inverse; `Err(Singular)` on zero.
    pub fn inv(&self) -> Result<Self> {
        match self {
            Scalar::Exact { re, im } => {
                let n = re * re + im * im;
                if n.is_zero() {
                    return Err(Error::Singular);
                }
                Ok(Scalar::Exact {
                    re: re / &n,
                    im: -im / &n,
                })
            }
            Scalar::Approx { re, im } => {
                let n = re * re + im * im;
                if n == 0.0 {
                    return Err(Error::Singular);
                }
                Ok(Scalar::Approx {
                    re: re / n,
                    im: -im / n,
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Squared modulus as a same-backend real scalar.
    pub fn norm_sq(&self) -> Self {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact {
                re: re * re + im * im,
                im: BigRational::zero(),
            },
            Scalar::Approx { re, im } => Scalar::Approx {
                re: re * re + im * im,
                im: 0.0,
            },
        }
    }

    /// Modulus as an f64, for deviation reporting on either backend.
    pub fn abs_f64(&self) -> f64 {
        match self {
            Scalar::Exact { re, im } => rat_to_f64(re).hypot(rat_to_f64(im)),
            Scalar::Approx { re, im } => re.hypot(*im),
        }
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        match self {
            Scalar::Exact { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Approx { .. } => self.abs_f64() <= tol.eps,
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.sub(other).is_zero(tol)
    }

    pub fn is_real(&self, tol: &Tolerance) -> bool {
        match self {
            Scalar::Exact { im, .. } => im.is_zero(),
            Scalar::Approx { im, .. } => im.abs() <= tol.eps,
        }
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            Scalar::Exact { re, .. } => rat_to_f64(re),
            Scalar::Approx { re, .. } => *re,
        }
    }

    /// Exact real part; `None` on the approx backend or when imaginary.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact { re, im } if im.is_zero() => Some(re),
            _ => None,
        }
    }

    /// Parses the exact-entry wire format `a/b+c/d i` (either part omittable).
    pub fn parse_exact(s: &str) -> Result<Self> {
        let bad = |_| Error::InvalidMatrix(format!("cannot parse exact entry {s:?}"));
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::InvalidMatrix("empty exact entry".into()));
        }
        let (body, has_i) = match t.strip_suffix('i') {
            Some(rest) => (rest.trim_end(), true),
            None => (t, false),
        };
        if !has_i {
            let re = BigRational::from_str(body).map_err(bad)?;
            return Ok(Scalar::Exact {
                re,
                im: BigRational::zero(),
            });
        }
        // Split "re±im" at the last top-level sign; signs only occur at
        // position 0 or as the separator.
        let split = (1..body.len())
            .rev()
            .find(|&i| matches!(body.as_bytes()[i], b'+' | b'-'));
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let re = if re_str.trim().is_empty() {
            BigRational::zero()
        } else {
            BigRational::from_str(re_str.trim()).map_err(bad)?
        };
        let im_t = im_str.trim();
        let im = match im_t {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => {
                let stripped = other.strip_prefix('+').unwrap_or(other);
                BigRational::from_str(stripped).map_err(bad)?
            }
        };
        Ok(Scalar::Exact { re, im })
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

/// Rational square root of a nonnegative rational, when one exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact { re, im } => {
                if im.is_zero() {
                    write!(f, "{re}")
                } else if re.is_zero() {
                    write!(f, "{im} i")
                } else if im.is_negative() {
                    write!(f, "{re}{im} i")
                } else {
                    write!(f, "{re}+{im} i")
                }
            }
            Scalar::Approx { re, im } => write!(f, "{re}{im:+}i"),
        }
    }
}
