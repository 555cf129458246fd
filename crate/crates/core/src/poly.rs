//! Exact univariate integer polynomials, the γ-basis, and the closed forms
//! for the tree Eulerian polynomial and its γ-coefficients.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::enumerate::Tally;
use crate::error::{Error, Result};

/// Dense polynomial in `t`; `coeffs[i]` is the coefficient of `t^i`.
///
/// Trailing zeros are always stripped, so the zero polynomial is the empty
/// coefficient vector and equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `a + b·t`
    pub fn linear(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self::new(vec![a.into(), b.into()])
    }

    /// `c·t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `(1+t)^k`
    pub fn one_plus_t_pow(k: usize) -> Self {
        let mut row = vec![BigInt::one()];
        for _ in 0..k {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        IntPolynomial { coeffs: row }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        IntPolynomial::new(coeffs)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - other.coeff(i)).collect();
        IntPolynomial::new(coeffs)
    }

    pub fn multiply(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// `den^d · p(num/den)` for `d = degree`, an exact integer that vanishes
    /// iff `num/den` is a root.
    pub fn evaluate_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let Some(d) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = BigInt::zero();
        let mut num_pow = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * &num_pow * num_traits::pow(den.clone(), d - i);
            num_pow *= num;
        }
        acc
    }

    pub fn is_palindromic(&self) -> bool {
        let c = &self.coeffs;
        c.iter().eq(c.iter().rev())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl From<Vec<BigInt>> for IntPolynomial {
    fn from(coeffs: Vec<BigInt>) -> Self {
        IntPolynomial::new(coeffs)
    }
}

impl From<&Tally> for IntPolynomial {
    fn from(tally: &Tally) -> Self {
        IntPolynomial::from_counts(tally.counts())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::add(self, rhs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::sub(self, rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.multiply(rhs)
    }
}

impl fmt::Display for IntPolynomial {
    /// Space-separated coefficients from the constant term up.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write_joined(f, &self.coeffs)
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, values: &[BigInt]) -> fmt::Result {
    for (i, c) in values.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// Coordinates of a palindromic polynomial of degree `degree` in the basis
/// `t^j (1+t)^(degree-2j)`, `0 <= j <= degree/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaVector {
    degree: usize,
    gammas: Vec<BigInt>,
}

impl GammaVector {
    /// Pads or rejects so that `gammas.len() == degree/2 + 1`.
    pub fn new(degree: usize, mut gammas: Vec<BigInt>) -> Result<Self> {
        let len = degree / 2 + 1;
        if gammas.len() > len {
            if gammas[len..].iter().any(|g| !g.is_zero()) {
                return Err(Error::InvalidSize(format!(
                    "{} gamma entries for degree {degree} (at most {len})",
                    gammas.len()
                )));
            }
            gammas.truncate(len);
        }
        gammas.resize(len, BigInt::zero());
        Ok(GammaVector { degree, gammas })
    }

    pub fn from_i64s(degree: usize, gammas: &[i64]) -> Result<Self> {
        Self::new(degree, gammas.iter().map(|&g| BigInt::from(g)).collect())
    }

    pub(crate) fn from_tally(degree: usize, tally: &Tally) -> Result<Self> {
        Self::new(
            degree,
            tally.counts().iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gammas(&self) -> &[BigInt] {
        &self.gammas
    }

    pub fn is_positive(&self) -> bool {
        self.gammas.iter().all(Signed::is_positive)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.gammas.iter().all(|g| !g.is_negative())
    }
}

impl fmt::Display for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.gammas)
    }
}

/// Change of basis by peeling: `γ_j` is read off the residue at `t^j`, then
/// `γ_j t^j (1+t)^(d-2j)` is subtracted.
///
/// The zero polynomial maps to the degree-0 vector `[0]`.
pub fn to_gamma_basis(p: &IntPolynomial) -> Result<GammaVector> {
    if !p.is_palindromic() {
        return Err(Error::NotPalindromic(p.to_string()));
    }
    let Some(d) = p.degree() else {
        return GammaVector::new(0, vec![BigInt::zero()]);
    };
    let mut residue = p.clone();
    let mut gammas = Vec::with_capacity(d / 2 + 1);
    for j in 0..=d / 2 {
        let gamma = residue.coeff(j);
        if !gamma.is_zero() {
            let term = IntPolynomial::one_plus_t_pow(d - 2 * j).scale(&gamma);
            residue = &residue - &shift(&term, j);
        }
        gammas.push(gamma);
    }
    if !residue.is_zero() {
        return Err(Error::NotPalindromic(p.to_string()));
    }
    GammaVector::new(d, gammas)
}

pub fn from_gamma_basis(g: &GammaVector) -> IntPolynomial {
    let d = g.degree;
    g.gammas
        .iter()
        .enumerate()
        .filter(|(_, gamma)| !gamma.is_zero())
        .fold(IntPolynomial::zero(), |acc, (j, gamma)| {
            let term = IntPolynomial::one_plus_t_pow(d - 2 * j).scale(gamma);
            &acc + &shift(&term, j)
        })
}

fn shift(p: &IntPolynomial, k: usize) -> IntPolynomial {
    if p.is_zero() {
        return p.clone();
    }
    let mut coeffs = vec![BigInt::zero(); k];
    coeffs.extend(p.coeffs.iter().cloned());
    IntPolynomial::new(coeffs)
}

/// Drake's product `∏_{i=1}^{n-1} ((n-i) + i·t)`.
///
/// # Panics
/// If `n == 0`.
pub fn drake_polynomial(n: usize) -> IntPolynomial {
    assert!(n >= 1, "drake_polynomial requires n >= 1");
    (1..n).fold(IntPolynomial::one(), |acc, i| {
        &acc * &IntPolynomial::linear(n - i, i)
    })
}

/// γ-coefficients of the tree Eulerian polynomial from the subset-sum closed
/// form. Pairs the factors `i` and `n-i` of Drake's product:
/// `(n-i+it)(i+(n-i)t) = i(n-i)(1+t)^2 + (n-2i)^2 t`, so each `J ⊂ [m]`
/// with `|J| = j` contributes `∏_{i∈J}(n-2i)^2 ∏_{s∉J} s(n-s)`, times `n/2`
/// for even `n` from the unpaired middle factor.
///
/// # Panics
/// If `n == 0` or `n > 129` (subset masks are 64-bit).
pub fn gamma_closed_form(n: usize) -> GammaVector {
    assert!(n >= 1, "gamma_closed_form requires n >= 1");
    let m = if n % 2 == 1 { (n - 1) / 2 } else { (n - 2) / 2 };
    assert!(m < 64, "gamma_closed_form supports n <= 129");
    let mut gammas = vec![BigInt::zero(); m + 1];
    for mask in 0u64..(1u64 << m) {
        let mut term = BigInt::one();
        for i in 1..=m {
            if mask & (1 << (i - 1)) != 0 {
                let diff = BigInt::from(n - 2 * i);
                term *= &diff * &diff;
            } else {
                term *= BigInt::from(i * (n - i));
            }
        }
        gammas[mask.count_ones() as usize] += term;
    }
    if n.is_multiple_of(2) {
        let half = BigInt::from(n / 2);
        for g in &mut gammas {
            *g *= &half;
        }
    }
    GammaVector {
        degree: n - 1,
        gammas,
    }
}

pub const PERMUTATION_CAP: usize = 10;

/// Calls `visit` on each permutation of `[1..=n]` in lexicographic order.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[u8])) {
    let mut perm: Vec<u8> = (1..=n as u8).collect();
    loop {
        visit(&perm);
        // next permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..perm.len())
            .rev()
            .find(|&j| perm[j] > perm[i - 1])
            .unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn descent_positions(perm: &[u8]) -> impl Iterator<Item = usize> + '_ {
    (0..perm.len().saturating_sub(1)).filter(move |&i| perm[i] > perm[i + 1])
}

/// Classical Eulerian polynomial by enumerating all `n!` permutations.
pub fn eulerian_polynomial(n: usize) -> Result<IntPolynomial> {
    eulerian_polynomial_with(n, false)
}

pub fn eulerian_polynomial_with(n: usize, cap_override: bool) -> Result<IntPolynomial> {
    check_permutation_size(n, cap_override)?;
    let mut tally = Tally::new();
    for_each_permutation(n, |perm| tally.add(descent_positions(perm).count()));
    Ok(IntPolynomial::from(&tally))
}

/// Counts permutations with no two adjacent descents and no descent in the
/// last position, by number of descents.
pub fn eulerian_gamma_count(n: usize) -> Result<GammaVector> {
    eulerian_gamma_count_with(n, false)
}

pub fn eulerian_gamma_count_with(n: usize, cap_override: bool) -> Result<GammaVector> {
    check_permutation_size(n, cap_override)?;
    let mut tally = Tally::new();
    for_each_permutation(n, |perm| {
        let descents: Vec<usize> = descent_positions(perm).collect();
        let adjacent = descents.windows(2).any(|w| w[1] == w[0] + 1);
        let last = n >= 2 && descents.last() == Some(&(n - 2));
        if !adjacent && !last {
            tally.add(descents.len());
        }
    });
    GammaVector::from_tally(n - 1, &tally)
}

fn check_permutation_size(n: usize, cap_override: bool) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize("permutations need n >= 1".into()));
    }
    if n > PERMUTATION_CAP && !cap_override {
        return Err(Error::LimitExceeded {
            family: "permutation",
            n,
            cap: PERMUTATION_CAP,
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    degree: i64,
    coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GammaJson {
    degree: usize,
    gammas: Vec<String>,
}

fn to_decimal(values: &[BigInt]) -> Vec<String> {
    values.iter().map(BigInt::to_string).collect()
}

fn from_decimal<E: serde::de::Error>(values: &[String]) -> std::result::Result<Vec<BigInt>, E> {
    values
        .iter()
        .map(|s| {
            s.parse::<BigInt>()
                .map_err(|_| E::custom(format!("bad integer {s:?}")))
        })
        .collect()
}

/// `{"degree": d, "coeffs": ["2","5","2"]}`; the zero polynomial has degree -1.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            degree: self.coeffs.len() as i64 - 1,
            coeffs: to_decimal(&self.coeffs),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolynomialJson::deserialize(deserializer)?;
        let p = IntPolynomial::new(from_decimal(&raw.coeffs)?);
        if p.coeffs.len() as i64 - 1 != raw.degree {
            return Err(serde::de::Error::custom(
                "degree does not match coefficients",
            ));
        }
        Ok(p)
    }
}

impl Serialize for GammaVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GammaJson {
            degree: self.degree,
            gammas: to_decimal(&self.gammas),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GammaVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = GammaJson::deserialize(deserializer)?;
        GammaVector::new(raw.degree, from_decimal(&raw.gammas)?).map_err(serde::de::Error::custom)
    }
}
