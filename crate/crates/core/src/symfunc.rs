//! Integer partitions, elementary symmetric functions in finitely many
//! variables, and the colored-comb generating function.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binary_trees::{check_colored, fold_normalized, NormalizedTree};
use crate::enumerate::Config;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

pub const FMCOMB_COLOR_CAP: usize = 4;

/// Integer partition with parts stored weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(2^j, 1^m)`
    pub fn twos_and_ones(twos: usize, ones: usize) -> Self {
        let mut parts = vec![2; twos];
        parts.extend(std::iter::repeat_n(1, ones));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Some(j)` when the partition is `(2^j, 1^(w-2j))`.
    pub fn twos_count(&self) -> Option<usize> {
        self.0
            .iter()
            .all(|&p| p <= 2)
            .then(|| self.0.iter().filter(|&&p| p == 2).count())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Polynomial in `x_1..x_k` keyed by exponent vectors of length `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultivariatePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultivariatePoly {
    pub fn zero(nvars: usize) -> Self {
        MultivariatePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(vec![0; nvars], BigInt::one());
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::InvalidSize(format!(
                    "exponent vector of length {} in {nvars} variables",
                    exps.len()
                )));
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultivariatePoly) -> MultivariatePoly {
        assert_eq!(self.nvars, other.nvars, "variable counts differ");
        let mut out = self.clone();
        for (exps, c) in &other.terms {
            out.add_term(exps.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> MultivariatePoly {
        let mut out = Self::zero(self.nvars);
        for (exps, a) in &self.terms {
            out.add_term(exps.clone(), a * c);
        }
        out
    }

    pub fn multiply(&self, other: &MultivariatePoly) -> MultivariatePoly {
        assert_eq!(self.nvars, other.nvars, "variable counts differ");
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Sum of coefficients, i.e. the value at `x_1 = ... = x_k = 1`.
    pub fn evaluate_at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Reindexes variables: `x_i` becomes `x_{perm[i]}`.
    pub fn permute_variables(&self, perm: &[usize]) -> MultivariatePoly {
        let mut out = Self::zero(self.nvars);
        for (exps, c) in &self.terms {
            let mut moved = vec![0; self.nvars];
            for (i, &e) in exps.iter().enumerate() {
                moved[perm[i]] = e;
            }
            out.add_term(moved, c.clone());
        }
        out
    }

    /// Invariance under every transposition of adjacent variables.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..self.nvars).collect();
            perm.swap(i, i + 1);
            self.permute_variables(&perm) == *self
        })
    }
}

/// `e_m(x_1..x_k)`: the sum of all squarefree monomials of degree `m`.
pub fn elementary(m: usize, k: usize) -> MultivariatePoly {
    let mut p = MultivariatePoly::zero(k);
    if m > k {
        return p;
    }
    let mut subset: Vec<usize> = (0..m).collect();
    loop {
        let mut exps = vec![0; k];
        subset.iter().for_each(|&i| exps[i] = 1);
        p.add_term(exps, BigInt::one());
        // next m-subset in lexicographic order
        let Some(i) = (0..m).rev().find(|&i| subset[i] < k - m + i) else {
            return p;
        };
        subset[i] += 1;
        for j in i + 1..m {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// `e_λ = ∏ e_{λ_i}` in `k` variables; zero if some part exceeds `k`.
pub fn expand_e_lambda(lambda: &Partition, k: usize) -> MultivariatePoly {
    lambda
        .parts()
        .iter()
        .fold(MultivariatePoly::one(k), |acc, &m| {
            acc.multiply(&elementary(m as usize, k))
        })
}

/// `Σ c_λ e_λ` over partitions of a common weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ESymExpansion {
    weight: usize,
    terms: BTreeMap<Partition, BigInt>,
}

impl ESymExpansion {
    pub fn new(weight: usize) -> Self {
        ESymExpansion {
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        weight: usize,
        terms: impl IntoIterator<Item = (Partition, BigInt)>,
    ) -> Result<Self> {
        let mut out = Self::new(weight);
        for (lambda, c) in terms {
            out.add_term(lambda, c)?;
        }
        Ok(out)
    }

    pub fn add_term(&mut self, lambda: Partition, c: BigInt) -> Result<()> {
        if lambda.weight() != self.weight {
            return Err(Error::InvalidSize(format!(
                "partition {lambda} has weight {} in an expansion of weight {}",
                lambda.weight(),
                self.weight
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(lambda.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&lambda);
        }
        Ok(())
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, lambda: &Partition) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Sum of all coefficients.
    pub fn total_mass(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn to_variables(&self, k: usize) -> MultivariatePoly {
        self.terms
            .iter()
            .fold(MultivariatePoly::zero(k), |acc, (lambda, c)| {
                acc.add(&expand_e_lambda(lambda, k).scale(c))
            })
    }
}

/// Normalized trees on `[n]` grouped by comb type, read as a combination of
/// `e_λ`.
pub fn comb_type_expansion(n: usize) -> Result<ESymExpansion> {
    comb_type_expansion_with(n, &Config::default())
}

pub fn comb_type_expansion_with(n: usize, config: &Config) -> Result<ESymExpansion> {
    let counts = fold_normalized(
        n,
        config,
        BTreeMap::<Partition, u64>::new,
        |tree, acc| *acc.entry(tree.comb_type()).or_default() += 1,
        merge_counts,
    )?;
    ESymExpansion::from_terms(
        n - 1,
        counts
            .into_iter()
            .map(|(lambda, c)| (lambda, BigInt::from(c))),
    )
}

fn merge_counts<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (key, c) in b {
        *a.entry(key).or_default() += c;
    }
    a
}

/// `Σ x^μ(C)` over colored combs with colors in `[1, k]`, by explicit
/// enumeration of the colorings.
pub fn f_mcomb_direct(n: usize, k: usize) -> Result<MultivariatePoly> {
    f_mcomb_direct_with(n, k, &Config::default())
}

pub fn f_mcomb_direct_with(n: usize, k: usize, config: &Config) -> Result<MultivariatePoly> {
    check_colored(n, k, config)?;
    config.check_cap("colored comb color", k, FMCOMB_COLOR_CAP)?;
    let counts = fold_normalized(
        n,
        config,
        BTreeMap::<Vec<u32>, u64>::new,
        |tree, acc| {
            let internals: Vec<usize> = tree.internal_preorder().collect();
            tree.for_each_colored_comb(k as u32, |colors| {
                let mut mu = vec![0u32; k];
                for &x in &internals {
                    mu[colors[x] as usize - 1] += 1;
                }
                *acc.entry(mu).or_default() += 1;
            });
        },
        merge_counts,
    )?;
    MultivariatePoly::from_terms(k, counts.into_iter().map(|(e, c)| (e, BigInt::from(c))))
}

/// `x_1 = 1, x_2 = t`, all other variables 0: `e_(2^j,1^m) ↦ t^j (1+t)^m`,
/// every other `e_λ ↦ 0`.
pub fn specialize_two_vars(f: &ESymExpansion) -> IntPolynomial {
    f.terms
        .iter()
        .fold(IntPolynomial::zero(), |acc, (lambda, c)| {
            match lambda.twos_count() {
                Some(j) => {
                    let ones = lambda.weight() - 2 * j;
                    let term = &IntPolynomial::monomial(c.clone(), j)
                        * &IntPolynomial::one_plus_t_pow(ones);
                    &acc + &term
                }
                None => acc,
            }
        })
}

fn binomial(k: u64, m: u64) -> BigInt {
    if m > k {
        return BigInt::zero();
    }
    (0..m).fold(BigInt::one(), |acc, i| acc * (k - i) / (i + 1))
}

/// `∏_B C(k, |B|)` over the comb-type blocks of `tree`: choose the colors of
/// each block, whose order is then forced to decrease down the chain.
pub fn product_form_count(tree: &NormalizedTree, k: usize) -> BigInt {
    tree.comb_type()
        .parts()
        .iter()
        .map(|&b| binomial(k as u64, b as u64))
        .product()
}

#[derive(Serialize, Deserialize)]
struct ETermJson {
    lambda: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    exps: Vec<u32>,
    coeff: String,
}

impl ESymExpansion {
    /// `[{"lambda":[2,1],"coeff":"1"}, ...]`, partitions in increasing
    /// lexicographic order.
    pub fn to_json(&self) -> String {
        let rows: Vec<ETermJson> = self
            .terms
            .iter()
            .map(|(lambda, c)| ETermJson {
                lambda: lambda.parts().to_vec(),
                coeff: c.to_string(),
            })
            .collect();
        serde_json::to_string(&rows).expect("plain data serializes")
    }

    pub fn from_json(weight: usize, json: &str) -> Result<Self> {
        let rows: Vec<ETermJson> =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Self::new(weight);
        for row in rows {
            let c: BigInt = row
                .coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?}", row.coeff)))?;
            out.add_term(Partition::new(row.lambda), c)?;
        }
        Ok(out)
    }
}

impl MultivariatePoly {
    /// `[{"exps":[2,1,0],"coeff":"5"}, ...]` in exponent order.
    pub fn to_json(&self) -> String {
        let rows: Vec<MonomialJson> = self
            .terms
            .iter()
            .map(|(exps, c)| MonomialJson {
                exps: exps.clone(),
                coeff: c.to_string(),
            })
            .collect();
        serde_json::to_string(&rows).expect("plain data serializes")
    }

    pub fn from_json(nvars: usize, json: &str) -> Result<Self> {
        let rows: Vec<MonomialJson> =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let terms = rows
            .into_iter()
            .map(|row| {
                let c: BigInt = row
                    .coeff
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {:?}", row.coeff)))?;
                Ok((row.exps, c))
            })
            .collect::<Result<Vec<_>>>()?;
        MultivariatePoly::from_terms(nvars, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary_trees::{enumerate_colored_combs, enumerate_normalized};
    use crate::poly::{drake_polynomial, gamma_closed_form, to_gamma_basis};

    fn mono(nvars: usize, terms: &[(&[u32], i64)]) -> MultivariatePoly {
        MultivariatePoly::from_terms(
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
        .unwrap()
    }

    fn lam(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn partitions_canonicalize() {
        assert_eq!(lam(&[1, 2, 0, 2]).parts(), &[2, 2, 1]);
        assert_eq!(lam(&[1, 2, 2]).weight(), 5);
        assert_eq!(lam(&[2, 1, 1]).twos_count(), Some(1));
        assert_eq!(lam(&[3, 1]).twos_count(), None);
        assert_eq!(Partition::empty().twos_count(), Some(0));
        assert_eq!(Partition::twos_and_ones(2, 1), lam(&[1, 2, 2]));
        assert_eq!(lam(&[2, 1]).to_string(), "(2,1)");
    }

    #[test]
    fn e_lambda_examples() {
        assert_eq!(
            expand_e_lambda(&lam(&[1]), 2),
            mono(2, &[(&[1, 0], 1), (&[0, 1], 1)])
        );
        assert!(expand_e_lambda(&lam(&[3]), 2).is_zero());
        assert_eq!(
            expand_e_lambda(&lam(&[2, 1]), 2),
            mono(2, &[(&[2, 1], 1), (&[1, 2], 1)])
        );
        assert_eq!(
            expand_e_lambda(&Partition::empty(), 3),
            MultivariatePoly::one(3)
        );
    }

    #[test]
    fn single_part_has_binomial_many_monomials() {
        for k in 1..=6usize {
            for m in 0..=k + 1 {
                let e = expand_e_lambda(&lam(&[m as u32]), k);
                let e = if m == 0 { MultivariatePoly::one(k) } else { e };
                assert_eq!(BigInt::from(e.terms().len()), binomial(k as u64, m as u64));
                assert!(e.terms().values().all(|c| c.is_one()));
            }
        }
    }

    #[test]
    fn comb_type_expansion_examples() {
        let three = comb_type_expansion(3).unwrap();
        let expected = ESymExpansion::from_terms(
            2,
            [
                (lam(&[1, 1]), BigInt::from(2)),
                (lam(&[2]), BigInt::from(1)),
            ],
        )
        .unwrap();
        assert_eq!(three, expected);
        let two = comb_type_expansion(2).unwrap();
        assert_eq!(two.terms().len(), 1);
        assert_eq!(two.coeff(&lam(&[1])), BigInt::one());
        let one = comb_type_expansion(1).unwrap();
        assert_eq!(one.coeff(&Partition::empty()), BigInt::one());
        for n in 2..=8 {
            let mass = comb_type_expansion(n).unwrap().total_mass();
            assert_eq!(mass, BigInt::from(crate::binary_trees::normalized_count(n)));
        }
    }

    #[test]
    fn f_mcomb_examples() {
        assert_eq!(
            f_mcomb_direct(3, 2).unwrap(),
            mono(2, &[(&[2, 0], 2), (&[1, 1], 5), (&[0, 2], 2)])
        );
        assert_eq!(f_mcomb_direct(2, 1).unwrap(), mono(1, &[(&[1], 1)]));
        for k in 1..=4 {
            assert_eq!(f_mcomb_direct(1, k).unwrap(), MultivariatePoly::one(k));
        }
        assert!(f_mcomb_direct(3, 5).is_err());
    }

    #[test]
    fn specialization_examples() {
        let f = ESymExpansion::from_terms(3, [(lam(&[2, 1]), BigInt::one())]).unwrap();
        assert_eq!(
            specialize_two_vars(&f),
            IntPolynomial::from_i64s(&[0, 1, 1])
        );
        let f = ESymExpansion::from_terms(3, [(lam(&[3]), BigInt::from(5))]).unwrap();
        assert!(specialize_two_vars(&f).is_zero());
        assert_eq!(
            specialize_two_vars(&comb_type_expansion(3).unwrap()),
            IntPolynomial::from_i64s(&[2, 5, 2])
        );
    }

    #[test]
    fn e_positivity_identity() {
        for n in 1..=7 {
            let expansion = comb_type_expansion(n).unwrap();
            for k in 1..=3 {
                let direct = f_mcomb_direct(n, k).unwrap();
                assert_eq!(direct, expansion.to_variables(k), "n={n} k={k}");
                assert!(direct.is_symmetric());
            }
        }
    }

    #[test]
    fn specialization_recovers_the_tree_polynomial() {
        for n in 1..=8 {
            let special = specialize_two_vars(&comb_type_expansion(n).unwrap());
            assert_eq!(special, drake_polynomial(n), "n={n}");
            assert_eq!(to_gamma_basis(&special).unwrap(), gamma_closed_form(n));
        }
    }

    #[test]
    fn product_form_examples() {
        let comb = NormalizedTree::left_comb(4).unwrap();
        assert_eq!(product_form_count(&comb, 2), BigInt::from(8));
        let tree = NormalizedTree::parse("(1,(2,3))").unwrap();
        assert_eq!(product_form_count(&tree, 2), BigInt::one());
        let mut explicit = 0;
        tree.for_each_colored_comb(2, |_| explicit += 1);
        assert_eq!(explicit, 1);
        assert!(product_form_count(&tree, 1).is_zero());
    }

    #[test]
    fn product_form_matches_explicit_colorings() {
        for n in 1..=7 {
            for k in 1..=3 {
                let mut fast = BigInt::zero();
                for tree in enumerate_normalized(n).unwrap() {
                    let per_tree = product_form_count(&tree, k);
                    let mut explicit = 0u64;
                    tree.for_each_colored_comb(k as u32, |_| explicit += 1);
                    assert_eq!(per_tree, BigInt::from(explicit), "{tree} k={k}");
                    fast += per_tree;
                }
                assert_eq!(fast, f_mcomb_direct(n, k).unwrap().evaluate_at_ones());
            }
        }
        assert_eq!(enumerate_colored_combs(3, 3).unwrap().count(), 21);
    }

    #[test]
    fn json_shapes() {
        let f = ESymExpansion::from_terms(3, [(lam(&[2, 1]), BigInt::one())]).unwrap();
        assert_eq!(f.to_json(), r#"[{"lambda":[2,1],"coeff":"1"}]"#);
        assert_eq!(ESymExpansion::from_json(3, &f.to_json()).unwrap(), f);
        let p = mono(3, &[(&[2, 1, 0], 5)]);
        assert_eq!(p.to_json(), r#"[{"exps":[2,1,0],"coeff":"5"}]"#);
        assert_eq!(MultivariatePoly::from_json(3, &p.to_json()).unwrap(), p);
        assert!(ESymExpansion::from_json(4, &f.to_json()).is_err());
    }
}
