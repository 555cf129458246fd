//! Stirling permutations of `{1,1,2,2,...,n,n}` and the ascending-adjacent
//! and terminally-nested pair statistics.

use std::fmt;

use crate::enumerate::{double_factorial, par_tally, Config, MixedRadix, Tally};
use crate::error::{Error, Result};
use crate::poly::GammaVector;

pub const STIRLING_CAP: usize = 8;

/// Word on `{1,1,...,n,n}` in which every letter between the two copies of
/// `m` exceeds `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StirlingPermutation {
    word: Vec<u32>,
}

/// Positions of the first and second occurrence of each letter, indexed by
/// letter (entry 0 unused).
struct Occurrences {
    first: Vec<usize>,
    second: Vec<usize>,
}

impl Occurrences {
    fn of(word: &[u32]) -> Self {
        let n = word.len() / 2;
        let mut first = vec![usize::MAX; n + 1];
        let mut second = vec![usize::MAX; n + 1];
        for (pos, &a) in word.iter().enumerate() {
            let a = a as usize;
            if first[a] == usize::MAX {
                first[a] = pos;
            } else {
                second[a] = pos;
            }
        }
        Occurrences { first, second }
    }
}

fn check_multiset(word: &[u32]) -> Result<usize> {
    if !word.len().is_multiple_of(2) {
        return Err(Error::MalformedWord(format!("odd length {}", word.len())));
    }
    let n = word.len() / 2;
    let mut seen = vec![0u8; n + 1];
    for &a in word {
        if a == 0 || a as usize > n {
            return Err(Error::MalformedWord(format!("letter {a} not in [1,{n}]")));
        }
        seen[a as usize] += 1;
    }
    if let Some(a) = (1..=n).find(|&a| seen[a] != 2) {
        return Err(Error::MalformedWord(format!(
            "letter {a} occurs {} times",
            seen[a]
        )));
    }
    Ok(n)
}

/// Checks the Stirling condition on a word over `{1,1,...,n,n}`.
pub fn is_stirling(word: &[u32]) -> Result<bool> {
    let n = check_multiset(word)?;
    let occ = Occurrences::of(word);
    Ok((1..=n).all(|m| {
        word[occ.first[m] + 1..occ.second[m]]
            .iter()
            .all(|&b| b as usize > m)
    }))
}

impl StirlingPermutation {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        if !is_stirling(&word)? {
            return Err(Error::MalformedWord(format!(
                "{} violates the Stirling condition",
                format_word(&word)
            )));
        }
        Ok(StirlingPermutation { word })
    }

    /// Digit string (`"1221"`) or comma-separated letters (`"1,2,2,1"`).
    pub fn parse(text: &str) -> Result<Self> {
        StirlingPermutation::new(parse_word(text)?)
    }

    /// Relabels a word in which every letter occurs twice by the ranks of its
    /// letters. Returns the result and the sorted original alphabet, so rank
    /// `r` stands for `alphabet[r - 1]`.
    pub fn standardize(word: &[u32]) -> Result<(Self, Vec<u32>)> {
        let mut alphabet = word.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        let ranked = word
            .iter()
            .map(|a| alphabet.binary_search(a).unwrap() as u32 + 1)
            .collect();
        Ok((StirlingPermutation::new(ranked)?, alphabet))
    }

    /// Decodes a pair-insertion code: digit `i` places `(i+1)(i+1)` in one of
    /// the `2i+1` gaps of the current word, counting gaps from the right end
    /// (so `Q_2` comes out as 1122, 1221, 2211).
    pub fn from_insertion_code(code: &[usize]) -> Result<Self> {
        if let Some((i, &c)) = code.iter().enumerate().find(|&(i, &c)| c > 2 * i) {
            return Err(Error::MalformedCode(format!(
                "gap {c} at position {i} exceeds {}",
                2 * i
            )));
        }
        Ok(Self::decode_insertion(code))
    }

    fn decode_insertion(code: &[usize]) -> Self {
        let mut word = Vec::with_capacity(2 * code.len());
        for (i, &gap) in code.iter().enumerate() {
            let letter = i as u32 + 1;
            let pos = word.len() - gap;
            word.splice(pos..pos, [letter, letter]);
        }
        StirlingPermutation { word }
    }

    pub fn n(&self) -> usize {
        self.word.len() / 2
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// Inserts `(n+1)(n+1)` at `gap` (0 ..= 2n).
    pub fn insert_pair(&self, gap: usize) -> Result<Self> {
        if gap > self.word.len() {
            return Err(Error::MalformedCode(format!(
                "gap {gap} beyond word length"
            )));
        }
        let letter = self.n() as u32 + 1;
        let mut word = self.word.clone();
        word.splice(gap..gap, [letter, letter]);
        Ok(StirlingPermutation { word })
    }

    /// Ascending adjacent pairs `(a, b)`, `a < b`: the second `a` sits
    /// immediately before the first `b`.
    pub fn ascending_adjacent_pairs(&self) -> Vec<(u32, u32)> {
        let occ = Occurrences::of(&self.word);
        (1..=self.n())
            .filter_map(|a| {
                let pos = occ.second[a] + 1;
                let b = *self.word.get(pos)?;
                (occ.first[b as usize] == pos && b as usize > a).then_some((a as u32, b))
            })
            .collect()
    }

    /// Terminally nested pairs `(a, b)`, `a < b`: the second `a` sits
    /// immediately after the second `b`.
    pub fn terminally_nested_pairs(&self) -> Vec<(u32, u32)> {
        let occ = Occurrences::of(&self.word);
        (1..=self.n())
            .filter_map(|a| {
                let pos = occ.second[a].checked_sub(1)?;
                let b = self.word[pos];
                (occ.second[b as usize] == pos && b as usize > a).then_some((a as u32, b))
            })
            .collect()
    }

    pub fn aapair(&self) -> usize {
        self.ascending_adjacent_pairs().len()
    }

    pub fn tnpair(&self) -> usize {
        self.terminally_nested_pairs().len()
    }

    /// No `a < b < c` with `(a,b)` and `(b,c)` both ascending adjacent pairs.
    pub fn is_naas(&self) -> bool {
        !has_chain(&self.ascending_adjacent_pairs(), self.n())
    }

    /// No `a < b < c` with `(a,b)` and `(b,c)` both terminally nested pairs.
    pub fn is_ntns(&self) -> bool {
        !has_chain(&self.terminally_nested_pairs(), self.n())
    }
}

fn has_chain(pairs: &[(u32, u32)], n: usize) -> bool {
    let mut is_upper = vec![false; n + 1];
    for &(_, b) in pairs {
        is_upper[b as usize] = true;
    }
    pairs.iter().any(|&(a, _)| is_upper[a as usize])
}

fn parse_word(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.contains(',') {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad letter {s:?}")))
            })
            .collect()
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("bad letter {c:?}")))
            })
            .collect()
    }
}

fn format_word(word: &[u32]) -> String {
    if word.len() / 2 <= 9 {
        word.iter().map(u32::to_string).collect()
    } else {
        word.iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for StirlingPermutation {
    /// Digit string for `n <= 9`, comma-separated beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word))
    }
}

fn insertion_radices(n: usize) -> Vec<usize> {
    (1..=n).map(|m| 2 * m - 1).collect()
}

/// `(2n-1)!!`
pub fn stirling_count(n: usize) -> u64 {
    double_factorial((2 * n as u64).saturating_sub(1))
}

fn check_stirling(n: usize, config: &Config) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize(
            "Stirling permutations need n >= 1".into(),
        ));
    }
    config.check_cap("Stirling permutation", n, STIRLING_CAP)
}

/// Streams `Q_n` in pair-insertion-code order.
pub struct StirlingPermutations {
    odometer: MixedRadix,
}

impl Iterator for StirlingPermutations {
    type Item = StirlingPermutation;

    fn next(&mut self) -> Option<StirlingPermutation> {
        self.odometer
            .next_digits()
            .map(StirlingPermutation::decode_insertion)
    }
}

pub fn enumerate_stirling(n: usize) -> Result<StirlingPermutations> {
    enumerate_stirling_with(n, &Config::default())
}

pub fn enumerate_stirling_with(n: usize, config: &Config) -> Result<StirlingPermutations> {
    check_stirling(n, config)?;
    Ok(StirlingPermutations {
        odometer: MixedRadix::new(insertion_radices(n)),
    })
}

/// Parallel fold of a per-word statistic over `Q_n`.
pub fn tally_stirling<F>(n: usize, config: &Config, per_word: F) -> Result<Tally>
where
    F: Fn(&StirlingPermutation, &mut Tally) + Sync + Send,
{
    check_stirling(n, config)?;
    let radices = insertion_radices(n);
    Ok(config.install(|| {
        par_tally(&radices, |digits, tally| {
            per_word(&StirlingPermutation::decode_insertion(digits), tally)
        })
    }))
}

/// Words of `Q_n` without ascending adjacent sequences, tallied by `aapair`.
/// The result is compared against the γ-vector of the tree polynomial on
/// `n+1` nodes, so its degree is `n`.
pub fn distribution_naas_aapair(n: usize) -> Result<GammaVector> {
    distribution_naas_aapair_with(n, &Config::default())
}

pub fn distribution_naas_aapair_with(n: usize, config: &Config) -> Result<GammaVector> {
    let tally = tally_stirling(n, config, |w, t| {
        if w.is_naas() {
            t.add(w.aapair());
        }
    })?;
    GammaVector::from_tally(n, &tally)
}

/// Words of `Q_n` without terminally nested sequences, tallied by
/// `tnpair`; degree `n` as for [`distribution_naas_aapair`].
pub fn distribution_ntns_tnpair(n: usize) -> Result<GammaVector> {
    distribution_ntns_tnpair_with(n, &Config::default())
}

pub fn distribution_ntns_tnpair_with(n: usize, config: &Config) -> Result<GammaVector> {
    let tally = tally_stirling(n, config, |w, t| {
        if w.is_ntns() {
            t.add(w.tnpair());
        }
    })?;
    GammaVector::from_tally(n, &tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::gamma_closed_form;
    use std::collections::BTreeSet;

    fn w(s: &str) -> StirlingPermutation {
        StirlingPermutation::parse(s).unwrap()
    }

    /// Oracle: all distinct arrangements of the multiset, filtered.
    fn brute_force(n: usize) -> BTreeSet<Vec<u32>> {
        fn rec(
            counts: &mut Vec<u8>,
            word: &mut Vec<u32>,
            len: usize,
            out: &mut BTreeSet<Vec<u32>>,
        ) {
            if word.len() == len {
                if is_stirling(word).unwrap() {
                    out.insert(word.clone());
                }
                return;
            }
            for a in 1..counts.len() {
                if counts[a] > 0 {
                    counts[a] -= 1;
                    word.push(a as u32);
                    rec(counts, word, len, out);
                    word.pop();
                    counts[a] += 1;
                }
            }
        }
        let mut out = BTreeSet::new();
        rec(&mut vec![2; n + 1], &mut Vec::new(), 2 * n, &mut out);
        out
    }

    #[test]
    fn stirling_check_examples() {
        assert!(is_stirling(&parse_word("12234431").unwrap()).unwrap());
        assert!(!is_stirling(&parse_word("11322344").unwrap()).unwrap());
        assert!(is_stirling(&parse_word("1122").unwrap()).unwrap());
        assert!(matches!(
            is_stirling(&[1, 2, 2]),
            Err(Error::MalformedWord(_))
        ));
        assert!(matches!(
            is_stirling(&[1, 1, 1, 2]),
            Err(Error::MalformedWord(_))
        ));
        assert!(matches!(
            is_stirling(&[1, 3, 3, 1]),
            Err(Error::MalformedWord(_))
        ));
        assert!(StirlingPermutation::parse("2121").is_err());
    }

    #[test]
    fn enumeration_examples() {
        let one: Vec<String> = enumerate_stirling(1)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(one, vec!["11"]);
        let two: Vec<String> = enumerate_stirling(2)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(two, vec!["1122", "1221", "2211"]);
        assert_eq!(enumerate_stirling(3).unwrap().count(), 15);
        assert!(matches!(
            enumerate_stirling(9),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=5 {
            let listed: Vec<Vec<u32>> = enumerate_stirling(n).unwrap().map(|w| w.word).collect();
            let unique: BTreeSet<Vec<u32>> = listed.iter().cloned().collect();
            assert_eq!(listed.len(), unique.len());
            assert_eq!(unique, brute_force(n), "n={n}");
        }
    }

    #[test]
    fn counts_are_odd_double_factorials() {
        let expected = [1u64, 3, 15, 105, 945, 10395, 135135, 2027025];
        for (n, &e) in (1..=8).zip(&expected) {
            assert_eq!(stirling_count(n), e);
            let bad = tally_stirling(n, &Config::default(), |w, t| {
                t.add(usize::from(!is_stirling(w.word()).unwrap()))
            })
            .unwrap();
            assert_eq!(bad.counts(), &[e], "n={n}");
        }
    }

    #[test]
    fn pair_insertion_is_sound_and_complete() {
        for n in 2..=5 {
            let mut produced = BTreeSet::new();
            for smaller in enumerate_stirling(n - 1).unwrap() {
                for gap in 0..=2 * (n - 1) {
                    let bigger = smaller.insert_pair(gap).unwrap();
                    assert!(is_stirling(bigger.word()).unwrap());
                    assert!(produced.insert(bigger.word), "duplicate at n={n}");
                }
            }
            assert_eq!(produced, brute_force(n));
        }
    }

    #[test]
    fn pair_statistics_from_examples() {
        // These words skip the letter 2; the statistics only see relative order.
        let relabel = |text: &str| {
            let (s, alphabet) =
                StirlingPermutation::standardize(&parse_word(text).unwrap()).unwrap();
            let back = move |pairs: Vec<(u32, u32)>| {
                let mut pairs: Vec<(u32, u32)> = pairs
                    .into_iter()
                    .map(|(a, b)| (alphabet[a as usize - 1], alphabet[b as usize - 1]))
                    .collect();
                pairs.sort();
                pairs
            };
            (s, back)
        };
        let (s, back) = relabel("13344155688776");
        let pairs = back(s.ascending_adjacent_pairs());
        assert_eq!(pairs, vec![(1, 5), (3, 4), (5, 6)]);
        assert_eq!(s.aapair(), 3);
        assert!(!s.is_naas());

        let (s, back) = relabel("13443566518877");
        let pairs = back(s.terminally_nested_pairs());
        assert_eq!(pairs, vec![(1, 5), (3, 4), (5, 6)]);
        assert_eq!(s.tnpair(), 3);
        assert!(!s.is_ntns());
        assert!(w("1221").is_ntns());
        assert!(StirlingPermutation::parse("13344155688776").is_err());
    }

    #[test]
    fn table_of_q2() {
        let rows: Vec<(usize, usize)> = ["1122", "1221", "2211"]
            .iter()
            .map(|s| (w(s).tnpair(), w(s).aapair()))
            .collect();
        assert_eq!(rows, vec![(0, 1), (1, 0), (0, 0)]);
        for s in enumerate_stirling(2).unwrap() {
            assert!(s.is_naas() && s.is_ntns());
        }
    }

    #[test]
    fn distributions_small() {
        let g = GammaVector::from_i64s(2, &[2, 1]).unwrap();
        assert_eq!(distribution_ntns_tnpair(2).unwrap(), g);
        assert_eq!(distribution_naas_aapair(2).unwrap(), g);
        assert_eq!(distribution_ntns_tnpair(4).unwrap(), gamma_closed_form(5));
        assert_eq!(distribution_naas_aapair(4).unwrap(), gamma_closed_form(5));
    }

    #[test]
    fn display_switches_to_commas_past_nine() {
        let mut s = w("11");
        for gap in [2, 4, 6, 8, 10, 12, 14, 16, 18] {
            s = s.insert_pair(gap).unwrap();
        }
        assert_eq!(s.n(), 10);
        let text = s.to_string();
        assert!(text.starts_with("1,1,2,2"));
        assert_eq!(StirlingPermutation::parse(&text).unwrap(), s);
        assert_eq!(w("1221").to_string(), "1221");
    }
}
