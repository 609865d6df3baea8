//! Finite words, morphic sequences and the balance (Sturmian) property.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fibcore::totient_table;

/// Largest length accepted by [`count_balanced_bruteforce`].
pub const BRUTE_FORCE_MAX_LEN: u32 = 20;

/// A finite word over `Σ_b = {0, …, b−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
    alphabet: u8,
}

impl Word {
    pub fn new(letters: Vec<u8>, alphabet: u8) -> Result<Self> {
        if let Some(&letter) = letters.iter().find(|&&l| l >= alphabet) {
            return Err(Error::LetterOutOfAlphabet { letter, alphabet });
        }
        Ok(Self { letters, alphabet })
    }

    pub fn empty(alphabet: u8) -> Self {
        Self { letters: Vec::new(), alphabet }
    }

    /// Parses a string of decimal digits, e.g. `"0110"`, over `Σ_2`.
    pub fn parse_binary(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("{c:?} is not a binary letter"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { letters, alphabet: 2 })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word { letters: self.letters[start..start + len].to_vec(), alphabet: self.alphabet }
    }

    fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters, alphabet: self.alphabet }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A substitution sending each letter to a nonempty word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Vec<u8>>,
}

impl Morphism {
    /// `images[a]` is the image of letter `a`; all letters must lie in the
    /// alphabet of size `images.len()`.
    pub fn new(images: Vec<Vec<u8>>) -> Result<Self> {
        let b = images.len() as u8;
        for img in &images {
            if img.is_empty() {
                return Err(Error::Parse("morphism images must be nonempty".into()));
            }
            if let Some(&letter) = img.iter().find(|&&l| l >= b) {
                return Err(Error::LetterOutOfAlphabet { letter, alphabet: b });
            }
        }
        Ok(Self { images })
    }

    /// `0 → 01, 1 → 10`.
    pub fn thue_morse() -> Self {
        Self { images: vec![vec![0, 1], vec![1, 0]] }
    }

    /// `0 → 01, 1 → 0`.
    pub fn fibonacci() -> Self {
        Self { images: vec![vec![0, 1], vec![0]] }
    }

    pub fn alphabet(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn image(&self, letter: u8) -> &[u8] {
        &self.images[letter as usize]
    }

    /// The image of `start` begins with `start` and is longer than one letter.
    pub fn is_prolongable(&self, start: u8) -> bool {
        self.images
            .get(start as usize)
            .is_some_and(|img| img.len() > 1 && img[0] == start)
    }
}

/// Length-`len` prefix of the fixed point of `m` starting at `start`.
pub fn morphic_prefix(m: &Morphism, start: u8, len: usize) -> Result<Word> {
    if !m.is_prolongable(start) {
        return Err(Error::NotProlongable(start));
    }
    let mut letters = vec![start];
    // letters[..i] is already final; expand position i's image in place.
    let mut i = 0;
    while letters.len() < len {
        let img = m.image(letters[i]);
        let skip = if i == 0 { 1 } else { 0 };
        letters.extend_from_slice(&img[skip..]);
        i += 1;
    }
    letters.truncate(len);
    Ok(Word { letters, alphabet: m.alphabet() })
}

/// The Fibonacci word by concatenation: `S_0 = 0`, `S_1 = 01`,
/// `S_n = S_{n−1} S_{n−2}`.
pub fn fibonacci_word_by_concatenation(n: usize) -> Word {
    let mut prev = Word { letters: vec![0], alphabet: 2 };
    if n == 0 {
        return prev;
    }
    let mut cur = Word { letters: vec![0, 1], alphabet: 2 };
    for _ in 1..n {
        let next = cur.concat(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The k-Fibonacci word `f_{k,n}`: `f_{k,1} = 0`, `f_{k,2} = 0^{k−1}1`,
/// `f_{k,n} = (f_{k,n−1})^k f_{k,n−2}`.
pub fn kfib_word(k: usize, n: usize) -> Result<Word> {
    if k == 0 || n == 0 {
        return Err(Error::OutOfRange("k and n must both be at least 1".into()));
    }
    let first = Word { letters: vec![0], alphabet: 2 };
    if n == 1 {
        return Ok(first);
    }
    let mut second_letters = vec![0u8; k - 1];
    second_letters.push(1);
    let mut prev = first;
    let mut cur = Word { letters: second_letters, alphabet: 2 };
    for _ in 2..n {
        let mut letters = Vec::with_capacity(k * cur.len() + prev.len());
        for _ in 0..k {
            letters.extend_from_slice(&cur.letters);
        }
        letters.extend_from_slice(&prev.letters);
        prev = std::mem::replace(&mut cur, Word { letters, alphabet: 2 });
    }
    Ok(cur)
}

/// Lengths `L_1, …, L_n` with `L_1 = 1`, `L_2 = k`, `L_n = k L_{n−1} + L_{n−2}`.
pub fn kfib_lengths(k: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = match i {
            0 => 1,
            1 => k,
            _ => k * out[i - 1] + out[i - 2],
        };
        out.push(v);
    }
    out
}

/// Outcome of the balance test on a binary word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub word: Word,
    pub balanced: bool,
    /// Two factors of equal length whose counts of `1` differ by at least 2,
    /// the heavier one first.
    pub witness: Option<(Word, Word)>,
}

/// Checks that every two factors of equal length have 1-counts differing
/// by at most one.
///
/// For each window length the minimum and maximum 1-count are read from a
/// prefix-sum array, so the whole test is quadratic in the word length.
pub fn is_balanced(w: &Word) -> Result<BalanceReport> {
    if w.alphabet != 2 {
        return Err(Error::NotBinary(w.alphabet));
    }
    let n = w.len();
    let mut prefix = vec![0u32; n + 1];
    for (i, &l) in w.letters.iter().enumerate() {
        prefix[i + 1] = prefix[i] + u32::from(l);
    }
    for m in 1..=n {
        let (mut lo, mut hi) = ((u32::MAX, 0usize), (0u32, 0usize));
        for start in 0..=n - m {
            let c = prefix[start + m] - prefix[start];
            if c < lo.0 {
                lo = (c, start);
            }
            if c > hi.0 {
                hi = (c, start);
            }
        }
        if hi.0 >= lo.0 + 2 {
            return Ok(BalanceReport {
                word: w.clone(),
                balanced: false,
                witness: Some((w.factor(hi.1, m), w.factor(lo.1, m))),
            });
        }
    }
    Ok(BalanceReport { word: w.clone(), balanced: true, witness: None })
}

/// Balance test on the low `n` bits of `bits`, bit `i` being letter `i`.
fn bits_balanced(bits: u32, n: u32) -> bool {
    for m in 2..n {
        let mask = (1u32 << m) - 1;
        let (mut lo, mut hi) = (u32::MAX, 0u32);
        for start in 0..=n - m {
            let c = ((bits >> start) & mask).count_ones();
            lo = lo.min(c);
            hi = hi.max(c);
            if hi >= lo + 2 {
                return false;
            }
        }
    }
    true
}

/// Number of balanced binary words of length `n ≤ 20`, by enumerating all
/// `2^n` words.
pub fn count_balanced_bruteforce(n: u32) -> Result<u64> {
    if n > BRUTE_FORCE_MAX_LEN {
        return Err(Error::AboveCap {
            what: "n",
            value: n as u64,
            cap: BRUTE_FORCE_MAX_LEN as u64,
            hint: "use the closed form for longer words",
        });
    }
    if n == 0 {
        return Ok(1);
    }
    Ok((0..1u32 << n)
        .into_par_iter()
        .filter(|&bits| bits_balanced(bits, n))
        .count() as u64)
}

/// The four closed forms for the number of balanced words of length `n`,
/// with `R(k) = Σ_{i=1}^{k+1} φ(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedFormula {
    pub n: u64,
    /// `1 + Σ_{k=0}^{n−1} R(k)`.
    pub via_r: u128,
    /// `1 + Σ_{k=0}^{n−1} Σ_{i=1}^{k+1} φ(i)`.
    pub double_sum_shifted: u128,
    /// `1 + Σ_{k=1}^{n} Σ_{i=1}^{k} φ(i)`.
    pub double_sum: u128,
    /// `1 + Σ_{i=1}^{n} (n + 1 − i) φ(i)`.
    pub weighted: u128,
}

/// Evaluates all four closed forms and returns their common value.
///
/// Also checks the recurrence `𝔉(n) = 𝔉(n−1) + R(n−1)` along the way.
pub fn balanced_formula_detail(n: u64) -> Result<BalancedFormula> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let phi = totient_table(n as usize + 1);
    let r = |k: u64| -> u128 { (1..=k + 1).map(|i| phi[i as usize] as u128).sum() };

    let via_r = 1 + (0..n).map(r).sum::<u128>();
    let double_sum_shifted = 1 + (0..n)
        .map(|k| (1..=k + 1).map(|i| phi[i as usize] as u128).sum::<u128>())
        .sum::<u128>();
    let double_sum = 1 + (1..=n)
        .map(|k| (1..=k).map(|i| phi[i as usize] as u128).sum::<u128>())
        .sum::<u128>();
    let weighted = 1 + (1..=n).map(|i| (n + 1 - i) as u128 * phi[i as usize] as u128).sum::<u128>();

    let out = BalancedFormula { n, via_r, double_sum_shifted, double_sum, weighted };
    let values = vec![via_r, double_sum_shifted, double_sum, weighted];
    if values.iter().any(|&v| v != via_r) {
        return Err(Error::FormulaDisagreement { n, values });
    }
    if n >= 2 {
        let previous = 1 + (1..n).map(|i| (n - i) as u128 * phi[i as usize] as u128).sum::<u128>();
        if previous + r(n - 1) != via_r {
            return Err(Error::FormulaDisagreement { n, values: vec![previous + r(n - 1), via_r] });
        }
    }
    Ok(out)
}

pub fn balanced_formula(n: u64) -> Result<u128> {
    balanced_formula_detail(n).map(|f| f.weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::gelfond_member;
    use crate::fibcore::{fib, FibConvention};

    fn w(s: &str) -> Word {
        Word::parse_binary(s).unwrap()
    }

    /// Compares every pair of equal-length factors directly.
    fn naive_balanced(word: &Word) -> bool {
        let l = word.letters();
        let n = l.len();
        for m in 1..=n {
            for i in 0..=n - m {
                for j in 0..=n - m {
                    let a: i32 = l[i..i + m].iter().map(|&x| x as i32).sum();
                    let b: i32 = l[j..j + m].iter().map(|&x| x as i32).sum();
                    if (a - b).abs() > 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sliding window update per length, no prefix sums.
    fn sliding_balanced(word: &Word) -> bool {
        let l = word.letters();
        let n = l.len();
        for m in 1..=n {
            let mut c: i32 = l[..m].iter().map(|&x| x as i32).sum();
            let (mut lo, mut hi) = (c, c);
            for s in 1..=n - m {
                c += l[s + m - 1] as i32 - l[s - 1] as i32;
                lo = lo.min(c);
                hi = hi.max(c);
            }
            if hi - lo > 1 {
                return false;
            }
        }
        true
    }

    #[test]
    fn morphic_examples() {
        let tm = morphic_prefix(&Morphism::thue_morse(), 0, 8).unwrap();
        assert_eq!(tm.to_string(), "01101001");
        let fw = morphic_prefix(&Morphism::fibonacci(), 0, 8).unwrap();
        assert_eq!(fw.to_string(), "01001010");
        assert!(morphic_prefix(&Morphism::fibonacci(), 0, 0).unwrap().is_empty());
        assert_eq!(morphic_prefix(&Morphism::fibonacci(), 1, 4), Err(Error::NotProlongable(1)));
    }

    #[test]
    fn morphism_validation() {
        assert!(Morphism::new(vec![vec![0, 2], vec![1]]).is_err());
        assert!(Morphism::new(vec![vec![0, 1], vec![]]).is_err());
        assert!(Word::new(vec![0, 3], 3).is_err());
        assert!(Word::parse_binary("012").is_err());
    }

    #[test]
    fn fibonacci_word_concatenation_law() {
        for n in 0..20 {
            let s = fibonacci_word_by_concatenation(n);
            assert_eq!(s.len() as u64, u64::try_from(fib(n as u64 + 2, FibConvention::Classic)).unwrap());
            let prefix = morphic_prefix(&Morphism::fibonacci(), 0, s.len()).unwrap();
            assert_eq!(prefix, s, "n={n}");
        }
    }

    #[test]
    fn kfib_examples() {
        for n in 1..=15 {
            let word = kfib_word(1, n).unwrap();
            assert_eq!(word.len() as u64, u64::try_from(fib(n as u64, FibConvention::Classic)).unwrap());
        }
        assert_eq!(kfib_word(2, 4).unwrap().to_string(), "010100101001");
        let lens: Vec<usize> = (1..=8).map(|n| kfib_word(2, n).unwrap().len()).collect();
        assert_eq!(lens, vec![1, 2, 5, 12, 29, 70, 169, 408]);
        assert!(kfib_word(0, 3).is_err());
    }

    #[test]
    fn kfib_length_law() {
        for k in 1..=5usize {
            let lengths = kfib_lengths(k as u64, 10);
            for n in 1..=10 {
                assert_eq!(kfib_word(k, n).unwrap().len() as u64, lengths[n - 1]);
            }
        }
    }

    #[test]
    fn balance_examples() {
        assert!(is_balanced(&w("0")).unwrap().balanced);
        let r = is_balanced(&w("1100")).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.witness, Some((w("11"), w("00"))));
        assert!(is_balanced(&w("01001010")).unwrap().balanced);
        assert!(is_balanced(&Word::empty(2)).unwrap().balanced);
        let ternary = Word::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(is_balanced(&ternary), Err(Error::NotBinary(3)));
    }

    #[test]
    fn witnesses_are_genuine() {
        for bits in 0u32..1 << 10 {
            let word = Word::new((0..10).map(|i| ((bits >> i) & 1) as u8).collect(), 2).unwrap();
            let r = is_balanced(&word).unwrap();
            assert_eq!(r.balanced, r.witness.is_none());
            if let Some((a, b)) = r.witness {
                assert_eq!(a.len(), b.len());
                let s = word.to_string();
                assert!(s.contains(&a.to_string()) && s.contains(&b.to_string()));
                let ones = |x: &Word| x.letters().iter().filter(|&&l| l == 1).count();
                assert!(ones(&a) >= ones(&b) + 2);
            }
        }
    }

    #[test]
    fn balance_oracles_agree() {
        for n in 0..=12u32 {
            for bits in 0u32..1 << n {
                let word = Word::new((0..n).map(|i| ((bits >> i) & 1) as u8).collect(), 2).unwrap();
                let fast = is_balanced(&word).unwrap().balanced;
                assert_eq!(fast, sliding_balanced(&word));
                assert_eq!(fast, naive_balanced(&word));
                assert_eq!(fast, bits_balanced(bits, n), "bits={bits:b} n={n}");
            }
        }
    }

    #[test]
    fn fibonacci_prefixes_are_balanced() {
        let word = morphic_prefix(&Morphism::fibonacci(), 0, 500).unwrap();
        for len in 1..=500 {
            assert!(is_balanced(&word.factor(0, len)).unwrap().balanced, "len={len}");
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_balanced_bruteforce(1).unwrap(), 2);
        assert_eq!(count_balanced_bruteforce(4).unwrap(), 14);
        assert_eq!(count_balanced_bruteforce(5).unwrap(), 24);
        assert!(count_balanced_bruteforce(21).is_err());
        assert_eq!(balanced_formula(1).unwrap(), 2);
        assert_eq!(balanced_formula(4).unwrap(), 14);
        assert_eq!(balanced_formula(5).unwrap(), 24);
        assert!(balanced_formula(0).is_err());
    }

    #[test]
    fn formula_matches_brute_force() {
        for n in 1..=14 {
            assert_eq!(balanced_formula(n as u64).unwrap() as u64, count_balanced_bruteforce(n).unwrap());
        }
    }

    #[test]
    fn thue_morse_is_binary_digit_parity() {
        let tm = morphic_prefix(&Morphism::thue_morse(), 0, 1 << 16).unwrap();
        for (n, &l) in tm.letters().iter().enumerate() {
            assert_eq!(l == 0, gelfond_member(n as u64));
        }
    }
}
