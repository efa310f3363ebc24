use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Region labels, ordered `A0 < A1 < B0 < B1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A0,
    A1,
    B0,
    B1,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A0, Letter::A1, Letter::B0, Letter::B1];

    pub fn is_a(self) -> bool {
        matches!(self, Letter::A0 | Letter::A1)
    }

    pub fn is_b(self) -> bool {
        !self.is_a()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Letter::A0 => "A0",
            Letter::A1 => "A1",
            Letter::B0 => "B0",
            Letter::B1 => "B1",
        };
        f.write_str(s)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A0" => Ok(Letter::A0),
            "A1" => Ok(Letter::A1),
            "B0" => Ok(Letter::B0),
            "B1" => Ok(Letter::B1),
            _ => Err(Error::BadWord(s.to_string())),
        }
    }
}

/// A word over the four letters, finite or eventually periodic.
///
/// For a periodic word the last `period` stored letters repeat forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
    period: Option<usize>,
}

/// Outcome of a lexicographic comparison. `Less`/`Greater` carry the first
/// mismatch index, `Equal` the number of letters compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexOrder {
    Less(usize),
    Equal(usize),
    Greater(usize),
}

impl LexOrder {
    pub fn is_less(self) -> bool {
        matches!(self, LexOrder::Less(_))
    }

    pub fn is_greater(self) -> bool {
        matches!(self, LexOrder::Greater(_))
    }

    pub fn is_equal(self) -> bool {
        matches!(self, LexOrder::Equal(_))
    }

    /// `≼` at the available depth.
    pub fn is_le(self) -> bool {
        !self.is_greater()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word {
            letters,
            period: None,
        }
    }

    /// `prefix` followed by `cycle` repeated forever.
    pub fn periodic(prefix: &[Letter], cycle: &[Letter]) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut letters = prefix.to_vec();
        letters.extend_from_slice(cycle);
        Ok(Word {
            letters,
            period: Some(cycle.len()),
        })
    }

    /// The letter repeated `n` times.
    pub fn repeat(letter: Letter, n: usize) -> Self {
        Word::new(vec![letter; n])
    }

    /// Stored letters (the prefix and one copy of the cycle, if periodic).
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn period(&self) -> Option<usize> {
        self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_none()
    }

    /// Number of letters for finite words, `None` for infinite ones.
    pub fn depth(&self) -> Option<usize> {
        match self.period {
            None => Some(self.letters.len()),
            Some(_) => None,
        }
    }

    /// Number of stored letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Letter> {
        let n = self.letters.len();
        match self.period {
            _ if i < n => Some(self.letters[i]),
            None => None,
            Some(p) => {
                let start = n - p;
                Some(self.letters[start + (i - start) % p])
            }
        }
    }

    pub fn first(&self) -> Option<Letter> {
        self.get(0)
    }

    /// The first `k` letters as a finite word (shorter if `self` is).
    pub fn truncate(&self, k: usize) -> Word {
        Word::new((0..k).map_while(|i| self.get(i)).collect())
    }

    pub fn shift(&self) -> Result<Word> {
        if self.letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut out = self.clone();
        match self.period {
            Some(p) if self.letters.len() == p => out.letters.rotate_left(1),
            _ => {
                out.letters.remove(0);
            }
        }
        Ok(out)
    }

    /// Drops the first `n` letters; may return an empty finite word.
    pub fn shift_by(&self, n: usize) -> Word {
        match self.period {
            None => Word::new(self.letters.iter().skip(n).copied().collect()),
            Some(p) => {
                let prefix = self.letters.len() - p;
                if n <= prefix {
                    Word {
                        letters: self.letters[n..].to_vec(),
                        period: Some(p),
                    }
                } else {
                    let mut cycle = self.letters[prefix..].to_vec();
                    cycle.rotate_left((n - prefix) % p);
                    Word {
                        letters: cycle,
                        period: Some(p),
                    }
                }
            }
        }
    }

    pub fn star(letter: Letter, w: &Word) -> Word {
        let mut letters = Vec::with_capacity(w.letters.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&w.letters);
        Word {
            letters,
            period: w.period,
        }
    }

    pub fn parse(s: &str) -> Result<Word> {
        s.parse()
    }
}

/// Lexicographic comparison decided within the common available depth.
pub fn lex_compare(u: &Word, v: &Word) -> LexOrder {
    let depth = match (u.period, v.period) {
        (None, None) => u.len().min(v.len()),
        (None, Some(_)) => u.len(),
        (Some(_), None) => v.len(),
        (Some(p), Some(q)) => u.len().max(v.len()) + p / gcd(p, q) * q,
    };
    for i in 0..depth {
        let (a, b) = (u.get(i).unwrap(), v.get(i).unwrap());
        if a < b {
            return LexOrder::Less(i);
        }
        if a > b {
            return LexOrder::Greater(i);
        }
    }
    LexOrder::Equal(depth)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cut = self.letters.len() - self.period.unwrap_or(0);
        let mut parts: Vec<String> = self.letters[..cut].iter().map(|l| l.to_string()).collect();
        if self.period.is_some() {
            let cycle: Vec<String> = self.letters[cut..].iter().map(|l| l.to_string()).collect();
            parts.push(format!("({})", cycle.join(" ")));
        }
        f.write_str(&parts.join(" "))
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.len() % 2 != 0 || !compact.is_ascii() {
        return Err(Error::BadWord(s.to_string()));
    }
    (0..compact.len())
        .step_by(2)
        .map(|i| {
            compact[i..i + 2]
                .parse::<Letter>()
                .map_err(|_| Error::BadWord(s.to_string()))
        })
        .collect()
}

/// Accepts `"A0 A1 B0"`, `"A0A1B0"`, and an optional trailing periodic
/// group such as `"A0 (B0)"`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        match s.find('(') {
            None => Ok(Word::new(parse_letters(s)?)),
            Some(open) => {
                let rest = &s[open + 1..];
                let close = rest
                    .find(')')
                    .ok_or_else(|| Error::BadWord(s.to_string()))?;
                if !rest[close + 1..].trim().is_empty() {
                    return Err(Error::BadWord(s.to_string()));
                }
                Word::periodic(&parse_letters(&s[..open])?, &parse_letters(&rest[..close])?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Letter::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(lex_compare(&w("A0B1"), &w("A1A0")), LexOrder::Less(0));
        assert_eq!(lex_compare(&w("B0A0"), &w("B0B0")), LexOrder::Less(1));
        assert_eq!(lex_compare(&w("A0B0"), &w("A0B0")), LexOrder::Equal(2));
        assert_eq!(
            lex_compare(&w("A0 (B0)"), &w("A0 (B0 B0)")),
            LexOrder::Equal(5)
        );
        assert_eq!(lex_compare(&w("(A0 B0)"), &w("A0 (B0)")), LexOrder::Less(2));
    }

    #[test]
    fn shift_and_star_examples() {
        assert_eq!(w("A0B0B1").shift().unwrap(), w("B0B1"));
        assert_eq!(Word::star(B1, &w("A0A0")), w("B1A0A0"));
        assert_eq!(Word::new(vec![]).shift(), Err(Error::EmptyWord));
        let p = w("(A1 B0)");
        assert_eq!(p.shift().unwrap(), w("(B0 A1)"));
    }

    #[test]
    fn periodic_access_and_display() {
        let p = w("A0 (B0 B1)");
        assert_eq!(p.get(5), Some(B0));
        assert_eq!(p.get(6), Some(B1));
        assert_eq!(p.truncate(4), w("A0 B0 B1 B0"));
        assert_eq!(p.to_string(), "A0 (B0 B1)");
        assert_eq!(p.shift_by(4).truncate(3), w("B1 B0 B1"));
        assert!(Word::parse("A2").is_err());
        assert!(Word::parse("A0 (B0").is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::sample::select(Letter::ALL.to_vec()), 0..40).prop_map(Word::new)
    }

    proptest! {
        #[test]
        fn shift_inverts_star(wd in arb_word(), l in prop::sample::select(Letter::ALL.to_vec())) {
            prop_assert_eq!(Word::star(l, &wd).shift().unwrap(), wd);
        }

        #[test]
        fn compare_is_antisymmetric(u in arb_word(), v in arb_word()) {
            let (a, b) = (lex_compare(&u, &v), lex_compare(&v, &u));
            match a {
                LexOrder::Less(i) => prop_assert_eq!(b, LexOrder::Greater(i)),
                LexOrder::Greater(i) => prop_assert_eq!(b, LexOrder::Less(i)),
                LexOrder::Equal(d) => prop_assert_eq!(b, LexOrder::Equal(d)),
            }
        }

        #[test]
        fn display_round_trips(u in arb_word()) {
            prop_assert_eq!(Word::parse(&u.to_string()).unwrap(), u);
        }
    }
}
