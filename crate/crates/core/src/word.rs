//! Freely reduced words over a finite alphabet of generator names.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A freely reduced word: adjacent letters on the same generator are merged
/// and zero exponents dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(u16, i64)>,
}

impl Word {
    pub fn new<I: IntoIterator<Item = (u16, i64)>>(letters: I) -> Self {
        let mut out: Vec<(u16, i64)> = Vec::new();
        for (g, e) in letters {
            push_reduced(&mut out, g, e);
        }
        Word { letters: out }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(g: u16, e: i64) -> Self {
        Word::new([(g, e)])
    }

    pub fn letters(&self) -> &[(u16, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total length counting exponents with multiplicity.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Exponent sum of each generator `0..n`.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut sums = vec![0; n];
        for &(g, e) in &self.letters {
            sums[g as usize] += e;
        }
        sums
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }
}

fn push_reduced(out: &mut Vec<(u16, i64)>, g: u16, e: i64) {
    if e == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == g {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((g, e));
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &(g, e) in &rhs.letters {
            push_reduced(&mut letters, g, e);
        }
        Word { letters }
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.alphabet.name(g))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Generator names for a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Self {
        Alphabet {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: u16) -> &str {
        &self.names[g as usize]
    }

    pub fn index(&self, name: &str) -> Option<u16> {
        self.names.iter().position(|n| n == name).map(|i| i as u16)
    }

    /// Parse a word such as `"b u^-1 b"`, `"b u -1 b"`, `"(buvu)^2 v"` or
    /// `"vuv^-1j^4buvj^2"`. Names are matched longest first, so `a1` wins
    /// over a hypothetical `a`.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let w = self.parse_seq(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("unexpected ')' at offset {pos}")));
        }
        Ok(w)
    }

    fn parse_seq(&self, s: &[char], pos: &mut usize) -> Result<Word> {
        let mut out = Word::empty();
        // The most recent atom may still receive an exponent.
        let mut pending: Option<Word> = None;
        loop {
            skip_ws(s, pos);
            let Some(&c) = s.get(*pos) else { break };
            if c == ')' {
                break;
            }
            if c == '^' || c == '-' || c == '+' || c.is_ascii_digit() {
                let atom = pending.take().ok_or_else(|| {
                    Error::Parse(format!("exponent without a base at offset {}", *pos))
                })?;
                if c == '^' {
                    *pos += 1;
                    skip_ws(s, pos);
                }
                let e = parse_int(s, pos)?;
                out = &out * &atom.pow(e);
                continue;
            }
            if let Some(p) = pending.take() {
                out = &out * &p;
            }
            if c == '(' {
                *pos += 1;
                let inner = self.parse_seq(s, pos)?;
                if s.get(*pos) != Some(&')') {
                    return Err(Error::Parse("unbalanced '('".into()));
                }
                *pos += 1;
                pending = Some(inner);
                continue;
            }
            let g = self.match_name(s, *pos).ok_or_else(|| {
                Error::Parse(format!("unknown generator at offset {}: {:?}", *pos, c))
            })?;
            *pos += self.names[g as usize].chars().count();
            pending = Some(Word::letter(g, 1));
        }
        if let Some(p) = pending {
            out = &out * &p;
        }
        Ok(out)
    }

    fn match_name(&self, s: &[char], pos: usize) -> Option<u16> {
        let mut best: Option<(usize, u16)> = None;
        for (i, name) in self.names.iter().enumerate() {
            let n: Vec<char> = name.chars().collect();
            if s.len() >= pos + n.len()
                && s[pos..pos + n.len()] == n[..]
                && best.is_none_or(|(l, _)| n.len() > l)
            {
                best = Some((n.len(), i as u16));
            }
        }
        best.map(|(_, g)| g)
    }
}

fn skip_ws(s: &[char], pos: &mut usize) {
    while s
        .get(*pos)
        .is_some_and(|c| c.is_whitespace() || *c == '*' || *c == '·')
    {
        *pos += 1;
    }
}

fn parse_int(s: &[char], pos: &mut usize) -> Result<i64> {
    let start = *pos;
    if matches!(s.get(*pos), Some('-') | Some('+')) {
        *pos += 1;
    }
    while s.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
        *pos += 1;
    }
    let text: String = s[start..*pos].iter().collect();
    text.parse::<i64>()
        .map_err(|_| Error::Parse(format!("bad exponent {text:?}")))
}
