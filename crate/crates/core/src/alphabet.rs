//! Symbols, alphabets and sequences.
//!
//! Tokens are interned to dense ids at ingest so that cost lookup and
//! symbol comparison are O(1). The gap marker used inside alignments is a
//! separate type ([`AlignedSymbol::Gap`]) and can never appear in a [`Seq`].

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// An interned token of a finite alphabet.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub fn id(self) -> usize {
        self.0 as usize
    }

    /// Builds a symbol from a raw id. The caller is responsible for keeping
    /// the id within the alphabet it will be used with.
    pub fn from_id(id: usize) -> Self {
        Symbol(id as u32)
    }
}

/// A position of an alignment row: either a real symbol or the gap marker
/// standing for a deleted position.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlignedSymbol {
    Sym(Symbol),
    Gap,
}

impl AlignedSymbol {
    pub fn is_gap(self) -> bool {
        matches!(self, AlignedSymbol::Gap)
    }

    pub fn symbol(self) -> Option<Symbol> {
        match self {
            AlignedSymbol::Sym(s) => Some(s),
            AlignedSymbol::Gap => None,
        }
    }
}

/// An ordered, immutable token list defining the alphabet of a dataset.
///
/// Token order is significant: it fixes the interned ids and thereby the
/// "position in the alphabet" used by the nearest-to-first/last tie policies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

fn validate_token(token: &str) -> Result<()> {
    if token.is_empty() {
        return Err(Error::BadToken {
            token: token.to_string(),
            reason: "empty token".into(),
        });
    }
    if let Some(c) = token
        .chars()
        .find(|c| c.is_whitespace() || matches!(c, ',' | ';' | '#'))
    {
        return Err(Error::BadToken {
            token: token.to_string(),
            reason: format!("contains reserved character {c:?}"),
        });
    }
    Ok(())
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, tok) in tokens.iter().enumerate() {
            validate_token(tok)?;
            if index.insert(tok.clone(), i as u32).is_some() {
                return Err(Error::DuplicateToken(tok.clone()));
            }
        }
        Ok(Alphabet { tokens, index })
    }

    /// Alphabet with tokens `"0"`, `"1"`, ..., `"{size-1}"`.
    pub fn numeric(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<Symbol> {
        self.index.get(token).map(|&id| Symbol(id))
    }

    pub fn token(&self, sym: Symbol) -> &str {
        &self.tokens[sym.id()]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.tokens.len() as u32).map(Symbol)
    }

    /// Interns a whole token list into a sequence.
    pub fn intern<'a, I>(&self, tokens: I) -> Result<Seq>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let symbols = tokens
            .into_iter()
            .map(|t| {
                self.get(t).ok_or_else(|| Error::BadToken {
                    token: t.to_string(),
                    reason: "not in alphabet".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Seq::new(symbols)
    }

    /// Renders a sequence back to its surface tokens.
    pub fn render(&self, seq: &Seq) -> Vec<&str> {
        seq.symbols().iter().map(|&s| self.token(s)).collect()
    }
}

/// A non-empty sequence of symbols; the unit being clustered.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Seq(Vec<Symbol>);

impl Seq {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Seq(symbols))
    }

    /// Convenience constructor from raw ids, for tests and generators.
    pub fn from_ids(ids: &[usize]) -> Result<Self> {
        Self::new(ids.iter().map(|&i| Symbol::from_id(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Symbol {
        self.0[i]
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<usize> = self.0.iter().map(|s| s.id()).collect();
        write!(f, "Seq{ids:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_follows_declared_order() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        assert_eq!(a.get("x").unwrap().id(), 0);
        assert_eq!(a.get("z").unwrap().id(), 2);
        assert_eq!(a.token(Symbol::from_id(1)), "y");
        assert!(a.get("w").is_none());
    }

    #[test]
    fn rejects_empty_and_duplicate_alphabets() {
        assert!(matches!(
            Alphabet::new(Vec::<String>::new()),
            Err(Error::EmptyAlphabet)
        ));
        assert!(matches!(
            Alphabet::new(["a", "a"]),
            Err(Error::DuplicateToken(_))
        ));
        assert!(matches!(
            Alphabet::new(["a", "b c"]),
            Err(Error::BadToken { .. })
        ));
        assert!(matches!(
            Alphabet::new(["a;b"]),
            Err(Error::BadToken { .. })
        ));
    }

    #[test]
    fn sequences_are_non_empty() {
        assert!(matches!(Seq::new(vec![]), Err(Error::EmptySequence)));
        let s = Seq::from_ids(&[0, 1, 0]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.get(2).id(), 0);
    }

    #[test]
    fn intern_and_render_round_trip() {
        let a = Alphabet::new(["GET", "POST", "PUT"]).unwrap();
        let s = a.intern(["POST", "GET", "POST"]).unwrap();
        assert_eq!(a.render(&s), vec!["POST", "GET", "POST"]);
        assert!(matches!(
            a.intern(["DELETE"]),
            Err(Error::BadToken { .. })
        ));
    }
}
