use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::ModelError;

/// Short label drawn inside a node: an uppercase letter plus an optional
/// numeric subscript when several names share the letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Abbreviation {
    pub letter: char,
    pub suffix: Option<u32>,
}

impl Abbreviation {
    /// Plain ASCII form, e.g. `T2`.
    pub fn ascii(&self) -> String {
        match self.suffix {
            Some(n) => format!("{}{}", self.letter, n),
            None => self.letter.to_string(),
        }
    }
}

const SUBSCRIPT_DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

impl fmt::Display for Abbreviation {
    /// Renders the suffix with Unicode subscript digits, e.g. `T₂`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter)?;
        if let Some(n) = self.suffix {
            for d in n.to_string().bytes() {
                write!(f, "{}", SUBSCRIPT_DIGITS[(d - b'0') as usize])?;
            }
        }
        Ok(())
    }
}

impl Serialize for Abbreviation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.ascii())
    }
}

fn leading_letter(name: &str) -> Result<char, ModelError> {
    let first = name.chars().next().ok_or_else(|| ModelError::InvalidName {
        name: name.to_owned(),
        reason: "name is empty",
    })?;
    if !first.is_ascii_alphabetic() {
        return Err(ModelError::InvalidName {
            name: name.to_owned(),
            reason: "name must start with an ASCII letter",
        });
    }
    Ok(first.to_ascii_uppercase())
}

/// Abbreviates every name to its uppercased first letter. Letters shared by
/// more than one name get subscripts 1, 2, ... in input order.
pub fn abbreviate<S: AsRef<str>>(names: &[S]) -> Result<Vec<Abbreviation>, ModelError> {
    let letters = names
        .iter()
        .map(|n| leading_letter(n.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;

    let mut group_sizes: HashMap<char, u32> = HashMap::new();
    for &l in &letters {
        *group_sizes.entry(l).or_default() += 1;
    }

    let mut next: HashMap<char, u32> = HashMap::new();
    Ok(letters
        .into_iter()
        .map(|letter| {
            let suffix = if group_sizes[&letter] > 1 {
                let n = next.entry(letter).or_insert(0);
                *n += 1;
                Some(*n)
            } else {
                None
            };
            Abbreviation { letter, suffix }
        })
        .collect())
}
