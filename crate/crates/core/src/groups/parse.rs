//! Word syntax: a word is a sequence of atoms `base` or `base^exp`,
//! concatenated directly when all base names are single letters, or
//! separated by whitespace/`*`. `e` is the identity; an uppercase letter
//! is shorthand for the inverse of the lowercase generator.

use super::{GroupElement, GroupOracle};

pub(super) struct Atom {
    pub base: String,
    pub exp: i64,
}

/// Splits into atoms. `is_base` decides whether a whole token is a known
/// generator name (needed to keep multi-character names unambiguous);
/// unknown multi-character tokens fall back to per-letter scanning.
pub(super) fn tokenize_with(
    input: &str,
    is_base: &dyn Fn(&str) -> bool,
) -> Result<Vec<Atom>, String> {
    let mut atoms = Vec::new();
    for token in input.split(|c: char| c.is_whitespace() || c == '*') {
        if token.is_empty() {
            continue;
        }
        token_atoms(token, is_base, &mut atoms)?;
    }
    Ok(atoms)
}

/// Tokenizer for contexts without an oracle (single-letter bases only).
pub(super) fn tokenize(input: &str) -> Result<Vec<Atom>, String> {
    tokenize_with(input, &|_| false)
}

fn token_atoms(
    token: &str,
    is_base: &dyn Fn(&str) -> bool,
    out: &mut Vec<Atom>,
) -> Result<(), String> {
    if token == "e" {
        return Ok(());
    }
    // A whole token naming a known generator, optionally with ^exp.
    let (name, exp) = match token.split_once('^') {
        Some((n, e)) => match e.parse::<i64>() {
            Ok(exp) => (n, exp),
            Err(_) => (token, 1),
        },
        None => (token, 1),
    };
    if is_base(name) {
        out.push(Atom {
            base: name.to_string(),
            exp,
        });
        return Ok(());
    }
    // Otherwise: concatenated single-letter atoms.
    let chars: Vec<char> = token.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !c.is_ascii_alphabetic() {
            return Err(format!("unexpected character `{c}`"));
        }
        i += 1;
        let mut exp = 1i64;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            exp = digits
                .parse()
                .map_err(|_| format!("bad exponent after `{c}^`"))?;
        }
        out.push(Atom {
            base: c.to_string(),
            exp,
        });
    }
    Ok(())
}

pub(super) fn render(o: &GroupOracle, a: &GroupElement) -> String {
    if a.is_identity() {
        return "e".to_string();
    }
    let gens = o.generators();
    let mut pieces: Vec<String> = Vec::new();
    let word = a.word();
    let mut i = 0;
    while i < word.len() {
        let g = word[i];
        let mut count = 1i64;
        while i + (count as usize) < word.len() && word[i + count as usize] == g {
            count += 1;
        }
        let (base, exp) = gens.parts(g);
        let total = exp * count;
        if total == 1 {
            pieces.push(base.to_string());
        } else {
            pieces.push(format!("{base}^{total}"));
        }
        i += count as usize;
    }
    if o.single_char_bases() {
        pieces.concat()
    } else {
        pieces.join("*")
    }
}
