//! Normal-form engines. Free groups and free products of cyclic groups
//! share one syllable machine (a free group is a free product of
//! infinite-cyclic factors); free abelian groups sort exponent vectors;
//! finite permutation groups canonicalize through a breadth-first
//! shortlex table over the whole group.

use std::collections::HashMap;

use crate::error::GroupError;

use super::{letter, GenId, GeneratorSet, GroupKind, GroupSpec, MAX_FINITE_GROUP, MAX_PERM_DEGREE, MAX_WORD_FACTORS};

#[derive(Debug)]
pub(super) enum Backend {
    /// Free product of cyclic factors; order 0 = infinite cyclic.
    Product(ProductTables),
    Abelian(AbelianTables),
    Perm(PermTables),
}

#[derive(Debug)]
pub(super) struct ProductTables {
    orders: Vec<u32>,
    /// Per GenId: (factor index, canonical exponent).
    meta: Vec<(u16, i64)>,
    /// Per factor: for finite order n, GenIds of powers 1..n-1; for
    /// infinite factors, [positive, negative] GenIds.
    factor_labels: Vec<Vec<GenId>>,
}

#[derive(Debug)]
pub(super) struct AbelianTables {
    rank: usize,
    meta: Vec<(u16, i64)>,
    /// Per factor: [positive, negative] GenIds.
    factor_labels: Vec<[GenId; 2]>,
}

#[derive(Debug)]
pub(super) struct PermTables {
    degree: usize,
    gen_perms: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, u32>,
    words: Vec<Vec<GenId>>,
}

impl Backend {
    pub(super) fn normalize(&self, word: &[GenId]) -> Vec<GenId> {
        match self {
            Backend::Product(t) => t.normalize(word),
            Backend::Abelian(t) => t.normalize(word),
            Backend::Perm(t) => t.normalize(word),
        }
    }
}

impl ProductTables {
    fn normalize(&self, word: &[GenId]) -> Vec<GenId> {
        let mut syllables: Vec<(u16, i64)> = Vec::with_capacity(word.len());
        for &g in word {
            let (factor, exp) = self.meta[g.0 as usize];
            match syllables.last_mut() {
                Some((top_factor, top_exp)) if *top_factor == factor => {
                    let order = self.orders[factor as usize];
                    let mut combined = *top_exp + exp;
                    if order > 0 {
                        combined = combined.rem_euclid(order as i64);
                    }
                    if combined == 0 {
                        syllables.pop();
                    } else {
                        *top_exp = combined;
                    }
                }
                _ => syllables.push((factor, exp)),
            }
        }
        let mut out = Vec::new();
        for (factor, exp) in syllables {
            let order = self.orders[factor as usize];
            if order > 0 {
                out.push(self.factor_labels[factor as usize][(exp - 1) as usize]);
            } else if exp > 0 {
                let g = self.factor_labels[factor as usize][0];
                out.extend(std::iter::repeat_n(g, exp as usize));
            } else {
                let g = self.factor_labels[factor as usize][1];
                out.extend(std::iter::repeat_n(g, (-exp) as usize));
            }
        }
        out
    }
}

impl AbelianTables {
    fn normalize(&self, word: &[GenId]) -> Vec<GenId> {
        let mut exps = vec![0i64; self.rank];
        for &g in word {
            let (factor, exp) = self.meta[g.0 as usize];
            exps[factor as usize] += exp;
        }
        let mut out = Vec::new();
        for (factor, &e) in exps.iter().enumerate() {
            if e > 0 {
                out.extend(std::iter::repeat_n(self.factor_labels[factor][0], e as usize));
            } else if e < 0 {
                out.extend(std::iter::repeat_n(self.factor_labels[factor][1], (-e) as usize));
            }
        }
        out
    }
}

impl PermTables {
    fn normalize(&self, word: &[GenId]) -> Vec<GenId> {
        let mut perm: Vec<u16> = (0..self.degree as u16).collect();
        for &g in word {
            perm = compose(&perm, &self.gen_perms[g.0 as usize]);
        }
        let ix = self.index[&perm];
        self.words[ix as usize].clone()
    }
}

/// Left-to-right composition: (p·q)(x) = q(p(x)). This is the composition
/// order declared for the whole crate; word metrics depend on it.
pub(crate) fn compose(p: &[u16], q: &[u16]) -> Vec<u16> {
    p.iter().map(|&x| q[x as usize]).collect()
}

fn invert_perm(p: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; p.len()];
    for (x, &px) in p.iter().enumerate() {
        inv[px as usize] = x as u16;
    }
    inv
}

fn is_identity(p: &[u16]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u16 == x)
}

pub(super) fn build(spec: &GroupSpec) -> Result<(GeneratorSet, Backend), GroupError> {
    match &spec.kind {
        GroupKind::Free { rank } => {
            let orders = vec![0u32; *rank];
            build_product(&orders, spec.generating_set.as_deref())
        }
        GroupKind::FreeProductCyclic { orders } => {
            build_product(orders, spec.generating_set.as_deref())
        }
        GroupKind::FreeAbelian { rank } => build_abelian(*rank, spec.generating_set.as_deref()),
        GroupKind::FinitePermutation {
            degree,
            generators,
            names,
        } => {
            if spec.generating_set.is_some() {
                return Err(GroupError::spec(
                    "generating_set",
                    "unsupported for finite_permutation; the generators in \
                     `parameters` define the generating set",
                ));
            }
            build_perm(*degree, generators, names.as_deref())
        }
    }
}

/// Default generator order for a word backend: factor-major, and within a
/// finite factor the powers 1..n-1 in ascending order; infinite factors
/// contribute the generator then its inverse.
fn default_parts(orders: &[u32]) -> Vec<(u16, i64)> {
    let mut parts = Vec::new();
    for (f, &n) in orders.iter().enumerate() {
        if n == 0 {
            parts.push((f as u16, 1));
            parts.push((f as u16, -1));
        } else {
            for e in 1..n as i64 {
                parts.push((f as u16, e));
            }
        }
    }
    parts
}

fn part_label(orders: &[u32], factor: u16, exp: i64) -> String {
    let base = letter(factor as usize);
    let n = orders[factor as usize];
    if n == 0 {
        match exp {
            1 => base,
            -1 => format!("{base}^-1"),
            _ => format!("{base}^{exp}"),
        }
    } else if exp == 1 {
        base
    } else {
        format!("{base}^{exp}")
    }
}

fn inverse_exp(order: u32, exp: i64) -> i64 {
    if order == 0 {
        -exp
    } else {
        (order as i64 - exp).rem_euclid(order as i64)
    }
}

fn validate_orders(orders: &[u32]) -> Result<(), GroupError> {
    if orders.len() > MAX_WORD_FACTORS {
        return Err(GroupError::spec(
            "parameters.orders",
            format!("at most {MAX_WORD_FACTORS} factors are supported"),
        ));
    }
    for (i, &n) in orders.iter().enumerate() {
        if n == 1 {
            return Err(GroupError::spec(
                &format!("parameters.orders[{i}]"),
                "order 1 would make the generator the identity; use 0 for an \
                 infinite-cyclic factor or an order >= 2",
            ));
        }
    }
    Ok(())
}

/// Parses and validates an explicit generating set for a word backend:
/// it must be the full default S (closed under the involution), possibly
/// reordered. The given order becomes the label order.
fn explicit_parts(
    orders: &[u32],
    given: &[String],
) -> Result<Vec<(u16, i64)>, GroupError> {
    let defaults = default_parts(orders);
    let mut parts: Vec<(u16, i64)> = Vec::with_capacity(given.len());
    for raw in given {
        let atoms = super::parse::tokenize(raw).map_err(|reason| {
            GroupError::spec("generating_set", format!("cannot parse `{raw}`: {reason}"))
        })?;
        if atoms.len() != 1 {
            return Err(GroupError::spec(
                "generating_set",
                format!("`{raw}` is not a single generator label"),
            ));
        }
        let atom = &atoms[0];
        let factor = atom
            .base
            .bytes()
            .next()
            .filter(|b| atom.base.len() == 1 && b.is_ascii_lowercase())
            .map(|b| (b - b'a') as usize)
            .filter(|&f| f < orders.len())
            .ok_or_else(|| {
                GroupError::spec(
                    "generating_set",
                    format!("unknown generator `{}`", atom.base),
                )
            })?;
        let n = orders[factor];
        let exp = if n == 0 {
            atom.exp
        } else {
            atom.exp.rem_euclid(n as i64)
        };
        let valid = if n == 0 { exp == 1 || exp == -1 } else { exp != 0 };
        if !valid {
            return Err(GroupError::spec(
                "generating_set",
                format!("`{raw}` is the identity or not a default generator"),
            ));
        }
        if parts.contains(&(factor as u16, exp)) {
            return Err(GroupError::spec(
                "generating_set",
                format!("duplicate generator `{raw}`"),
            ));
        }
        parts.push((factor as u16, exp));
    }
    for &(f, e) in &parts {
        let inv = (f, inverse_exp(orders[f as usize], e));
        if !parts.contains(&inv) {
            return Err(GroupError::spec(
                "generating_set",
                format!(
                    "not symmetric: inverse of `{}` is missing",
                    part_label(orders, f, e)
                ),
            ));
        }
    }
    for &(f, e) in &defaults {
        if !parts.contains(&(f, e)) {
            return Err(GroupError::spec(
                "generating_set",
                format!(
                    "must contain the full default generating set; `{}` is missing",
                    part_label(orders, f, e)
                ),
            ));
        }
    }
    Ok(parts)
}

fn build_product(
    orders: &[u32],
    generating_set: Option<&[String]>,
) -> Result<(GeneratorSet, Backend), GroupError> {
    validate_orders(orders)?;
    let parts = match generating_set {
        Some(given) => explicit_parts(orders, given)?,
        None => default_parts(orders),
    };
    let labels: Vec<String> = parts
        .iter()
        .map(|&(f, e)| part_label(orders, f, e))
        .collect();
    let inverse: Vec<GenId> = parts
        .iter()
        .map(|&(f, e)| {
            let inv = (f, inverse_exp(orders[f as usize], e));
            GenId(parts.iter().position(|p| *p == inv).unwrap() as u16)
        })
        .collect();
    let mut factor_labels: Vec<Vec<GenId>> = orders
        .iter()
        .map(|&n| {
            if n == 0 {
                vec![GenId(0); 2]
            } else {
                vec![GenId(0); (n - 1) as usize]
            }
        })
        .collect();
    for (i, &(f, e)) in parts.iter().enumerate() {
        let n = orders[f as usize];
        if n == 0 {
            let slot = if e == 1 { 0 } else { 1 };
            factor_labels[f as usize][slot] = GenId(i as u16);
        } else {
            factor_labels[f as usize][(e - 1) as usize] = GenId(i as u16);
        }
    }
    let gens = GeneratorSet {
        labels,
        inverse,
        parts: parts
            .iter()
            .map(|&(f, e)| (letter(f as usize), e))
            .collect(),
    };
    let backend = Backend::Product(ProductTables {
        orders: orders.to_vec(),
        meta: parts,
        factor_labels,
    });
    Ok((gens, backend))
}

fn build_abelian(
    rank: usize,
    generating_set: Option<&[String]>,
) -> Result<(GeneratorSet, Backend), GroupError> {
    let orders = vec![0u32; rank];
    validate_orders(&orders)?;
    let parts = match generating_set {
        Some(given) => explicit_parts(&orders, given)?,
        None => default_parts(&orders),
    };
    let labels: Vec<String> = parts
        .iter()
        .map(|&(f, e)| part_label(&orders, f, e))
        .collect();
    let inverse: Vec<GenId> = parts
        .iter()
        .map(|&(f, e)| {
            GenId(parts.iter().position(|p| *p == (f, -e)).unwrap() as u16)
        })
        .collect();
    let mut factor_labels = vec![[GenId(0); 2]; rank];
    for (i, &(f, e)) in parts.iter().enumerate() {
        factor_labels[f as usize][if e == 1 { 0 } else { 1 }] = GenId(i as u16);
    }
    let gens = GeneratorSet {
        labels,
        inverse,
        parts: parts
            .iter()
            .map(|&(f, e)| (letter(f as usize), e))
            .collect(),
    };
    let backend = Backend::Abelian(AbelianTables {
        rank,
        meta: parts,
        factor_labels,
    });
    Ok((gens, backend))
}

fn build_perm(
    degree: usize,
    generators: &[Vec<u16>],
    names: Option<&[String]>,
) -> Result<(GeneratorSet, Backend), GroupError> {
    if degree == 0 || degree > MAX_PERM_DEGREE {
        return Err(GroupError::spec(
            "parameters.degree",
            format!("must be between 1 and {MAX_PERM_DEGREE}"),
        ));
    }
    if let Some(names) = names {
        if names.len() != generators.len() {
            return Err(GroupError::spec(
                "parameters.names",
                "must have one name per generator",
            ));
        }
        for (i, name) in names.iter().enumerate() {
            let ok = !name.is_empty()
                && name != "e"
                && name.bytes().next().unwrap().is_ascii_lowercase()
                && name
                    .bytes()
                    .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_');
            if !ok {
                return Err(GroupError::spec(
                    &format!("parameters.names[{i}]"),
                    "names must be lowercase identifiers and must not be `e`",
                ));
            }
            if names[..i].contains(name) {
                return Err(GroupError::spec(
                    &format!("parameters.names[{i}]"),
                    "duplicate name",
                ));
            }
        }
    } else if generators.len() > 26 {
        return Err(GroupError::spec(
            "parameters.names",
            "more than 26 generators require explicit names",
        ));
    }
    for (i, perm) in generators.iter().enumerate() {
        let field = format!("parameters.generators[{i}]");
        if perm.len() != degree {
            return Err(GroupError::spec(
                &field,
                format!("expected {degree} images, got {}", perm.len()),
            ));
        }
        let mut seen = vec![false; degree];
        for &x in perm {
            if (x as usize) >= degree || seen[x as usize] {
                return Err(GroupError::spec(&field, "not a permutation"));
            }
            seen[x as usize] = true;
        }
        if is_identity(perm) {
            return Err(GroupError::spec(
                &field,
                "the identity permutation cannot be a generator",
            ));
        }
        if generators[..i].contains(perm) {
            return Err(GroupError::spec(&field, "duplicate permutation"));
        }
    }

    // Symmetrize: keep the given order, append missing inverses.
    let mut perms: Vec<Vec<u16>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut parts: Vec<(String, i64)> = Vec::new();
    let mut by_perm: HashMap<Vec<u16>, usize> = HashMap::new();
    for (i, perm) in generators.iter().enumerate() {
        let name = match names {
            Some(names) => names[i].clone(),
            None => letter(i),
        };
        by_perm.insert(perm.clone(), perms.len());
        perms.push(perm.clone());
        labels.push(name.clone());
        parts.push((name, 1));
    }
    let mut inverse = vec![GenId(0); perms.len()];
    for i in 0..generators.len() {
        let inv = invert_perm(&perms[i]);
        if let Some(&j) = by_perm.get(&inv) {
            inverse[i] = GenId(j as u16);
        } else {
            let j = perms.len();
            by_perm.insert(inv.clone(), j);
            perms.push(inv);
            labels.push(format!("{}^-1", parts[i].0));
            parts.push((parts[i].0.clone(), -1));
            inverse.push(GenId(i as u16));
            inverse[i] = GenId(j as u16);
        }
    }

    // Breadth-first enumeration of the whole group; the FIFO order over
    // sorted expansions makes each stored word the shortlex-least geodesic.
    let identity: Vec<u16> = (0..degree as u16).collect();
    let mut elements = vec![identity.clone()];
    let mut words: Vec<Vec<GenId>> = vec![Vec::new()];
    let mut index = HashMap::new();
    index.insert(identity, 0u32);
    let mut head = 0;
    while head < elements.len() {
        for g in 0..perms.len() {
            let next = compose(&elements[head], &perms[g]);
            if !index.contains_key(&next) {
                if elements.len() >= MAX_FINITE_GROUP {
                    return Err(GroupError::EnumerationCap {
                        cap: MAX_FINITE_GROUP,
                    });
                }
                let mut w = words[head].clone();
                w.push(GenId(g as u16));
                index.insert(next.clone(), elements.len() as u32);
                elements.push(next);
                words.push(w);
            }
        }
        head += 1;
    }

    let gens = GeneratorSet {
        labels,
        inverse,
        parts,
    };
    let backend = Backend::Perm(PermTables {
        degree,
        gen_perms: perms,
        index,
        words,
    });
    Ok((gens, backend))
}
